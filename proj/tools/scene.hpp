#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "elastica/el_conditions.hpp"
#include "elastica/extremal.hpp"
#include "elastica/surface.hpp"
#include "elastica/variation.hpp"

namespace elastica::scene {

inline constexpr const char* kVersion = "v1";

struct CurveSpec {
  std::string name;
  std::shared_ptr<const SurfacePatch> patch;
  std::string u, v;
  double length = 0.0;
};

// A bump whose length defaults to the length of the curve it is applied to.
struct VariationEntry {
  std::string name;
  BumpParams params;
  bool has_length = false;
};

struct ExperimentSpec {
  std::string name;
  std::string command;  // "minimize"
  std::shared_ptr<const SurfacePatch> patch;
  std::string u, v;     // initial curve in any regular parameter s
  double length = 0.0;
  DiscretizeOptions discretization;
  MinimizeOptions options;
  ELOptions check;      // classify settings for the minimizer
};

class Scene {
 public:
  // Throws SchemaError on malformed or unknown fields and unresolved names.
  static Scene load(const std::string& path);
  static Scene parse(const std::string& text);

  std::shared_ptr<const SurfaceCurve> curve(const std::string& name) const;
  const CurveSpec& curve_spec(const std::string& name) const;
  VariationSpec variation(const std::string& name, double curve_length) const;
  const ExperimentSpec& experiment(const std::string& name) const;

  const std::vector<CurveSpec>& curves() const { return curves_; }
  const std::vector<VariationEntry>& variations() const { return variations_; }
  const std::vector<ExperimentSpec>& experiments() const { return experiments_; }
  const std::map<std::string, std::shared_ptr<const SurfacePatch>>& surfaces() const {
    return surfaces_;
  }

 private:
  std::map<std::string, std::shared_ptr<const SurfacePatch>> surfaces_;
  std::vector<CurveSpec> curves_;
  std::vector<VariationEntry> variations_;
  std::vector<ExperimentSpec> experiments_;
  friend struct Parser;
};

}  // namespace elastica::scene
