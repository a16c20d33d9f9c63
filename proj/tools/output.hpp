#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace elastica::out {

using Json = nlohmann::ordered_json;

// %.12e; non-finite values print as nan, inf or -inf.
std::string num(double x);

// Two-space indented JSON with every float written by num(); non-finite
// floats become null. Field order is insertion order. Ends with a newline.
std::string dump(const Json& j);

class Csv {
 public:
  explicit Csv(std::vector<std::string> header);
  Csv& row(const std::vector<double>& values);
  // Leading text cells followed by numbers.
  Csv& row(const std::vector<std::string>& text, const std::vector<double>& values);
  const std::string& str() const { return buf_; }

 private:
  std::size_t width_;
  std::string buf_;
};

}  // namespace elastica::out
