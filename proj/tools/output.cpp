#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace elastica::out {

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) x = 0.0;  // no negative zero
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  return buf;
}

namespace {

void write(const Json& j, int depth, std::string& o) {
  const std::string pad(2 * (depth + 1), ' '), close(2 * depth, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        o += "{}";
        return;
      }
      o += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) o += ",\n";
        first = false;
        o += pad + Json(it.key()).dump() + ": ";
        write(it.value(), depth + 1, o);
      }
      o += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        o += "[]";
        return;
      }
      // arrays of scalars stay on one line
      bool flat = true;
      for (const Json& x : j) flat = flat && !x.is_structured();
      o += flat ? "[" : "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) o += flat ? ", " : ",\n";
        if (!flat) o += pad;
        write(j[i], depth + 1, o);
      }
      o += flat ? "]" : "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      o += std::isfinite(x) ? num(x) : "null";
      return;
    }
    default:
      o += j.dump();
  }
}

}  // namespace

std::string dump(const Json& j) {
  std::string o;
  write(j, 0, o);
  o += "\n";
  return o;
}

Csv::Csv(std::vector<std::string> header) : width_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) buf_ += (i ? "," : "") + header[i];
  buf_ += "\n";
}

Csv& Csv::row(const std::vector<double>& values) { return row({}, values); }

Csv& Csv::row(const std::vector<std::string>& text, const std::vector<double>& values) {
  if (text.size() + values.size() != width_) throw std::logic_error("csv row width mismatch");
  bool first = true;
  for (const std::string& t : text) {
    buf_ += (first ? "" : ",") + t;
    first = false;
  }
  for (double x : values) {
    buf_ += (first ? "" : ",") + num(x);
    first = false;
  }
  buf_ += "\n";
  return *this;
}

}  // namespace elastica::out
