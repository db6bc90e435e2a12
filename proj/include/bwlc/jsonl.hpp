#pragma once

// Serialization with every floating-point value written as %.17g, so a parsed
// record reproduces the in-memory doubles bit for bit.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace bwlc {

inline std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_json(std::ostream& os, const nlohmann::json& j) {
  using V = nlohmann::json::value_t;
  switch (j.type()) {
    case V::number_float:
      os << format_double(j.get<double>());
      return;
    case V::array: {
      os << '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) os << ',';
        first = false;
        write_json(os, e);
      }
      os << ']';
      return;
    }
    case V::object: {
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',';
        first = false;
        os << nlohmann::json(it.key()).dump() << ':';
        write_json(os, it.value());
      }
      os << '}';
      return;
    }
    default:
      os << j.dump();
  }
}

inline std::string to_json_string(const nlohmann::json& j) {
  std::ostringstream os;
  write_json(os, j);
  return os.str();
}

inline void write_json_line(std::ostream& os, const nlohmann::json& j) {
  write_json(os, j);
  os << '\n';
}

// One CSV row; doubles use the same %.17g format.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  void header(const std::vector<std::string>& names) { row(names); }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os_ << ',';
      os_ << escape(cells[i]);
    }
    os_ << '\n';
  }

  static std::string cell(double v) { return format_double(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(const std::string& v) { return v; }

 private:
  static std::string escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
      if (ch == '"') out += '"';
      out += ch;
    }
    return out + '"';
  }

  std::ostream& os_;
};

}  // namespace bwlc
