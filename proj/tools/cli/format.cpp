#include "cli/format.hpp"

#include "fchi/chi.hpp"

#include <cmath>
#include <cstdio>

namespace fchi::cli {

std::string json_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

std::string json_number(double v) {
  if (!std::isfinite(v)) return json_string(format_double(v));
  return format_double(v);
}

std::string bound_text(const Bound& b) { return b.bounded() ? format_double(b.value()) : "unbounded"; }

std::string bound_json(const Bound& b) { return b.bounded() ? format_double(b.value()) : json_string("unbounded"); }

}  // namespace fchi::cli
