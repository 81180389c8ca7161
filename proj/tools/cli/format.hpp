#pragma once

#include "fchi/bounds.hpp"

#include <string>
#include <string_view>

namespace fchi::cli {

std::string json_string(std::string_view s);
/// A JSON number with 17 significant digits, or a quoted "inf", "-inf" or
/// "nan" since JSON has no literal for them.
std::string json_number(double v);
/// Value of a bound for a CSV cell or JSON string: the number or "unbounded".
std::string bound_text(const Bound& b);
std::string bound_json(const Bound& b);

}  // namespace fchi::cli
