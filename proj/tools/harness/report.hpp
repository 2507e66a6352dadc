#pragma once

#include <string>

#include <json.hpp>

namespace morphtip::cli {

/// Locale-independent shortest form with 9 significant digits; -0 prints as 0.
std::string format_number(double value);

/// Serialises `doc` keeping key order, with every floating-point value passed
/// through format_number. indent < 0 gives a single line.
std::string dump(const nlohmann::ordered_json& doc, int indent = -1);

}  // namespace morphtip::cli
