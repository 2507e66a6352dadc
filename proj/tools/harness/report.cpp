#include "harness/report.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

namespace morphtip::cli {

namespace {

void write(const nlohmann::ordered_json& j, int indent, int depth, std::string& out) {
  auto newline = [&](int d) {
    if (indent >= 0) {
      out += '\n';
      out.append(static_cast<std::size_t>(indent * d), ' ');
    }
  };
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += nlohmann::ordered_json(key).dump();
        out += indent >= 0 ? ": " : ":";
        write(value, indent, depth + 1, out);
      }
      newline(depth);
      out += '}';
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Short numeric arrays (points, vectors) stay on one line.
      bool flat = j.size() <= 3;
      for (const auto& v : j) flat = flat && v.is_number();
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += flat && indent >= 0 ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        write(v, indent, depth + 1, out);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case nlohmann::json::value_t::number_float:
      out += format_number(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string format_number(double value) {
  if (value == 0.0) {
    return "0";
  }
  if (!std::isfinite(value)) {
    return "null";
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

std::string dump(const nlohmann::ordered_json& doc, int indent) {
  std::string out;
  write(doc, indent, 0, out);
  return out;
}

}  // namespace morphtip::cli
