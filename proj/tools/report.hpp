#pragma once

// One report per run. Built as ordered JSON; printed either as that JSON or
// as indented "key: value" text.

#include <string>

#include <json.hpp>

namespace zchain::cli {

using Json = nlohmann::ordered_json;

inline std::string scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "-";
  return v.dump();
}

inline bool flat_array(const Json& v) {
  if (!v.is_array()) return false;
  for (const auto& x : v)
    if (x.is_structured()) return false;
  return true;
}

inline void write_text(const Json& v, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  for (const auto& [key, val] : v.items()) {
    if (!val.is_structured()) {
      out += pad + key + ": " + scalar_text(val) + "\n";
    } else if (flat_array(val)) {
      out += pad + key + ":";
      for (const auto& x : val) out += " " + scalar_text(x);
      out += "\n";
    } else if (val.is_object()) {
      out += pad + key + ":\n";
      write_text(val, indent + 2, out);
    } else {
      out += pad + key + ": (" + std::to_string(val.size()) + ")\n";
      for (const auto& x : val) {
        if (x.is_object()) {
          out += pad + "  -\n";
          write_text(x, indent + 4, out);
        } else if (flat_array(x)) {
          out += pad + "  -";
          for (const auto& y : x) out += " " + scalar_text(y);
          out += "\n";
        } else {
          out += pad + "  - " + x.dump() + "\n";
        }
      }
    }
  }
}

inline std::string render(const Json& report, bool as_json) {
  if (as_json) return report.dump(2) + "\n";
  std::string out;
  write_text(report, 0, out);
  return out;
}

}  // namespace zchain::cli
