#pragma once

// JSON/CSV serialization for the CLI. All reals are written with 15
// significant digits through std::to_chars, so output is locale-independent
// ('.' decimal separator, no grouping).

#include <charconv>
#include <string>
#include <vector>

#include <json.hpp>

#include "rtl/core.hpp"
#include "rtl/errors.hpp"

namespace rtl {

inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x,
                                 std::chars_format::general, 15);
  return std::string(buf, res.ptr);
}

namespace detail {

inline std::string json_array(const std::vector<double>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += format_double(xs[i]);
  }
  out += "]";
  return out;
}

inline std::vector<double> number_array(const nlohmann::json& j, const char* key,
                                        bool required) {
  if (!j.contains(key)) {
    if (required)
      throw ValidationError("BadInput", std::string("missing field \"") + key + "\"");
    return {};
  }
  const auto& arr = j.at(key);
  if (!arr.is_array())
    throw ValidationError("BadInput", std::string("field \"") + key +
                                          "\" must be an array of numbers");
  std::vector<double> out;
  out.reserve(arr.size());
  for (const auto& v : arr) {
    if (!v.is_number())
      throw ValidationError("BadInput", std::string("field \"") + key +
                                            "\" must contain only numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

inline nlohmann::json parse_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw ValidationError("BadInput", "input is not valid JSON");
  return j;
}

}  // namespace detail

inline BidiagonalPencil pencil_from_json_text(const std::string& text) {
  const nlohmann::json j = detail::parse_json(text);
  BidiagonalPencil p;
  p.a = detail::number_array(j, "a", true);
  p.b = detail::number_array(j, "b", false);
  validate_pencil(p);
  return p;
}

inline SpectralData spectral_from_json_text(const std::string& text) {
  const nlohmann::json j = detail::parse_json(text);
  return make_spectral_data(detail::number_array(j, "lambda", true),
                            detail::number_array(j, "w", true));
}

inline std::string pencil_to_json_text(const BidiagonalPencil& p) {
  return "{\"a\":" + detail::json_array(p.a) + ",\"b\":" + detail::json_array(p.b) +
         "}\n";
}

inline std::string spectral_to_json_text(const SpectralData& s) {
  return "{\"lambda\":" + detail::json_array(s.lambda) +
         ",\"w\":" + detail::json_array(s.w) + "}\n";
}

/// CSV with header t,a_1..a_N,b_1..b_{N-1}; one row per time, '\n' endings.
inline std::string trajectory_to_csv(const Trajectory& traj) {
  std::string out = "t";
  if (!traj.samples.empty()) {
    const std::size_t n = traj.samples.front().size();
    for (std::size_t i = 1; i <= n; ++i) out += ",a_" + std::to_string(i);
    for (std::size_t i = 1; i < n; ++i) out += ",b_" + std::to_string(i);
  }
  out += "\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    out += format_double(traj.times[k]);
    for (double x : traj.samples[k].a) out += "," + format_double(x);
    for (double x : traj.samples[k].b) out += "," + format_double(x);
    out += "\n";
  }
  return out;
}

inline std::string trajectory_to_json_text(const Trajectory& traj) {
  std::string out = "{\"samples\":[";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    if (k) out += ",";
    out += "{\"t\":" + format_double(traj.times[k]) +
           ",\"a\":" + detail::json_array(traj.samples[k].a) +
           ",\"b\":" + detail::json_array(traj.samples[k].b) + "}";
  }
  out += "]}\n";
  return out;
}

inline std::string error_to_json_text(const Error& e) {
  const nlohmann::json j{{"error", {{"kind", e.kind()}, {"detail", e.what()}}}};
  return j.dump() + "\n";
}

}  // namespace rtl
