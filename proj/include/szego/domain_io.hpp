#pragma once

// Domain-spec files: UTF-8 JSON of the form
//
//   {"outer": {"fourier": [[re,im],...], "kmin": -d},
//    "holes": [{"fourier": [...], "kmin": -d, "anchor": [re,im]}, ...]}
//
// with coefficient k running kmin .. kmin+len-1.  Hole curves are written
// counterclockwise; all Domain invariants are validated on load.

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "szego/errors.hpp"
#include "szego/geometry.hpp"

namespace szego::geometry {

namespace detail {

inline Curve curve_from_json(const nlohmann::json& j, const std::string& what) {
  if (!j.contains("fourier") || !j.contains("kmin"))
    fail(errc::invalid_domain, what + ": need \"fourier\" and \"kmin\"");
  std::vector<cx> coeffs;
  for (const auto& pair : j.at("fourier")) {
    if (!pair.is_array() || pair.size() != 2)
      fail(errc::invalid_domain, what + ": fourier entries must be [re,im]");
    coeffs.emplace_back(pair[0].get<double>(), pair[1].get<double>());
  }
  return Curve(std::move(coeffs), j.at("kmin").get<int>());
}

}  // namespace detail

inline Domain domain_from_json(const nlohmann::json& j) {
  if (!j.contains("outer")) fail(errc::invalid_domain, "missing \"outer\" curve");
  Curve outer = detail::curve_from_json(j.at("outer"), "outer");
  std::vector<Curve> holes;
  std::vector<cx> anchors;
  if (j.contains("holes")) {
    int idx = 0;
    for (const auto& h : j.at("holes")) {
      std::string what = "hole " + std::to_string(++idx);
      holes.push_back(detail::curve_from_json(h, what));
      if (!h.contains("anchor") || !h.at("anchor").is_array() ||
          h.at("anchor").size() != 2)
        fail(errc::invalid_domain, what + ": need \"anchor\": [re,im]");
      anchors.emplace_back(h.at("anchor")[0].get<double>(),
                           h.at("anchor")[1].get<double>());
    }
  }
  return Domain(std::move(outer), std::move(holes), std::move(anchors));
}

inline Domain load_domain(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io_failure, "cannot open domain file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(errc::invalid_domain, "malformed domain file: " + std::string(e.what()));
  }
  return domain_from_json(j);
}

}  // namespace szego::geometry
