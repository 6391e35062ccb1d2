#pragma once

// Run configuration for the hfqm front-end: one JSON tree of defaults, a
// config file merged over it, then `--key.path value` overrides. Every key
// must already exist in the defaults, so typos fail with their path.

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace hfqm::cli {

using nlohmann::json;

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& path, const std::string& what)
      : std::runtime_error(path.empty() ? what : path + ": " + what), path_(path) {}
  [[nodiscard]] const std::string& path() const { return path_; }

 private:
  std::string path_;
};

inline json default_config() {
  return json::parse(R"({
    "grid": {"n": 1001, "h": 0.05},
    "laplacian": "auto",
    "potential": {"tau": -2.0},
    "box": {"L": null, "wall": 1e6},
    "oracle": {"parity": "both", "count": 4, "only": false,
               "half_width": 0.01, "sigma": 1.0, "omega": 1.0},
    "spectrum": {"count": 8, "eigenfunctions": [0], "method": "auto"},
    "axioms": {"samples": 5},
    "converge": {"kind": "approximation", "tau": -2.0,
                 "widths": [0.4, 0.2, 0.1, 0.05],
                 "stage": {"n": 2001, "h": 0.025},
                 "stages": [{"n": 401, "h": 0.025}, {"n": 801, "h": 0.0125}, {"n": 1601, "h": 0.00625}],
                 "value": 1.0, "tol": 1e-3},
    "evolve": {"initial": "gaussian", "center": -2.0, "width": 1.0, "momentum": 1.5,
               "index": 0, "point": 0.0, "normalize": true,
               "t_end": 10.0, "steps": 100, "snapshot_every": 10},
    "scalar": {"values": ["eps", "1 + eps", "3 - 2eps + eps^2", "eps^-1", "-2eps^-2 + 1"]},
    "output": {"dir": "hfqm-out"},
    "workers": 1,
    "tolerances": {"ibp": 1e-13, "parseval": 1e-12, "bound": 1e-9,
                   "norm_drift": 1e-10, "energy_drift": 1e-9, "probability": 1e-10}
  })");
}

namespace detail {

inline std::string join(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

// Nullable defaults (box.L) take a number or null; arrays take arrays.
inline void check_type(const json& expected, const json& got, const std::string& path) {
  auto type_name = [](const json& j) { return std::string(j.type_name()); };
  if (expected.is_null()) {
    if (!got.is_null() && !got.is_number()) throw ConfigError(path, "expected a number or null, got " + type_name(got));
    return;
  }
  if (expected.is_number()) {
    if (!got.is_number()) throw ConfigError(path, "expected a number, got " + type_name(got));
    return;
  }
  if (expected.type() != got.type()) throw ConfigError(path, "expected " + type_name(expected) + ", got " + type_name(got));
}

inline void merge(json& into, const json& from, const std::string& path) {
  if (!from.is_object()) throw ConfigError(path, "expected an object");
  for (auto it = from.begin(); it != from.end(); ++it) {
    const std::string p = join(path, it.key());
    if (!into.contains(it.key())) throw ConfigError(p, "unknown key");
    json& slot = into[it.key()];
    if (slot.is_object()) {
      merge(slot, it.value(), p);
    } else {
      check_type(slot, it.value(), p);
      slot = it.value();
    }
  }
}

}  // namespace detail

inline void merge_file(json& cfg, const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("", "cannot open config file '" + file + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", "config file '" + file + "' is not valid JSON: " + e.what());
  }
  detail::merge(cfg, j, "");
}

/// `path` is dotted ("grid.n"); `raw` is read as JSON when it parses and as
/// a bare string otherwise, so `--laplacian compact` needs no quotes.
inline void apply_override(json& cfg, const std::string& path, const std::string& raw) {
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  json* node = &cfg;
  std::string walked;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    walked = detail::join(walked, key);
    if (key.empty() || !node->is_object() || !node->contains(key)) throw ConfigError(walked, "unknown key");
    node = &(*node)[key];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  if (node->is_object()) {
    detail::merge(*node, value, path);
  } else {
    if (node->is_string() && !value.is_string()) value = raw;
    detail::check_type(*node, value, path);
    *node = value;
  }
}

inline const json& at(const json& cfg, const std::string& path) {
  std::string pointer = "/" + path;
  for (auto& c : pointer)
    if (c == '.') c = '/';
  return cfg.at(json::json_pointer(pointer));
}

namespace detail {

inline double positive(const json& cfg, const std::string& path) {
  const double v = at(cfg, path).get<double>();
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(path, "must be positive and finite");
  return v;
}

inline long long integer(const json& cfg, const std::string& path, long long lo) {
  const json& j = at(cfg, path);
  if (!j.is_number_integer()) throw ConfigError(path, "must be an integer");
  const auto v = j.get<long long>();
  if (v < lo) throw ConfigError(path, "must be >= " + std::to_string(lo));
  return v;
}

inline void one_of(const json& cfg, const std::string& path, std::initializer_list<std::string_view> allowed) {
  const auto v = at(cfg, path).get<std::string>();
  for (auto a : allowed)
    if (v == a) return;
  std::string list;
  for (auto a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
  throw ConfigError(path, "'" + v + "' is not one of {" + list + "}");
}

inline void stage(const json& s, const std::string& path) {
  if (!s.is_object() || !s.contains("n") || !s.contains("h") || s.size() != 2)
    throw ConfigError(path, "a stage is {\"n\": odd count, \"h\": spacing}");
  if (!s["n"].is_number_integer() || s["n"].get<long long>() < 3 || s["n"].get<long long>() % 2 == 0)
    throw ConfigError(path + ".n", "must be an odd integer >= 3");
  if (!s["h"].is_number() || !(s["h"].get<double>() > 0.0)) throw ConfigError(path + ".h", "must be positive");
}

}  // namespace detail

/// Checks everything `command` reads before any computation starts.
inline void validate(const json& cfg, const std::string& command) {
  using namespace detail;
  const auto n = integer(cfg, "grid.n", command == "axioms" ? 2 : 3);
  if (command != "axioms" && n % 2 == 0) throw ConfigError("grid.n", "must be odd (0 has to be a grid point)");
  positive(cfg, "grid.h");
  one_of(cfg, "laplacian", {"auto", "compact", "paper_literal"});
  if (!std::isfinite(at(cfg, "potential.tau").get<double>())) throw ConfigError("potential.tau", "must be finite");
  if (!at(cfg, "box.L").is_null()) positive(cfg, "box.L");
  positive(cfg, "box.wall");
  one_of(cfg, "oracle.parity", {"even", "odd", "both"});
  integer(cfg, "oracle.count", 1);
  positive(cfg, "oracle.half_width");
  positive(cfg, "oracle.sigma");
  positive(cfg, "oracle.omega");
  integer(cfg, "spectrum.count", 1);
  for (std::size_t k = 0; k < at(cfg, "spectrum.eigenfunctions").size(); ++k) {
    const json& e = at(cfg, "spectrum.eigenfunctions")[k];
    if (!e.is_number_integer() || e.get<long long>() < 0 || e.get<long long>() >= n)
      throw ConfigError("spectrum.eigenfunctions[" + std::to_string(k) + "]", "must be an index in [0, grid.n)");
  }
  one_of(cfg, "spectrum.method", {"auto", "bisection", "jacobi"});
  integer(cfg, "axioms.samples", 1);
  integer(cfg, "workers", 1);
  for (const char* t : {"ibp", "parseval", "bound", "norm_drift", "energy_drift", "probability"})
    positive(cfg, std::string("tolerances.") + t);

  if (command == "converge") {
    one_of(cfg, "converge.kind", {"approximation", "chi", "refinement", "constant"});
    positive(cfg, "converge.tol");
    const auto kind = at(cfg, "converge.kind").get<std::string>();
    if (kind == "approximation") {
      stage(at(cfg, "converge.stage"), "converge.stage");
      const json& w = at(cfg, "converge.widths");
      if (w.size() < 3) throw ConfigError("converge.widths", "needs at least 3 widths");
      for (std::size_t k = 0; k < w.size(); ++k) {
        const std::string p = "converge.widths[" + std::to_string(k) + "]";
        if (!w[k].is_number() || !(w[k].get<double>() > 0.0)) throw ConfigError(p, "must be positive");
        if (k > 0 && !(w[k].get<double>() < w[k - 1].get<double>())) throw ConfigError(p, "widths must decrease");
      }
    } else {
      const json& s = at(cfg, "converge.stages");
      if (s.size() < 3) throw ConfigError("converge.stages", "needs at least 3 stages");
      for (std::size_t k = 0; k < s.size(); ++k) stage(s[k], "converge.stages[" + std::to_string(k) + "]");
    }
  }
  if (command == "evolve") {
    one_of(cfg, "evolve.initial", {"gaussian", "delta", "eigenstate"});
    positive(cfg, "evolve.width");
    positive(cfg, "evolve.t_end");
    integer(cfg, "evolve.steps", 1);
    integer(cfg, "evolve.snapshot_every", 1);
    const auto idx = integer(cfg, "evolve.index", 0);
    if (idx >= n) throw ConfigError("evolve.index", "must be below grid.n");
  }
  const double tau = at(cfg, "potential.tau").get<double>();
  if (command == "spectrum" && at(cfg, "oracle.only").get<bool>() && at(cfg, "box.L").is_null() && !(tau < 0.0))
    throw ConfigError("box.L", "the analytic side needs a box half-length or a binding tau < 0");
  if (command == "oracle" && at(cfg, "box.L").is_null() && tau == 0.0)
    throw ConfigError("potential.tau", "nothing to evaluate without a box or a nonzero tau");
  if (command == "scalar-demo") {
    for (const auto& v : at(cfg, "scalar.values"))
      if (!v.is_string()) throw ConfigError("scalar.values", "entries must be strings like \"1 + 2eps\"");
  }
  if (at(cfg, "output.dir").get<std::string>().empty()) throw ConfigError("output.dir", "must not be empty");
}

}  // namespace hfqm::cli
