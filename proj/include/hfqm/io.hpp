#pragma once

// Plot-ready outputs: grid-function CSV, grid/spectrum/net JSON.

#include <complex>
#include <cstddef>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "hfqm/analytic_oracle.hpp"
#include "hfqm/distributions.hpp"
#include "hfqm/grid.hpp"
#include "hfqm/operators.hpp"
#include "hfqm/stages.hpp"

namespace hfqm::io {

using nlohmann::json;

inline void write_csv(std::ostream& os, const ComplexGridFunction& u) {
  os.precision(17);
  os << "x,value_re,value_im\n";
  for (std::size_t j = 0; j < u.size(); ++j)
    os << u.grid()->point(j) << ',' << u[j].real() << ',' << u[j].imag() << '\n';
}

inline void write_csv(std::ostream& os, const RealGridFunction& u) { write_csv(os, u.as<std::complex<double>>()); }

inline json grid_json(const Grid& g) {
  return {{"n", g.size()}, {"h", g.spacing()}, {"weights_uniform", g.weights_uniform()}};
}

inline json bound_json(const BoundReport& b) {
  return {{"min_eig", b.min_eig}, {"bound", b.bound}, {"pass", b.pass}};
}

inline json spectrum_json(const Hamiltonian& h, const std::vector<double>& eigenvalues,
                          const std::optional<BoundReport>& bound) {
  json j;
  j["source"] = "grid";
  j["params"] = {{"n", h.grid->size()},
                 {"h", h.grid->spacing()},
                 {"variant", std::string(to_string(h.variant))},
                 {"potential", h.potential}};
  j["eigenvalues"] = eigenvalues;
  if (bound) j["bound_check"] = bound_json(*bound);
  return j;
}

inline json oracle_json(const oracle::BoxProblem& p, const std::vector<oracle::Mode>& modes) {
  json j;
  j["source"] = "analytic";
  j["params"] = {{"L", p.L},
                 {"strength", p.strength},
                 {"sign", std::string(oracle::to_string(p.sign))},
                 {"parity", std::string(oracle::to_string(p.parity))}};
  std::vector<double> ks, es;
  for (const auto& m : modes) {
    ks.push_back(m.k);
    es.push_back(m.energy);
  }
  j["k"] = ks;
  j["eigenvalues"] = es;
  return j;
}

inline void write_net_csv(std::ostream& os, const Net& net) {
  os.precision(17);
  os << "stage,value,delta\n";
  bool have_prev = false;
  double prev = 0.0;
  for (const auto& e : net.entries) {
    os << '"' << e.stage << "\",";
    if (!e.ok) {
      os << "nan,nan\n";
      continue;
    }
    os << e.value << ',';
    if (have_prev) os << e.value - prev;
    else os << "nan";
    os << '\n';
    prev = e.value;
    have_prev = true;
  }
}

inline json net_json(const Net& net, const LimitEstimate& est) {
  json stages = json::array();
  for (const auto& e : net.entries) {
    json s = {{"stage", e.stage}, {"scale", e.scale}, {"ok", e.ok}};
    if (e.ok) s["value"] = e.value;
    else s["error"] = e.error;
    stages.push_back(s);
  }
  json j = {{"estimate", est.value}, {"converged", est.converged}, {"extrapolated", est.extrapolated}};
  j["rate"] = est.rate ? json(*est.rate) : json(nullptr);
  j["stages"] = stages;
  return j;
}

inline json residual_json(const std::vector<ResidualRecord>& records) {
  json a = json::array();
  for (const auto& r : records) a.push_back({{"phi_id", r.phi_id}, {"pairing", r.pairing}, {"classification", r.classification}});
  return a;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << content;
}

}  // namespace hfqm::io
