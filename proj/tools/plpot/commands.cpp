#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>

#include "plpot/errors.hpp"
#include "plpot/extremal.hpp"
#include "plpot/ferrier.hpp"
#include "plpot/kernel.hpp"

namespace plpot::cli {

namespace {

ExtremalOptions extremal_options(const json& cfg) {
  ExtremalOptions o;
  o.tol = number_or(cfg, "tol", o.tol);
  o.max_iter = integer_or(cfg, "max_iter", o.max_iter);
  o.threads = static_cast<unsigned>(integer_or(cfg, "threads", 0));
  if (!(o.tol > 0.0)) throw Error(ErrorKind::ConfigError, "'tol' must be positive");
  return o;
}

void write_sidecar(const Invocation& inv) {
  json side;
  side["meta"] = {{"command", inv.command}, {"config", inv.config.dump()}};
  std::ofstream m(meta_path(inv.out));
  if (!m) throw Error(ErrorKind::ConfigError, "cannot write " + meta_path(inv.out).string());
  m << side.dump(2) << "\n";
}

void emit_text(const Invocation& inv, const std::string& text) {
  if (inv.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(inv.out);
  if (!f) throw Error(ErrorKind::ConfigError, "cannot write " + inv.out);
  f << text;
  write_sidecar(inv);
}

void emit(const Invocation& inv, const json& report) { emit_text(inv, report.dump(2) + "\n"); }

void emit_grid(const Invocation& inv, GridField field) {
  if (inv.out.empty()) throw Error(ErrorKind::ConfigError, "this command writes a CSV; pass --out");
  field.meta["command"] = inv.command;
  field.meta["config"] = inv.config.dump();
  write_grid(field, inv.out);
}

std::vector<CVector> z_list(const json& cfg) {
  if (cfg.contains("points")) return points_from(cfg.at("points"));
  return {point_from(require(cfg, "z"))};
}

std::uint64_t seed_of(const json& cfg) {
  return cfg.contains("seed") ? cfg.at("seed").get<std::uint64_t>() : 1u;
}

// {"random": N, "min_modulus": a, "max_modulus": b}: log-uniform moduli,
// uniform phases; or an explicit point array.
std::vector<CVector> sample_from(const json& spec, int dim, std::uint64_t seed) {
  if (spec.is_array()) return points_from(spec);
  int count = integer(spec, "random");
  double lo = number_or(spec, "min_modulus", 1e-3), hi = number_or(spec, "max_modulus", 1e3);
  if (!(lo > 0.0 && hi >= lo)) throw Error(ErrorKind::ConfigError, "need 0 < min_modulus <= max_modulus");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> lr(std::log(lo), std::log(hi)), th(0.0, 2.0 * std::numbers::pi);
  std::vector<CVector> out;
  for (int i = 0; i < count; ++i) {
    CVector z(dim);
    for (auto& c : z) c = std::polar(std::exp(lr(rng)), th(rng));
    out.push_back(std::move(z));
  }
  return out;
}

json witness_json(const Polynomial& p) {
  json terms = json::array();
  for (std::size_t i = 0; i < p.size(); ++i)
    terms.push_back({{"index", p.support[i].entries}, {"coeff", to_json(p.coeffs[i])}});
  return terms;
}

int cmd_body_check(const Invocation& inv) {
  auto body = body_from(require(inv.config, "body"));
  json verts = json::array(), facets = json::array();
  for (const auto& v : body.vertices()) {
    json row = json::array();
    for (const auto& q : v) row.push_back(to_string(q));
    verts.push_back(row);
  }
  for (const auto& h : body.halfspaces()) facets.push_back({{"normal", h.normal}, {"offset", to_string(h.offset)}});
  json rep = {{"tag", body.tag()}, {"dim", body.dim()}, {"vertices", verts}, {"facets", facets}};
  auto k = check_sigma_in_kp(body, integer_or(inv.config, "k_max", 16));
  rep["sigma_in_kp"] = k ? json(*k) : json(nullptr);
  emit(inv, rep);
  return 0;
}

int cmd_lower_set(const Invocation& inv) {
  auto body = body_from(require(inv.config, "body"));
  auto r = is_lower_set(body, integer_or(inv.config, "n_probe", 4));
  json rep = {{"body", body.tag()}, {"is_lower_set", r.is_lower_set}};
  std::string line = r.is_lower_set ? "true" : "false";
  if (!r.is_lower_set) {
    rep["witness"] = {{"n", r.n}, {"upper", r.upper.entries}, {"lower", r.lower.entries}};
    line += ", witness " + to_string(r.upper) + "→" + to_string(r.lower);
  }
  rep["summary"] = line;
  if (inv.out.empty())
    std::cout << line << "\n";
  else
    emit(inv, rep);
  return 0;
}

int cmd_hp(const Invocation& inv) {
  auto body = body_from(require(inv.config, "body"));
  json rows = json::array();
  for (const auto& z : z_list(inv.config)) rows.push_back({{"z", to_json(z)}, {"h_p", h_p(body, z)}});
  emit(inv, {{"body", body.tag()}, {"values", rows}});
  return 0;
}

int cmd_phi(const Invocation& inv) {
  const auto& cfg = inv.config;
  auto body = body_from(require(cfg, "body"));
  auto k = generate_set(require(cfg, "set"));
  int n = integer(cfg, "n");
  ExtremalProblem prob(body, k, n);
  auto opts = extremal_options(cfg);
  json rows = json::array();
  for (const auto& z : z_list(cfg)) {
    auto e = prob.solve(z, opts);
    rows.push_back({{"z", to_json(z)},
                    {"phi", e.phi_value},
                    {"phi_upper", e.phi_upper},
                    {"v_estimate", e.v_estimate},
                    {"relative_gap", e.relative_gap},
                    {"iterations", e.iterations},
                    {"witness", witness_json(e.witness)}});
  }
  emit(inv, {{"body", body.tag()}, {"set", k.label}, {"mesh", k.mesh}, {"n", n}, {"estimates", rows}});
  return 0;
}

int cmd_vgrid(const Invocation& inv) {
  const auto& cfg = inv.config;
  auto body = body_from(require(cfg, "body"));
  auto k = generate_set(require(cfg, "set"));
  emit_grid(inv, v_estimate_grid(body, k, integer(cfg, "n"), grid_from(require(cfg, "grid")), extremal_options(cfg)));
  return 0;
}

int cmd_submult(const Invocation& inv) {
  const auto& cfg = inv.config;
  auto body = body_from(require(cfg, "body"));
  auto k = generate_set(require(cfg, "set"));
  auto r = check_submultiplicative(body, k, integer(cfg, "n"), integer(cfg, "m"), z_list(cfg), extremal_options(cfg));
  json rows = json::array();
  for (const auto& e : r.entries)
    rows.push_back({{"z", to_json(e.z)},
                    {"phi_n", e.phi_n},
                    {"phi_m", e.phi_m},
                    {"phi_nm", e.phi_nm},
                    {"ratio", e.ratio},
                    {"tolerance", e.tolerance},
                    {"holds", e.holds}});
  emit(inv, {{"n", r.n}, {"m", r.m}, {"worst_ratio", r.worst_ratio}, {"holds", r.holds}, {"entries", rows}});
  return r.holds ? 0 : 3;
}

int cmd_convolve(const Invocation& inv) {
  const auto& cfg = inv.config;
  auto body = body_from(require(cfg, "body"));
  auto kernel = build_kernel(body.dim(), integer_or(cfg, "nodes", 16));
  double eps = number(cfg, "eps");
  double delta = number_or(cfg, "delta", eps);
  auto field = convolution_gap_scan(body, kernel, eps, grid_from(require(cfg, "grid")), delta,
                                    static_cast<unsigned>(integer_or(cfg, "threads", 0)));
  bool within = std::stod(field.meta.at("max_gap")) <= std::stod(field.meta.at("analytic_bound_a"));
  field.meta["within_analytic_bound"] = within ? "true" : "false";
  emit_grid(inv, field);
  return cfg.value("assert_bound", false) && !within ? 3 : 0;
}

int cmd_counterexample(const Invocation& inv) {
  const auto& cfg = inv.config;
  double eps = number(cfg, "eps"), c = number(cfg, "C");
  int nodes = integer_or(cfg, "nodes", 64);
  auto rep = cfg.contains("body") ? counterexample_point(body_from(cfg.at("body")), eps, c, nodes)
                                  : counterexample_point(eps, c, nodes);
  emit_text(inv, to_json(rep));
  return 0;
}

int cmd_ferrier(const Invocation& inv) {
  const auto& cfg = inv.config;
  auto body = body_from(require(cfg, "body"));
  double c = number_or(cfg, "c", 0.0);
  std::vector<double> ts;
  for (const auto& t : require(cfg, "t")) ts.push_back(t.get<double>());
  std::sort(ts.begin(), ts.end(), std::greater<>());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  auto sample = sample_from(require(cfg, "sample"), body.dim(), seed_of(cfg));
  ContractOptions co;
  co.body = body;
  co.c = c;
  co.shells = cfg.value("shells", std::vector<double>{0.0, 1.0, 10.0, 100.0, 1000.0, 1e300});
  co.throw_on_violation = false;
  auto r = ferrier_contracts([&](double t, std::span<const Complex> x) { return ferrier_hp(body, t, x, c); }, ts,
                             sample, co);
  json shells = json::array();
  for (std::size_t j = 0; j < ts.size(); ++j) {
    json row = json::array();
    for (const auto& s : r.shells[j])
      row.push_back({{"lo", s.lo}, {"hi", s.hi}, {"count", s.count},
                     {"max_gap", s.count ? json(s.max_gap) : json(nullptr)}});
    shells.push_back({{"t", ts[j]}, {"constant", r.shell_constant[j]}, {"shells", row}});
  }
  json rep = {{"body", body.tag()},
              {"c", c},
              {"seed", seed_of(cfg)},
              {"sample_size", sample.size()},
              {"worst_monotone", r.worst_monotone},
              {"worst_lipschitz", r.worst_lipschitz},
              {"worst_lower", r.worst_lower},
              {"monotone", r.monotone},
              {"lipschitz", r.lipschitz},
              {"lower", r.lower},
              {"shell_gaps", shells}};
  if (!r.failed_clause.empty()) rep["violation"] = {{"clause", r.failed_clause}, {"witness", r.witness}};
  emit(inv, rep);
  return r.failed_clause.empty() ? 0 : 3;
}

ComplexFn delta_from(const json& spec, bool& radial, double& lip) {
  std::string kind = require(spec, "kind").get<std::string>();
  radial = true;
  lip = number_or(spec, "lipschitz", 1.0);
  if (kind == "one") return [](std::span<const Complex>) { return 1.0; };
  if (kind == "abs") return [](std::span<const Complex> s) { return std::abs(s[0]); };
  if (kind == "hat") return [](std::span<const Complex> s) { return std::max(1.0 - std::abs(s[0]), 0.0); };
  if (kind == "hp-slice") {
    auto body = body_from(require(spec, "body"));
    CVector fixed = point_from(require(spec, "fixed"));
    int slot = integer_or(spec, "slot", static_cast<int>(fixed.size()) - 1);
    if (fixed.size() != static_cast<std::size_t>(body.dim()) || slot < 0 || slot >= body.dim())
      throw Error(ErrorKind::ConfigError, "'fixed' must be a point of C^d and 'slot' one of its coordinates");
    return [body, fixed, slot](std::span<const Complex> s) {
      CVector z = fixed;
      z[slot] = s[0];
      return std::exp(-h_p(body, z));
    };
  }
  throw Error(ErrorKind::ConfigError, "unknown delta kind '" + kind + "'");
}

int cmd_appendix(const Invocation& inv) {
  const auto& cfg = inv.config;
  HatDeltaOptions o;
  auto delta = delta_from(require(cfg, "delta"), o.radial, o.lipschitz);
  o.tol = number_or(cfg, "tol", 1e-4);
  o.max_evals = static_cast<std::size_t>(number_or(cfg, "max_evals", 2e6));
  std::vector<CVector> sample;
  const auto& sspec = require(cfg, "sample");
  if (sspec.is_array()) {
    sample = points_from(sspec);
  } else {
    std::mt19937_64 rng(seed_of(cfg));
    double box = number_or(sspec, "box", 2.0);
    std::uniform_real_distribution<double> u(-box, box);
    for (int i = 0, n = integer(sspec, "random"); i < n; ++i) sample.push_back({Complex(u(rng), u(rng))});
  }
  json reports = json::array();
  bool ok = true;
  for (const auto& l : require(cfg, "lambdas")) {
    auto r = distance_identity_check(delta, l.get<double>(), sample, o, false);
    ok = ok && r.holds;
    reports.push_back({{"lambda", r.lam},
                       {"holds", r.holds},
                       {"worst_difference", r.worst_difference},
                       {"max_tolerance", r.max_tolerance}});
  }
  emit(inv, {{"delta", cfg.at("delta")}, {"seed", seed_of(cfg)}, {"sample_size", sample.size()},
             {"holds", ok}, {"reports", reports}});
  return ok ? 0 : 3;
}

}  // namespace

std::vector<std::string> command_names() {
  return {"body check", "body lower-set", "hp", "phi", "vgrid", "submult",
          "convolve", "counterexample", "ferrier", "appendix"};
}

int run_command(const Invocation& inv) {
  const auto& c = inv.command;
  if (c == "body check") return cmd_body_check(inv);
  if (c == "body lower-set") return cmd_lower_set(inv);
  if (c == "hp") return cmd_hp(inv);
  if (c == "phi") return cmd_phi(inv);
  if (c == "vgrid") return cmd_vgrid(inv);
  if (c == "submult") return cmd_submult(inv);
  if (c == "convolve") return cmd_convolve(inv);
  if (c == "counterexample") return cmd_counterexample(inv);
  if (c == "ferrier") return cmd_ferrier(inv);
  if (c == "appendix") return cmd_appendix(inv);
  throw Error(ErrorKind::ConfigError, "unknown command '" + c + "'");
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ContractViolation:
    case ErrorKind::ToleranceExceeded:
    case ErrorKind::NotMonotone:
    case ErrorKind::QuadratureTooCoarse:
      return 3;
    case ErrorKind::SolverStall:
      return 4;
    default:
      return 2;
  }
}

}  // namespace plpot::cli
