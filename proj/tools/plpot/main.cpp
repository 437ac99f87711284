#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "commands.hpp"
#include "plpot/errors.hpp"

namespace {

struct Common {
  std::string config_path;
  std::string out;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config_path, "JSON config file")->check(CLI::ExistingFile);
  app->add_option("--out", c.out, "output path (stdout when omitted)");
  app->add_option("--tol", c.tol, "solver tolerance, overrides the config");
  app->add_option("--seed", c.seed, "random seed, overrides the config");
  app->add_option("--set", c.overrides, "override a config field, key=value (repeatable)");
}

plpot::cli::json effective_config(const Common& c) {
  using plpot::cli::json;
  json cfg = c.config_path.empty() ? json::object() : plpot::cli::load_config(c.config_path);
  for (const auto& o : c.overrides) plpot::cli::apply_override(cfg, o);
  if (c.tol) cfg["tol"] = *c.tol;
  if (c.seed) cfg["seed"] = *c.seed;
  if (c.tol && !(*c.tol > 0.0)) throw plpot::Error(plpot::ErrorKind::ConfigError, "--tol must be positive");
  return cfg;
}

// Re-runs the command recorded in an output's sidecar.
plpot::cli::Invocation from_sidecar(const std::string& path, const std::string& out) {
  using plpot::cli::json;
  std::ifstream in(path);
  if (!in) throw plpot::Error(plpot::ErrorKind::ConfigError, "cannot read " + path);
  json side = plpot::cli::parse_config(std::string(std::istreambuf_iterator<char>(in), {}), path);
  const auto& meta = plpot::cli::require(side, "meta");
  return {plpot::cli::require(meta, "command").get<std::string>(),
          plpot::cli::parse_config(plpot::cli::require(meta, "config").get<std::string>(), path), out};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"plpot: weighted P-extremal functions and their regularizations"};
  app.require_subcommand(1);

  Common common;
  std::string picked;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& full, const std::string& help) {
    auto* sub = parent->add_subcommand(name, help);
    add_common(sub, common);
    sub->callback([&picked, full] { picked = full; });
  };

  auto* body = app.add_subcommand("body", "convex body utilities");
  body->require_subcommand(1);
  leaf(body, "check", "body check", "vertices, facets and the smallest k with the simplex inside kP");
  leaf(body, "lower-set", "body lower-set", "is P a lower set; prints a witness if not");
  leaf(&app, "hp", "hp", "logarithmic indicator H_P at points");
  leaf(&app, "phi", "phi", "(1/n) log Phi_n at points, with witness polynomials");
  leaf(&app, "vgrid", "vgrid", "(1/n) log Phi_n on a grid, written as CSV");
  leaf(&app, "submult", "submult", "check Phi_n Phi_m <= Phi_{n+m}");
  leaf(&app, "convolve", "convolve", "convolution gap scan of H_P, written as CSV");
  leaf(&app, "counterexample", "counterexample", "the point where smoothing leaves the class");
  leaf(&app, "ferrier", "ferrier", "inf-convolution contracts on c + H_P");
  leaf(&app, "appendix", "appendix", "hat-delta against the distance to the complement");

  std::string rerun_path, rerun_out;
  auto* rerun = app.add_subcommand("rerun", "re-run the task recorded in a .meta.json sidecar");
  rerun->add_option("sidecar", rerun_path, "sidecar file")->required();
  rerun->add_option("--out", rerun_out, "output path");
  rerun->callback([&] { picked = "rerun"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    plpot::cli::Invocation inv;
    if (picked == "rerun")
      inv = from_sidecar(rerun_path, rerun_out);
    else
      inv = {picked, effective_config(common), common.out};
    return plpot::cli::run_command(inv);
  } catch (const plpot::Error& e) {
    std::cerr << "plpot: " << e.what() << "\n";
    return plpot::cli::exit_code_for(e.kind());
  } catch (const plpot::cli::json::exception& e) {
    std::cerr << "plpot: ConfigError: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "plpot: " << e.what() << "\n";
    return 2;
  }
}
