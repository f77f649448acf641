#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "limitlab/limitlab.h"

using nlohmann::json;

namespace {

struct Options {
  std::string config;
  std::string out;
  std::string preset;
  bool force = false;
  int threads = 0;
  long long seed = -1;
};

struct Failure {
  int code;
};

// Takes ownership of a C-API string.
std::string take(char* s) {
  std::string r = s ? s : "";
  limitlab_string_free(s);
  return r;
}

void check(limitlab_status st) {
  if (st != LIMITLAB_OK) {
    std::cerr << "limitlab: " << limitlab_last_error() << "\n";
    throw Failure{st == LIMITLAB_INVALID_CONFIG ? 2 : 1};
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "limitlab: cannot read config " << path << "\n";
    throw Failure{1};
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Config file, then --preset and --seed on top, resolved to the full document.
std::string resolved_config(const Options& o) {
  json doc = json::object();
  if (!o.config.empty()) {
    doc = json::parse(read_file(o.config), nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
      std::cerr << "limitlab: " << o.config << " is not a JSON object\n";
      throw Failure{2};
    }
  }
  if (o.seed >= 0) doc["initial"]["seed"] = o.seed;
  char* out = nullptr;
  check(limitlab_resolve_config(doc.dump().c_str(), o.preset.empty() ? nullptr : o.preset.c_str(), &out));
  return take(out);
}

int threads_from(const Options& o) {
  if (o.threads > 0) return o.threads;
  if (const char* env = std::getenv("LIMITLAB_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

std::string require_out(const Options& o, const char* what) {
  if (o.out.empty()) {
    std::cerr << "limitlab: " << what << " needs --out DIR\n";
    throw Failure{2};
  }
  return o.out;
}

int check_coeffs(const Options& o) {
  const std::string cfg = resolved_config(o);
  char* out = nullptr;
  check(limitlab_certificates(cfg.c_str(), &out));
  const json c = json::parse(take(out));
  const json& lp = c["leslie"];
  std::printf("preset: %s\n", c["preset"].get<std::string>().c_str());
  std::printf("Leslie coefficients\n");
  for (const char* k : {"alpha1", "alpha2", "alpha3", "alpha4", "alpha5", "alpha6", "gamma1", "gamma2", "I"})
    std::printf("  %-7s = %.12g\n", k, lp[k].get<double>());
  std::printf("Oseen-Frank constants\n");
  for (const char* k : {"k1", "k2", "k3", "k4"}) std::printf("  %-7s = %.12g\n", k, lp[k].get<double>());
  bool ok = true;
  for (const auto& [label, key] : {std::pair{"QS dissipativity", "qs"}, std::pair{"EL dissipativity", "el"}}) {
    const json& cert = c[key];
    const bool pass = cert["pass"].get<bool>();
    ok = ok && pass;
    std::printf("%s: %s", label, pass ? "PASS" : "FAIL");
    if (!pass) std::printf(" (violated: %s)", cert["violated"].get<std::string>().c_str());
    std::printf("\n");
    for (const auto& cl : cert["clauses"])
      std::printf("  %-48s %s  margin %.6g\n", cl["clause"].get<std::string>().c_str(),
                  cl["pass"].get<bool>() ? "ok  " : "FAIL", cl["margin"].get<double>());
    std::printf("  %s = %.6g\n", key == std::string("qs") ? "mu1/J" : "gamma1/I", cert["mu1_over_J"].get<double>());
  }
  return ok ? 0 : 1;
}

int simulate(const Options& o, bool qs) {
  const std::string cfg = resolved_config(o);
  const std::string dir = require_out(o, qs ? "simulate-qs" : "simulate-el");
  char* out = nullptr;
  check(qs ? limitlab_simulate_qs(cfg.c_str(), dir.c_str(), o.force, &out)
           : limitlab_simulate_el(cfg.c_str(), dir.c_str(), o.force, &out));
  const json s = json::parse(take(out));
  std::printf("%s run: %d steps to t = %.6g\n", qs ? "Q-tensor" : "director", s["steps"].get<int>(),
              s["t_final"].get<double>());
  std::printf("energy %.12g -> %.12g, non-increasing: %s\n", s["energy_initial"].get<double>(),
              s["energy_final"].get<double>(), s["energy_non_increasing"].get<bool>() ? "yes" : "no");
  std::printf("wrote %s/series.csv and %s/summary.json\n", dir.c_str(), dir.c_str());
  return 0;
}

int sweep(const Options& o) {
  const std::string cfg = resolved_config(o);
  const std::string dir = require_out(o, "sweep");
  char* out = nullptr;
  check(limitlab_sweep(cfg.c_str(), dir.c_str(), threads_from(o), o.force, &out));
  const json r = json::parse(take(out));
  std::printf("%-10s %-14s %-14s %-14s %-14s\n", "eps", "sup e_Q", "sup e_v", "sup e_out/eps", "sup Ef");
  for (const auto& run : r["runs"])
    std::printf("%-10.6g %-14.6e %-14.6e %-14.6e %-14.6e\n", run["eps"].get<double>(), run["sup_e_Q"].get<double>(),
                run["sup_e_v"].get<double>(), run["sup_e_out_over_eps"].get<double>(), run["sup_Ef"].get<double>());
  if (r["fitted_order_Q"].is_null())
    std::printf("fitted order of sup e_Q: n/a\n");
  else
    std::printf("fitted order of sup e_Q: %.4f\n", r["fitted_order_Q"].get<double>());
  std::printf("wrote %s/report.json\n", dir.c_str());
  return 0;
}

int validate(const Options& o, const std::string& dir) {
  const std::string cfg = resolved_config(o);
  int passed = 0;
  char* out = nullptr;
  check(limitlab_validate_energy(cfg.c_str(), dir.c_str(), &passed, &out));
  const std::string text = take(out);
  if (!o.out.empty()) {
    std::ofstream f(o.out, std::ios::trunc);
    f << text << "\n";
  }
  const json r = json::parse(text);
  for (const auto& s : r["snapshots"])
    std::printf("%s t=%-10.6g residual %.3e  dt/2 %.3e  rate %.3e  %s\n", s["file"].get<std::string>().c_str(),
                s["t"].get<double>(), s["residual_dt"].get<double>(), s["residual_half_dt"].get<double>(),
                s["dissipation_rate"].get<double>(), s["pass"].get<bool>() ? "PASS" : "FAIL");
  std::printf("energy validation: %s\n", passed ? "PASS" : "FAIL");
  return passed ? 0 : 1;
}

int identity_suite(const Options& o) {
  int passed = 0;
  char* out = nullptr;
  check(limitlab_identity_suite(static_cast<unsigned long long>(o.seed >= 0 ? o.seed : 1), &passed, &out));
  const std::string text = take(out);
  if (!o.out.empty()) {
    std::ofstream f(o.out, std::ios::trunc);
    f << text << "\n";
  }
  std::cout << text << "\n";
  return passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"limitlab: Q-tensor and director hydrodynamics on a periodic cell"};
  app.require_subcommand(1);
  Options o;
  auto common = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON configuration file")->check(CLI::ExistingFile);
    sub->add_option("--preset", o.preset, "material preset (paper-demo, anisotropic-elastic)");
    sub->add_option("--seed", o.seed, "seed for random initial data")->check(CLI::NonNegativeNumber);
  };
  std::string snapshot_dir;

  auto* coeffs = app.add_subcommand("check-coeffs", "print mapped Leslie/Frank constants and certificates");
  common(coeffs);
  auto* qs = app.add_subcommand("simulate-qs", "run the Q-tensor model");
  common(qs);
  qs->add_option("--out", o.out, "output directory")->required();
  qs->add_flag("--force", o.force, "run even if the dissipativity certificate fails");
  auto* el = app.add_subcommand("simulate-el", "run the director model");
  common(el);
  el->add_option("--out", o.out, "output directory")->required();
  el->add_flag("--force", o.force, "run even if the dissipativity certificate fails");
  auto* sw = app.add_subcommand("sweep", "eps sweep comparing both models");
  common(sw);
  sw->add_option("--out", o.out, "output directory")->required();
  sw->add_flag("--force", o.force, "run even if a dissipativity certificate fails");
  sw->add_option("--threads", o.threads, "worker threads (default LIMITLAB_THREADS or 1)")
      ->check(CLI::PositiveNumber);
  auto* val = app.add_subcommand("validate-energy", "re-step snapshots and check the energy law");
  common(val);
  val->add_option("snapshots", snapshot_dir, "directory of .qsf snapshots")->required();
  val->add_option("--out", o.out, "write the JSON report to this file");
  auto* ids = app.add_subcommand("identity-suite", "run the algebraic identity checks");
  ids->add_option("--seed", o.seed, "sampling seed")->check(CLI::NonNegativeNumber);
  ids->add_option("--out", o.out, "write the JSON report to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*coeffs) return check_coeffs(o);
    if (*qs) return simulate(o, true);
    if (*el) return simulate(o, false);
    if (*sw) return sweep(o);
    if (*val) return validate(o, snapshot_dir);
    if (*ids) return identity_suite(o);
  } catch (const Failure& f) {
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "limitlab: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
