#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "limitlab/lab/config.hpp"
#include "limitlab/lab/experiments.hpp"
#include "limitlab/lab/identity_suite.hpp"
#include "limitlab/lab/initial_data.hpp"
#include "limitlab/lab/order_fit.hpp"
#include "limitlab/hilbert_bridge.hpp"
#include "limitlab/lab/sweep.hpp"
#include "limitlab/landau_de_gennes.hpp"

using namespace limitlab;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("limitlab_lab_" + name);
  fs::remove_all(p);
  return p.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <int C>
bool same(const Field<C>& a, const Field<C>& b) {
  return std::ranges::equal(a.data(), b.data());
}

std::optional<ErrorCode> parse_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

LabConfig small_sweep(const std::string& recipe) {
  return parse_config(R"({"grid": {"nx": 16, "ny": 16},
    "time": {"dt": 1e-3, "t_end": 0.02, "output_every": 5},
    "initial": {"recipe": ")" + recipe + R"("},
    "sweep": {"epsilons": [0.1, 0.05, 0.025], "order": 1}})");
}

}  // namespace

TEST_SUITE("lab") {

TEST_CASE("defaults and overrides") {
  const LabConfig d = parse_config("{}");
  CHECK(d.preset == "paper-demo");
  CHECK(d.grid.nx == 32);
  CHECK(d.material.viscosity.J == 0.1);
  CHECK(d.epsilons == std::vector<double>{0.1, 0.05, 0.025, 0.0125});

  const LabConfig c = parse_config(R"({"preset": "anisotropic-elastic", "material": {"mu1": 3.0},
    "grid": {"nx": 8, "ny": 12}, "time": {"dt": 0.01, "dt_rule": "proportional"},
    "initial": {"recipe": "random", "seed": 7}, "sweep": {"epsilons": [0.2, 0.1, 0.05], "order": 0}})");
  CHECK(c.material.elastic.L2 == 0.5);
  CHECK(c.material.viscosity.mu1 == 3.0);
  CHECK(c.grid.ny == 12);
  CHECK(c.dt == 0.01);
  CHECK(c.dt_rule == "proportional");
  CHECK(c.initial.seed == 7);
  CHECK(c.order == 0);
}

TEST_CASE("unknown keys and bad values are rejected") {
  CHECK(parse_error(R"({"grids": {}})") == ErrorCode::InvalidConfig);
  CHECK(parse_error(R"({"material": {"L4": 1}})") == ErrorCode::InvalidConfig);
  CHECK(parse_error(R"({"time": {"dt": 1e-3, "tend": 1}})") == ErrorCode::InvalidConfig);
  CHECK(parse_error(R"({"initial": {"recipe": "smooth", "amp": 1}})") == ErrorCode::InvalidConfig);
  CHECK(parse_error(R"({"sweep": {"epsilon": [0.1]}})") == ErrorCode::InvalidConfig);
  CHECK(parse_error("{not json") == ErrorCode::InvalidConfig);
  CHECK(parse_error(R"({"preset": "nope"})") == ErrorCode::InvalidConfig);
  CHECK(parse_error(R"({"time": {"dt": "fast"}})") == ErrorCode::InvalidConfig);
  CHECK(parse_error(R"({"sweep": {"epsilons": [0.1, 0.1, 0.05]}})") == ErrorCode::InvalidConfig);
  CHECK(parse_error(R"({"sweep": {"epsilons": [0.1, -0.05]}})") == ErrorCode::InvalidConfig);
  CHECK(parse_error(R"({"sweep": {"order": 2}})") == ErrorCode::InvalidConfig);
  CHECK(parse_error(R"({"grid": {"nx": 2}})") == ErrorCode::InvalidConfig);
  CHECK(parse_error(R"({"time": {"imex_theta": 1.5}})") == ErrorCode::InvalidConfig);
  CHECK(parse_error(R"({"initial": {"recipe": "vortex"}})") == ErrorCode::InvalidConfig);
}

TEST_CASE("resolved configuration round-trips") {
  const LabConfig c = parse_config(R"({"preset": "anisotropic-elastic", "material": {"eps": 0.3},
    "initial": {"recipe": "random", "amplitude_q": 0.01, "seed": 99}})");
  const json j = to_json(c);
  CHECK(to_json(parse_config(j.dump())) == j);
  for (const auto& name : preset_names()) CHECK_NOTHROW(preset_material(name));
  CHECK_THROWS_AS(load_config(scratch("missing.json")), Error);
}

TEST_CASE("fit_order") {
  const OrderFit one = fit_order({{0.1, 0.1}, {0.05, 0.05}, {0.025, 0.025}});
  CHECK(one.order == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(one.residual <= 1e-12);
  CHECK(one.pairwise.size() == 2);
  CHECK(one.regime_stable);

  const OrderFit two = fit_order({{0.1, 0.01}, {0.05, 0.0025}, {0.025, 0.000625}});
  CHECK(two.order == doctest::Approx(2.0).epsilon(1e-12));
  for (double p : two.pairwise) CHECK(p == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::exp(two.intercept) == doctest::Approx(1.0).epsilon(1e-10));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> noise(-0.05, 0.05);
  double lo = 10, hi = -10;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::pair<double, double>> pts;
    for (double eps : {0.1, 0.05, 0.025, 0.0125}) pts.emplace_back(eps, 3.0 * eps * (1.0 + noise(rng)));
    const double o = fit_order(pts).order;
    lo = std::min(lo, o);
    hi = std::max(hi, o);
  }
  CHECK(lo >= 0.9);
  CHECK(hi <= 1.1);

  auto code = [](const std::vector<std::pair<double, double>>& pts) -> std::optional<ErrorCode> {
    try {
      fit_order(pts);
    } catch (const Error& e) {
      return e.code();
    }
    return std::nullopt;
  };
  CHECK(code({{0.1, 0.1}, {0.05, 0.05}}) == ErrorCode::InsufficientPoints);
  CHECK(code({{0.1, 0.1}, {0.05, 0.0}, {0.025, 0.025}}) == ErrorCode::NonPositiveError);
  CHECK(code({{0.1, 0.1}, {-0.05, 0.05}, {0.025, 0.025}}) == ErrorCode::NonPositiveError);
}

TEST_CASE("initial data invariants") {
  const PeriodicGrid g(16, 16);
  DiffContext ctx(g);
  InitialRecipe r;
  r.name = "random";
  r.amplitude_n = 0.4;
  r.amplitude_ndot = 0.3;
  r.amplitude_v = 0.2;
  r.seed = 11;
  const ElState el = make_el_initial(g, r, ctx);
  double tangency = 0;
  for (int p = 0; p < g.size(); ++p) tangency = std::max(tangency, std::abs(dot(vec_at(el.n, p), vec_at(el.ndot, p))));
  CHECK(max_unit_error(el.n) <= 1e-15);
  CHECK(tangency <= 1e-15);
  CHECK(max_divergence(el.v, ctx) <= 1e-12);
  CHECK(linf_norm(el.v) == doctest::Approx(0.2));

  const MaterialParams mp = preset_material("paper-demo");
  const QsState qs = make_qs_initial(g, r, mp, ctx);
  const TensorField q0 = uniaxial_field(el.n, critical_s1(mp.bulk));
  CHECK(testing::max_abs_field(qs.q - q0) == 0.0);
  CHECK(max_closure_error(qs.q) == 0.0);

  r.amplitude_q = 0.05;
  const QsState perturbed = make_qs_initial(g, r, mp, ctx);
  CHECK(linf_norm(perturbed.q - q0) == doctest::Approx(0.05));

  InitialRecipe eq;
  eq.name = "equilibrium";
  const ElState flat = make_el_initial(g, eq, ctx);
  CHECK(linf_norm(flat.v) == 0.0);
  CHECK(linf_norm(flat.ndot) == 0.0);
  CHECK(same(make_el_initial(g, r, ctx).n, el.n));
}

TEST_CASE("snapshot packing round-trips") {
  const PeriodicGrid g(8, 8);
  DiffContext ctx(g);
  InitialRecipe r;
  r.name = "random";
  r.amplitude_ndot = 0.1;
  r.amplitude_q = 0.02;
  QsState qs = make_qs_initial(g, r, preset_material("paper-demo"), ctx);
  qs.t = 0.25;
  const QsState qb = qs_from_snapshot(to_snapshot(qs));
  CHECK(same(qb.q, qs.q));
  CHECK(same(qb.qdot, qs.qdot));
  CHECK(same(qb.v, qs.v));
  CHECK(qb.t == 0.25);

  const ElState el = make_el_initial(g, r, ctx);
  const ElState eb = el_from_snapshot(to_snapshot(el));
  CHECK(same(eb.n, el.n));
  CHECK(same(eb.ndot, el.ndot));
  CHECK_THROWS_AS(el_from_snapshot(to_snapshot(qs)), Error);
  CHECK_THROWS_AS(qs_from_snapshot(to_snapshot(el)), Error);
}

TEST_CASE("sweep dt rule divides the output interval") {
  LabConfig c = parse_config(R"({"time": {"dt": 1e-3, "output_every": 10, "dt_rule": "proportional"},
    "sweep": {"epsilons": [0.1, 0.03, 0.0125]}})");
  for (double eps : c.epsilons) {
    const double dt = sweep_dt(c, eps);
    const double sub = 10 * c.dt / dt;
    CHECK(std::abs(sub - std::round(sub)) <= 1e-9);
    CHECK(dt <= c.dt * eps / c.epsilons.front() * (1 + 1e-12));
  }
  c.dt_rule = "fixed";
  CHECK(sweep_dt(c, 0.0125) == c.dt);
}

TEST_CASE("equilibrium sweep stays at the fixed point") {
  const LabConfig c = small_sweep("equilibrium");
  const json rep = run_sweep(c, scratch("eq"), 1, false);
  REQUIRE(rep["runs"].size() == 3);
  for (const auto& run : rep["runs"]) {
    CHECK(run["sup_e_Q"].get<double>() <= 1e-10);
    CHECK(run["sup_e_v"].get<double>() <= 1e-10);
  }
  CHECK(rep["certificates"]["qs"]["pass"].get<bool>());
  CHECK(rep["config"] == to_json(c));
}

TEST_CASE("sweep refuses failing certificates") {
  LabConfig c = small_sweep("smooth");
  c.material.viscosity.mu1 = -1.0;
  try {
    run_sweep(c, scratch("refused"), 1, false);
    FAIL("no refusal");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CertificateRefused);
  }
  CHECK_THROWS_AS(simulate_qs(c, scratch("refused_qs"), false), Error);
}

TEST_CASE("smooth sweep output is reproducible and thread independent") {
  const LabConfig c = small_sweep("smooth");
  const std::string a = scratch("serial"), b = scratch("serial_again"), t = scratch("threaded");
  const json ra = run_sweep(c, a, 1, false);
  run_sweep(c, b, 1, false);
  run_sweep(c, t, 2, false);
  for (const char* f : {"report.json", "el/series.csv", "eps_00/series.csv", "eps_01/series.csv", "eps_02/series.csv"}) {
    const std::string ref = slurp(fs::path(a) / f);
    CHECK_MESSAGE(!ref.empty(), f);
    CHECK_MESSAGE(ref == slurp(fs::path(b) / f), f);
    CHECK_MESSAGE(ref == slurp(fs::path(t) / f), f);
  }
  CHECK(ra["output_times"].get<int>() == 5);
  CHECK(ra["monotone"]["e_Q"].get<bool>());
  CHECK(ra["structure"]["max_q_closure"].get<double>() <= 1e-12);
  CHECK(ra["structure"]["max_n_unit_error"].get<double>() <= 1e-10);
  CHECK(ra["structure"]["max_div_v"].get<double>() <= 1e-10);
  CHECK_FALSE(ra["fitted_order_Q"].is_null());
}

TEST_CASE("simulate and validate the energy law") {
  // mode-2 data through the cubic bulk term needs the 32 grid to stay below the dealias cutoff
  const LabConfig c = parse_config(R"({"grid": {"nx": 32, "ny": 32},
    "time": {"dt": 2e-3, "t_end": 0.04, "snapshot_every": 10},
    "initial": {"recipe": "random", "amplitude_ndot": 0.2, "amplitude_q": 0.02}})");
  const std::string qd = scratch("sim_qs"), ed = scratch("sim_el");
  const json sq = simulate_qs(c, qd, false);
  CHECK(sq["energy_non_increasing"].get<bool>());
  CHECK(sq["max_dissipation_rate"].get<double>() <= 0.0);
  CHECK(sq["max_q_closure"].get<double>() <= 1e-12);
  CHECK(sq["max_div_v"].get<double>() <= 1e-10);
  CHECK(fs::exists(fs::path(qd) / "series.csv"));
  CHECK(fs::exists(fs::path(qd) / "snapshot_000020.qsf"));

  const json se = simulate_el(c, ed, false);
  CHECK(se["energy_non_increasing"].get<bool>());
  CHECK(se["max_n_unit_error"].get<double>() <= 1e-10);
  CHECK(se["max_div_v"].get<double>() <= 1e-10);

  for (const std::string& d : {qd, ed}) {
    bool ok = false;
    const json v = validate_energy(c, d, &ok);
    CHECK_MESSAGE(ok, v.dump());
    CHECK(v["snapshots"].size() == 3);
  }
  CHECK_THROWS_AS(validate_energy(c, scratch("empty"), nullptr), Error);
}

TEST_CASE("identity suite passes") {
  const IdentityReport r = run_identity_suite(2024);
  CHECK(r.passed);
  CHECK(r.checks.size() >= 10);
  for (const auto& chk : r.checks) CHECK_MESSAGE(chk.pass, chk.name);
  CHECK(to_json(r)["checks"].size() == r.checks.size());
}

}
