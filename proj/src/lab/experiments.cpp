#include "limitlab/lab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "limitlab/lab/csv.hpp"
#include "limitlab/lab/initial_data.hpp"

namespace fs = std::filesystem;

namespace limitlab {

using nlohmann::json;

namespace {

template <int C>
void append(std::vector<double>& out, const Field<C>& f) {
  out.insert(out.end(), f.data().begin(), f.data().end());
}

template <int C>
void extract(const std::vector<double>& in, size_t& offset, Field<C>& f) {
  std::copy(in.begin() + static_cast<long>(offset), in.begin() + static_cast<long>(offset + f.data().size()),
            f.data().begin());
  offset += f.data().size();
}

void save_snapshot(const std::string& dir, int step, double dt, Snapshot snap) {
  snap.metadata.emplace_back("step", std::to_string(step));
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", dt);
  snap.metadata.emplace_back("dt", buf);
  char name[64];
  std::snprintf(name, sizeof name, "snapshot_%06d.qsf", step);
  write_snapshot(dir + "/" + name, snap);
}

void prepare_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir + ": " + ec.message());
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << j.dump(2) << "\n";
}

int step_count(const LabConfig& cfg) { return static_cast<int>(std::llround(cfg.t_end / cfg.dt)); }

}  // namespace

double max_divergence(const VectorField& v, DiffContext& ctx) { return linf_norm(ctx.divergence(v)); }

double max_closure_error(const TensorField& q) {
  double m = 0;
  for (int p = 0; p < q.points(); ++p) {
    const Mat3 a = tensor_at(q, p).matrix();
    m = std::max({m, max_abs(a - transpose(a)), std::abs(trace(a))});
  }
  return m;
}

double max_unit_error(const VectorField& n) {
  double m = 0;
  for (int p = 0; p < n.points(); ++p) m = std::max(m, std::abs(norm(vec_at(n, p)) - 1.0));
  return m;
}

Snapshot to_snapshot(const QsState& s) {
  Snapshot snap;
  snap.grid = s.q.grid();
  snap.time = s.t;
  snap.components = 13;
  append(snap.data, s.q);
  append(snap.data, s.qdot);
  append(snap.data, s.v);
  snap.metadata = {{"model", "qs"}, {"layout", "q[xx,xy,xz,yy,yz],qdot[xx,xy,xz,yy,yz],v[x,y,z]"}};
  return snap;
}

Snapshot to_snapshot(const ElState& s) {
  Snapshot snap;
  snap.grid = s.n.grid();
  snap.time = s.t;
  snap.components = 9;
  append(snap.data, s.n);
  append(snap.data, s.ndot);
  append(snap.data, s.v);
  snap.metadata = {{"model", "el"}, {"layout", "n[x,y,z],ndot[x,y,z],v[x,y,z]"}};
  return snap;
}

QsState qs_from_snapshot(const Snapshot& s) {
  if (s.components != 13) throw Error(ErrorCode::Io, "not a Q-tensor snapshot");
  QsState st(s.grid);
  size_t off = 0;
  extract(s.data, off, st.q);
  extract(s.data, off, st.qdot);
  extract(s.data, off, st.v);
  st.t = s.time;
  return st;
}

ElState el_from_snapshot(const Snapshot& s) {
  if (s.components != 9) throw Error(ErrorCode::Io, "not a director snapshot");
  ElState st(s.grid);
  size_t off = 0;
  extract(s.data, off, st.n);
  extract(s.data, off, st.ndot);
  extract(s.data, off, st.v);
  st.t = s.time;
  return st;
}

json simulate_qs(const LabConfig& cfg, const std::string& out_dir, bool force) {
  const Certificate cert = check_qs_dissipative(cfg.material.viscosity);
  if (!cert.pass && !force)
    throw Error(ErrorCode::CertificateRefused, "Q-tensor viscosities fail '" + cert.violated + "' (use --force)");
  prepare_dir(out_dir);
  DiffContext ctx(cfg.grid);
  QsConfig qc;
  qc.material = cfg.material;
  qc.dt = cfg.dt;
  qc.t_end = cfg.t_end;
  qc.imex_theta = cfg.imex_theta;
  qc.snapshot_every = cfg.snapshot_every;
  qc.stiffness_safety = cfg.stiffness_safety;
  qc.certificate = cert;

  QsState s = make_qs_initial(cfg.grid, cfg.initial, cfg.material, ctx);
  CsvWriter csv(out_dir + "/series.csv",
                {"t", "E_kin", "E_inertial", "F_eps", "E_total", "R_mid", "residual", "max_Q", "div_v_norm"});
  QsEnergy e = qs_energy(s, cfg.material, ctx);
  const double e0 = e.total;
  csv.row({s.t, e.kinetic, e.inertial, e.free_energy, e.total, qs_dissipation_rate(s, cfg.material, ctx), 0.0,
           max_pointwise_norm(s.q), l2_norm(ctx.divergence(s.v))});
  if (cfg.snapshot_every > 0) save_snapshot(out_dir, 0, cfg.dt, to_snapshot(s));

  const int steps = step_count(cfg);
  double max_residual = 0, max_rate = -std::numeric_limits<double>::infinity(), max_increase = 0;
  double max_div = max_divergence(s.v, ctx), max_closure = max_closure_error(s.q);
  bool monotone = true;
  StepReport rep;
  for (int k = 1; k <= steps; ++k) {
    QsState next = qs_step(s, qc, ctx, &rep);
    next.t = k * cfg.dt;
    double rate = 0;
    const double res = qs_dissipation_residual(s, next, cfg.material, ctx, &rate);
    const QsEnergy en = qs_energy(next, cfg.material, ctx);
    const double div = l2_norm(ctx.divergence(next.v));
    max_residual = std::max(max_residual, res);
    max_rate = std::max(max_rate, rate);
    max_div = std::max(max_div, max_divergence(next.v, ctx));
    max_closure = std::max(max_closure, max_closure_error(next.q));
    const double increase = en.total - e.total;
    max_increase = std::max(max_increase, increase);
    if (increase > 1e-10 * std::abs(e.total)) monotone = false;
    csv.row({next.t, en.kinetic, en.inertial, en.free_energy, en.total, rate, res, max_pointwise_norm(next.q), div});
    if (cfg.snapshot_every > 0 && k % cfg.snapshot_every == 0)
      save_snapshot(out_dir, k, cfg.dt, to_snapshot(next));
    s = std::move(next);
    e = en;
  }
  json summary = {{"model", "qs"},
                  {"steps", steps},
                  {"t_final", s.t},
                  {"energy_initial", e0},
                  {"energy_final", e.total},
                  {"energy_non_increasing", monotone},
                  {"max_energy_increase", max_increase},
                  {"max_dissipation_rate", max_rate},
                  {"max_residual", max_residual},
                  {"max_div_v", max_div},
                  {"max_q_closure", max_closure},
                  {"stiffness_dt_bound", rep.dt_bound},
                  {"certificate", to_json(cert)},
                  {"config", to_json(cfg)}};
  write_json(out_dir + "/summary.json", summary);
  return summary;
}

json simulate_el(const LabConfig& cfg, const std::string& out_dir, bool force) {
  const LeslieParams lp = map_leslie(cfg.material.viscosity, cfg.material.bulk, cfg.material.elastic);
  const Certificate cert = check_el_dissipative(lp);
  if (!cert.pass && !force)
    throw Error(ErrorCode::CertificateRefused, "Leslie coefficients fail '" + cert.violated + "' (use --force)");
  prepare_dir(out_dir);
  DiffContext ctx(cfg.grid);
  ElConfig ec;
  ec.leslie = lp;
  ec.dt = cfg.dt;
  ec.t_end = cfg.t_end;
  ec.imex_theta = cfg.imex_theta;
  ec.snapshot_every = cfg.snapshot_every;

  ElState s = make_el_initial(cfg.grid, cfg.initial, ctx);
  CsvWriter csv(out_dir + "/series.csv",
                {"t", "E_kin", "E_inertial", "E_F", "E_total", "residual", "min_n", "max_n_dot_ndot"});
  auto min_len = [](const ElState& st) {
    double m = std::numeric_limits<double>::infinity();
    for (int p = 0; p < st.n.points(); ++p) m = std::min(m, norm(vec_at(st.n, p)));
    return m;
  };
  auto max_tangency = [](const ElState& st) {
    double m = 0;
    for (int p = 0; p < st.n.points(); ++p) m = std::max(m, std::abs(dot(vec_at(st.n, p), vec_at(st.ndot, p))));
    return m;
  };
  ElEnergy e = el_energy(s, lp, ctx);
  const double e0 = e.total;
  csv.row({s.t, e.kinetic, e.inertial, e.frank, e.total, 0.0, min_len(s), max_tangency(s)});
  if (cfg.snapshot_every > 0) save_snapshot(out_dir, 0, cfg.dt, to_snapshot(s));

  const int steps = step_count(cfg);
  double max_residual = 0, max_rate = -std::numeric_limits<double>::infinity(), max_renorm = 0, max_tangent = 0,
         max_increase = 0;
  double max_div = max_divergence(s.v, ctx), max_unit = max_unit_error(s.n);
  bool monotone = true;
  StepReport rep;
  for (int k = 1; k <= steps; ++k) {
    ElState next = el_step(s, ec, ctx, &rep);
    next.t = k * cfg.dt;
    double rate = 0;
    const double res = el_energy_residual(s, next, lp, ctx, &rate);
    const ElEnergy en = el_energy(next, lp, ctx);
    max_residual = std::max(max_residual, res);
    max_rate = std::max(max_rate, rate);
    max_renorm = std::max(max_renorm, rep.renormalization);
    max_tangent = std::max(max_tangent, rep.tangent_correction);
    max_div = std::max(max_div, max_divergence(next.v, ctx));
    max_unit = std::max(max_unit, max_unit_error(next.n));
    const double increase = en.total - e.total;
    max_increase = std::max(max_increase, increase);
    if (increase > 1e-10 * std::abs(e.total)) monotone = false;
    csv.row({next.t, en.kinetic, en.inertial, en.frank, en.total, res, min_len(next), max_tangency(next)});
    if (cfg.snapshot_every > 0 && k % cfg.snapshot_every == 0)
      save_snapshot(out_dir, k, cfg.dt, to_snapshot(next));
    s = std::move(next);
    e = en;
  }
  json summary = {{"model", "el"},
                  {"steps", steps},
                  {"t_final", s.t},
                  {"energy_initial", e0},
                  {"energy_final", e.total},
                  {"energy_non_increasing", monotone},
                  {"max_energy_increase", max_increase},
                  {"max_dissipation_rate", max_rate},
                  {"max_residual", max_residual},
                  {"max_renormalization", max_renorm},
                  {"max_tangent_correction", max_tangent},
                  {"max_div_v", max_div},
                  {"max_n_unit_error", max_unit},
                  {"leslie", to_json(lp)},
                  {"certificate", to_json(cert)},
                  {"config", to_json(cfg)}};
  write_json(out_dir + "/summary.json", summary);
  return summary;
}

json validate_energy(const LabConfig& cfg, const std::string& snapshot_dir, bool* passed) {
  std::vector<fs::path> files;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(snapshot_dir, ec))
    if (entry.path().extension() == ".qsf") files.push_back(entry.path());
  if (ec) throw Error(ErrorCode::Io, "cannot list " + snapshot_dir + ": " + ec.message());
  if (files.empty()) throw Error(ErrorCode::Io, "no .qsf snapshots in " + snapshot_dir);
  std::sort(files.begin(), files.end());

  const LeslieParams lp = map_leslie(cfg.material.viscosity, cfg.material.bulk, cfg.material.elastic);
  json rows = json::array();
  bool ok = true;
  for (const auto& f : files) {
    const Snapshot snap = read_snapshot(f.string());
    DiffContext ctx(snap.grid);
    double r_full = 0, r_half = 0, rate = 0, e0 = 0, e1 = 0;
    std::string model;
    if (snap.components == 13) {
      model = "qs";
      const QsState s = qs_from_snapshot(snap);
      QsConfig qc;
      qc.material = cfg.material;
      qc.imex_theta = cfg.imex_theta;
      qc.stiffness_safety = cfg.stiffness_safety;
      qc.dt = cfg.dt;
      const QsState a = qs_step(s, qc, ctx);
      r_full = qs_dissipation_residual(s, a, cfg.material, ctx, &rate);
      qc.dt = cfg.dt / 2;
      const QsState b = qs_step(s, qc, ctx);
      r_half = qs_dissipation_residual(s, b, cfg.material, ctx);
      e0 = qs_energy(s, cfg.material, ctx).total;
      e1 = qs_energy(a, cfg.material, ctx).total;
    } else if (snap.components == 9) {
      model = "el";
      const ElState s = el_from_snapshot(snap);
      ElConfig ecfg;
      ecfg.leslie = lp;
      ecfg.imex_theta = cfg.imex_theta;
      ecfg.dt = cfg.dt;
      const ElState a = el_step(s, ecfg, ctx);
      r_full = el_energy_residual(s, a, lp, ctx, &rate);
      ecfg.dt = cfg.dt / 2;
      const ElState b = el_step(s, ecfg, ctx);
      r_half = el_energy_residual(s, b, lp, ctx);
      e0 = el_energy(s, lp, ctx).total;
      e1 = el_energy(a, lp, ctx).total;
    } else {
      throw Error(ErrorCode::Io, f.string() + " has an unknown component layout");
    }
    // residuals at round-off level carry no order information
    const double floor = 1e-9 * std::max(1.0, std::abs(e0));
    const bool resolved = r_full > floor;
    const double ratio = r_half > 0 ? r_full / r_half : std::numeric_limits<double>::infinity();
    const bool ratio_ok = !resolved || ratio >= 1.8;
    const bool rate_ok = rate <= 1e-12 * std::max(1.0, std::abs(e0));
    const bool energy_ok = e1 - e0 <= 1e-10 * std::abs(e0);
    ok = ok && ratio_ok && rate_ok && energy_ok;
    rows.push_back({{"file", f.filename().string()},
                    {"model", model},
                    {"t", snap.time},
                    {"residual_dt", r_full},
                    {"residual_half_dt", r_half},
                    {"ratio", resolved ? json(ratio) : json(nullptr)},
                    {"dissipation_rate", rate},
                    {"energy_change", e1 - e0},
                    {"pass", ratio_ok && rate_ok && energy_ok}});
  }
  if (passed) *passed = ok;
  return {{"passed", ok}, {"dt", cfg.dt}, {"snapshots", rows}};
}

}  // namespace limitlab
