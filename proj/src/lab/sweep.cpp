#include "limitlab/lab/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>

#include "limitlab/hilbert_bridge.hpp"
#include "limitlab/lab/csv.hpp"
#include "limitlab/lab/experiments.hpp"
#include "limitlab/lab/initial_data.hpp"
#include "limitlab/lab/order_fit.hpp"
#include "limitlab/landau_de_gennes.hpp"

namespace fs = std::filesystem;

namespace limitlab {

using nlohmann::json;

namespace {

// Director trajectory sampled at the output times.
struct ElFrame {
  ElState state;
  TensorField q1_perp;
  TensorField q1_perp_rate;
};

struct ElTrack {
  std::vector<ElFrame> frames;
  double max_unit_error = 0.0;
  double max_div = 0.0;
};

struct EpsResult {
  double eps = 0.0;
  double dt = 0.0;
  double final_eq = 0.0, sup_eq = 0.0, sup_eq_linf = 0.0, sup_ev = 0.0, sup_eout = 0.0, sup_eout_scaled = 0.0, sup_ef = 0.0;
  double max_closure = 0.0, max_div = 0.0;
  int steps = 0;
};

ElTrack run_director(const LabConfig& cfg, const LeslieParams& lp, const std::string& dir) {
  DiffContext ctx(cfg.grid);
  ElConfig ec;
  ec.leslie = lp;
  ec.dt = cfg.dt;
  ec.t_end = cfg.t_end;
  ec.imex_theta = cfg.imex_theta;

  const int steps = static_cast<int>(std::llround(cfg.t_end / cfg.dt));
  const int every = cfg.output_every;
  const int outputs = steps / every;
  const bool need_q1 = cfg.order >= 1;
  ElTrack track;
  track.frames.resize(static_cast<size_t>(outputs) + 1);

  CsvWriter csv(dir + "/series.csv", {"t", "E_kin", "E_inertial", "E_F", "E_total"});
  // q1_perp at step k-1 and k are kept so the rate at output steps can be differenced.
  std::optional<TensorField> q1_prev;
  ElState s = make_el_initial(cfg.grid, cfg.initial, ctx);
  for (int k = 0; k <= outputs * every; ++k) {
    const bool output = k % every == 0;
    const bool after_output = k > 0 && (k - 1) % every == 0;
    const bool before_output = (k + 1) % every == 0 && k + 1 <= outputs * every;
    std::optional<TensorField> q1;
    if (need_q1 && (output || after_output || before_output)) q1 = q1_perp(s, cfg.material, ctx);

    if (need_q1 && after_output) {
      // finish the rate of the output frame at step k-1 (central, or forward at the start)
      ElFrame& f = track.frames[static_cast<size_t>((k - 1) / every)];
      const bool has_before = k - 1 > 0;
      const TensorField& lo = has_before ? f.q1_perp_rate : f.q1_perp;
      const double span = has_before ? 2.0 * cfg.dt : cfg.dt;
      f.q1_perp_rate = (1.0 / span) * (*q1 - lo);
    }
    if (output) {
      const auto idx = static_cast<size_t>(k / every);
      ElFrame& f = track.frames[idx];
      f.state = s;
      if (need_q1) {
        f.q1_perp = *q1;
        if (k == outputs * every) {
          f.q1_perp_rate = k > 0 ? (1.0 / cfg.dt) * (*q1 - *q1_prev) : TensorField(cfg.grid);
        } else if (k > 0) {
          // park Q1(k-1) here until Q1(k+1) is known
          f.q1_perp_rate = *q1_prev;
        }
      }
      const ElEnergy e = el_energy(s, lp, ctx);
      csv.row({s.t, e.kinetic, e.inertial, e.frank, e.total});
    }
    track.max_unit_error = std::max(track.max_unit_error, max_unit_error(s.n));
    track.max_div = std::max(track.max_div, max_divergence(s.v, ctx));
    if (q1) q1_prev = std::move(q1);
    if (k < outputs * every) {
      s = el_step(s, ec, ctx);
      s.t = (k + 1) * cfg.dt;
    }
  }
  return track;
}

EpsResult run_eps(const LabConfig& cfg, double eps, const ElTrack& track, const std::string& dir) {
  MaterialParams mp = cfg.material;
  mp.eps = eps;
  DiffContext ctx(cfg.grid);
  QsConfig qc;
  qc.material = mp;
  qc.dt = sweep_dt(cfg, eps);
  qc.imex_theta = cfg.imex_theta;
  qc.stiffness_safety = cfg.stiffness_safety;
  qc.certificate = check_qs_dissipative(mp.viscosity);

  const double output_dt = cfg.output_every * cfg.dt;
  const int sub = static_cast<int>(std::llround(output_dt / qc.dt));
  const double s1 = critical_s1(mp.bulk);

  EpsResult r;
  r.eps = eps;
  r.dt = qc.dt;
  const ElFrame& f0 = track.frames.front();
  QsState s = build_well_prepared(f0.state.n, f0.state.ndot, f0.state.v, mp, cfg.order, ctx);

  CsvWriter csv(dir + "/series.csv", {"t", "e_Q", "e_Q_linf", "e_v", "e_out", "e_out_over_eps", "Ef"});
  for (size_t i = 0; i < track.frames.size(); ++i) {
    if (i > 0) {
      for (int j = 0; j < sub; ++j) {
        s = qs_step(s, qc, ctx);
        r.max_closure = std::max(r.max_closure, max_closure_error(s.q));
        r.max_div = std::max(r.max_div, max_divergence(s.v, ctx));
      }
      ++r.steps;
    }
    const ElFrame& f = track.frames[i];
    // both clocks advance by the same integer number of output intervals
    s.t = f.state.t;
    const TensorField diff = s.q - uniaxial_field(f.state.n, s1);
    TensorField out(cfg.grid);
    for (int p = 0; p < diff.points(); ++p)
      set_tensor(out, p, project_out(Director::normalized(vec_at(f.state.n, p)), tensor_at(diff, p)));
    const double eq = l2_norm(diff), eq_inf = max_pointwise_norm(diff);
    const double ev = l2_norm(s.v - f.state.v);
    const double eout = l2_norm(out);
    const double ef = remainder_energy(s, f.state, mp, cfg.order, ctx, cfg.order >= 1 ? &f.q1_perp_rate : nullptr).total;
    csv.row({f.state.t, eq, eq_inf, ev, eout, eout / eps, ef});
    r.final_eq = eq;
    r.sup_eq = std::max(r.sup_eq, eq);
    r.sup_eq_linf = std::max(r.sup_eq_linf, eq_inf);
    r.sup_ev = std::max(r.sup_ev, ev);
    r.sup_eout = std::max(r.sup_eout, eout);
    r.sup_eout_scaled = std::max(r.sup_eout_scaled, eout / eps);
    r.sup_ef = std::max(r.sup_ef, ef);
    if (i == 0) {
      r.max_closure = max_closure_error(s.q);
      r.max_div = max_divergence(s.v, ctx);
    }
  }
  r.steps *= sub;
  return r;
}

json fit_json(const std::vector<std::pair<double, double>>& pts) {
  try {
    const OrderFit f = fit_order(pts);
    return {{"order", f.order},
            {"intercept", f.intercept},
            {"residual", f.residual},
            {"pairwise", f.pairwise},
            {"asymptotic_regime", f.regime_stable}};
  } catch (const Error& e) {
    return {{"order", nullptr}, {"reason", e.what()}};
  }
}

// strictly smaller error at every smaller eps
bool decreasing(const std::vector<double>& v) {
  for (size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

// The largest value over the sweep relative to the value at the largest eps. A quantity
// that scales like 1/eps would grow by the full eps ratio instead.
double growth(const std::vector<double>& v) {
  if (v.empty() || !(v.front() > 0.0)) return 0.0;
  return *std::max_element(v.begin(), v.end()) / v.front();
}

std::string eps_dir(size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "eps_%02zu", i);
  return buf;
}

}  // namespace

double sweep_dt(const LabConfig& cfg, double eps) {
  const double output_dt = cfg.output_every * cfg.dt;
  if (cfg.dt_rule == "fixed") return cfg.dt;
  const double target = cfg.dt * eps / cfg.epsilons.front();
  return output_dt / std::ceil(output_dt / target - 1e-9);
}

json run_sweep(const LabConfig& cfg, const std::string& out_dir, int threads, bool force) {
  if (cfg.epsilons.empty()) throw Error(ErrorCode::InvalidConfig, "sweep needs at least one eps");
  const Certificate qs_cert = check_qs_dissipative(cfg.material.viscosity);
  const LeslieParams lp = map_leslie(cfg.material.viscosity, cfg.material.bulk, cfg.material.elastic);
  const Certificate el_cert = check_el_dissipative(lp);
  if (!qs_cert.pass && !force)
    throw Error(ErrorCode::CertificateRefused, "Q-tensor viscosities fail '" + qs_cert.violated + "' (use --force)");
  if (!el_cert.pass && !force)
    throw Error(ErrorCode::CertificateRefused, "Leslie coefficients fail '" + el_cert.violated + "' (use --force)");

  std::error_code ec;
  fs::create_directories(out_dir + "/el", ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + out_dir + ": " + ec.message());
  const ElTrack track = run_director(cfg, lp, out_dir + "/el");

  const size_t n = cfg.epsilons.size();
  std::vector<EpsResult> results(n);
  std::vector<std::exception_ptr> failures(n);
  for (size_t i = 0; i < n; ++i) {
    fs::create_directories(out_dir + "/" + eps_dir(i), ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create " + out_dir + "/" + eps_dir(i));
  }
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < n; i = next++) {
      try {
        results[i] = run_eps(cfg, cfg.epsilons[i], track, out_dir + "/" + eps_dir(i));
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const int pool = std::clamp(threads, 1, static_cast<int>(n));
  if (pool <= 1) {
    worker();
  } else {
    std::vector<std::thread> ts;
    for (int t = 0; t < pool; ++t) ts.emplace_back(worker);
    for (auto& t : ts) t.join();
  }
  for (size_t i = 0; i < n; ++i) {
    if (!failures[i]) continue;
    char tag[64];
    std::snprintf(tag, sizeof tag, "eps=%g: ", cfg.epsilons[i]);
    try {
      std::rethrow_exception(failures[i]);
    } catch (const Error& e) {
      throw Error(e.code(), tag + std::string(e.what()));
    }
  }

  json runs = json::array();
  std::vector<std::pair<double, double>> pq, pfinal, pv, pout;
  std::vector<double> sq, sv, sscaled, sef;
  double closure = 0, div = track.max_div;
  for (size_t i = 0; i < n; ++i) {
    const EpsResult& r = results[i];
    runs.push_back({{"eps", r.eps},
                    {"dt", r.dt},
                    {"steps", r.steps},
                    {"dir", eps_dir(i)},
                    {"sup_e_Q", r.sup_eq},
                    {"final_e_Q", r.final_eq},
                    {"sup_e_Q_linf", r.sup_eq_linf},
                    {"sup_e_v", r.sup_ev},
                    {"sup_e_out", r.sup_eout},
                    {"sup_e_out_over_eps", r.sup_eout_scaled},
                    {"sup_Ef", r.sup_ef}});
    pq.emplace_back(r.eps, r.sup_eq);
    pfinal.emplace_back(r.eps, r.final_eq);
    pv.emplace_back(r.eps, r.sup_ev);
    pout.emplace_back(r.eps, r.sup_eout);
    sq.push_back(r.sup_eq);
    sv.push_back(r.sup_ev);
    sscaled.push_back(r.sup_eout_scaled);
    sef.push_back(r.sup_ef);
    closure = std::max(closure, r.max_closure);
    div = std::max(div, r.max_div);
  }
  const json fq = fit_json(pq);

  json report = {{"runs", runs},
                 {"fits", {{"e_Q", fq}, {"e_Q_final", fit_json(pfinal)}, {"e_v", fit_json(pv)}, {"e_out", fit_json(pout)}}},
                 {"fitted_order_Q", fq["order"]},
                 {"monotone", {{"e_Q", decreasing(sq)}, {"e_v", decreasing(sv)}}},
                 {"growth", {{"e_out_over_eps", growth(sscaled)}, {"Ef", growth(sef)}}},
                 {"structure",
                  {{"max_q_closure", closure},
                   {"max_n_unit_error", track.max_unit_error},
                   {"max_div_v", div}}},
                 {"output_times", track.frames.size()},
                 {"certificates", {{"qs", to_json(qs_cert)}, {"el", to_json(el_cert)}}},
                 {"leslie", to_json(lp)},
                 {"config", to_json(cfg)}};
  std::ofstream out(out_dir + "/report.json", std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + out_dir + "/report.json");
  out << report.dump(2) << "\n";
  return report;
}

}  // namespace limitlab
