#include "limitlab/limitlab.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "json.hpp"
#include "limitlab/lab/config.hpp"
#include "limitlab/lab/experiments.hpp"
#include "limitlab/lab/identity_suite.hpp"
#include "limitlab/lab/initial_data.hpp"
#include "limitlab/lab/sweep.hpp"

using limitlab::ErrorCode;
using nlohmann::json;

struct limitlab_qs {
  limitlab::LabConfig cfg;
  limitlab::DiffContext ctx;
  limitlab::QsConfig qc;
  limitlab::QsState state;

  explicit limitlab_qs(const limitlab::LabConfig& c) : cfg(c), ctx(c.grid) {
    qc.material = c.material;
    qc.dt = c.dt;
    qc.t_end = c.t_end;
    qc.imex_theta = c.imex_theta;
    qc.stiffness_safety = c.stiffness_safety;
    qc.certificate = limitlab::check_qs_dissipative(c.material.viscosity);
    state = limitlab::make_qs_initial(c.grid, c.initial, c.material, ctx);
  }
};

struct limitlab_el {
  limitlab::LabConfig cfg;
  limitlab::DiffContext ctx;
  limitlab::ElConfig ec;
  limitlab::ElState state;

  explicit limitlab_el(const limitlab::LabConfig& c) : cfg(c), ctx(c.grid) {
    ec.leslie = limitlab::map_leslie(c.material.viscosity, c.material.bulk, c.material.elastic);
    ec.dt = c.dt;
    ec.t_end = c.t_end;
    ec.imex_theta = c.imex_theta;
    state = limitlab::make_el_initial(c.grid, c.initial, ctx);
  }
};

namespace {

thread_local std::string last_error;

limitlab_status map_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument: return LIMITLAB_INVALID_ARGUMENT;
    case ErrorCode::NotSymmetricTraceless: return LIMITLAB_NOT_SYMMETRIC_TRACELESS;
    case ErrorCode::NonUnitDirector: return LIMITLAB_NON_UNIT_DIRECTOR;
    case ErrorCode::DegenerateBulk: return LIMITLAB_DEGENERATE_BULK;
    case ErrorCode::NotInRange: return LIMITLAB_NOT_IN_RANGE;
    case ErrorCode::GridMismatch: return LIMITLAB_GRID_MISMATCH;
    case ErrorCode::BadEpsilon: return LIMITLAB_BAD_EPSILON;
    case ErrorCode::DegenerateGamma: return LIMITLAB_DEGENERATE_GAMMA;
    case ErrorCode::NonUnitField: return LIMITLAB_NON_UNIT_FIELD;
    case ErrorCode::NotCritical: return LIMITLAB_NOT_CRITICAL;
    case ErrorCode::CflViolation: return LIMITLAB_CFL_VIOLATION;
    case ErrorCode::StiffnessViolation: return LIMITLAB_STIFFNESS_VIOLATION;
    case ErrorCode::StateBlowup: return LIMITLAB_STATE_BLOWUP;
    case ErrorCode::InsufficientPoints: return LIMITLAB_INSUFFICIENT_POINTS;
    case ErrorCode::NonPositiveError: return LIMITLAB_NON_POSITIVE_ERROR;
    case ErrorCode::CertificateRefused: return LIMITLAB_CERTIFICATE_REFUSED;
    case ErrorCode::InvalidConfig: return LIMITLAB_INVALID_CONFIG;
    case ErrorCode::Io: return LIMITLAB_IO;
  }
  return LIMITLAB_INTERNAL;
}

template <class F>
limitlab_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return LIMITLAB_OK;
  } catch (const limitlab::Error& e) {
    last_error = e.what();
    return map_code(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return LIMITLAB_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return LIMITLAB_INTERNAL;
  }
}

limitlab::LabConfig config_from(const char* text) {
  return limitlab::parse_config(text && *text ? text : "{}");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(bool cond, const char* what) {
  if (!cond) throw limitlab::Error(ErrorCode::InvalidArgument, what);
}

void emit(char** out, const json& j) {
  if (out) *out = dup(j.dump(2));
}

}  // namespace

extern "C" {

const char* limitlab_last_error(void) { return last_error.c_str(); }

const char* limitlab_status_name(limitlab_status s) {
  switch (s) {
    case LIMITLAB_OK: return "Ok";
    case LIMITLAB_INTERNAL: return "Internal";
    default: break;
  }
  for (int c = 0; c <= static_cast<int>(ErrorCode::Io); ++c)
    if (map_code(static_cast<ErrorCode>(c)) == s) return limitlab::to_string(static_cast<ErrorCode>(c));
  return "Unknown";
}

void limitlab_string_free(char* s) { std::free(s); }

limitlab_status limitlab_resolve_config(const char* config_json, const char* preset, char** out_json) {
  return guarded([&] {
    require(out_json, "out_json is null");
    json doc = json::parse(config_json && *config_json ? config_json : "{}", nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) throw limitlab::Error(ErrorCode::InvalidConfig, "malformed JSON");
    if (preset && *preset) doc["preset"] = preset;
    emit(out_json, limitlab::to_json(limitlab::parse_config(doc.dump())));
  });
}

limitlab_status limitlab_map_leslie(const char* config_json, limitlab_leslie* out) {
  return guarded([&] {
    require(out, "out is null");
    const limitlab::LabConfig cfg = config_from(config_json);
    const limitlab::LeslieParams lp =
        limitlab::map_leslie(cfg.material.viscosity, cfg.material.bulk, cfg.material.elastic);
    *out = {lp.alpha1, lp.alpha2, lp.alpha3, lp.alpha4, lp.alpha5, lp.alpha6, lp.gamma1,
            lp.gamma2, lp.I,      lp.k1,     lp.k2,     lp.k3,     lp.k4};
  });
}

limitlab_status limitlab_certificates(const char* config_json, char** out_json) {
  return guarded([&] {
    require(out_json, "out_json is null");
    const limitlab::LabConfig cfg = config_from(config_json);
    const limitlab::LeslieParams lp =
        limitlab::map_leslie(cfg.material.viscosity, cfg.material.bulk, cfg.material.elastic);
    emit(out_json, {{"preset", cfg.preset},
                    {"material", limitlab::to_json(cfg.material)},
                    {"leslie", limitlab::to_json(lp)},
                    {"qs", limitlab::to_json(limitlab::check_qs_dissipative(cfg.material.viscosity))},
                    {"el", limitlab::to_json(limitlab::check_el_dissipative(lp))}});
  });
}

limitlab_status limitlab_qs_create(const char* config_json, limitlab_qs** out) {
  return guarded([&] {
    require(out, "out is null");
    *out = nullptr;
    *out = new limitlab_qs(config_from(config_json));
  });
}

limitlab_status limitlab_qs_step(limitlab_qs* h, int steps) {
  return guarded([&] {
    require(h, "null handle");
    require(steps >= 0, "steps must be non-negative");
    for (int i = 0; i < steps; ++i) h->state = limitlab::qs_step(h->state, h->qc, h->ctx);
  });
}

limitlab_status limitlab_qs_energy(limitlab_qs* h, limitlab_energy* out) {
  return guarded([&] {
    require(h && out, "null argument");
    const limitlab::QsEnergy e = limitlab::qs_energy(h->state, h->cfg.material, h->ctx);
    *out = {e.kinetic, e.inertial, e.free_energy, e.total};
  });
}

limitlab_status limitlab_qs_time(const limitlab_qs* h, double* out) {
  return guarded([&] {
    require(h && out, "null argument");
    *out = h->state.t;
  });
}

limitlab_status limitlab_qs_save_snapshot(const limitlab_qs* h, const char* path) {
  return guarded([&] {
    require(h && path, "null argument");
    limitlab::write_snapshot(path, limitlab::to_snapshot(h->state));
  });
}

void limitlab_qs_destroy(limitlab_qs* h) { delete h; }

limitlab_status limitlab_el_create(const char* config_json, limitlab_el** out) {
  return guarded([&] {
    require(out, "out is null");
    *out = nullptr;
    *out = new limitlab_el(config_from(config_json));
  });
}

limitlab_status limitlab_el_step(limitlab_el* h, int steps) {
  return guarded([&] {
    require(h, "null handle");
    require(steps >= 0, "steps must be non-negative");
    for (int i = 0; i < steps; ++i) h->state = limitlab::el_step(h->state, h->ec, h->ctx);
  });
}

limitlab_status limitlab_el_energy(limitlab_el* h, limitlab_energy* out) {
  return guarded([&] {
    require(h && out, "null argument");
    const limitlab::ElEnergy e = limitlab::el_energy(h->state, h->ec.leslie, h->ctx);
    *out = {e.kinetic, e.inertial, e.frank, e.total};
  });
}

limitlab_status limitlab_el_time(const limitlab_el* h, double* out) {
  return guarded([&] {
    require(h && out, "null argument");
    *out = h->state.t;
  });
}

limitlab_status limitlab_el_save_snapshot(const limitlab_el* h, const char* path) {
  return guarded([&] {
    require(h && path, "null argument");
    limitlab::write_snapshot(path, limitlab::to_snapshot(h->state));
  });
}

void limitlab_el_destroy(limitlab_el* h) { delete h; }

limitlab_status limitlab_simulate_qs(const char* config_json, const char* out_dir, int force, char** out_json) {
  return guarded([&] {
    require(out_dir, "out_dir is null");
    emit(out_json, limitlab::simulate_qs(config_from(config_json), out_dir, force != 0));
  });
}

limitlab_status limitlab_simulate_el(const char* config_json, const char* out_dir, int force, char** out_json) {
  return guarded([&] {
    require(out_dir, "out_dir is null");
    emit(out_json, limitlab::simulate_el(config_from(config_json), out_dir, force != 0));
  });
}

limitlab_status limitlab_sweep(const char* config_json, const char* out_dir, int threads, int force,
                               char** out_json) {
  return guarded([&] {
    require(out_dir, "out_dir is null");
    emit(out_json, limitlab::run_sweep(config_from(config_json), out_dir, threads, force != 0));
  });
}

limitlab_status limitlab_validate_energy(const char* config_json, const char* snapshot_dir, int* passed,
                                         char** out_json) {
  return guarded([&] {
    require(snapshot_dir, "snapshot_dir is null");
    bool ok = false;
    const json j = limitlab::validate_energy(config_from(config_json), snapshot_dir, &ok);
    if (passed) *passed = ok ? 1 : 0;
    emit(out_json, j);
  });
}

limitlab_status limitlab_identity_suite(unsigned long long seed, int* passed, char** out_json) {
  return guarded([&] {
    const limitlab::IdentityReport r = limitlab::run_identity_suite(seed);
    if (passed) *passed = r.passed ? 1 : 0;
    emit(out_json, limitlab::to_json(r));
  });
}

}  // extern "C"
