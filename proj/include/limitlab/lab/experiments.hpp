#pragma once

#include <string>

#include "json.hpp"
#include "limitlab/ericksen_leslie.hpp"
#include "limitlab/lab/config.hpp"
#include "limitlab/qian_sheng.hpp"

namespace limitlab {

// Single-model runs. Each writes series.csv, summary.json and (if snapshot_every > 0)
// QSF1 snapshots into out_dir and returns the summary. A failing dissipativity
// certificate refuses the run (CertificateRefused) unless force is set.
nlohmann::json simulate_qs(const LabConfig& cfg, const std::string& out_dir, bool force);
nlohmann::json simulate_el(const LabConfig& cfg, const std::string& out_dir, bool force);

// Re-steps every snapshot found in dir with dt and dt/2 and reports the energy-law
// residuals, the sign of the dissipation rate and the energy change.
nlohmann::json validate_energy(const LabConfig& cfg, const std::string& snapshot_dir, bool* passed);

// Snapshot packing: Q-tensor states use 13 components (q packed, qdot packed, v),
// director states 9 (n, ndot, v).
Snapshot to_snapshot(const QsState& s);
Snapshot to_snapshot(const ElState& s);
QsState qs_from_snapshot(const Snapshot& s);
ElState el_from_snapshot(const Snapshot& s);

// max over points of |div v| computed spectrally.
double max_divergence(const VectorField& v, DiffContext& ctx);
// max over points of the asymmetry and trace of Q.
double max_closure_error(const TensorField& q);
// max over points of ||n| - 1|.
double max_unit_error(const VectorField& n);

}  // namespace limitlab
