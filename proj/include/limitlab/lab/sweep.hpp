#pragma once

#include <string>

#include "json.hpp"
#include "limitlab/lab/config.hpp"

namespace limitlab {

// The uniaxial-limit experiment. The director model is integrated once with the mapped
// coefficients; every eps then gets well-prepared Q-tensor data and its own run, and the
// two trajectories are compared at shared output times. Writes <out>/report.json,
// <out>/el/series.csv and <out>/eps_<i>/series.csv. threads <= 1 runs serially.
nlohmann::json run_sweep(const LabConfig& cfg, const std::string& out_dir, int threads, bool force);

// Q-tensor step used for a given eps under the configured dt rule; it always divides
// the output interval exactly.
double sweep_dt(const LabConfig& cfg, double eps);

}  // namespace limitlab
