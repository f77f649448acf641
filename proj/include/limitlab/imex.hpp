#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "limitlab/spectral_fields.hpp"

namespace limitlab {

// Diagnostics filled by the solvers' step functions.
struct StepReport {
  double dt_bound = 0.0;          // largest dt admitted by the stiffness check
  double cfl = 0.0;               // max|v| dt / min(dx, dy)
  double renormalization = 0.0;   // max | |n| - 1 | removed after the step
  double tangent_correction = 0.0;  // max |n . ndot| removed after the step
};

// Predictor-corrector IMEX step for dX/dt = A X + E(X), A Fourier-diagonal.
//   (I - theta dt A) X*  = X + dt[(1-theta) A X + E(X)]
//   (I - theta dt A) X^1 = X + dt[(1-theta) A X + (E(X) + E(X*))/2]
// theta = 1/2 is second order, theta = 1 first order.
template <class State, class System>
State imex_step(const State& x, double dt, double theta, System& sys) {
  const State ax = sys.apply_linear(x);
  State ex = sys.rhs(x);
  ex.axpy(-1.0, ax);

  State base = x;
  base.axpy((1.0 - theta) * dt, ax);

  State r1 = base;
  r1.axpy(dt, ex);
  const State xs = sys.solve_linear(r1, theta * dt);

  State es = sys.rhs(xs);
  es.axpy(-1.0, sys.apply_linear(xs));

  State r2 = base;
  r2.axpy(0.5 * dt, ex);
  r2.axpy(0.5 * dt, es);
  return sys.solve_linear(r2, theta * dt);
}

// Per-mode 2x2 block for (u, w) with du = w, dw = -omega2 u - gamma w.
struct OscillatorBlock {
  double omega2 = 0.0;
  double gamma = 0.0;
};

// Applies or inverts the Fourier-diagonal operators used by both solvers:
// oscillator blocks on (u, w) pairs and a diffusion -nu |k|^2 on extra components.
class SpectralLinearOps {
 public:
  using BlockFn = std::function<OscillatorBlock(double k2)>;

  SpectralLinearOps(DiffContext& ctx, BlockFn block, double nu) : ctx_(ctx), block_(std::move(block)), nu_(nu) {}

  // u, w: matching components of the paired fields; out overwritten.
  void apply_pair(std::span<const double> u, std::span<const double> w, std::span<double> au, std::span<double> aw);
  void solve_pair(std::span<const double> ru, std::span<const double> rw, double tau, std::span<double> u,
                  std::span<double> w);
  void apply_diffusion(std::span<const double> f, std::span<double> out);
  void solve_diffusion(std::span<const double> r, double tau, std::span<double> out);

 private:
  DiffContext& ctx_;
  BlockFn block_;
  double nu_;
  std::vector<std::complex<double>> a_, b_;
  void ensure();
};

}  // namespace limitlab
