#include "limitlab/imex.hpp"

namespace limitlab {

void SpectralLinearOps::ensure() {
  const size_t n = static_cast<size_t>(ctx_.spectral_size());
  if (a_.size() != n) {
    a_.assign(n, {});
    b_.assign(n, {});
  }
}

void SpectralLinearOps::apply_pair(std::span<const double> u, std::span<const double> w, std::span<double> au,
                                   std::span<double> aw) {
  ensure();
  ctx_.forward(u, a_);
  ctx_.forward(w, b_);
  for (int m = 0; m < ctx_.spectral_size(); ++m) {
    const OscillatorBlock blk = block_(ctx_.k2(m));
    const std::complex<double> uh = a_[m], wh = b_[m];
    a_[m] = wh;
    b_[m] = -blk.omega2 * uh - blk.gamma * wh;
  }
  ctx_.inverse(a_, au);
  ctx_.inverse(b_, aw);
}

void SpectralLinearOps::solve_pair(std::span<const double> ru, std::span<const double> rw, double tau,
                                   std::span<double> u, std::span<double> w) {
  ensure();
  ctx_.forward(ru, a_);
  ctx_.forward(rw, b_);
  for (int m = 0; m < ctx_.spectral_size(); ++m) {
    const OscillatorBlock blk = block_(ctx_.k2(m));
    const double det = 1.0 + tau * blk.gamma + tau * tau * blk.omega2;
    const std::complex<double> wh = (b_[m] - tau * blk.omega2 * a_[m]) / det;
    a_[m] += tau * wh;
    b_[m] = wh;
  }
  ctx_.inverse(a_, u);
  ctx_.inverse(b_, w);
}

void SpectralLinearOps::apply_diffusion(std::span<const double> f, std::span<double> out) {
  ensure();
  ctx_.forward(f, a_);
  for (int m = 0; m < ctx_.spectral_size(); ++m) a_[m] *= -nu_ * ctx_.k2(m);
  ctx_.inverse(a_, out);
}

void SpectralLinearOps::solve_diffusion(std::span<const double> r, double tau, std::span<double> out) {
  ensure();
  ctx_.forward(r, a_);
  for (int m = 0; m < ctx_.spectral_size(); ++m) a_[m] /= 1.0 + tau * nu_ * ctx_.k2(m);
  ctx_.inverse(a_, out);
}

}  // namespace limitlab
