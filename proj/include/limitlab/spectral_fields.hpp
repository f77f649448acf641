#pragma once

#include <complex>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "limitlab/errors.hpp"
#include "limitlab/qtensor.hpp"

namespace limitlab {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Periodic cell [0,lx) x [0,ly); point index p = iy*nx + ix.
struct PeriodicGrid {
  int nx = 32;
  int ny = 32;
  double lx = kTwoPi;
  double ly = kTwoPi;

  PeriodicGrid() = default;
  PeriodicGrid(int nx, int ny, double lx = kTwoPi, double ly = kTwoPi);

  int size() const { return nx * ny; }
  double dx() const { return lx / nx; }
  double dy() const { return ly / ny; }
  double cell_area() const { return dx() * dy(); }
  double x(int ix) const { return ix * dx(); }
  double y(int iy) const { return iy * dy(); }

  bool operator==(const PeriodicGrid& o) const {
    return nx == o.nx && ny == o.ny && lx == o.lx && ly == o.ly;
  }
};

void require_same_grid(const PeriodicGrid& a, const PeriodicGrid& b);

// C real samples per point, stored component-major: data[c*size + p].
// Tensor fields use the packed S^3_0 layout (xx, xy, xz, yy, yz) so symmetry and
// tracelessness hold exactly; Mat3 fields store all 9 entries row-major.
template <int C>
class Field {
 public:
  static constexpr int kComponents = C;

  Field() = default;
  explicit Field(const PeriodicGrid& g) : grid_(g), data_(static_cast<size_t>(C) * g.size(), 0.0) {}

  const PeriodicGrid& grid() const { return grid_; }
  int points() const { return grid_.size(); }

  std::span<double> component(int c) { return {data_.data() + static_cast<size_t>(c) * points(), static_cast<size_t>(points())}; }
  std::span<const double> component(int c) const {
    return {data_.data() + static_cast<size_t>(c) * points(), static_cast<size_t>(points())};
  }
  double& operator()(int c, int p) { return data_[static_cast<size_t>(c) * points() + p]; }
  double operator()(int c, int p) const { return data_[static_cast<size_t>(c) * points() + p]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  Field& operator+=(const Field& o) {
    require_same_grid(grid_, o.grid_);
    for (size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Field& operator-=(const Field& o) {
    require_same_grid(grid_, o.grid_);
    for (size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Field& operator*=(double s) {
    for (auto& x : data_) x *= s;
    return *this;
  }
  // this += s * o
  Field& axpy(double s, const Field& o) {
    require_same_grid(grid_, o.grid_);
    for (size_t i = 0; i < data_.size(); ++i) data_[i] += s * o.data_[i];
    return *this;
  }

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(double s, Field a) { return a *= s; }

 private:
  PeriodicGrid grid_;
  std::vector<double> data_;
};

using ScalarField = Field<1>;
using VectorField = Field<3>;
using TensorField = Field<5>;
using Mat3Field = Field<9>;

Vec3 vec_at(const VectorField& f, int p);
void set_vec(VectorField& f, int p, const Vec3& v);
QTensor tensor_at(const TensorField& f, int p);
void set_tensor(TensorField& f, int p, const QTensor& q);
Mat3 mat_at(const Mat3Field& f, int p);
void set_mat(Mat3Field& f, int p, const Mat3& m);

// Projects every point of a Mat3 field onto S^3_0.
TensorField sym_traceless(const Mat3Field& m);
Mat3Field to_mat3(const TensorField& q);

enum class Axis { X, Y, Z };

// Spectral toolkit bound to one grid. Holds FFT plans and scratch buffers, so one
// context must not be used by two threads at the same time.
class DiffContext {
 public:
  explicit DiffContext(const PeriodicGrid& g);
  ~DiffContext();
  DiffContext(const DiffContext&) = delete;
  DiffContext& operator=(const DiffContext&) = delete;
  DiffContext(DiffContext&&) noexcept;
  DiffContext& operator=(DiffContext&&) noexcept;

  const PeriodicGrid& grid() const;

  // Half-complex layout: index m = iy*(nx/2+1) + ikx.
  int spectral_size() const;
  void forward(std::span<const double> in, std::span<std::complex<double>> out);
  void inverse(std::span<const std::complex<double>> in, std::span<double> out);  // normalized
  // Wavenumbers of mode m with the Nyquist entries set to zero (so that the
  // Laplacian symbol equals the square of the first-derivative symbols).
  double kx(int m) const;
  double ky(int m) const;
  double k2(int m) const;
  bool retained(int m) const;  // 2/3-rule mask

  template <int C>
  Field<C> partial(const Field<C>& f, Axis axis);
  template <int C>
  Field<C> laplacian(const Field<C>& f);
  template <int C>
  Field<C> dealias(const Field<C>& f);
  template <int C>
  Field<C> advect(const VectorField& v, const Field<C>& f);
  template <int C>
  Field<C> dealiased_product(const ScalarField& a, const Field<C>& f);

  VectorField leray_project(const VectorField& v);
  Mat3Field velocity_gradient(const VectorField& v);  // G_ij = d_i v_j
  void strain_and_vorticity(const VectorField& v, Mat3Field& d, Mat3Field& omega);
  ScalarField divergence(const VectorField& v);
  VectorField divergence(const Mat3Field& sigma);  // (div sigma)_i = d_j sigma_ji

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;

  void apply_derivative(std::span<const double> in, std::span<double> out, Axis axis);
  void apply_laplacian(std::span<const double> in, std::span<double> out);
  void apply_mask(std::span<const double> in, std::span<double> out);
};

// Quadrature over the cell (exact for band-limited products). The tensor inner
// product is the Frobenius product of the full matrices.
template <int C>
double inner(const Field<C>& f, const Field<C>& g);
template <int C>
double l2_norm(const Field<C>& f) {
  return std::sqrt(inner(f, f));
}
template <int C>
double h1_norm(const Field<C>& f, DiffContext& ctx);
template <int C>
double linf_norm(const Field<C>& f);
template <int C>
double spectral_inner(const Field<C>& f, const Field<C>& g, DiffContext& ctx);

// Pointwise Frobenius norm sup over the grid, for tensor fields.
double max_pointwise_norm(const TensorField& q);

// Binary snapshot: "QSF1" | u32 nx | u32 ny | f64 lx | f64 ly | u32 ncomp | f64 time | data,
// with data = ncomp blocks of ny*nx doubles (x fastest). A sidecar "<path>.meta.txt"
// carries human-readable key=value metadata.
struct Snapshot {
  PeriodicGrid grid;
  double time = 0.0;
  int components = 0;
  std::vector<double> data;
  std::vector<std::pair<std::string, std::string>> metadata;
};

void write_snapshot(const std::string& path, const Snapshot& s);
Snapshot read_snapshot(const std::string& path);

}  // namespace limitlab
