#include "limitlab/spectral_fields.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <mutex>

namespace limitlab {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

PeriodicGrid::PeriodicGrid(int nx_, int ny_, double lx_, double ly_) : nx(nx_), ny(ny_), lx(lx_), ly(ly_) {
  if (nx < 8 || ny < 8 || nx % 2 != 0 || ny % 2 != 0)
    throw Error(ErrorCode::InvalidArgument, "grid sizes must be even and >= 8");
  if (!(lx > 0.0) || !(ly > 0.0)) throw Error(ErrorCode::InvalidArgument, "cell lengths must be positive");
}

void require_same_grid(const PeriodicGrid& a, const PeriodicGrid& b) {
  if (!(a == b)) throw Error(ErrorCode::GridMismatch, "fields live on different grids");
}

Vec3 vec_at(const VectorField& f, int p) { return {{f(0, p), f(1, p), f(2, p)}}; }

void set_vec(VectorField& f, int p, const Vec3& v) {
  for (int i = 0; i < 3; ++i) f(i, p) = v[i];
}

QTensor tensor_at(const TensorField& f, int p) {
  return QTensor::from_packed({f(0, p), f(1, p), f(2, p), f(3, p), f(4, p)});
}

void set_tensor(TensorField& f, int p, const QTensor& q) {
  const auto k = q.packed();
  for (int i = 0; i < 5; ++i) f(i, p) = k[i];
}

Mat3 mat_at(const Mat3Field& f, int p) {
  Mat3 m;
  for (int i = 0; i < 9; ++i) m.a[i] = f(i, p);
  return m;
}

void set_mat(Mat3Field& f, int p, const Mat3& m) {
  for (int i = 0; i < 9; ++i) f(i, p) = m.a[i];
}

TensorField sym_traceless(const Mat3Field& m) {
  TensorField q(m.grid());
  for (int p = 0; p < m.points(); ++p) set_tensor(q, p, sym_traceless(mat_at(m, p)));
  return q;
}

Mat3Field to_mat3(const TensorField& q) {
  Mat3Field m(q.grid());
  for (int p = 0; p < q.points(); ++p) set_mat(m, p, tensor_at(q, p).matrix());
  return m;
}

struct DiffContext::Impl {
  PeriodicGrid grid;
  int nxh = 0;
  int nspec = 0;
  double* real_buf = nullptr;
  fftw_complex* spec_buf = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  std::vector<double> kx, ky;
  std::vector<unsigned char> keep;
  std::vector<std::complex<double>> work;

  explicit Impl(const PeriodicGrid& g) : grid(g) {
    nxh = g.nx / 2 + 1;
    nspec = g.ny * nxh;
    std::lock_guard<std::mutex> lock(planner_mutex());
    real_buf = fftw_alloc_real(static_cast<size_t>(g.size()));
    spec_buf = fftw_alloc_complex(static_cast<size_t>(nspec));
    fwd = fftw_plan_dft_r2c_2d(g.ny, g.nx, real_buf, spec_buf, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_2d(g.ny, g.nx, spec_buf, real_buf, FFTW_ESTIMATE);
  }

  ~Impl() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    fftw_free(real_buf);
    fftw_free(spec_buf);
  }
};

DiffContext::DiffContext(const PeriodicGrid& g) : impl_(std::make_unique<Impl>(g)) {
  auto& d = *impl_;
  d.kx.resize(d.nspec);
  d.ky.resize(d.nspec);
  d.keep.resize(d.nspec);
  d.work.resize(d.nspec);
  const int kmax_x = (g.nx - 1) / 3;
  const int kmax_y = (g.ny - 1) / 3;
  for (int iy = 0; iy < g.ny; ++iy) {
    const int jy = iy <= g.ny / 2 ? iy : iy - g.ny;
    for (int ix = 0; ix < d.nxh; ++ix) {
      const int m = iy * d.nxh + ix;
      const bool nyq_x = (ix == g.nx / 2);
      const bool nyq_y = (iy == g.ny / 2);
      d.kx[m] = nyq_x ? 0.0 : kTwoPi * ix / g.lx;
      d.ky[m] = nyq_y ? 0.0 : kTwoPi * jy / g.ly;
      d.keep[m] = (ix <= kmax_x && std::abs(jy) <= kmax_y) ? 1 : 0;
    }
  }
}

DiffContext::~DiffContext() = default;
DiffContext::DiffContext(DiffContext&&) noexcept = default;
DiffContext& DiffContext::operator=(DiffContext&&) noexcept = default;

const PeriodicGrid& DiffContext::grid() const { return impl_->grid; }
int DiffContext::spectral_size() const { return impl_->nspec; }
double DiffContext::kx(int m) const { return impl_->kx[m]; }
double DiffContext::ky(int m) const { return impl_->ky[m]; }
double DiffContext::k2(int m) const { return impl_->kx[m] * impl_->kx[m] + impl_->ky[m] * impl_->ky[m]; }
bool DiffContext::retained(int m) const { return impl_->keep[m] != 0; }

void DiffContext::forward(std::span<const double> in, std::span<std::complex<double>> out) {
  auto& d = *impl_;
  std::memcpy(d.real_buf, in.data(), sizeof(double) * d.grid.size());
  fftw_execute(d.fwd);
  std::memcpy(static_cast<void*>(out.data()), d.spec_buf, sizeof(fftw_complex) * d.nspec);
}

void DiffContext::inverse(std::span<const std::complex<double>> in, std::span<double> out) {
  auto& d = *impl_;
  std::memcpy(d.spec_buf, in.data(), sizeof(fftw_complex) * d.nspec);
  fftw_execute(d.bwd);
  const double scale = 1.0 / d.grid.size();
  for (int p = 0; p < d.grid.size(); ++p) out[p] = d.real_buf[p] * scale;
}

void DiffContext::apply_derivative(std::span<const double> in, std::span<double> out, Axis axis) {
  if (axis == Axis::Z) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  auto& w = impl_->work;
  forward(in, w);
  const auto& k = axis == Axis::X ? impl_->kx : impl_->ky;
  for (int m = 0; m < impl_->nspec; ++m) w[m] *= std::complex<double>(0.0, k[m]);
  inverse(w, out);
}

void DiffContext::apply_laplacian(std::span<const double> in, std::span<double> out) {
  auto& w = impl_->work;
  forward(in, w);
  for (int m = 0; m < impl_->nspec; ++m) w[m] *= -k2(m);
  inverse(w, out);
}

void DiffContext::apply_mask(std::span<const double> in, std::span<double> out) {
  auto& w = impl_->work;
  forward(in, w);
  for (int m = 0; m < impl_->nspec; ++m)
    if (!impl_->keep[m]) w[m] = 0.0;
  inverse(w, out);
}

template <int C>
Field<C> DiffContext::partial(const Field<C>& f, Axis axis) {
  require_same_grid(grid(), f.grid());
  Field<C> r(f.grid());
  for (int c = 0; c < C; ++c) apply_derivative(f.component(c), r.component(c), axis);
  return r;
}

template <int C>
Field<C> DiffContext::laplacian(const Field<C>& f) {
  require_same_grid(grid(), f.grid());
  Field<C> r(f.grid());
  for (int c = 0; c < C; ++c) apply_laplacian(f.component(c), r.component(c));
  return r;
}

template <int C>
Field<C> DiffContext::dealias(const Field<C>& f) {
  require_same_grid(grid(), f.grid());
  Field<C> r(f.grid());
  for (int c = 0; c < C; ++c) apply_mask(f.component(c), r.component(c));
  return r;
}

template <int C>
Field<C> DiffContext::dealiased_product(const ScalarField& a, const Field<C>& f) {
  require_same_grid(grid(), a.grid());
  require_same_grid(grid(), f.grid());
  const ScalarField at = dealias(a);
  Field<C> ft = dealias(f);
  for (int c = 0; c < C; ++c)
    for (int p = 0; p < f.points(); ++p) ft(c, p) *= at(0, p);
  return dealias(ft);
}

template <int C>
Field<C> DiffContext::advect(const VectorField& v, const Field<C>& f) {
  require_same_grid(grid(), v.grid());
  require_same_grid(grid(), f.grid());
  const VectorField vt = dealias(v);
  const Field<C> ft = dealias(f);
  const Field<C> fx = partial(ft, Axis::X);
  const Field<C> fy = partial(ft, Axis::Y);
  Field<C> r(f.grid());
  for (int c = 0; c < C; ++c)
    for (int p = 0; p < f.points(); ++p) r(c, p) = vt(0, p) * fx(c, p) + vt(1, p) * fy(c, p);
  return dealias(r);
}

VectorField DiffContext::leray_project(const VectorField& v) {
  require_same_grid(grid(), v.grid());
  const int n = impl_->nspec;
  std::vector<std::complex<double>> vx(n), vy(n);
  forward(v.component(0), vx);
  forward(v.component(1), vy);
  for (int m = 0; m < n; ++m) {
    const double kk = k2(m);
    if (kk == 0.0) continue;
    const std::complex<double> kv = impl_->kx[m] * vx[m] + impl_->ky[m] * vy[m];
    vx[m] -= impl_->kx[m] * kv / kk;
    vy[m] -= impl_->ky[m] * kv / kk;
  }
  VectorField r(v.grid());
  inverse(vx, r.component(0));
  inverse(vy, r.component(1));
  std::copy(v.component(2).begin(), v.component(2).end(), r.component(2).begin());
  return r;
}

Mat3Field DiffContext::velocity_gradient(const VectorField& v) {
  const VectorField vx = partial(v, Axis::X);
  const VectorField vy = partial(v, Axis::Y);
  Mat3Field g(v.grid());
  for (int p = 0; p < v.points(); ++p)
    for (int j = 0; j < 3; ++j) {
      g(0 * 3 + j, p) = vx(j, p);
      g(1 * 3 + j, p) = vy(j, p);
    }
  return g;
}

void DiffContext::strain_and_vorticity(const VectorField& v, Mat3Field& d, Mat3Field& omega) {
  const Mat3Field g = velocity_gradient(v);
  d = Mat3Field(v.grid());
  omega = Mat3Field(v.grid());
  for (int p = 0; p < v.points(); ++p) {
    const Mat3 m = mat_at(g, p);
    set_mat(d, p, sym(m));
    set_mat(omega, p, antisym(m));
  }
}

ScalarField DiffContext::divergence(const VectorField& v) {
  const VectorField vx = partial(v, Axis::X);
  const VectorField vy = partial(v, Axis::Y);
  ScalarField r(v.grid());
  for (int p = 0; p < v.points(); ++p) r(0, p) = vx(0, p) + vy(1, p);
  return r;
}

VectorField DiffContext::divergence(const Mat3Field& sigma) {
  const Mat3Field sx = partial(sigma, Axis::X);
  const Mat3Field sy = partial(sigma, Axis::Y);
  VectorField r(sigma.grid());
  for (int p = 0; p < sigma.points(); ++p)
    for (int i = 0; i < 3; ++i) r(i, p) = sx(0 * 3 + i, p) + sy(1 * 3 + i, p);
  return r;
}

template <int C>
double inner(const Field<C>& f, const Field<C>& g) {
  require_same_grid(f.grid(), g.grid());
  const int n = f.points();
  double s = 0.0;
  if constexpr (C == 5) {
    for (int p = 0; p < n; ++p) {
      const double xx = f(0, p), xy = f(1, p), xz = f(2, p), yy = f(3, p), yz = f(4, p);
      const double gxx = g(0, p), gxy = g(1, p), gxz = g(2, p), gyy = g(3, p), gyz = g(4, p);
      s += xx * gxx + yy * gyy + (xx + yy) * (gxx + gyy) + 2.0 * (xy * gxy + xz * gxz + yz * gyz);
    }
  } else {
    for (int c = 0; c < C; ++c)
      for (int p = 0; p < n; ++p) s += f(c, p) * g(c, p);
  }
  return s * f.grid().cell_area();
}

template <int C>
double h1_norm(const Field<C>& f, DiffContext& ctx) {
  const Field<C> fx = ctx.partial(f, Axis::X);
  const Field<C> fy = ctx.partial(f, Axis::Y);
  return std::sqrt(inner(f, f) + inner(fx, fx) + inner(fy, fy));
}

template <int C>
double linf_norm(const Field<C>& f) {
  double m = 0.0;
  for (double x : f.data()) m = std::max(m, std::abs(x));
  return m;
}

template <int C>
double spectral_inner(const Field<C>& f, const Field<C>& g, DiffContext& ctx) {
  require_same_grid(f.grid(), g.grid());
  const PeriodicGrid& gr = f.grid();
  const int nxh = gr.nx / 2 + 1;
  const int n = ctx.spectral_size();
  std::vector<std::complex<double>> fh(n), gh(n);
  // weights for the packed tensor layout, written as a quadratic form over components
  auto pair_sum = [&](int a, int b, double w) {
    ctx.forward(f.component(a), fh);
    ctx.forward(g.component(b), gh);
    double s = 0.0;
    for (int iy = 0; iy < gr.ny; ++iy)
      for (int ix = 0; ix < nxh; ++ix) {
        const int m = iy * nxh + ix;
        const double mult = (ix == 0 || ix == gr.nx / 2) ? 1.0 : 2.0;
        s += mult * std::real(fh[m] * std::conj(gh[m]));
      }
    return w * s;
  };
  double s = 0.0;
  if constexpr (C == 5) {
    s += pair_sum(0, 0, 2.0) + pair_sum(3, 3, 2.0) + pair_sum(0, 3, 1.0) + pair_sum(3, 0, 1.0);
    s += pair_sum(1, 1, 2.0) + pair_sum(2, 2, 2.0) + pair_sum(4, 4, 2.0);
  } else {
    for (int c = 0; c < C; ++c) s += pair_sum(c, c, 1.0);
  }
  return s * gr.lx * gr.ly / (static_cast<double>(gr.size()) * gr.size());
}

double max_pointwise_norm(const TensorField& q) {
  double m = 0.0;
  for (int p = 0; p < q.points(); ++p) m = std::max(m, norm(tensor_at(q, p)));
  return m;
}

#define LIMITLAB_INSTANTIATE(C)                                                       \
  template Field<C> DiffContext::partial<C>(const Field<C>&, Axis);                   \
  template Field<C> DiffContext::laplacian<C>(const Field<C>&);                       \
  template Field<C> DiffContext::dealias<C>(const Field<C>&);                         \
  template Field<C> DiffContext::advect<C>(const VectorField&, const Field<C>&);      \
  template Field<C> DiffContext::dealiased_product<C>(const ScalarField&, const Field<C>&); \
  template double inner<C>(const Field<C>&, const Field<C>&);                         \
  template double h1_norm<C>(const Field<C>&, DiffContext&);                          \
  template double linf_norm<C>(const Field<C>&);                                      \
  template double spectral_inner<C>(const Field<C>&, const Field<C>&, DiffContext&);

LIMITLAB_INSTANTIATE(1)
LIMITLAB_INSTANTIATE(3)
LIMITLAB_INSTANTIATE(5)
LIMITLAB_INSTANTIATE(9)
#undef LIMITLAB_INSTANTIATE

namespace {

template <class T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

}  // namespace

void write_snapshot(const std::string& path, const Snapshot& s) {
  const size_t expected = static_cast<size_t>(s.components) * s.grid.size();
  if (s.data.size() != expected) throw Error(ErrorCode::InvalidArgument, "snapshot data size mismatch");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path);
  out.write("QSF1", 4);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.grid.nx));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.grid.ny));
  put<double>(out, s.grid.lx);
  put<double>(out, s.grid.ly);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.components));
  put<double>(out, s.time);
  out.write(reinterpret_cast<const char*>(s.data.data()), static_cast<std::streamsize>(sizeof(double) * s.data.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);

  std::ofstream meta(path + ".meta.txt", std::ios::trunc);
  if (!meta) throw Error(ErrorCode::Io, "cannot open metadata for " + path);
  meta.precision(17);
  meta << "format=QSF1\nnx=" << s.grid.nx << "\nny=" << s.grid.ny << "\nlx=" << s.grid.lx << "\nly=" << s.grid.ly
       << "\ncomponents=" << s.components << "\ntime=" << s.time << "\n";
  for (const auto& [k, v] : s.metadata) meta << k << "=" << v << "\n";
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "QSF1", 4) != 0) throw Error(ErrorCode::Io, path + " is not a QSF1 snapshot");
  Snapshot s;
  const auto nx = get<std::uint32_t>(in);
  const auto ny = get<std::uint32_t>(in);
  const double lx = get<double>(in);
  const double ly = get<double>(in);
  s.components = static_cast<int>(get<std::uint32_t>(in));
  s.time = get<double>(in);
  if (!in) throw Error(ErrorCode::Io, "truncated header in " + path);
  s.grid = PeriodicGrid(static_cast<int>(nx), static_cast<int>(ny), lx, ly);
  s.data.resize(static_cast<size_t>(s.components) * s.grid.size());
  in.read(reinterpret_cast<char*>(s.data.data()), static_cast<std::streamsize>(sizeof(double) * s.data.size()));
  if (!in) throw Error(ErrorCode::Io, "truncated data in " + path);

  std::ifstream meta(path + ".meta.txt");
  std::string line;
  while (meta && std::getline(meta, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq);
    if (key == "format" || key == "nx" || key == "ny" || key == "lx" || key == "ly" || key == "components" ||
        key == "time")
      continue;
    s.metadata.emplace_back(key, line.substr(eq + 1));
  }
  return s;
}

}  // namespace limitlab
