#include "hcf/spectral.hpp"

#include <cmath>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "hcf/errors.hpp"

namespace hcf {

namespace {

constexpr double kPi = std::numbers::pi;

std::mutex& planner_mutex() {
  static std::mutex mu;
  return mu;
}

// In-place multi-dimensional DFT of length N^(2n).
void dft(std::vector<cplx>& data, int rank, int N, int sign) {
  std::vector<int> dims(rank, N);
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft(rank, dims.data(), p, p, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(plan);
}

int wavenumber(int k, int N) { return k < N / 2 ? k : k - N; }

// Per-mode factors: alpha_j (d/dz_j) and beta_j (d/dzbar_j) multipliers.
struct Mode {
  bool nyquist = false;
  std::vector<cplx> alpha, beta;
  std::vector<int> kx, ky;
};

Mode mode_of(const PeriodicGrid& grid, std::size_t idx) {
  const int n = grid.n(), N = grid.N();
  std::vector<int> c = grid.cell(idx);
  Mode m;
  for (int j = 0; j < n; ++j) {
    if (c[2 * j] == N / 2 || c[2 * j + 1] == N / 2) m.nyquist = true;
    const int kx = wavenumber(c[2 * j], N), ky = wavenumber(c[2 * j + 1], N);
    m.kx.push_back(kx);
    m.ky.push_back(ky);
    m.alpha.push_back(kPi * cplx(ky, kx));
    m.beta.push_back(kPi * cplx(-ky, kx));
  }
  return m;
}

double factorial(int k) {
  double f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// prod_j alpha_j^{a_j} beta_j^{b_j} / (a_j! b_j!)
cplx multiplier(const Mode& m, const std::uint8_t* e, int n) {
  cplx r = 1.0;
  for (int j = 0; j < n; ++j) {
    const int a = e[j], b = e[n + j];
    if (a) r *= std::pow(m.alpha[j], a) / factorial(a);
    if (b) r *= std::pow(m.beta[j], b) / factorial(b);
  }
  return r;
}

}  // namespace

PeriodicGrid::PeriodicGrid(int n, int N) : n_(n), N_(N) {
  if (n < 1 || n > 2) throw ConfigError("grid backend supports n = 1 or 2");
  if (N < 4 || (N & (N - 1)) != 0) throw ConfigError("grid size must be a power of two >= 4");
  size_ = 1;
  for (int k = 0; k < 2 * n; ++k) size_ *= static_cast<std::size_t>(N);
}

std::vector<int> PeriodicGrid::cell(std::size_t idx) const {
  std::vector<int> c(2 * n_);
  for (int k = 2 * n_ - 1; k >= 0; --k) {
    c[k] = static_cast<int>(idx % N_);
    idx /= N_;
  }
  return c;
}

std::size_t PeriodicGrid::flat(const std::vector<int>& c) const {
  std::size_t idx = 0;
  for (int k = 0; k < 2 * n_; ++k) idx = idx * N_ + static_cast<std::size_t>(((c[k] % N_) + N_) % N_);
  return idx;
}

Point PeriodicGrid::point(std::size_t idx) const {
  std::vector<int> c = cell(idx);
  Point x(n_);
  for (int j = 0; j < n_; ++j) x[j] = cplx(c[2 * j], c[2 * j + 1]) / static_cast<double>(N_);
  return x;
}

long PeriodicGrid::index_of(const Point& x, double tol) const {
  if (static_cast<int>(x.size()) != n_) return -1;
  std::vector<int> c(2 * n_);
  for (int j = 0; j < n_; ++j) {
    const double u[2] = {x[j].real() * N_, x[j].imag() * N_};
    for (int r = 0; r < 2; ++r) {
      const double k = std::round(u[r]);
      if (std::abs(u[r] - k) > tol) return -1;
      c[2 * j + r] = static_cast<int>(std::fmod(k, N_));
    }
  }
  return static_cast<long>(flat(c));
}

std::size_t PeriodicGrid::shifted(std::size_t idx, int axis, int shift) const {
  std::vector<int> c = cell(idx);
  c[axis] += shift;
  return flat(c);
}

SpectralFunction::SpectralFunction(const PeriodicGrid& grid, const std::vector<cplx>& samples)
    : grid_(grid), samples_(samples), coeffs_(samples) {
  if (samples.size() != grid.size()) throw StructuralError("sample count does not match the grid");
  dft(coeffs_, 2 * grid.n(), grid.N(), FFTW_FORWARD);
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (auto& c : coeffs_) c *= scale;
}

std::vector<std::vector<cplx>> SpectralFunction::jet_table(int order) const {
  const int n = grid_.n();
  auto layout = JetLayout::get(2 * n, order);
  std::vector<Mode> modes;
  modes.reserve(grid_.size());
  for (std::size_t k = 0; k < grid_.size(); ++k) modes.push_back(mode_of(grid_, k));

  std::vector<std::vector<cplx>> table(layout->size());
  table[0] = samples_;
  for (std::size_t mono = 1; mono < layout->size(); ++mono) {
    std::vector<cplx> buf(grid_.size());
    for (std::size_t k = 0; k < grid_.size(); ++k)
      buf[k] = modes[k].nyquist ? cplx(0.0) : coeffs_[k] * multiplier(modes[k], layout->exponents(mono), n);
    dft(buf, 2 * n, grid_.N(), FFTW_BACKWARD);
    table[mono] = std::move(buf);
  }
  return table;
}

ComplexJet SpectralFunction::jet(const Point& x, int order) const {
  const int n = grid_.n();
  ComplexJet out(x, order);
  const auto& layout = out.layout();
  for (std::size_t k = 0; k < grid_.size(); ++k) {
    if (coeffs_[k] == cplx(0.0)) continue;
    Mode m = mode_of(grid_, k);
    if (m.nyquist) continue;
    double theta = 0;
    for (int j = 0; j < n; ++j) theta += m.kx[j] * x[j].real() + m.ky[j] * x[j].imag();
    const cplx c = coeffs_[k] * std::polar(1.0, 2 * kPi * theta);
    for (std::size_t mono = 0; mono < layout.size(); ++mono) out[mono] += c * multiplier(m, layout.exponents(mono), n);
  }
  return out;
}

MetricField spectral_metric(const PeriodicGrid& grid, const std::vector<CMat>& samples, int table_order,
                            const std::string& name) {
  if (samples.size() != grid.size()) throw StructuralError("sample count does not match the grid");
  const int n = grid.n();
  struct Data {
    PeriodicGrid grid;
    int table_order;
    std::vector<SpectralFunction> fns;                    // upper triangle, row-major
    std::vector<std::vector<std::vector<cplx>>> tables;  // per function
  };
  auto d = std::make_shared<Data>(Data{grid, table_order, {}, {}});
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      std::vector<cplx> f(grid.size());
      for (std::size_t p = 0; p < grid.size(); ++p) f[p] = samples[p](i, j);
      d->fns.emplace_back(grid, f);
      d->tables.push_back(d->fns.back().jet_table(table_order));
    }

  MetricField::Evaluator ev = [d, n](const Point& x, int order) {
    JetMatrix g(n, ComplexJet());
    const long idx = order <= d->table_order ? d->grid.index_of(x) : -1;
    int f = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j, ++f) {
        ComplexJet c;
        if (idx >= 0) {
          c = ComplexJet(x, order);
          for (std::size_t mono = 0; mono < c.size(); ++mono) c[mono] = d->tables[f][mono][idx];
        } else {
          c = d->fns[f].jet(x, order);
        }
        if (i == j) c = (c + c.conjugate()) * cplx(0.5);
        g(i, j) = c;
        if (i != j) g(j, i) = c.conjugate();
      }
    return g;
  };
  MetricField m(name, Chart::torus(n), MetricFlags{}, ev);
  return m;
}

}  // namespace hcf
