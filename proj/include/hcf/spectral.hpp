#pragma once

// Trigonometric interpolation of periodic samples on C^n/(Z + iZ)^n.
//
// The lattice has N points per real coordinate. Real coordinates are ordered
// (x_1, y_1, x_2, y_2, ...) with z_k = x_k + i y_k, and flat indices are
// row-major with x_1 slowest. Modes at the Nyquist frequency are dropped from
// derivatives and from off-lattice evaluation.

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "hcf/metrics.hpp"

namespace hcf {

class PeriodicGrid {
 public:
  PeriodicGrid(int n, int N);

  int n() const { return n_; }
  int N() const { return N_; }
  std::size_t size() const { return size_; }
  Point point(std::size_t idx) const;
  std::vector<int> cell(std::size_t idx) const;
  std::size_t flat(const std::vector<int>& cell) const;
  // Flat index of x if it is a lattice point (mod the periods), else -1.
  long index_of(const Point& x, double tol = 1e-9) const;
  // Index of the point shifted by `shift` cells along real coordinate `axis`.
  std::size_t shifted(std::size_t idx, int axis, int shift) const;

 private:
  int n_, N_;
  std::size_t size_;
};

// One periodic complex function, stored by its discrete Fourier coefficients.
class SpectralFunction {
 public:
  SpectralFunction(const PeriodicGrid& grid, const std::vector<cplx>& samples);

  // Taylor coefficients at every lattice point, table[monomial][point], with
  // monomials in the order of JetLayout::get(2n, order). Row 0 is the samples.
  std::vector<std::vector<cplx>> jet_table(int order) const;
  // Jet of the interpolant at an arbitrary point.
  ComplexJet jet(const Point& x, int order) const;

 private:
  PeriodicGrid grid_;
  std::vector<cplx> samples_;
  std::vector<cplx> coeffs_;  // normalized: f = sum coeffs_k e^{2 pi i k.r}
};

// Metric field from Hermitian samples on the lattice. Jets at lattice points up
// to `table_order` come from precomputed tables; anything else is summed directly.
MetricField spectral_metric(const PeriodicGrid& grid, const std::vector<CMat>& samples, int table_order,
                            const std::string& name = "grid");

}  // namespace hcf
