#pragma once

// Truncated Taylor jets in the 2n Wirtinger variables z_1..z_n, zbar_1..zbar_n.
// Variable k < n is z_k, variable n + k is zbar_k.

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace hcf {

using cplx = std::complex<double>;

inline constexpr int kMaxDim = 4;
inline constexpr int kMaxOrder = 4;

// Monomial bookkeeping for a fixed (number of variables, order) pair.
// Monomials are sorted by total degree, so truncation to a lower order is a prefix.
class JetLayout {
 public:
  struct Product {
    std::uint32_t a, b, out;
  };

  static std::shared_ptr<const JetLayout> get(int nvars, int order);

  int nvars() const { return nvars_; }
  int order() const { return order_; }
  std::size_t size() const { return degree_.size(); }
  int degree(std::size_t i) const { return degree_[i]; }
  const std::uint8_t* exponents(std::size_t i) const { return &exps_[i * nvars_]; }
  // Index of a monomial, or -1 if its degree exceeds the order.
  int index_of(const std::uint8_t* exps) const;
  // Number of monomials with degree <= d.
  std::size_t prefix(int d) const { return prefix_[d]; }
  const std::vector<Product>& products() const { return products_; }

  JetLayout(int nvars, int order);

 private:
  int nvars_;
  int order_;
  std::vector<std::uint8_t> exps_;
  std::vector<std::uint8_t> degree_;
  std::vector<std::size_t> prefix_;
  std::vector<std::int32_t> lookup_;  // dense table over (order+1)^nvars exponent boxes
  std::vector<Product> products_;
};

using Point = std::vector<cplx>;

class ComplexJet {
 public:
  ComplexJet() = default;
  // Zero jet.
  ComplexJet(const Point& center, int order);

  static ComplexJet constant(const Point& center, int order, cplx value);
  // Jet of z_k (conj = false) or zbar_k (conj = true).
  static ComplexJet variable(const Point& center, int order, int k, bool conj);

  int dim() const { return n_; }
  int order() const { return order_; }
  Point center() const { return Point(center_.begin(), center_.begin() + n_); }
  const JetLayout& layout() const { return *layout_; }
  std::size_t size() const { return c_.size(); }
  cplx& operator[](std::size_t i) { return c_[i]; }
  cplx operator[](std::size_t i) const { return c_[i]; }
  const std::vector<cplx>& coeffs() const { return c_; }
  cplx value() const { return c_[0]; }

  // Coefficient of (z - z0)^alpha (zbar - zbar0)^beta.
  cplx coeff(std::span<const int> alpha, std::span<const int> beta) const;
  // d^alpha dbar^beta f(center) = alpha! beta! c_{alpha beta}.
  cplx extract(std::span<const int> alpha, std::span<const int> beta) const;

  // Partial derivative in variable v (0..2n-1); order drops by one.
  ComplexJet derivative(int v) const;
  // d/dz_k and d/dzbar_k.
  ComplexJet dz(int k) const { return derivative(k); }
  ComplexJet dzbar(int k) const { return derivative(n_ + k); }
  ComplexJet truncated(int order) const;
  // Jet of the conjugate function conj(f).
  ComplexJet conjugate() const;
  // Max |c_{ab} - conj(c_{ba})|.
  double reality_defect() const;

  ComplexJet& operator+=(const ComplexJet& o);
  ComplexJet& operator-=(const ComplexJet& o);
  ComplexJet& operator*=(const ComplexJet& o);
  ComplexJet& operator*=(cplx s);
  ComplexJet& operator+=(cplx s) {
    c_[0] += s;
    return *this;
  }

  // Accumulate a * b into this jet (truncated). All three must be compatible.
  void add_product(const ComplexJet& a, const ComplexJet& b, cplx scale = 1.0);

  bool compatible(const ComplexJet& o) const;

 private:
  void require_compatible(const ComplexJet& o) const;

  int n_ = 0;
  int order_ = 0;
  std::array<cplx, kMaxDim> center_{};
  std::shared_ptr<const JetLayout> layout_;
  std::vector<cplx> c_;
};

ComplexJet operator+(ComplexJet a, const ComplexJet& b);
ComplexJet operator-(ComplexJet a, const ComplexJet& b);
ComplexJet operator*(const ComplexJet& a, const ComplexJet& b);
ComplexJet operator*(ComplexJet a, cplx s);
ComplexJet operator*(cplx s, ComplexJet a);
ComplexJet operator-(ComplexJet a);

// Singularity threshold on |c00| for jet_invert.
inline constexpr double kJetInvertTol = 1e-300;

ComplexJet invert(const ComplexJet& a, double tol = kJetInvertTol);
ComplexJet operator/(const ComplexJet& a, const ComplexJet& b);

// f(a) where derivs[k] = f^(k)(a.value()) for k = 0..order.
ComplexJet compose(const ComplexJet& a, std::span<const cplx> derivs);
ComplexJet exp(const ComplexJet& a);
ComplexJet sin(const ComplexJet& a);
ComplexJet cos(const ComplexJet& a);
ComplexJet log(const ComplexJet& a);
// Principal branch; real exponents only.
ComplexJet pow(const ComplexJet& a, double p);

}  // namespace hcf
