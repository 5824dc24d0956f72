#pragma once

// Dense rank-R arrays over n^R entries, row-major (last index fastest).

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace hcf {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

template <std::size_t R, class T = cplx>
class Tensor {
 public:
  static constexpr std::size_t rank = R;

  Tensor() = default;
  explicit Tensor(int n, const T& fill = T{}) : n_(n), data_(count(n), fill) {}

  int dim() const { return n_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  template <class... I>
  T& operator()(I... idx) {
    static_assert(sizeof...(I) == R);
    return data_[flat(idx...)];
  }
  template <class... I>
  const T& operator()(I... idx) const {
    static_assert(sizeof...(I) == R);
    return data_[flat(idx...)];
  }

  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }
  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  // Stride of slot s in the flat layout.
  std::size_t stride(std::size_t s) const {
    std::size_t st = 1;
    for (std::size_t k = s + 1; k < R; ++k) st *= n_;
    return st;
  }
  // Digit of slot s in flat index f.
  int digit(std::size_t f, std::size_t s) const { return static_cast<int>((f / stride(s)) % n_); }

  static std::size_t count(int n) {
    std::size_t c = 1;
    for (std::size_t k = 0; k < R; ++k) c *= static_cast<std::size_t>(n);
    return c;
  }

 private:
  template <class... I>
  std::size_t flat(I... idx) const {
    std::size_t f = 0;
    ((f = f * n_ + static_cast<std::size_t>(idx)), ...);
    return f;
  }

  int n_ = 0;
  std::vector<T> data_;
};

template <std::size_t R>
double max_abs(const Tensor<R>& t) {
  double m = 0;
  for (const auto& v : t.data()) m = std::max(m, std::abs(v));
  return m;
}

template <std::size_t R>
double max_abs_diff(const Tensor<R>& a, const Tensor<R>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

template <std::size_t R>
Tensor<R>& operator+=(Tensor<R>& a, const Tensor<R>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

template <std::size_t R>
Tensor<R>& operator-=(Tensor<R>& a, const Tensor<R>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

template <std::size_t R>
Tensor<R> operator+(Tensor<R> a, const Tensor<R>& b) { return a += b; }

template <std::size_t R>
Tensor<R> operator-(Tensor<R> a, const Tensor<R>& b) { return a -= b; }

template <std::size_t R>
Tensor<R> operator*(cplx s, Tensor<R> a) {
  for (auto& v : a.data()) v *= s;
  return a;
}

// A 4-tensor u_{i jbar k lbar}. Slot order is (i, jbar, k, lbar).
class CurvatureTensor : public Tensor<4> {
 public:
  CurvatureTensor() = default;
  explicit CurvatureTensor(int n) : Tensor<4>(n) {}
  explicit CurvatureTensor(Tensor<4> t) : Tensor<4>(std::move(t)) {}
};

// u(x, conj(y), z, conj(w)) = sum u_{abcd} x^a conj(y^b) z^c conj(w^d).
cplx evaluate(const Tensor<4>& u, const CVec& x, const CVec& y, const CVec& z, const CVec& w);

// u(xi, conj(xi), eta, conj(eta)), real part.
double griffiths_value(const Tensor<4>& u, const CVec& xi, const CVec& eta);

// (g tensor g)_{i jbar k lbar} = g_{i jbar} g_{k lbar}.
CurvatureTensor metric_square(const CMat& g);

}  // namespace hcf
