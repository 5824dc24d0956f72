#include "hcf/jets.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "hcf/errors.hpp"

namespace hcf {

namespace {

std::size_t box_index(const std::uint8_t* e, int nvars, int order) {
  std::size_t idx = 0;
  for (int v = 0; v < nvars; ++v) idx = idx * (order + 1) + e[v];
  return idx;
}

double factorial(int k) {
  double f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

JetLayout::JetLayout(int nvars, int order) : nvars_(nvars), order_(order) {
  // Enumerate exponent vectors degree by degree.
  std::vector<std::uint8_t> cur(nvars, 0);
  prefix_.assign(order + 1, 0);
  for (int d = 0; d <= order; ++d) {
    std::vector<std::vector<std::uint8_t>> level;
    // Recursive fill of all vectors with sum d, lexicographically decreasing.
    auto rec = [&](auto&& self, int v, int left) -> void {
      if (v == nvars - 1) {
        cur[v] = static_cast<std::uint8_t>(left);
        level.push_back(cur);
        return;
      }
      for (int e = left; e >= 0; --e) {
        cur[v] = static_cast<std::uint8_t>(e);
        self(self, v + 1, left - e);
      }
    };
    if (nvars == 0) {
      if (d == 0) level.push_back({});
    } else {
      rec(rec, 0, d);
    }
    for (auto& e : level) {
      exps_.insert(exps_.end(), e.begin(), e.end());
      degree_.push_back(static_cast<std::uint8_t>(d));
    }
    prefix_[d] = degree_.size();
  }

  std::size_t box = 1;
  for (int v = 0; v < nvars; ++v) box *= (order + 1);
  lookup_.assign(box, -1);
  for (std::size_t i = 0; i < size(); ++i) lookup_[box_index(exponents(i), nvars, order)] = static_cast<std::int32_t>(i);

  std::vector<std::uint8_t> sum(nvars);
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = 0; j < size(); ++j) {
      if (degree_[i] + degree_[j] > order) break;  // sorted by degree
      for (int v = 0; v < nvars; ++v) sum[v] = exponents(i)[v] + exponents(j)[v];
      int k = index_of(sum.data());
      products_.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(k)});
    }
  }
}

int JetLayout::index_of(const std::uint8_t* e) const {
  int d = 0;
  for (int v = 0; v < nvars_; ++v) d += e[v];
  if (d > order_) return -1;
  return lookup_[box_index(e, nvars_, order_)];
}

std::shared_ptr<const JetLayout> JetLayout::get(int nvars, int order) {
  if (nvars < 0 || nvars > 2 * kMaxDim || order < 0 || order > kMaxOrder)
    throw StructuralError("jet layout out of range");
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const JetLayout>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{nvars, order}];
  if (!slot) slot = std::make_shared<const JetLayout>(nvars, order);
  return slot;
}

ComplexJet::ComplexJet(const Point& center, int order) : n_(static_cast<int>(center.size())), order_(order) {
  if (n_ < 1 || n_ > kMaxDim) throw StructuralError("jet dimension must be in 1..4");
  std::copy(center.begin(), center.end(), center_.begin());
  layout_ = JetLayout::get(2 * n_, order);
  c_.assign(layout_->size(), cplx(0.0));
}

ComplexJet ComplexJet::constant(const Point& center, int order, cplx value) {
  ComplexJet j(center, order);
  j.c_[0] = value;
  return j;
}

ComplexJet ComplexJet::variable(const Point& center, int order, int k, bool conj) {
  ComplexJet j(center, order);
  if (k < 0 || k >= j.n_) throw StructuralError("variable index out of range");
  j.c_[0] = conj ? std::conj(center[k]) : center[k];
  if (order >= 1) {
    std::vector<std::uint8_t> e(2 * j.n_, 0);
    e[conj ? j.n_ + k : k] = 1;
    j.c_[j.layout_->index_of(e.data())] = 1.0;
  }
  return j;
}

bool ComplexJet::compatible(const ComplexJet& o) const {
  if (n_ != o.n_ || order_ != o.order_) return false;
  for (int k = 0; k < n_; ++k)
    if (center_[k] != o.center_[k]) return false;
  return true;
}

void ComplexJet::require_compatible(const ComplexJet& o) const {
  if (!compatible(o)) throw StructuralError("jet center or order mismatch");
}

cplx ComplexJet::coeff(std::span<const int> alpha, std::span<const int> beta) const {
  if (static_cast<int>(alpha.size()) != n_ || static_cast<int>(beta.size()) != n_)
    throw StructuralError("multi-index length mismatch");
  std::vector<std::uint8_t> e(2 * n_);
  int d = 0;
  for (int k = 0; k < n_; ++k) {
    if (alpha[k] < 0 || beta[k] < 0) throw StructuralError("negative multi-index");
    e[k] = static_cast<std::uint8_t>(alpha[k]);
    e[n_ + k] = static_cast<std::uint8_t>(beta[k]);
    d += alpha[k] + beta[k];
  }
  if (d > order_) throw StructuralError("requested derivative exceeds jet order");
  return c_[layout_->index_of(e.data())];
}

cplx ComplexJet::extract(std::span<const int> alpha, std::span<const int> beta) const {
  cplx c = coeff(alpha, beta);
  double f = 1;
  for (int k = 0; k < n_; ++k) f *= factorial(alpha[k]) * factorial(beta[k]);
  return f * c;
}

ComplexJet ComplexJet::derivative(int v) const {
  if (v < 0 || v >= 2 * n_) throw StructuralError("derivative variable out of range");
  if (order_ == 0) throw StructuralError("cannot differentiate an order-0 jet");
  ComplexJet out;
  out.n_ = n_;
  out.order_ = order_ - 1;
  out.center_ = center_;
  out.layout_ = JetLayout::get(2 * n_, order_ - 1);
  out.c_.resize(out.layout_->size());
  std::vector<std::uint8_t> e(2 * n_);
  for (std::size_t i = 0; i < out.c_.size(); ++i) {
    const std::uint8_t* src = out.layout_->exponents(i);
    std::copy(src, src + 2 * n_, e.begin());
    e[v] += 1;
    out.c_[i] = static_cast<double>(e[v]) * c_[layout_->index_of(e.data())];
  }
  return out;
}

ComplexJet ComplexJet::truncated(int order) const {
  if (order > order_) throw StructuralError("cannot raise jet order by truncation");
  if (order == order_) return *this;
  ComplexJet out;
  out.n_ = n_;
  out.order_ = order;
  out.center_ = center_;
  out.layout_ = JetLayout::get(2 * n_, order);
  out.c_.assign(c_.begin(), c_.begin() + out.layout_->size());
  return out;
}

ComplexJet ComplexJet::conjugate() const {
  ComplexJet out = *this;
  std::vector<std::uint8_t> e(2 * n_);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    const std::uint8_t* src = layout_->exponents(i);
    for (int k = 0; k < n_; ++k) {
      e[k] = src[n_ + k];
      e[n_ + k] = src[k];
    }
    out.c_[layout_->index_of(e.data())] = std::conj(c_[i]);
  }
  return out;
}

double ComplexJet::reality_defect() const {
  ComplexJet cj = conjugate();
  double m = 0;
  for (std::size_t i = 0; i < c_.size(); ++i) m = std::max(m, std::abs(c_[i] - cj.c_[i]));
  return m;
}

ComplexJet& ComplexJet::operator+=(const ComplexJet& o) {
  require_compatible(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

ComplexJet& ComplexJet::operator-=(const ComplexJet& o) {
  require_compatible(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

ComplexJet& ComplexJet::operator*=(const ComplexJet& o) {
  *this = *this * o;
  return *this;
}

ComplexJet& ComplexJet::operator*=(cplx s) {
  for (auto& c : c_) c *= s;
  return *this;
}

void ComplexJet::add_product(const ComplexJet& a, const ComplexJet& b, cplx scale) {
  require_compatible(a);
  require_compatible(b);
  const cplx* pa = a.c_.data();
  const cplx* pb = b.c_.data();
  cplx* po = c_.data();
  if (scale == cplx(1.0)) {
    for (const auto& p : layout_->products()) po[p.out] += pa[p.a] * pb[p.b];
  } else {
    for (const auto& p : layout_->products()) po[p.out] += scale * (pa[p.a] * pb[p.b]);
  }
}

ComplexJet operator+(ComplexJet a, const ComplexJet& b) { return a += b; }
ComplexJet operator-(ComplexJet a, const ComplexJet& b) { return a -= b; }

ComplexJet operator*(const ComplexJet& a, const ComplexJet& b) {
  ComplexJet out(a.center(), a.order());
  out.add_product(a, b);
  return out;
}

ComplexJet operator*(ComplexJet a, cplx s) { return a *= s; }
ComplexJet operator*(cplx s, ComplexJet a) { return a *= s; }
ComplexJet operator-(ComplexJet a) { return a *= cplx(-1.0); }

ComplexJet compose(const ComplexJet& a, std::span<const cplx> derivs) {
  const int order = a.order();
  if (static_cast<int>(derivs.size()) < order + 1) throw StructuralError("compose needs order+1 derivatives");
  ComplexJet h = a;
  h[0] = 0.0;
  ComplexJet out = ComplexJet::constant(a.center(), order, derivs[0]);
  ComplexJet power = ComplexJet::constant(a.center(), order, 1.0);
  double fact = 1;
  for (int k = 1; k <= order; ++k) {
    power = power * h;
    fact *= k;
    out += power * (derivs[k] / fact);
  }
  return out;
}

ComplexJet invert(const ComplexJet& a, double tol) {
  const cplx a0 = a.value();
  if (!(std::abs(a0) > tol)) throw SingularityError("jet inversion: constant term below tolerance");
  std::array<cplx, kMaxOrder + 1> d{};
  // d^k/dx^k (1/x) = (-1)^k k! / x^(k+1)
  cplx p = 1.0 / a0;
  double f = 1;
  for (int k = 0; k <= a.order(); ++k) {
    if (k > 0) f *= -k;
    d[k] = f * p;
    p /= a0;
  }
  return compose(a, std::span<const cplx>(d.data(), a.order() + 1));
}

ComplexJet operator/(const ComplexJet& a, const ComplexJet& b) { return a * invert(b); }

ComplexJet exp(const ComplexJet& a) {
  std::array<cplx, kMaxOrder + 1> d;
  d.fill(std::exp(a.value()));
  return compose(a, std::span<const cplx>(d.data(), a.order() + 1));
}

ComplexJet sin(const ComplexJet& a) {
  const cplx s = std::sin(a.value()), c = std::cos(a.value());
  std::array<cplx, kMaxOrder + 1> d{s, c, -s, -c, s};
  return compose(a, std::span<const cplx>(d.data(), a.order() + 1));
}

ComplexJet cos(const ComplexJet& a) {
  const cplx s = std::sin(a.value()), c = std::cos(a.value());
  std::array<cplx, kMaxOrder + 1> d{c, -s, -c, s, c};
  return compose(a, std::span<const cplx>(d.data(), a.order() + 1));
}

ComplexJet log(const ComplexJet& a) {
  const cplx a0 = a.value();
  if (!(std::abs(a0) > kJetInvertTol)) throw SingularityError("jet log of zero");
  std::array<cplx, kMaxOrder + 1> d{};
  d[0] = std::log(a0);
  cplx p = 1.0 / a0;
  double f = 1;
  for (int k = 1; k <= a.order(); ++k) {
    // d^k/dx^k log x = (-1)^(k-1) (k-1)! / x^k
    if (k > 1) f *= -(k - 1);
    d[k] = f * p;
    p /= a0;
  }
  return compose(a, std::span<const cplx>(d.data(), a.order() + 1));
}

ComplexJet pow(const ComplexJet& a, double p) {
  if (p >= 0 && p == std::floor(p) && p <= 16) {
    ComplexJet out = ComplexJet::constant(a.center(), a.order(), 1.0);
    for (int k = 0; k < static_cast<int>(p); ++k) out = out * a;
    return out;
  }
  const cplx a0 = a.value();
  if (std::abs(a0) == 0.0) throw SingularityError("jet pow: negative power of zero");
  std::array<cplx, kMaxOrder + 1> d{};
  double coef = 1;
  for (int k = 0; k <= a.order(); ++k) {
    d[k] = coef * std::pow(a0, p - k);
    coef *= (p - k);
  }
  return compose(a, std::span<const cplx>(d.data(), a.order() + 1));
}

}  // namespace hcf
