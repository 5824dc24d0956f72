#include "hcf/geometry.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>

#include "hcf/errors.hpp"

namespace hcf {

namespace detail {

namespace {

// Inverse of a jet matrix by the Neumann series around its constant part.
Tensor<2, ComplexJet> invert_matrix(const Tensor<2, ComplexJet>& M) {
  const int n = M.dim();
  const Point c = M(0, 0).center();
  const int order = M(0, 0).order();
  CMat m0(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m0(i, j) = M(i, j).value();
  CMat m0inv = m0.inverse();

  // P = -m0inv * (M - m0), nilpotent up to truncation.
  Tensor<2, ComplexJet> P(n, ComplexJet(c, order));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        ComplexJet nk = M(k, j);
        nk[0] = 0.0;
        P(i, j) += nk * (-m0inv(i, k));
      }
  // inv = sum_{p=0}^{order} P^p m0inv
  Tensor<2, ComplexJet> term(n, ComplexJet(c, order));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) term(i, j)[0] = m0inv(i, j);
  Tensor<2, ComplexJet> inv = term;
  for (int p = 1; p <= order; ++p) {
    Tensor<2, ComplexJet> next(n, ComplexJet(c, order));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) next(i, j).add_product(P(i, k), term(k, j));
    term = std::move(next);
    for (std::size_t q = 0; q < inv.size(); ++q) inv[q] += term[q];
  }
  return inv;
}

template <std::size_t R>
Tensor<R, ComplexJet> truncate_all(const Tensor<R, ComplexJet>& X, int order) {
  Tensor<R, ComplexJet> out(X.dim());
  for (std::size_t i = 0; i < X.size(); ++i) out[i] = X[i].truncated(order);
  return out;
}

}  // namespace

CMat matrix_values(const Tensor<2, ComplexJet>& X) {
  const int n = X.dim();
  CMat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = X(i, j).value();
  return m;
}

template <std::size_t R>
Tensor<R> values(const Tensor<R, ComplexJet>& X) {
  Tensor<R> out(X.dim());
  for (std::size_t i = 0; i < X.size(); ++i) out[i] = X[i].value();
  return out;
}

JetFrame jet_frame(const MetricField& m, const Point& x, int order) {
  const int n = m.dim();
  JetMatrix G = m.jets(x, order + 2);
  CMat g0(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g0(i, j) = G(i, j).value();
  if (!g0.allFinite()) throw DegenerateMetricError("metric not finite at sample point");
  const double lam = min_eigenvalue(g0);
  if (!(lam > kMetricFloor)) throw DegenerateMetricError("metric eigenvalue " + std::to_string(lam) + " below floor");

  JetFrame f;
  f.n = n;
  f.order = order;
  const ComplexJet zero(x, order);
  f.g = Tensor<2, ComplexJet>(n, zero);
  for (std::size_t i = 0; i < G.size(); ++i) f.g[i] = G[i].truncated(order);
  // H = G^{-1}; g^{k lbar} = H(l, k).
  Tensor<2, ComplexJet> H = invert_matrix(f.g);
  f.g_inv = Tensor<2, ComplexJet>(n, zero);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) f.g_inv(k, l) = H(l, k);

  f.dg = Tensor<3, ComplexJet>(n, zero);
  f.dbar_g = Tensor<3, ComplexJet>(n, zero);
  f.omega = Tensor<4, ComplexJet>(n, zero);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      for (int i = 0; i < n; ++i) {
        ComplexJet d = G(j, l).dz(i);
        ComplexJet db = G(j, l).dzbar(i);
        // -d_i dbar_k g_{j lbar}
        for (int k = 0; k < n; ++k) f.omega(i, k, j, l) = -d.dzbar(k);
        f.dg(i, j, l) = d.truncated(order);
        f.dbar_g(i, j, l) = db.truncated(order);
      }
    }

  f.gamma = Tensor<3, ComplexJet>(n, zero);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int s = 0; s < n; ++s) f.gamma(k, i, j).add_product(f.g_inv(k, s), f.dg(i, j, s));

  f.gamma_bar = Tensor<3, ComplexJet>(n, zero);
  f.t_up = Tensor<3, ComplexJet>(n, zero);
  f.t_low = Tensor<3, ComplexJet>(n, zero);
  f.t_bar_up = Tensor<3, ComplexJet>(n, zero);
  f.t_bar_low = Tensor<3, ComplexJet>(n, zero);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        f.gamma_bar(a, b, c) = f.gamma(a, b, c).conjugate();
        f.t_up(a, b, c) = f.gamma(a, b, c) - f.gamma(a, c, b);
        f.t_low(a, b, c) = f.dg(a, b, c) - f.dg(b, a, c);
      }
  for (std::size_t q = 0; q < f.t_up.size(); ++q) {
    f.t_bar_up[q] = f.t_up[q].conjugate();
    f.t_bar_low[q] = f.t_low[q].conjugate();
  }

  // + g^{p sbar} d_i g_{k sbar} dbar_j g_{p lbar}
  Tensor<3, ComplexJet> w(n, zero);  // w(s, j, l) = sum_p g^{p sbar} dbar_j g_{p lbar}
  for (int s = 0; s < n; ++s)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l)
        for (int p = 0; p < n; ++p) w(s, j, l).add_product(f.g_inv(p, s), f.dbar_g(j, p, l));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          for (int s = 0; s < n; ++s) f.omega(i, j, k, l).add_product(f.dg(i, k, s), w(s, j, l));
  return f;
}

template <std::size_t R>
Tensor<R + 1, ComplexJet> covariant(const Tensor<R, ComplexJet>& X, const std::array<Slot, R>& slots, Dir dir,
                                    const JetFrame& f) {
  const int n = X.dim();
  const int order = X[0].order() - 1;
  if (order < 0) throw StructuralError("covariant derivative of an order-0 jet tensor");
  const Tensor<3, ComplexJet> G = truncate_all(dir == Dir::Holo ? f.gamma : f.gamma_bar, order);
  const Tensor<R, ComplexJet> Xt = truncate_all(X, order);
  Tensor<R + 1, ComplexJet> out(n);
  const std::size_t block = X.size();
  for (int m = 0; m < n; ++m) {
    for (std::size_t fx = 0; fx < block; ++fx) {
      ComplexJet acc = X[fx].derivative(dir == Dir::Holo ? m : n + m);
      for (std::size_t s = 0; s < R; ++s) {
        const Slot sl = slots[s];
        const bool holo_slot = (sl == Slot::Lower || sl == Slot::Upper);
        if (holo_slot != (dir == Dir::Holo)) continue;
        const std::size_t st = X.stride(s);
        const int a = X.digit(fx, s);
        const std::size_t base = fx - static_cast<std::size_t>(a) * st;
        const bool lower = (sl == Slot::Lower || sl == Slot::LowerBar);
        for (int p = 0; p < n; ++p) {
          if (lower) {
            acc.add_product(G(p, m, a), Xt[base + p * st], -1.0);
          } else {
            acc.add_product(G(a, m, p), Xt[base + p * st], 1.0);
          }
        }
      }
      out[m * block + fx] = std::move(acc);
    }
  }
  return out;
}

template Tensor<3, ComplexJet> covariant<2>(const Tensor<2, ComplexJet>&, const std::array<Slot, 2>&, Dir,
                                            const JetFrame&);
template Tensor<4, ComplexJet> covariant<3>(const Tensor<3, ComplexJet>&, const std::array<Slot, 3>&, Dir,
                                            const JetFrame&);
template Tensor<5, ComplexJet> covariant<4>(const Tensor<4, ComplexJet>&, const std::array<Slot, 4>&, Dir,
                                            const JetFrame&);
template Tensor<6, ComplexJet> covariant<5>(const Tensor<5, ComplexJet>&, const std::array<Slot, 5>&, Dir,
                                            const JetFrame&);
template Tensor<3> values<3>(const Tensor<3, ComplexJet>&);
template Tensor<4> values<4>(const Tensor<4, ComplexJet>&);
template Tensor<5> values<5>(const Tensor<5, ComplexJet>&);
template Tensor<6> values<6>(const Tensor<6, ComplexJet>&);

}  // namespace detail

using detail::Dir;
using detail::Slot;

namespace {
constexpr std::array<Slot, 4> kOmegaSlots{Slot::Lower, Slot::LowerBar, Slot::Lower, Slot::LowerBar};
constexpr std::array<Slot, 3> kTorsionSlots{Slot::Lower, Slot::Lower, Slot::LowerBar};
}  // namespace

PointGeometry compute_frame(const MetricField& m, const Point& x, int depth) {
  if (depth < 0 || depth > 2) throw StructuralError("frame depth must be 0, 1 or 2");
  detail::JetFrame f = detail::jet_frame(m, x, depth);
  PointGeometry p;
  p.x = x;
  p.n = f.n;
  p.depth = depth;
  p.g = detail::matrix_values(f.g);
  p.g_inv = detail::matrix_values(f.g_inv);
  p.gamma = detail::values(f.gamma);
  p.torsion_up = detail::values(f.t_up);
  p.torsion_low = detail::values(f.t_low);
  p.omega = CurvatureTensor(detail::values(f.omega));
  if (depth >= 1) {
    p.nabla_torsion = detail::values(detail::covariant(f.t_low, kTorsionSlots, Dir::Holo, f));
    p.nabla_bar_torsion = detail::values(detail::covariant(f.t_low, kTorsionSlots, Dir::Anti, f));
    auto dO = detail::covariant(f.omega, kOmegaSlots, Dir::Holo, f);
    auto dbO = detail::covariant(f.omega, kOmegaSlots, Dir::Anti, f);
    p.nabla_omega = detail::values(dO);
    p.nabla_bar_omega = detail::values(dbO);
    if (depth >= 2) {
      constexpr std::array<Slot, 5> holo_first{Slot::Lower, Slot::Lower, Slot::LowerBar, Slot::Lower, Slot::LowerBar};
      constexpr std::array<Slot, 5> anti_first{Slot::LowerBar, Slot::Lower, Slot::LowerBar, Slot::Lower,
                                               Slot::LowerBar};
      p.nabla2_omega_mn = detail::values(detail::covariant(dbO, anti_first, Dir::Holo, f));
      p.nabla2_omega_nm = detail::values(detail::covariant(dO, holo_first, Dir::Anti, f));
    }
  }
  return p;
}

CMat orthonormal_frame(const CMat& g) {
  // conj(g) = L L^*, E = L^{-*}: then E^* conj(g) E = I, i.e. g(e_i, conj(e_j)) = delta_ij.
  CMat gc = g.conjugate();
  gc = 0.5 * (gc + gc.adjoint()).eval();
  Eigen::LLT<CMat> llt(gc);
  if (llt.info() != Eigen::Success) throw DegenerateMetricError("Cholesky factorization of g failed");
  CMat L = llt.matrixL();
  const int n = static_cast<int>(g.rows());
  return L.adjoint().triangularView<Eigen::Upper>().solve(CMat::Identity(n, n));
}

CurvatureTensor omega_from_connection(const MetricField& m, const Point& x) {
  detail::JetFrame f = detail::jet_frame(m, x, 1);
  const int n = f.n;
  CurvatureTensor out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          cplx s = 0;
          for (int p = 0; p < n; ++p) s -= f.gamma(p, i, k).dzbar(j).value() * f.g(p, l).value();
          out(i, j, k, l) = s;
        }
  return out;
}

double BianchiResiduals::max() const { return std::max({first_1, first_2, second_1, second_2}); }

BianchiResiduals bianchi_residuals(const PointGeometry& f) {
  if (f.depth < 1) throw StructuralError("Bianchi residuals need frame depth >= 1");
  const int n = f.n;
  const auto& O = f.omega;
  BianchiResiduals r;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          // Omega_{i jbar k lbar} = Omega_{k jbar i lbar} + nabla_jbar T_{k i lbar}
          cplx e1 = O(i, j, k, l) - O(k, j, i, l) - f.nabla_bar_torsion(j, k, i, l);
          // Omega_{i jbar k lbar} = Omega_{i lbar k jbar} + nabla_i T_{lbar jbar k}
          cplx e2 = O(i, j, k, l) - O(i, l, k, j) - std::conj(f.nabla_bar_torsion(i, l, j, k));
          r.first_1 = std::max(r.first_1, std::abs(e1));
          r.first_2 = std::max(r.first_2, std::abs(e2));
          for (int m = 0; m < n; ++m) {
            // nabla_m Omega_{i jbar k lbar} = nabla_i Omega_{m jbar k lbar} + T^p_{im} Omega_{p jbar k lbar}
            cplx s3 = f.nabla_omega(m, i, j, k, l) - f.nabla_omega(i, m, j, k, l);
            // nabla_mbar Omega_{i jbar k lbar} = nabla_jbar Omega_{i mbar k lbar} + conj(T^p_{jm}) Omega_{i pbar k lbar}
            cplx s4 = f.nabla_bar_omega(m, i, j, k, l) - f.nabla_bar_omega(j, i, m, k, l);
            for (int p = 0; p < n; ++p) {
              s3 -= f.torsion_up(p, i, m) * O(p, j, k, l);
              s4 -= std::conj(f.torsion_up(p, j, m)) * O(i, p, k, l);
            }
            r.second_1 = std::max(r.second_1, std::abs(s3));
            r.second_2 = std::max(r.second_2, std::abs(s4));
          }
        }
  return r;
}

CMat second_ricci(const PointGeometry& f) {
  const int n = f.n;
  CMat S = CMat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < n; ++m)
        for (int q = 0; q < n; ++q) S(i, j) += f.g_inv(m, q) * f.omega(m, q, i, j);
  return S;
}

CMat first_ricci(const PointGeometry& f) {
  const int n = f.n;
  CMat R = CMat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) R(i, j) += f.g_inv(k, l) * f.omega(i, j, k, l);
  return R;
}

CMat torsion_q(const PointGeometry& f) {
  const int n = f.n;
  CMat Q = CMat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cplx s = 0;
      for (int m = 0; m < n; ++m)
        for (int q = 0; q < n; ++q)
          for (int p = 0; p < n; ++p)
            for (int t = 0; t < n; ++t)
              s += f.g_inv(m, q) * f.g_inv(p, t) * f.torsion_low(p, m, j) * f.torsion_bar_low(t, q, i);
      Q(i, j) = 0.5 * s;
    }
  return Q;
}

CMat flow_rhs_pointwise(const PointGeometry& f) {
  CMat r = -(second_ricci(f) + torsion_q(f));
  return 0.5 * (r + r.adjoint());
}

double torsion_norm(const PointGeometry& f) {
  const int n = f.n;
  double s = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
              s += (f.g_inv(i, a) * f.g_inv(j, b) * f.g_inv(c, l) * f.torsion_low(i, j, l) *
                    std::conj(f.torsion_low(a, b, c)))
                       .real();
  return std::sqrt(std::max(0.0, s));
}

VariationErrors variation_check(const MetricField& m, const MetricField& k, const Point& x, double eps) {
  const int n = m.dim();
  PointGeometry fp = compute_frame(m.plus(k, eps), x, 0);
  PointGeometry fm = compute_frame(m.plus(k, -eps), x, 0);
  detail::JetFrame f = detail::jet_frame(m, x, 2);

  JetMatrix K = k.jets(x, 2);
  Tensor<2, ComplexJet> Kj(n);
  for (std::size_t q = 0; q < K.size(); ++q) Kj[q] = K[q];
  auto dK = detail::covariant(Kj, {Slot::Lower, Slot::LowerBar}, Dir::Holo, f);  // (i, j, l)
  auto dbdK = detail::covariant(dK, {Slot::Lower, Slot::Lower, Slot::LowerBar}, Dir::Anti, f);  // (jb, i, k, l)
  CMat g = detail::matrix_values(f.g);
  CMat ginv = detail::matrix_values(f.g_inv);
  Tensor<4> omega = detail::values(f.omega);

  VariationErrors e;
  const double h = 2 * eps;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        cplx dG = 0, dT = 0;
        for (int p = 0; p < n; ++p) {
          dG += (fp.gamma(p, i, j) - fm.gamma(p, i, j)) / h * g(p, l);
          dT += (fp.torsion_up(p, i, j) - fm.torsion_up(p, i, j)) / h * g(p, l);
        }
        const cplx cG = dK(i, j, l).value();
        const cplx cT = dK(i, j, l).value() - dK(j, i, l).value();
        e.dNabla_err = std::max(e.dNabla_err, std::abs(dG - cG));
        e.dTorsion_err = std::max(e.dTorsion_err, std::abs(dT - cT));
        e.dNabla_scale = std::max(e.dNabla_scale, std::abs(cG));
        e.dTorsion_scale = std::max(e.dTorsion_scale, std::abs(cT));
      }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int c = 0; c < n; ++c)
        for (int l = 0; l < n; ++l) {
          const cplx dO = (fp.omega(i, j, c, l) - fm.omega(i, j, c, l)) / h;
          // k(Omega(d_i, dbar_j) d_c, dbar_l) - nabla_jbar nabla_i k_{c lbar}
          cplx closed = -dbdK(j, i, c, l).value();
          for (int p = 0; p < n; ++p)
            for (int s = 0; s < n; ++s) closed += omega(i, j, c, s) * ginv(p, s) * K(p, l).value();
          e.dOmega_err = std::max(e.dOmega_err, std::abs(dO - closed));
          e.dOmega_scale = std::max(e.dOmega_scale, std::abs(closed));
        }
  return e;
}

}  // namespace hcf
