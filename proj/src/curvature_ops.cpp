#include "hcf/curvature_ops.hpp"

#include <Eigen/QR>

#include "hcf/errors.hpp"

namespace hcf {

cplx evaluate(const Tensor<4>& u, const CVec& x, const CVec& y, const CVec& z, const CVec& w) {
  const int n = u.dim();
  cplx s = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const cplx xy = x(a) * std::conj(y(b));
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) s += u(a, b, c, d) * xy * z(c) * std::conj(w(d));
    }
  return s;
}

double griffiths_value(const Tensor<4>& u, const CVec& xi, const CVec& eta) {
  return evaluate(u, xi, xi, eta, eta).real();
}

CurvatureTensor metric_square(const CMat& g) {
  const int n = static_cast<int>(g.rows());
  CurvatureTensor u(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) u(a, b, c, d) = g(a, b) * g(c, d);
  return u;
}

double check_curvature_type(const Tensor<4>& u) {
  const int n = u.dim();
  double m = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) m = std::max(m, std::abs(u(a, b, c, d) - std::conj(u(b, a, d, c))));
  return m;
}

FirstOrderCoefficients FirstOrderCoefficients::zero(int n) {
  FirstOrderCoefficients c;
  c.A = c.B = c.C = c.D = CMat::Zero(n, n);
  c.a = c.b = CVec::Zero(n);
  return c;
}

CurvatureTensor f1_apply(const Tensor<4>& u, const FirstOrderCoefficients& k, const Tensor<5>* du,
                         const Tensor<5>* dbar_u) {
  const int n = u.dim();
  const bool need_d = k.a.size() && k.a.cwiseAbs().maxCoeff() > 0;
  const bool need_db = k.b.size() && k.b.cwiseAbs().maxCoeff() > 0;
  if ((need_d && !du) || (need_db && !dbar_u)) throw StructuralError("f1_apply: derivative of u not supplied");
  CurvatureTensor out(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          cplx s = 0;
          for (int p = 0; p < n; ++p) {
            s += k.A(p, a) * u(p, b, c, d) + k.B(p, b) * u(a, p, c, d) + k.C(p, c) * u(a, b, p, d) +
                 k.D(p, d) * u(a, b, c, p);
            if (need_d) s += k.a(p) * (*du)(p, a, b, c, d);
            if (need_db) s += k.b(p) * (*dbar_u)(p, a, b, c, d);
          }
          out(a, b, c, d) = s;
        }
  return out;
}

F1Projection project_f1(const Tensor<4>& w, const Tensor<4>& u, const Tensor<5>& du, const Tensor<5>& dbar_u) {
  const int n = u.dim();
  const int rows = static_cast<int>(u.size());
  const int nn = n * n;
  CMat M = CMat::Zero(rows, 4 * nn + 2 * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          const int r = ((a * n + b) * n + c) * n + d;
          for (int p = 0; p < n; ++p) {
            M(r, 0 * nn + p * n + a) = u(p, b, c, d);
            M(r, 1 * nn + p * n + b) = u(a, p, c, d);
            M(r, 2 * nn + p * n + c) = u(a, b, p, d);
            M(r, 3 * nn + p * n + d) = u(a, b, c, p);
            M(r, 4 * nn + p) = du(p, a, b, c, d);
            M(r, 4 * nn + n + p) = dbar_u(p, a, b, c, d);
          }
        }
  CVec rhs = Eigen::Map<const CVec>(w.data().data(), rows);
  // The threshold has to be set before compute() for solve() to use it.
  Eigen::CompleteOrthogonalDecomposition<CMat> cod;
  cod.setThreshold(1e-12);
  cod.compute(M);
  const double scale = M.cwiseAbs().maxCoeff();
  CVec x = scale > 0 ? CVec(cod.solve(rhs)) : CVec(CVec::Zero(M.cols()));

  F1Projection out;
  out.coeffs = FirstOrderCoefficients::zero(n);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      out.coeffs.A(p, q) = x(0 * nn + p * n + q);
      out.coeffs.B(p, q) = x(1 * nn + p * n + q);
      out.coeffs.C(p, q) = x(2 * nn + p * n + q);
      out.coeffs.D(p, q) = x(3 * nn + p * n + q);
    }
    out.coeffs.a(p) = x(4 * nn + p);
    out.coeffs.b(p) = x(4 * nn + n + p);
  }
  out.residual = (rhs - M * x).cwiseAbs().maxCoeff();
  out.norm = rhs.cwiseAbs().maxCoeff();
  out.rank = scale > 0 ? static_cast<int>(cod.rank()) : 0;
  return out;
}

CurvatureTensor f2_quadratic(const Tensor<4>& u, const CMat& g) {
  const int n = u.dim();
  if (g.rows() != n) throw StructuralError("f2_quadratic: metric and tensor dimensions differ");
  // h(k, l) = g^{k lbar}
  const CMat h = g.inverse().transpose();
  CurvatureTensor out(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          cplx s = 0;
          for (int m = 0; m < n; ++m)
            for (int nb = 0; nb < n; ++nb) {
              if (h(m, nb) == 0.0) continue;
              cplx t = 0;
              for (int p = 0; p < n; ++p)
                for (int sb = 0; sb < n; ++sb) {
                  if (h(p, sb) == 0.0) continue;
                  t += h(p, sb) * (u(a, b, m, sb) * u(p, nb, c, d) + u(m, b, c, sb) * u(a, nb, p, d) -
                                   u(m, b, p, d) * u(a, sb, c, nb));
                }
              s += h(m, nb) * t;
            }
          out(a, b, c, d) = s;
        }
  return out;
}

CurvatureTensor q2_grad_torsion(const PointGeometry& f) {
  if (f.depth < 1) throw StructuralError("q2_grad_torsion needs frame depth >= 1");
  const int n = f.n;
  const CMat& h = f.g_inv;
  // V(a, d, s, nb) = sum_{p, m} g^{p sbar} g^{m nbar} nabla_a T_{p m dbar}
  Tensor<4> V(n);
  for (int a = 0; a < n; ++a)
    for (int d = 0; d < n; ++d)
      for (int s = 0; s < n; ++s)
        for (int nb = 0; nb < n; ++nb) {
          cplx acc = 0;
          for (int p = 0; p < n; ++p)
            for (int m = 0; m < n; ++m) acc += h(p, s) * h(m, nb) * f.nabla_torsion(a, p, m, d);
          V(a, d, s, nb) = acc;
        }
  CurvatureTensor out(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          cplx acc = 0;
          for (int s = 0; s < n; ++s)
            for (int nb = 0; nb < n; ++nb) acc += V(a, d, s, nb) * std::conj(f.nabla_torsion(b, s, nb, c));
          out(a, b, c, d) = 0.5 * acc;
        }
  return out;
}

namespace {

using detail::Slot;

inline void mac(cplx& acc, const cplx& a, const cplx& b) { acc += a * b; }
inline void mac(ComplexJet& acc, const ComplexJet& a, const ComplexJet& b) { acc.add_product(a, b); }

// Twist coefficients: for direction index m and slot index x,
// (nabla^T - nabla)_m u_{..x..} = sum_p K(m, x, p) u_{..p..}.
//   holo:  slot 1 k1(m, a, q) = T^q_{ma},  slot 4 k4(m, d, r) = -g^{q rbar} T_{m q dbar}
//   anti:  slot 2 k2(n, b, r) = conj(T^r_{nb}),  slot 3 k3(n, c, q) = -g^{q rbar} T_{nbar rbar c}
template <class S>
struct Twist {
  Tensor<3, S> k1, k2, k3, k4;
};

template <class S>
Twist<S> make_twist(int n, const Tensor<2, S>& g_inv, const Tensor<3, S>& t_up, const Tensor<3, S>& t_low,
                    const Tensor<3, S>& t_bar_up, const Tensor<3, S>& t_bar_low, const S& zero) {
  Twist<S> K{Tensor<3, S>(n, zero), Tensor<3, S>(n, zero), Tensor<3, S>(n, zero), Tensor<3, S>(n, zero)};
  for (int m = 0; m < n; ++m)
    for (int x = 0; x < n; ++x)
      for (int p = 0; p < n; ++p) {
        K.k1(m, x, p) = t_up(p, m, x);
        K.k2(m, x, p) = t_bar_up(p, m, x);
        for (int q = 0; q < n; ++q) {
          // k4(m, d=x, r=p): -g^{q pbar} T_{m q xbar}
          mac(K.k4(m, x, p), g_inv(q, p), t_low(m, q, x));
          // k3(n=m, c=x, q=p): -g^{p qbar} T_{mbar qbar x}
          mac(K.k3(m, x, p), g_inv(p, q), t_bar_low(m, q, x));
        }
      }
  for (auto& v : K.k3.data()) v = -v;
  for (auto& v : K.k4.data()) v = -v;
  return K;
}

// out[e] += twist of the n^4 block u in direction index m.
template <class S>
void add_twist(S* out, const S* u, int n, int m, Dir dir, const Twist<S>& K) {
  const std::size_t st[4] = {static_cast<std::size_t>(n * n * n), static_cast<std::size_t>(n * n),
                             static_cast<std::size_t>(n), 1};
  const int slot_a = dir == Dir::Holo ? 0 : 1;
  const int slot_b = dir == Dir::Holo ? 3 : 2;
  const Tensor<3, S>& Ka = dir == Dir::Holo ? K.k1 : K.k2;
  const Tensor<3, S>& Kb = dir == Dir::Holo ? K.k4 : K.k3;
  const std::size_t total = st[0] * n;
  for (std::size_t e = 0; e < total; ++e) {
    const int xa = static_cast<int>((e / st[slot_a]) % n);
    const int xb = static_cast<int>((e / st[slot_b]) % n);
    const std::size_t ba = e - xa * st[slot_a];
    const std::size_t bb = e - xb * st[slot_b];
    for (int p = 0; p < n; ++p) {
      mac(out[e], Ka(m, xa, p), u[ba + p * st[slot_a]]);
      mac(out[e], Kb(m, xb, p), u[bb + p * st[slot_b]]);
    }
  }
}

Twist<cplx> point_twist(const PointGeometry& f) {
  const int n = f.n;
  Tensor<2> ginv(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) ginv(i, j) = f.g_inv(i, j);
  Tensor<3> tbu(n), tbl(n);
  for (std::size_t q = 0; q < tbu.size(); ++q) {
    tbu[q] = std::conj(f.torsion_up[q]);
    tbl[q] = std::conj(f.torsion_low[q]);
  }
  return make_twist<cplx>(n, ginv, f.torsion_up, f.torsion_low, tbu, tbl, cplx(0));
}

template <std::size_t R>
Tensor<R, ComplexJet> truncate_all(const Tensor<R, ComplexJet>& X, int order) {
  Tensor<R, ComplexJet> out(X.dim());
  for (std::size_t i = 0; i < X.size(); ++i) out[i] = X[i].truncated(order);
  return out;
}

Twist<ComplexJet> truncate_twist(const Twist<ComplexJet>& K, int order) {
  return {truncate_all(K.k1, order), truncate_all(K.k2, order), truncate_all(K.k3, order),
          truncate_all(K.k4, order)};
}

constexpr std::array<Slot, 4> kOmegaSlots{Slot::Lower, Slot::LowerBar, Slot::Lower, Slot::LowerBar};

}  // namespace

Tensor<5> twisted_covariant_derivative(const Tensor<4>& u, const Tensor<5>& du, const PointGeometry& f, Dir dir) {
  const int n = f.n;
  if (u.dim() != n || du.dim() != n) throw StructuralError("twisted derivative: dimension mismatch");
  const Twist<cplx> K = point_twist(f);
  Tensor<5> out = du;
  const std::size_t block = u.size();
  for (int m = 0; m < n; ++m) add_twist(out.data().data() + m * block, u.data().data(), n, m, dir, K);
  return out;
}

Tensor<5> twisted_covariant_derivative(const PointGeometry& f, Dir dir) {
  if (f.depth < 1) throw StructuralError("twisted derivative of Omega needs frame depth >= 1");
  return twisted_covariant_derivative(f.omega, dir == Dir::Holo ? f.nabla_omega : f.nabla_bar_omega, f, dir);
}

CurvatureTensor chern_laplacian(const PointGeometry& f) {
  if (f.depth < 2) throw StructuralError("Laplacian needs frame depth 2");
  const int n = f.n;
  CurvatureTensor out(n);
  const std::size_t block = out.size();
  for (int m = 0; m < n; ++m)
    for (int q = 0; q < n; ++q) {
      const cplx h = 0.5 * f.g_inv(m, q);
      const std::size_t mn = (m * n + q) * block, nm = (q * n + m) * block;
      for (std::size_t e = 0; e < block; ++e)
        out[e] += h * (f.nabla2_omega_mn[mn + e] + f.nabla2_omega_nm[nm + e]);
    }
  return out;
}

CurvatureTensor rough_laplacian(const PointGeometry& f) {
  if (f.depth < 2) throw StructuralError("Laplacian needs frame depth 2");
  const int n = f.n;
  CurvatureTensor out(n);
  const std::size_t block = out.size();
  for (int m = 0; m < n; ++m)
    for (int q = 0; q < n; ++q)
      for (std::size_t e = 0; e < block; ++e) out[e] += f.g_inv(m, q) * f.nabla2_omega_mn[(m * n + q) * block + e];
  return out;
}

CurvatureTensor twisted_laplacian(const MetricField& m, const Point& x) {
  detail::JetFrame f = detail::jet_frame(m, x, 2);
  const int n = f.n;
  const Twist<ComplexJet> K2 = make_twist(n, f.g_inv, f.t_up, f.t_low, f.t_bar_up, f.t_bar_low, ComplexJet(x, 2));
  const Twist<ComplexJet> K1 = truncate_twist(K2, 1);
  const Twist<ComplexJet> K0 = truncate_twist(K2, 0);
  const auto omega1 = truncate_all(f.omega, 1);
  const std::size_t block = f.omega.size();

  // First twisted derivatives, order 1.
  auto X = detail::covariant(f.omega, kOmegaSlots, Dir::Holo, f);
  auto Y = detail::covariant(f.omega, kOmegaSlots, Dir::Anti, f);
  for (int q = 0; q < n; ++q) {
    add_twist(X.data().data() + q * block, omega1.data().data(), n, q, Dir::Holo, K1);
    add_twist(Y.data().data() + q * block, omega1.data().data(), n, q, Dir::Anti, K1);
  }

  // Second derivatives, order 0. The direction slot of the inner derivative
  // gets the plain Chern correction.
  constexpr std::array<Slot, 5> holo_first{Slot::Lower, Slot::Lower, Slot::LowerBar, Slot::Lower, Slot::LowerBar};
  constexpr std::array<Slot, 5> anti_first{Slot::LowerBar, Slot::Lower, Slot::LowerBar, Slot::Lower,
                                           Slot::LowerBar};
  auto ZY = detail::covariant(Y, anti_first, Dir::Holo, f);  // (m, n, ...) nabla^T_m nabla^T_nbar
  auto ZX = detail::covariant(X, holo_first, Dir::Anti, f);  // (n, m, ...) nabla^T_nbar nabla^T_m
  const auto X0 = truncate_all(X, 0);
  const auto Y0 = truncate_all(Y, 0);
  for (int a = 0; a < n; ++a)
    for (int k = 0; k < n; ++k) {
      add_twist(ZY.data().data() + (a * n + k) * block, Y0.data().data() + k * block, n, a, Dir::Holo, K0);
      add_twist(ZX.data().data() + (a * n + k) * block, X0.data().data() + k * block, n, a, Dir::Anti, K0);
    }

  const CMat ginv = detail::matrix_values(f.g_inv);
  CurvatureTensor out(n);
  for (int a = 0; a < n; ++a)
    for (int q = 0; q < n; ++q) {
      const cplx h = 0.5 * ginv(a, q);
      for (std::size_t e = 0; e < block; ++e)
        out[e] += h * (ZY[(a * n + q) * block + e].value() + ZX[(q * n + a) * block + e].value());
    }
  return out;
}

std::array<CurvatureTensor, 8> lemma_torsion_terms(const PointGeometry& f) {
  if (f.depth < 1) throw StructuralError("torsion terms need frame depth >= 1");
  const int n = f.n;
  const CMat& G = f.g_inv;
  const auto& O = f.omega;
  const auto& dO = f.nabla_omega;
  const auto& dbO = f.nabla_bar_omega;
  auto Tu = [&](int q, int m, int a) { return f.torsion_up(q, m, a); };
  auto Tbu = [&](int r, int m, int b) { return f.torsion_bar_up(r, m, b); };
  auto Tl = [&](int p, int m, int d) { return f.torsion_low(p, m, d); };
  auto Tbl = [&](int s, int m, int c) { return f.torsion_bar_low(s, m, c); };

  std::array<CurvatureTensor, 8> t;
  for (auto& x : t) x = CurvatureTensor(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          cplx s[8] = {};
          for (int m = 0; m < n; ++m)
            for (int nb = 0; nb < n; ++nb) {
              const cplx gmn = G(m, nb);
              for (int r = 0; r < n; ++r) {
                s[0] += gmn * Tbu(r, nb, b) * dO(m, a, r, c, d);
                s[1] += gmn * Tu(r, m, a) * dbO(nb, r, b, c, d);
                for (int q = 0; q < n; ++q) s[2] += gmn * Tu(q, m, a) * Tbu(r, nb, b) * O(q, r, c, d);
              }
              for (int p = 0; p < n; ++p)
                for (int sb = 0; sb < n; ++sb) {
                  const cplx gg = gmn * G(p, sb);
                  s[3] += gg * Tl(p, m, d) * dbO(nb, a, b, c, sb);
                  s[4] += gg * Tbl(sb, nb, c) * dO(m, a, b, p, d);
                  for (int r = 0; r < n; ++r) {
                    s[5] += gg * Tl(p, m, d) * Tbu(r, nb, b) * O(a, r, c, sb);
                    s[6] += gg * Tbl(sb, nb, c) * Tu(r, m, a) * O(r, b, p, d);
                    for (int q = 0; q < n; ++q)
                      s[7] += gg * G(q, r) * Tbl(sb, nb, c) * Tl(q, m, d) * O(a, b, p, r);
                  }
                }
            }
          for (int k = 0; k < 8; ++k) t[k](a, b, c, d) = s[k];
        }
  return t;
}

namespace {

void fill_evolution(const PointGeometry& f, EvolutionTerms& e) {
  const int n = f.n;
  e.laplacian = rough_laplacian(f);
  e.torsion = lemma_torsion_terms(f);
  e.q2 = q2_grad_torsion(f);
  e.f2 = f2_quadratic(f.omega, f.g);
  const CMat S = second_ricci(f);
  const CMat Q = torsion_q(f);
  const CMat SQ = S + Q;
  const CMat& G = f.g_inv;
  const auto& O = f.omega;
  for (auto& r : e.ricci) r = CurvatureTensor(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          cplx r0 = 0, r1 = 0, r2 = 0;
          for (int p = 0; p < n; ++p)
            for (int s = 0; s < n; ++s) {
              r0 -= G(p, s) * SQ(p, d) * O(a, b, c, s);
              r1 -= G(p, s) * S(p, b) * O(a, s, c, d);
              r2 -= G(p, s) * Q(c, s) * O(a, b, p, d);
            }
          e.ricci[0](a, b, c, d) = r0;
          e.ricci[1](a, b, c, d) = r1;
          e.ricci[2](a, b, c, d) = r2;
        }
  e.total = e.laplacian;
  for (const auto& t : e.torsion) e.total += t;
  e.total += e.q2;
  e.total += e.f2;
  for (const auto& r : e.ricci) e.total += r;
}

}  // namespace

EvolutionTerms evolution_terms(const MetricField& m, const Point& x) {
  PointGeometry f = compute_frame(m, x, 2);
  EvolutionTerms e;
  fill_evolution(f, e);
  e.twisted_laplacian = twisted_laplacian(m, x);
  e.remainder = CurvatureTensor(e.total - e.twisted_laplacian - e.q2 - e.f2);
  return e;
}

CurvatureTensor evolution_rhs(const MetricField& m, const Point& x) {
  PointGeometry f = compute_frame(m, x, 2);
  EvolutionTerms e;
  fill_evolution(f, e);
  return e.total;
}

}  // namespace hcf
