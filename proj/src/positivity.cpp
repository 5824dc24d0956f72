#include "hcf/positivity.hpp"

#include <cmath>
#include <functional>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "hcf/curvature_ops.hpp"
#include "hcf/errors.hpp"
#include "hcf/random.hpp"

namespace hcf {

CurvatureTensor frame_components(const Tensor<4>& u, const CMat& E) {
  const int n = u.dim();
  CurvatureTensor out(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) out(a, b, c, d) = evaluate(u, E.col(a), E.col(b), E.col(c), E.col(d));
  return out;
}

double g_norm(const CMat& g, const CVec& v) {
  return std::sqrt(std::max(0.0, (v.transpose() * g * v.conjugate())(0, 0).real()));
}

namespace {

// Hermitian matrix M with u(x, xbar, y, ybar) = sum M(a, b) x_a conj(x_b) for fixed y.
CMat form_first(const Tensor<4>& v, const CVec& y) {
  const int n = v.dim();
  CMat M = CMat::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) M(a, b) += v(a, b, c, d) * y(c) * std::conj(y(d));
  return 0.5 * (M + M.adjoint());
}

CMat form_second(const Tensor<4>& v, const CVec& x) {
  const int n = v.dim();
  CMat M = CMat::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) M(c, d) += v(a, b, c, d) * x(a) * std::conj(x(b));
  return 0.5 * (M + M.adjoint());
}

// min over unit x of sum M(a, b) x_a conj(x_b): x = conj(lowest eigenvector).
double lowest(const CMat& M, CVec& x) {
  Eigen::SelfAdjointEigenSolver<CMat> es(M);
  x = es.eigenvectors().col(0).conjugate();
  return es.eigenvalues()(0);
}

double value(const Tensor<4>& v, const CVec& x, const CVec& y) { return griffiths_value(v, x, y); }

double alternate(const Tensor<4>& v, CVec& x, CVec& y, int max_iter) {
  double last = value(v, x, y);
  for (int it = 0; it < max_iter; ++it) {
    lowest(form_first(v, y), x);
    const double val = lowest(form_second(v, x), y);
    if (std::abs(last - val) <= 1e-15 * (1 + std::abs(val))) return val;
    last = val;
  }
  return value(v, x, y);
}

// Symmetric matrix of a real quadratic form on R^dim, by polarization.
Eigen::MatrixXd polarize(int dim, const std::function<double(const Eigen::VectorXd&)>& q) {
  Eigen::MatrixXd M(dim, dim);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
  std::vector<double> diag(dim);
  for (int i = 0; i < dim; ++i) {
    e.setZero();
    e(i) = 1;
    diag[i] = q(e);
  }
  for (int i = 0; i < dim; ++i) {
    M(i, i) = diag[i];
    for (int j = i + 1; j < dim; ++j) {
      e.setZero();
      e(i) = 1;
      e(j) = 1;
      M(i, j) = M(j, i) = 0.5 * (q(e) - diag[i] - diag[j]);
    }
  }
  return M;
}

CVec complex_part(const Eigen::VectorXd& x, int offset, int n) {
  CVec v(n);
  for (int i = 0; i < n; ++i) v(i) = cplx(x(offset + i), x(offset + n + i));
  return v;
}

void require_curvature_type(const Tensor<4>& u) {
  const double r = check_curvature_type(u);
  if (r > 1e-8 * (1 + max_abs(u)))
    throw StructuralError("tensor is not of curvature type (residual " + std::to_string(r) + ")");
}

CVec normalized(const CMat& g, const CVec& v) {
  const double nv = g_norm(g, v);
  if (!(nv > 0)) throw PreconditionError("zero vector");
  return v / nv;
}

}  // namespace

GriffithsReport min_griffiths(const Tensor<4>& u, const CMat& g, const GriffithsOptions& opts) {
  require_curvature_type(u);
  const int n = u.dim();
  const CMat E = orthonormal_frame(g);
  const CurvatureTensor v = frame_components(u, E);

  double best = std::numeric_limits<double>::infinity();
  CVec bx, by;
  Rng rng(opts.seed);
  for (int r = 0; r < opts.restarts; ++r) {
    CVec x = random_cvec(rng, n).normalized(), y = random_cvec(rng, n).normalized();
    const double val = alternate(v, x, y, opts.max_iter);
    if (val < best) {
      best = val;
      bx = x;
      by = y;
    }
  }

  GriffithsReport rep;
  rep.restarts = opts.restarts;
  rep.method = "alternating";
  const bool grid = n <= 2 && opts.grid_resolution > 1;
  if (grid) {
    // eta over CP^1 (or the single point of CP^0); xi exact for each eta.
    const int res = opts.grid_resolution;
    double gbest = std::numeric_limits<double>::infinity();
    CVec gx, gy;
    const int nt = n == 1 ? 1 : res, np = n == 1 ? 1 : res;
    for (int i = 0; i < nt; ++i)
      for (int j = 0; j < np; ++j) {
        CVec y(n);
        if (n == 1) {
          y(0) = 1.0;
        } else {
          const double th = std::numbers::pi * i / (res - 1), ph = 2 * std::numbers::pi * j / res;
          y(0) = std::cos(th / 2);
          y(1) = std::polar(std::sin(th / 2), ph);
        }
        CVec x;
        const double val = lowest(form_first(v, y), x);
        if (val < gbest) {
          gbest = val;
          gx = x;
          gy = y;
        }
      }
    rep.certified_grid_resolution = res;
    if (opts.restarts > 0) {
      alternate(v, gx, gy, opts.max_iter);
      rep.method = "hybrid";
    } else {
      rep.method = "grid";
    }
    if (!(value(v, gx, gy) >= best)) {
      bx = gx;
      by = gy;
    }
  }
  if (bx.size() == 0) throw ConfigError("min_griffiths: no restarts and no grid");
  rep.argmin_xi = E * bx;
  rep.argmin_eta = E * by;
  rep.min_value = griffiths_value(u, rep.argmin_xi, rep.argmin_eta);
  return rep;
}

bool is_zero_pair(const Tensor<4>& u, const CMat& g, const CVec& xi, const CVec& eta, double rel_tol) {
  const double scale = max_abs(u);
  if (scale == 0) return true;
  return std::abs(griffiths_value(u, normalized(g, xi), normalized(g, eta))) < rel_tol * scale;
}

ZeroPairResiduals zero_pair_first_variation(const Tensor<4>& u, const CMat& g, const Tensor<5>& du,
                                            const Tensor<5>& dbar_u, const CVec& xi_in, const CVec& eta_in) {
  if (!is_zero_pair(u, g, xi_in, eta_in)) throw PreconditionError("(xi, eta) is not a zero of u");
  const double scale = max_abs(u);
  if (scale > 0) {
    GriffithsOptions o;
    o.restarts = 8;
    o.grid_resolution = 0;
    if (min_griffiths(u, g, o).min_value < -1e-9 * scale) throw PreconditionError("u is not non-negative");
  }
  const int n = u.dim();
  const CVec xi = normalized(g, xi_in), eta = normalized(g, eta_in);
  const CMat E = orthonormal_frame(g);
  ZeroPairResiduals r;
  for (int i = 0; i < n; ++i) {
    const CVec z = E.col(i);
    r.mixed_slot = std::max({r.mixed_slot, std::abs(evaluate(u, xi, z, eta, eta)), std::abs(evaluate(u, xi, xi, eta, z))});
  }
  const std::size_t block = u.size();
  for (int m = 0; m < n; ++m) {
    Tensor<4> d(n), db(n);
    std::copy(du.data().begin() + m * block, du.data().begin() + (m + 1) * block, d.data().begin());
    std::copy(dbar_u.data().begin() + m * block, dbar_u.data().begin() + (m + 1) * block, db.data().begin());
    r.grad = std::max({r.grad, std::abs(evaluate(d, xi, xi, eta, eta)), std::abs(evaluate(db, xi, xi, eta, eta))});
  }
  return r;
}

double second_variation(const Tensor<4>& u, const CVec& xi, const CVec& eta, const CVec& nu, const CVec& zeta) {
  const cplx s2 = evaluate(u, nu, nu, eta, eta) + evaluate(u, xi, xi, zeta, zeta) + evaluate(u, nu, xi, zeta, eta) +
                  evaluate(u, nu, xi, eta, zeta) + evaluate(u, xi, nu, zeta, eta) + evaluate(u, xi, nu, eta, zeta);
  return 2 * s2.real();
}

double block_form_min_eigenvalue(const CMat& A, const CMat& B, const CMat& C) {
  const int n = static_cast<int>(A.rows());
  auto q = [&](const Eigen::VectorXd& x) {
    const CVec v = complex_part(x, 0, n), w = complex_part(x, 2 * n, n);
    const cplx a = (v.transpose() * A * v.conjugate())(0, 0);
    const cplx b = (v.transpose() * B * w)(0, 0);
    const cplx c = (w.transpose() * C * w.conjugate())(0, 0);
    return a.real() + 2 * b.real() + c.real();
  };
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(polarize(4 * n, q), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

TraceInequality trace_inequality_check(const CMat& A, const CMat& B, const CMat& C) {
  const int n = static_cast<int>(A.rows());
  if (B.rows() != n || C.rows() != n || A.cols() != n || B.cols() != n || C.cols() != n)
    throw StructuralError("trace inequality: blocks must be n x n");
  const double scale = 1 + std::max({A.cwiseAbs().maxCoeff(), B.cwiseAbs().maxCoeff(), C.cwiseAbs().maxCoeff()});
  if ((A - A.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale || (C - C.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw PreconditionError("A and C must be Hermitian");
  if (block_form_min_eigenvalue(A, B, C) < -1e-10 * scale) throw PreconditionError("block form is not PSD");
  TraceInequality t;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      t.lhs += (A(i, j) * std::conj(C(i, j))).real();
      t.rhs += (B(i, j) * std::conj(B(j, i))).real();
    }
  t.holds = t.lhs >= t.rhs - 1e-12;
  return t;
}

double cor44_sum(const Tensor<4>& u, const CMat& g, const CVec& xi, const CVec& eta, const CMat* frame) {
  if (!is_zero_pair(u, g, xi, eta)) throw PreconditionError("(xi, eta) is not a zero of u");
  const int n = u.dim();
  CMat E = frame ? *frame : orthonormal_frame(g);
  const CMat gram = E.transpose() * g * E.conjugate();
  if ((gram - CMat::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10) throw PreconditionError("frame is not g-orthonormal");
  cplx s = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const CVec ei = E.col(i), ej = E.col(j);
      s += evaluate(u, xi, xi, ei, ej) * evaluate(u, ej, ei, eta, eta) -
           evaluate(u, xi, ei, eta, ej) * evaluate(u, ej, xi, ei, eta);
    }
  return s.real();
}

SecondVariationBound second_variation_bound(const Tensor<4>& u, const CMat& g, const CVec& xi, const CVec& eta,
                                            int samples, std::uint64_t seed) {
  const int n = u.dim();
  const CMat E = orthonormal_frame(g);
  const CurvatureTensor v = frame_components(u, E);
  // Frame coordinates of xi and eta: xi = E x.
  const CVec x = E.lu().solve(xi), y = E.lu().solve(eta);
  CMat A0(n, n), B0(n, n), C0(n, n);
  const CMat I = CMat::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      A0(i, j) = evaluate(v, x, x, I.col(i), I.col(j));
      B0(i, j) = evaluate(v, x, I.col(i), y, I.col(j));
      C0(i, j) = evaluate(v, I.col(i), I.col(j), y, y);
    }
  SecondVariationBound b;
  cplx lhs = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) lhs += A0(i, j) * C0(j, i) - B0(i, j) * evaluate(v, I.col(j), x, I.col(i), y);
  b.lhs = lhs.real();

  auto q = [&](const Eigen::VectorXd& z) {
    return second_variation(v, x, y, complex_part(z, 0, n), complex_part(z, 2 * n, n));
  };
  const Eigen::MatrixXd M = polarize(4 * n, q);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  b.K0 = std::max(0.0, -es.eigenvalues()(0));

  Rng rng(seed);
  double lo = 0;
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd z(4 * n);
    for (int k = 0; k < 4 * n; ++k) z(k) = normal(rng);
    z.normalize();
    lo = std::min(lo, z.dot(M * z));
  }
  b.K0_sampled = -lo;

  const double tr = A0.trace().real() + C0.trace().real();
  const double tol = 1e-10 * (1 + std::abs(b.lhs));
  b.K = tr + n * b.K0;
  b.rhs = -b.K * b.K0;
  b.holds = b.lhs >= b.rhs - tol;
  b.holds_sampled = b.lhs >= -(tr + n * b.K0_sampled) * b.K0_sampled - tol;
  return b;
}

Theorem72Residuals theorem72_diagnostics(const PointGeometry& f, const CVec& xi, const CVec& eta) {
  const int n = f.n;
  const CMat E = orthonormal_frame(f.g);
  const auto& O = f.omega;
  Theorem72Residuals r;
  cplx lhs = 0, rhs = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const CVec ei = E.col(i), ej = E.col(j);
      r.id1 = std::max(r.id1, std::abs(evaluate(O, xi, ei, ej, eta)));
      lhs += evaluate(O, xi, xi, ei, ej) * evaluate(O, ej, ei, eta, eta);
      rhs += evaluate(O, ei, xi, ej, eta) * evaluate(O, xi, ej, eta, ei);
      if (f.depth >= 1) {
        // g(nabla_xi T(e_i, e_j), conj(eta))
        cplx t = 0;
        for (int a = 0; a < n; ++a)
          for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q)
              for (int d = 0; d < n; ++d)
                t += xi(a) * ei(p) * ej(q) * std::conj(eta(d)) * f.nabla_torsion(a, p, q, d);
        r.id3 = std::max(r.id3, std::abs(t));
      }
    }
  r.id2 = std::abs(lhs - rhs);
  return r;
}

}  // namespace hcf
