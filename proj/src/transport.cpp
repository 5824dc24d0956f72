#include "hcf/transport.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "hcf/curvature_ops.hpp"
#include "hcf/geometry.hpp"
#include "hcf/positivity.hpp"

namespace hcf {

namespace {

constexpr double kPi = std::numbers::pi;

Expr param() { return Expr::z(0); }

}  // namespace

Point Curve::at(double s) const {
  Point p(components.size());
  const Point t{cplx(s, 0)};
  for (std::size_t k = 0; k < components.size(); ++k) p[k] = components[k].eval(t);
  return p;
}

CVec Curve::velocity(double s) const {
  CVec v(dim());
  const Point t{cplx(s, 0)};
  for (int k = 0; k < dim(); ++k) {
    ComplexJet j = components[k].jet(t, 1);
    v(k) = j[1] + j[2];  // d/dz + d/dzbar along the real axis
  }
  return v;
}

Curve Curve::circle(const Point& center, double r, const CVec& u, const CVec& w) {
  Curve c;
  c.name = "circle";
  Expr cs = cos(Expr(2 * kPi) * param()), sn = sin(Expr(2 * kPi) * param());
  for (std::size_t k = 0; k < center.size(); ++k)
    c.components.push_back(Expr(center[k]) + Expr(r * u(k)) * cs + Expr(r * w(k)) * sn);
  return c;
}

Curve Curve::default_loop(const Chart& chart) {
  const int n = chart.dim();
  Curve c;
  c.name = "loop";
  Expr cs = cos(Expr(2 * kPi) * param()), sn = sin(Expr(2 * kPi) * param());
  Expr sn2 = sin(Expr(4 * kPi) * param());
  if (chart.annulus) {
    // The unit great circle through e_1 and e^{i pi/3} e_2.
    Expr r(1.0);
    if (n == 1) {
      c.components.push_back(r * exp(Expr(cplx(0, 2 * kPi)) * param()));
      return c;
    }
    c.components.assign(n, Expr(0.0));
    c.components[0] = r * cs;
    c.components[1] = r * Expr(std::polar(1.0, kPi / 3)) * sn;
    for (int k = 2; k < n; ++k) c.components[k] = Expr(0.1) * sn2;
    return c;
  }
  for (int k = 0; k < n; ++k) {
    const cplx center(0.2 + 0.1 * k, -0.1 + 0.15 * k);
    const cplx a(0.3, 0.05 * (k + 1)), b(-0.02 * k, 0.25), d(0.07, -0.04 * k);
    c.components.push_back(Expr(center) + Expr(a) * cs + Expr(b) * sn + Expr(d) * sn2);
  }
  return c;
}

namespace {

struct Deriv {
  CVec dxi, deta;
};

Deriv rhs(const PointGeometry& f, const CVec& v, const CVec& xi, const CVec& eta, TransportMode mode) {
  const int n = f.n;
  Deriv d{CVec::Zero(n), CVec::Zero(n)};
  for (int p = 0; p < n; ++p)
    for (int i = 0; i < n; ++i)
      for (int q = 0; q < n; ++q) {
        d.dxi(p) -= f.gamma(p, i, q) * v(i) * xi(q);
        d.deta(p) -= f.gamma(p, i, q) * v(i) * eta(q);
        if (mode == TransportMode::twisted) d.dxi(p) += f.torsion_up(p, i, q) * v(i) * xi(q);
      }
  if (mode != TransportMode::plain) {
    for (int p = 0; p < n; ++p)
      for (int s = 0; s < n; ++s)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            d.deta(p) -= f.g_inv(p, s) * std::conj(v(i)) * f.torsion_bar_low(i, s, j) * eta(j);
  }
  return d;
}

TransportState make_state(const PointGeometry& f, double s, const CVec& xi, const CVec& eta) {
  TransportState st;
  st.s = s;
  st.x = f.x;
  st.xi = xi;
  st.eta = eta;
  st.pairing = (xi.transpose() * f.g * eta.conjugate())(0);
  st.griffiths = griffiths_value(f.omega, xi, eta);
  return st;
}

}  // namespace

std::vector<TransportState> transport_pair(const MetricField& m, const Curve& curve, const CVec& xi0,
                                           const CVec& eta0, int steps, TransportMode mode) {
  if (steps < 1) throw PreconditionError("transport needs at least one step");
  if (curve.dim() != m.dim() || xi0.size() != m.dim() || eta0.size() != m.dim())
    throw StructuralError("transport: dimension mismatch");
  std::vector<TransportState> traj;
  traj.reserve(steps + 1);
  const double h = (curve.s1 - curve.s0) / steps;

  auto frame = [&](double s) {
    try {
      PointGeometry f = compute_frame(m, curve.at(s), 0);
      if (!(min_eigenvalue(f.g) > kMetricFloor)) throw DegenerateMetricError("metric not positive definite");
      return f;
    } catch (const Error& e) {
      throw TransportAborted("transport failed at s = " + std::to_string(s) + ": " + e.what(), traj);
    }
  };

  CVec xi = xi0, eta = eta0;
  double s = curve.s0;
  PointGeometry f0 = frame(s);
  traj.push_back(make_state(f0, s, xi, eta));
  for (int k = 0; k < steps; ++k) {
    const double sm = s + h / 2, s1 = curve.s0 + (k + 1) * h;
    PointGeometry fm = frame(sm), f1 = frame(s1);
    const CVec v0 = curve.velocity(s), vm = curve.velocity(sm), v1 = curve.velocity(s1);
    Deriv k1 = rhs(f0, v0, xi, eta, mode);
    Deriv k2 = rhs(fm, vm, xi + h / 2 * k1.dxi, eta + h / 2 * k1.deta, mode);
    Deriv k3 = rhs(fm, vm, xi + h / 2 * k2.dxi, eta + h / 2 * k2.deta, mode);
    Deriv k4 = rhs(f1, v1, xi + h * k3.dxi, eta + h * k3.deta, mode);
    xi += h / 6 * (k1.dxi + 2 * k2.dxi + 2 * k3.dxi + k4.dxi);
    eta += h / 6 * (k1.deta + 2 * k2.deta + 2 * k3.deta + k4.deta);
    if (!xi.allFinite() || !eta.allFinite())
      throw TransportAborted("transport produced non-finite vectors at s = " + std::to_string(s1), traj);
    s = s1;
    f0 = std::move(f1);
    traj.push_back(make_state(f0, s, xi, eta));
  }
  return traj;
}

double pairing_invariance_check(const std::vector<TransportState>& traj) {
  double d = 0;
  for (const auto& st : traj) d = std::max(d, std::abs(st.pairing - traj.front().pairing));
  return d;
}

ZeroSetReport zero_set_invariance_check(const MetricField& m, const Curve& curve, const CVec& xi0, const CVec& eta0,
                                        int steps, TransportMode mode) {
  PointGeometry f = compute_frame(m, curve.at(curve.s0), 0);
  if (!is_zero_pair(f.omega, f.g, xi0, eta0))
    throw PreconditionError("zero_set_invariance_check: the pair is not a zero of Omega at the curve start");
  ZeroSetReport r;
  r.trajectory = transport_pair(m, curve, xi0, eta0, steps, mode);
  r.start_value = r.trajectory.front().griffiths;
  for (const auto& st : r.trajectory) r.max_value = std::max(r.max_value, std::abs(st.griffiths));
  return r;
}

void write_trajectory_csv(std::ostream& os, const std::vector<TransportState>& traj) {
  if (traj.empty()) return;
  const int n = static_cast<int>(traj.front().xi.size());
  os << "s";
  for (const char* v : {"xi", "eta"})
    for (int k = 0; k < n; ++k) os << ",re_" << v << k << ",im_" << v << k;
  os << ",re_pairing,im_pairing,griffiths\n";
  char buf[64];
  auto put = [&](double x) {
    std::snprintf(buf, sizeof buf, ",%.17g", x);
    os << buf;
  };
  for (const auto& st : traj) {
    std::snprintf(buf, sizeof buf, "%.17g", st.s);
    os << buf;
    for (const CVec* v : {&st.xi, &st.eta})
      for (int k = 0; k < n; ++k) {
        put((*v)(k).real());
        put((*v)(k).imag());
      }
    put(st.pairing.real());
    put(st.pairing.imag());
    put(st.griffiths);
    os << "\n";
  }
}

}  // namespace hcf
