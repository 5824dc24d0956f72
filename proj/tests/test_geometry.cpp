// Chern data from jets. Golden values come from the sympy oracle in
// tests/oracles/hermitian_oracle.py, evaluated on the closed forms.

#include <doctest.h>

#include <numbers>

#include "hcf/errors.hpp"
#include "hcf/geometry.hpp"
#include "hcf/metrics.hpp"

using namespace hcf;

namespace {

MetricParams params(int n, std::map<std::string, double> v = {}, std::string mode = "") {
  MetricParams p;
  p.n = n;
  p.values = std::move(v);
  p.mode = std::move(mode);
  return p;
}

const Point kHopfPoint{cplx(0.6, 0.0), cplx(0.0, 0.8)};

}  // namespace

TEST_CASE("flat metric: Gamma, T and Omega vanish") {
  MetricField m = metric_catalog("flat_torus", params(2));
  PointGeometry f = compute_frame(m, {cplx(0.2, 0.3), cplx(0.7, 0.1)}, 2);
  CHECK(max_abs(f.gamma) == 0.0);
  CHECK(max_abs(f.torsion_up) == 0.0);
  CHECK(max_abs(f.omega) == 0.0);
  CHECK(max_abs(f.nabla2_omega_mn) == 0.0);
  CHECK(bianchi_residuals(f).max() == 0.0);
  CHECK(flow_rhs_pointwise(f).norm() == 0.0);
}

TEST_CASE("Fubini-Study on C: Omega at 0 is 2, at 0.3+0.4i it is 0.8192") {
  MetricField m = metric_catalog("fubini_study_local", params(1));
  CHECK(std::abs(compute_frame(m, {0.0}, 0).omega(0, 0, 0, 0) - 2.0) < 1e-15);
  CHECK(std::abs(compute_frame(m, {cplx(0.3, 0.4)}, 0).omega(0, 0, 0, 0) - 0.8192) < 1e-14);
}

TEST_CASE("Kahler metrics have zero torsion and Q") {
  for (const char* name : {"fubini_study_local", "product"}) {
    MetricField m = metric_catalog(name, params(2));
    Rng rng(23);
    for (int t = 0; t < 20; ++t) {
      PointGeometry f = compute_frame(m, m.chart().sample(rng), 0);
      CHECK(max_abs(f.torsion_low) < 1e-14);
      CHECK(torsion_q(f).norm() < 1e-14);
    }
  }
}

TEST_CASE("Hopf round metric: Omega at (0.6, 0.8i) matches the oracle") {
  MetricField m = metric_catalog("hopf_round", params(2));
  PointGeometry f = compute_frame(m, kHopfPoint, 0);
  // Omega_{i jbar k lbar} = P_{ij} delta_{kl}, P = delta - zbar_i z_j on |z| = 1.
  CMat P(2, 2);
  P << cplx(16.0 / 25), cplx(0, -12.0 / 25), cplx(0, 12.0 / 25), cplx(9.0 / 25);
  double err = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) err = std::max(err, std::abs(f.omega(i, j, k, l) - (k == l ? P(i, j) : 0.0)));
  CHECK(err < 1e-14);
}

TEST_CASE("Hopf round metric: -S-Q at (0.6, 0.8i) matches the oracle") {
  MetricField m = metric_catalog("hopf_round", params(2));
  PointGeometry f = compute_frame(m, kHopfPoint, 0);
  CMat want(2, 2);
  want << cplx(-1.64), cplx(0, 0.48), cplx(0, -0.48), cplx(-1.36);
  CHECK((flow_rhs_pointwise(f) - want).norm() < 1e-14);
  // S = (n-1) delta/|z|^2 and Q = delta - zbar z on |z| = 1.
  CHECK((second_ricci(f) - CMat::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("Bianchi identities hold on every catalog metric") {
  for (const MetricField& m : standard_catalog()) {
    CAPTURE(m.name());
    Rng rng(29);
    BianchiResiduals worst;
    for (int t = 0; t < 20; ++t) {
      BianchiResiduals r = bianchi_residuals(compute_frame(m, m.chart().sample(rng), 1));
      worst.first_1 = std::max(worst.first_1, r.first_1);
      worst.first_2 = std::max(worst.first_2, r.first_2);
      worst.second_1 = std::max(worst.second_1, r.second_1);
      worst.second_2 = std::max(worst.second_2, r.second_2);
    }
    CHECK(worst.first_1 < 1e-10);
    CHECK(worst.first_2 < 1e-10);
    CHECK(worst.second_1 < 1e-10);
    CHECK(worst.second_2 < 1e-10);
  }
}

TEST_CASE("the Gamma convention is the one the Bianchi identities pin down") {
  // Differentiating the second lower index instead flips the sign of T. The
  // first Bianchi identity with the flipped torsion fails on a torsionful metric.
  MetricField m = metric_catalog("hopf_round", params(2));
  PointGeometry f = compute_frame(m, {cplx(0.5, 0.3), cplx(-0.4, 0.6)}, 1);
  double flipped = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          flipped = std::max(flipped, std::abs(f.omega(i, j, k, l) - f.omega(k, j, i, l) +
                                               f.nabla_bar_torsion(j, k, i, l)));
  CHECK(flipped > 1e-2);
  CHECK(bianchi_residuals(f).first_1 < 1e-12);
}

TEST_CASE("Omega from the closed form agrees with -dbar Gamma g") {
  for (const MetricField& m : standard_catalog()) {
    CAPTURE(m.name());
    Rng rng(31);
    for (int t = 0; t < 5; ++t) {
      Point x = m.chart().sample(rng);
      CHECK(max_abs_diff(compute_frame(m, x, 0).omega, omega_from_connection(m, x)) < 1e-12);
    }
  }
}

TEST_CASE("Omega from jets agrees with second central differences of g") {
  // Omega = -d dbar g + g^{-1} dg dbar g, with all partials by finite differences.
  MetricField m = metric_catalog("hopf_family", params(2, {{"a", 1.0}, {"b", 0.5}}));
  Point x{cplx(0.5, 0.3), cplx(-0.4, 0.6)};
  PointGeometry f = compute_frame(m, x, 0);
  auto fd_omega = [&](double h) {
    auto g_at = [&](int k, cplx d) {
      Point p = x;
      p[k] += d;
      return m.value(p);
    };
    const cplx I(0, 1);
    std::vector<CMat> dz(2), dzb(2);
    for (int k = 0; k < 2; ++k) {
      CMat dx = (g_at(k, h) - g_at(k, -h)) / (2 * h);
      CMat dy = (g_at(k, I * h) - g_at(k, -I * h)) / (2 * h);
      dz[k] = 0.5 * (dx - I * dy);
      dzb[k] = 0.5 * (dx + I * dy);
    }
    auto g2 = [&](int a, cplx da, int b, cplx db) {
      Point p = x;
      p[a] += da;
      p[b] += db;
      return m.value(p);
    };
    CurvatureTensor o(2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        // d_i dbar_j = 1/4 (dx_i - i dy_i)(dx_j + i dy_j)
        auto mixed = [&](cplx u, cplx v) -> CMat {
          return (g2(i, u * h, j, v * h) - g2(i, u * h, j, -v * h) - g2(i, -u * h, j, v * h) +
                  g2(i, -u * h, j, -v * h)) /
                 (4 * h * h);
        };
        CMat ddb = 0.25 * (mixed(1, 1) + I * mixed(1, I) - I * mixed(I, 1) + mixed(I, I));
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) {
            cplx s = -ddb(k, l);
            for (int p = 0; p < 2; ++p)
              for (int q = 0; q < 2; ++q) s += f.g_inv(p, q) * dz[i](k, q) * dzb[j](p, l);
            o(i, j, k, l) = s;
          }
      }
    return o;
  };
  double e3 = max_abs_diff(fd_omega(1e-3), f.omega);
  double e2 = max_abs_diff(fd_omega(2e-3), f.omega);
  CHECK(e3 < 1e-5);
  CHECK(e2 / e3 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("S and Q are Hermitian and Q is positive semidefinite") {
  for (const MetricField& m : standard_catalog()) {
    CAPTURE(m.name());
    Rng rng(37);
    for (int t = 0; t < 20; ++t) {
      PointGeometry f = compute_frame(m, m.chart().sample(rng), 0);
      CMat S = second_ricci(f), Q = torsion_q(f);
      CHECK((S - S.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((Q - Q.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(min_eigenvalue(Q) > -1e-12);
    }
  }
}

TEST_CASE("g_inv is the inverse of g") {
  MetricField m = metric_catalog("perturbed_torus", params(2, {{"eps", 0.25}}, "generic"));
  PointGeometry f = compute_frame(m, {cplx(0.3, 0.2), cplx(0.1, 0.9)}, 0);
  // sum_l g^{k lbar} g_{j lbar} = delta_kj
  CMat prod = f.g_inv * f.g.transpose();
  CHECK((prod - CMat::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("orthonormal frame") {
  MetricField m = metric_catalog("hopf_family", params(2, {{"a", 1.0}, {"b", 0.5}}));
  CMat g = m.value({cplx(0.5, 0.3), cplx(-0.4, 0.6)});
  CMat E = orthonormal_frame(g);
  CHECK((E.transpose() * g * E.conjugate() - CMat::Identity(2, 2)).norm() < 1e-13);
}

TEST_CASE("depth and domain errors") {
  MetricField m = metric_catalog("hopf_round", params(2));
  CHECK_THROWS_AS(bianchi_residuals(compute_frame(m, kHopfPoint, 0)), StructuralError);
  CHECK_THROWS_AS(compute_frame(m, {0.01, 0.0}, 0), DomainError);
}

TEST_CASE("degenerate metric is a hard error") {
  MetricSpec s;
  s.n = 1;
  s.name = "degenerate";
  s.chart = Chart::affine(1, 1.0);
  s.entries = {Expr::z(0) * Expr::zbar(0)};
  MetricField m = from_spec(s, false);
  CHECK_THROWS_AS(compute_frame(m, {0.0}, 0), DegenerateMetricError);
}

TEST_CASE("variation formulas: flat metric with k = g gives zero") {
  MetricField m = metric_catalog("flat_torus", params(2));
  VariationErrors e = variation_check(m, m, {cplx(0.1, 0.2), cplx(0.3, 0.4)}, 1e-4);
  CHECK(e.dNabla_err == 0.0);
  CHECK(e.dTorsion_err == 0.0);
  CHECK(e.dOmega_err == 0.0);
  CHECK(e.dOmega_scale == 0.0);
}

TEST_CASE("variation formulas: k = z zbar on flat C gives delta Omega = -1") {
  MetricField m = metric_catalog("flat_torus", params(1));
  MetricSpec ks;
  ks.n = 1;
  ks.name = "zzbar";
  ks.chart = Chart::torus(1);
  ks.entries = {Expr::z(0) * Expr::zbar(0)};
  MetricField k = from_spec(ks, false);
  VariationErrors e = variation_check(m, k, {0.0}, 1e-4);
  CHECK(e.dOmega_scale == doctest::Approx(1.0));
  CHECK(e.dOmega_err < 1e-8);
}

TEST_CASE("variation formulas: random k on Fubini-Study converge at second order") {
  MetricField m = metric_catalog("fubini_study_local", params(2));
  Rng rng(41);
  MetricField k = random_hermitian_field(m.chart(), rng);
  Point x{cplx(0.3, -0.2), cplx(0.1, 0.4)};
  VariationErrors a = variation_check(m, k, x, 1e-4);
  VariationErrors b = variation_check(m, k, x, 5e-5);
  CHECK(a.dNabla_err / a.dNabla_scale < 1e-6);
  CHECK(a.dTorsion_err / a.dTorsion_scale < 1e-6);
  CHECK(a.dOmega_err / a.dOmega_scale < 1e-6);
  CHECK(a.dNabla_err / b.dNabla_err == doctest::Approx(4.0).epsilon(0.1));
  CHECK(a.dTorsion_err / b.dTorsion_err == doctest::Approx(4.0).epsilon(0.1));
  CHECK(a.dOmega_err / b.dOmega_err == doctest::Approx(4.0).epsilon(0.1));
}
