// Catalog entries: values at known points, domain handling, Hermitian positive
// definiteness on random points.

#include <doctest.h>

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

}  // namespace

TEST_CASE("flat_torus(1) is [1] everywhere") {
  MetricField m = metric_catalog("flat_torus", params(1));
  Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    CMat g = m.value(m.chart().sample(rng));
    CHECK(g.rows() == 1);
    CHECK(g(0, 0) == cplx(1.0));
  }
}

TEST_CASE("hopf_round(2) is the identity on |z| = 1") {
  MetricField m = metric_catalog("hopf_round", params(2));
  CMat g = m.value({cplx(0.6, 0.0), cplx(0.0, 0.8)});
  CHECK((g - CMat::Identity(2, 2)).norm() < 1e-15);
}

TEST_CASE("hopf_family(2, 1, 0) equals hopf_round(2) entrywise") {
  MetricField a = metric_catalog("hopf_family", params(2, {{"a", 1.0}, {"b", 0.0}}));
  MetricField b = metric_catalog("hopf_round", params(2));
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    Point x = a.chart().sample(rng);
    CHECK((a.value(x) - b.value(x)).norm() == 0.0);
  }
}

TEST_CASE("hopf_family has eigenvalues a/|z|^2 and (a+b)/|z|^2") {
  MetricField m = metric_catalog("hopf_family", params(2, {{"a", 1.5}, {"b", 0.7}}));
  Point x{cplx(0.3, 0.4), cplx(-0.5, 0.6)};
  double r2 = 0.25 + 0.61;
  Eigen::SelfAdjointEigenSolver<CMat> es(m.value(x));
  CHECK(es.eigenvalues()(0) == doctest::Approx(1.5 / r2));
  CHECK(es.eigenvalues()(1) == doctest::Approx(2.2 / r2));
}

TEST_CASE("hopf points outside the annulus are domain errors") {
  MetricField m = metric_catalog("hopf_round", params(2));
  CHECK_THROWS_AS(m.value({0.1, 0.1}), DomainError);
  CHECK_THROWS_AS(m.value({2.0, 1.0}), DomainError);
}

TEST_CASE("catalog rejects unknown names and out-of-range parameters") {
  CHECK_THROWS_AS(metric_catalog("sphere", params(2)), ConfigError);
  CHECK_THROWS_AS(metric_catalog("perturbed_torus", params(2, {{"eps", 0.5}})), ConfigError);
  CHECK_THROWS_AS(metric_catalog("perturbed_torus", params(2, {{"eps", 0.1}}, "wild")), ConfigError);
  CHECK_THROWS_AS(metric_catalog("hopf_family", params(2, {{"a", 1.0}, {"b", -2.0}})), ConfigError);
  CHECK_THROWS_AS(metric_catalog("fubini_study_local", params(3)), ConfigError);
}

TEST_CASE("every catalog entry is Hermitian positive definite on 1000 random points") {
  for (const MetricField& m : standard_catalog()) {
    CAPTURE(m.name());
    Rng rng(17);
    double herm = 0, lam = 1e300;
    for (int t = 0; t < 1000; ++t) {
      CMat g = m.value(m.chart().sample(rng));
      herm = std::max(herm, (g - g.adjoint()).cwiseAbs().maxCoeff());
      lam = std::min(lam, min_eigenvalue(g));
    }
    CHECK(herm == 0.0);
    CHECK(lam > kMetricFloor);
  }
}

TEST_CASE("kahler-flagged entries are torsion free") {
  for (const MetricField& m : standard_catalog()) {
    if (!m.flags().kahler) continue;
    CAPTURE(m.name());
    Rng rng(19);
    double t = 0;
    for (int s = 0; s < 50; ++s) t = std::max(t, torsion_norm(compute_frame(m, m.chart().sample(rng), 0)));
    CHECK(t < 1e-12);
  }
}

TEST_CASE("the generic perturbed torus is periodic and not Kahler") {
  MetricField m = metric_catalog("perturbed_torus", params(2, {{"eps", 0.2}}, "generic"));
  Point x{cplx(0.13, 0.71), cplx(0.42, 0.05)};
  Point y{cplx(1.13, -0.29), cplx(-0.58, 2.05)};
  CHECK((m.value(x) - m.value(y)).norm() < 1e-14);
  CHECK(torsion_norm(compute_frame(m, x, 0)) > 1e-2);
}

TEST_CASE("catalog listing covers every entry") {
  CHECK(catalog_entries().size() == 6);
}
