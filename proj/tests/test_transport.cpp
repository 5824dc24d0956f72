// Torsion-twisted parallel transport of vector pairs.

#include <doctest.h>

#include <sstream>

#include "hcf/errors.hpp"
#include "hcf/flow.hpp"
#include "hcf/geometry.hpp"
#include "hcf/positivity.hpp"
#include "hcf/random.hpp"
#include "hcf/transport.hpp"

using namespace hcf;

namespace {

MetricParams params(int n, std::map<std::string, double> v = {}, std::string mode = "") {
  MetricParams p;
  p.n = n;
  p.values = std::move(v);
  p.mode = std::move(mode);
  return p;
}

double endpoint_diff(const std::vector<TransportState>& a, const std::vector<TransportState>& b) {
  return std::max((a.back().xi - b.back().xi).norm(), (a.back().eta - b.back().eta).norm());
}

}  // namespace

TEST_CASE("curve velocity is the derivative of the parametrization") {
  Chart chart = Chart::hopf_annulus(2);
  Curve c = Curve::default_loop(chart);
  for (double s : {0.0, 0.13, 0.71}) {
    const double h = 1e-6;
    Point a = c.at(s + h), b = c.at(s - h);
    CVec v = c.velocity(s);
    for (int k = 0; k < 2; ++k) CHECK(std::abs((a[k] - b[k]) / (2 * h) - v(k)) < 1e-8);
    CHECK(chart.contains(c.at(s)));
  }
  Curve t = Curve::default_loop(Chart::torus(2));
  CHECK(std::abs(t.at(0.0)[1] - t.at(1.0)[1]) < 1e-14);
}

TEST_CASE("flat metric: the pair does not move") {
  MetricField m = metric_catalog("flat_torus", params(2));
  Rng rng(1);
  CVec xi = random_cvec(rng, 2), eta = random_cvec(rng, 2);
  auto traj = transport_pair(m, Curve::default_loop(m.chart()), xi, eta, 64);
  CHECK(traj.size() == 65);
  CHECK((traj.back().xi - xi).norm() == 0.0);
  CHECK((traj.back().eta - eta).norm() == 0.0);
  CHECK(pairing_invariance_check(traj) == 0.0);
}

TEST_CASE("Kahler metrics: twisted transport is Chern transport") {
  for (auto m : {metric_catalog("fubini_study_local", params(2)),
                 metric_catalog("perturbed_torus", params(2, {{"eps", 0.2}}, "kahler")),
                 metric_catalog("product", params(2))}) {
    Rng rng(2);
    CVec xi = random_cvec(rng, 2), eta = random_cvec(rng, 2);
    Curve c = Curve::default_loop(m.chart());
    auto a = transport_pair(m, c, xi, eta, 128, TransportMode::twisted);
    auto b = transport_pair(m, c, xi, eta, 128, TransportMode::plain);
    CHECK(endpoint_diff(a, b) < 1e-12);
    CHECK(endpoint_diff(a, transport_pair(m, c, xi, eta, 4)) > 0.0);
  }
}

TEST_CASE("pairing is invariant on every catalog metric") {
  // g-unit initial vectors, so the drift is relative to the size of the pairing.
  Rng rng(3);
  for (const auto& m : standard_catalog()) {
    const int n = m.dim();
    Curve c = Curve::default_loop(m.chart());
    const CMat g0 = m.value(c.at(c.s0));
    CVec xi = random_cvec(rng, n), eta = random_cvec(rng, n);
    xi /= g_norm(g0, xi);
    eta /= g_norm(g0, eta);
    auto traj = transport_pair(m, c, xi, eta, 512);
    const double drift = pairing_invariance_check(traj);
    CAPTURE(m.name());
    MESSAGE(m.name() << " drift " << drift);
    CHECK(drift < 1e-8);
  }
}

TEST_CASE("RK4 endpoint error is fourth order") {
  for (auto m : {metric_catalog("hopf_round", params(2)),
                 metric_catalog("perturbed_torus", params(2, {{"eps", 0.2}}, "generic"))}) {
    Rng rng(4);
    CVec xi = random_cvec(rng, 2), eta = random_cvec(rng, 2);
    Curve c = Curve::default_loop(m.chart());
    auto a = transport_pair(m, c, xi, eta, 64), b = transport_pair(m, c, xi, eta, 128),
         r = transport_pair(m, c, xi, eta, 256);
    const double ratio = endpoint_diff(a, b) / endpoint_diff(b, r);
    CAPTURE(m.name());
    CHECK(ratio > 13);
    CHECK(ratio < 19);
  }
}

TEST_CASE("Hopf loop: xi rotates while the pairing is kept") {
  MetricField m = metric_catalog("hopf_round", params(2));
  CVec xi(2), eta(2);
  xi << 1.0, 0.0;
  eta << cplx(0.3, 0.2), 1.0;
  Curve c = Curve::default_loop(m.chart());
  auto tw = transport_pair(m, c, xi, eta, 512);
  CHECK(pairing_invariance_check(tw) < 1e-8);
  double moved = 0;
  for (const auto& st : tw) moved = std::max(moved, (st.xi - xi).norm());
  CHECK(moved > 0.1);
  // Negative control: plain Chern transport of xi breaks the pairing.
  auto bad = transport_pair(m, c, xi, eta, 512, TransportMode::plain_xi);
  MESSAGE("untwisted xi drift " << pairing_invariance_check(bad));
  CHECK(pairing_invariance_check(bad) > 1e-3);
}

TEST_CASE("zero set of the flowed product is invariant") {
  FlowState s = ansatz_state("product", 2, {1.0, 1.0});
  for (int k = 0; k < 10; ++k) s = flow_step(s, 0.005, FlowVariant::hcf);
  MetricField m = s.field();
  CVec xi(2), eta(2);
  xi << 1.0, 0.0;
  eta << cplx(0.4, -0.1), cplx(0.7, 0.3);
  Curve c = Curve::default_loop(m.chart());
  ZeroSetReport r = zero_set_invariance_check(m, c, xi, eta);
  CHECK(r.max_value < 1e-7);
  ZeroSetReport p = zero_set_invariance_check(m, c, xi, eta, 512, TransportMode::plain);
  MESSAGE("plain transport max " << p.max_value);

  CVec bad(2);
  bad << 0.0, 1.0;
  CHECK_THROWS_AS(zero_set_invariance_check(m, c, bad, bad), PreconditionError);
}

TEST_CASE("leaving the chart aborts with the partial trajectory") {
  MetricField m = metric_catalog("hopf_round", params(2));
  CVec u(2), w(2);
  u << 1.0, 0.0;
  w << 0.0, 1.0;
  Point center{cplx(1.0, 0), cplx(0, 0)};
  Curve c = Curve::circle(center, 0.8, u, w);  // passes |z| < 0.5
  try {
    transport_pair(m, c, u, w, 64);
    FAIL("expected a transport error");
  } catch (const TransportAborted& e) {
    CHECK(!e.partial().empty());
    CHECK(e.partial().size() < 65);
  }
}

TEST_CASE("trajectory CSV has one row per state") {
  MetricField m = metric_catalog("hopf_round", params(2));
  CVec xi(2), eta(2);
  xi << 1.0, 0.0;
  eta << 0.0, 1.0;
  auto traj = transport_pair(m, Curve::default_loop(m.chart()), xi, eta, 8);
  std::ostringstream os;
  write_trajectory_csv(os, traj);
  const std::string s = os.str();
  CHECK(std::count(s.begin(), s.end(), '\n') == 10);
  CHECK(s.rfind("s,re_xi0,im_xi0,re_xi1,im_xi1,re_eta0", 0) == 0);
}
