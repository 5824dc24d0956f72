#include "hcf/metrics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "hcf/errors.hpp"

namespace hcf {

namespace {

constexpr double kPi = std::numbers::pi;

double norm(const Point& x) {
  double s = 0;
  for (auto v : x) s += std::norm(v);
  return std::sqrt(s);
}

}  // namespace

double min_eigenvalue(const CMat& g) {
  CMat h = 0.5 * (g + g.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool Chart::contains(const Point& x) const {
  if (static_cast<int>(x.size()) != dim()) return false;
  for (auto v : x)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  if (annulus) {
    const double r = norm(x);
    if (!(r > annulus->first && r < annulus->second)) return false;
  }
  return true;
}

Point Chart::sample(Rng& rng) const {
  const int n = dim();
  Point x(n);
  if (annulus) {
    // Direction uniform on the sphere, radius with a margin inside the annulus.
    CVec d = random_cvec(rng, n);
    d /= d.norm();
    const double lo = annulus->first * 1.1, hi = annulus->second * 0.95;
    const double r = uniform(rng, lo, hi);
    for (int k = 0; k < n; ++k) x[k] = r * d(k);
    return x;
  }
  for (int k = 0; k < n; ++k) {
    if (coords[k] == Coord::Periodic) {
      const double a = uniform01(rng), b = uniform01(rng);
      x[k] = {a, b};
    } else {
      const double r = sample_radius * std::sqrt(uniform01(rng));
      const double th = 2 * kPi * uniform01(rng);
      x[k] = std::polar(r, th);
    }
  }
  return x;
}

std::string Chart::describe() const {
  std::ostringstream os;
  if (annulus) {
    os << "annulus " << annulus->first << " < |z| < " << annulus->second << " in C^" << dim();
    return os.str();
  }
  for (int k = 0; k < dim(); ++k) {
    if (k) os << " x ";
    os << (coords[k] == Coord::Periodic ? "C/(Z+iZ)" : "C");
  }
  return os.str();
}

Chart Chart::torus(int n) {
  Chart c;
  c.coords.assign(n, Coord::Periodic);
  return c;
}

Chart Chart::affine(int n, double radius) {
  Chart c;
  c.coords.assign(n, Coord::Free);
  c.sample_radius = radius;
  return c;
}

Chart Chart::hopf_annulus(int n, double r_min, double r_max) {
  Chart c;
  c.coords.assign(n, Coord::Free);
  c.annulus = std::make_pair(r_min, r_max);
  return c;
}

MetricField::MetricField(std::string name, Chart chart, MetricFlags flags, Evaluator eval, int max_order)
    : name_(std::move(name)), chart_(std::move(chart)), flags_(flags), eval_(std::move(eval)), max_order_(max_order) {}

JetMatrix MetricField::jets(const Point& x, int order) const {
  if (!chart_.contains(x)) throw DomainError("point outside chart of " + name_);
  if (order > max_order_) throw StructuralError("metric " + name_ + " supports jets up to order " + std::to_string(max_order_));
  return eval_(x, order);
}

CMat MetricField::value(const Point& x) const {
  JetMatrix j = jets(x, 0);
  const int n = dim();
  CMat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) g(i, k) = j(i, k).value();
  return g;
}

MetricField MetricField::plus(const MetricField& k, double s) const {
  if (k.dim() != dim()) throw StructuralError("metric perturbation dimension mismatch");
  auto base = *this;
  auto pert = k;
  Evaluator ev = [base, pert, s](const Point& x, int order) {
    JetMatrix a = base.eval_(x, order);
    JetMatrix b = pert.eval_(x, order);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i] * cplx(s);
    return a;
  };
  std::ostringstream os;
  os << name_ << "+(" << s << ")*" << k.name_;
  MetricFlags f;
  return MetricField(os.str(), chart_, f, ev, std::min(max_order_, k.max_order_));
}

MetricField from_spec(const MetricSpec& spec, bool check_positive) {
  const int n = spec.n;
  if (static_cast<int>(spec.entries.size()) != n * n) throw ConfigError("metric spec needs n*n entries");
  if (spec.chart.dim() != n) throw ConfigError("metric spec chart dimension mismatch");
  auto entries = spec.entries;
  MetricField::Evaluator ev = [entries, n](const Point& x, int order) {
    JetEvaluator je(x, order);
    JetMatrix g(n, ComplexJet());
    for (int i = 0; i < n; ++i) {
      // Diagonal entries are real functions; enforce the reality symmetry exactly.
      const ComplexJet& d = je(entries[i * n + i]);
      g(i, i) = (d + d.conjugate()) * cplx(0.5);
      for (int j = i + 1; j < n; ++j) {
        g(i, j) = je(entries[i * n + j]);
        g(j, i) = g(i, j).conjugate();
      }
    }
    return g;
  };
  MetricField m(spec.name, spec.chart, spec.flags, ev);

  Rng rng(0x5eed);
  for (int s = 0; check_positive && s < 100; ++s) {
    Point x = spec.chart.sample(rng);
    CMat g = m.value(x);
    if (!g.allFinite()) throw ConfigError(spec.name + ": metric not finite at a sample point");
    if (!(min_eigenvalue(g) > kMetricFloor)) throw ConfigError(spec.name + ": metric not positive definite on its domain");
  }
  return m;
}

MetricField random_hermitian_field(const Chart& chart, Rng& rng) {
  const int n = chart.dim();
  MetricSpec s;
  s.n = n;
  s.name = "random_hermitian";
  s.chart = chart;
  CMat a = random_hermitian(rng, n), d = random_hermitian(rng, n);
  s.entries.assign(n * n, Expr(0.0));
  std::vector<CMat> c;
  for (int m = 0; m < n; ++m) c.push_back(0.5 * random_cmat(rng, n, n));
  Expr r2 = norm_sq(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Expr e = Expr(a(i, j)) + Expr(0.5 * d(i, j)) * r2;
      for (int m = 0; m < n; ++m)
        e = e + Expr(c[m](i, j)) * Expr::z(m) + Expr(std::conj(c[m](j, i))) * Expr::zbar(m);
      s.entries[i * n + j] = e;
    }
  return from_spec(s, false);
}

namespace {

std::vector<Expr> identity_entries(int n) {
  std::vector<Expr> e(n * n, Expr(0.0));
  for (int i = 0; i < n; ++i) e[i * n + i] = Expr(1.0);
  return e;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

int param_n(const MetricParams& p, int lo, int hi, const std::string& name) {
  require(p.n >= lo && p.n <= hi, name + ": n must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return p.n;
}

// theta = w.z + conj(w).zbar = 2 Re(w.z); w = pi (kx - i ky) gives 2 pi (kx.x + ky.y).
Expr phase(const std::vector<cplx>& w) {
  Expr t(0.0);
  for (std::size_t k = 0; k < w.size(); ++k) t = t + Expr(w[k]) * Expr::z(k) + Expr(std::conj(w[k])) * Expr::zbar(k);
  return t;
}

MetricSpec perturbed_torus(const MetricParams& p) {
  const int n = param_n(p, 1, 2, "perturbed_torus");
  const double eps = p.get("eps", 0.2);
  require(eps >= 0 && eps < 0.3, "perturbed_torus: eps must be in [0, 0.3)");
  std::string mode = p.mode.empty() ? "generic" : p.mode;
  require(mode == "generic" || mode == "kahler", "perturbed_torus: mode must be generic or kahler");
  MetricSpec s;
  s.n = n;
  s.chart = Chart::torus(n);
  s.flags.kahler = (mode == "kahler" || n == 1);
  s.name = "perturbed_torus(" + std::to_string(n) + "," + mode + ")";
  if (s.flags.kahler) {
    // Potential |z|^2 + eps sum_m cos(theta_m) / (2|w_m|^2).
    std::vector<std::vector<cplx>> modes;
    if (n == 1) {
      modes = {{kPi}, {cplx(0, -kPi)}};
    } else {
      modes = {{kPi, cplx(0, -kPi)}, {cplx(0, -kPi), kPi}};
    }
    s.entries = identity_entries(n);
    for (const auto& w : modes) {
      double w2 = 0;
      for (auto c : w) w2 += std::norm(c);
      Expr c = cos(phase(w));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          s.entries[i * n + j] = s.entries[i * n + j] - Expr(eps * w[i] * std::conj(w[j]) / (2 * w2)) * c;
    }
  } else {
    s.entries = identity_entries(2);
    s.entries[0] = Expr(1.0) + Expr(eps) * cos(Expr(2 * kPi) * re_z(1));
    s.entries[3] = Expr(1.0) + Expr(eps) * sin(Expr(2 * kPi) * im_z(0));
    s.entries[1] = Expr(eps / 2) * exp(Expr(cplx(0, kPi)) * (Expr::z(0) + Expr::zbar(0)));
    s.entries[2] = conj(s.entries[1]);
  }
  return s;
}

MetricSpec fubini_study(const MetricParams& p) {
  const int n = param_n(p, 1, 2, "fubini_study_local");
  MetricSpec s;
  s.n = n;
  s.name = "fubini_study_local(" + std::to_string(n) + ")";
  s.chart = Chart::affine(n, 1.5);
  s.flags.kahler = true;
  s.flags.griffiths_nonneg = true;
  Expr r = Expr(1.0) + norm_sq(n);
  if (n == 1) {
    s.entries = {pow(r, -2)};
  } else {
    // d dbar log(1 + |z|^2)
    s.entries.assign(n * n, Expr(0.0));
    Expr inv = pow(r, -1), inv2 = pow(r, -2);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Expr e = -(Expr::zbar(i) * Expr::z(j) * inv2);
        s.entries[i * n + j] = (i == j) ? inv + e : e;
      }
  }
  return s;
}

MetricSpec hopf(int n, double a, double b, const std::string& name) {
  require(a > 0 && a + b > 0, name + ": need a > 0 and a + b > 0");
  MetricSpec s;
  s.n = n;
  s.name = name;
  s.chart = Chart::hopf_annulus(n);
  s.flags.kahler = (n == 1);
  if (b == 0) s.flags.griffiths_nonneg = true;
  Expr r2 = norm_sq(n);
  Expr inv = pow(r2, -1), inv2 = pow(r2, -2);
  s.entries.assign(n * n, Expr(0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Expr e = Expr(b) * Expr::zbar(i) * Expr::z(j) * inv2;
      if (b == 0) e = Expr(0.0);
      s.entries[i * n + j] = (i == j) ? Expr(a) * inv + e : e;
    }
  return s;
}

MetricSpec product(const MetricParams&) {
  MetricSpec s;
  s.n = 2;
  s.name = "product(flat_torus,fubini_study_local)";
  s.chart.coords = {Chart::Coord::Periodic, Chart::Coord::Free};
  s.chart.sample_radius = 1.5;
  s.flags.kahler = true;
  s.flags.griffiths_nonneg = true;
  s.entries = {Expr(1.0), Expr(0.0), Expr(0.0), pow(Expr(1.0) + Expr::z(1) * Expr::zbar(1), -2)};
  return s;
}

}  // namespace

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = {
      {"flat_torus", "n in 1..4", "g = identity on C^n/(Z+iZ)^n"},
      {"perturbed_torus", "n in 1..2, eps in [0,0.3) (default 0.2), mode generic|kahler",
       "identity plus a periodic trigonometric Hermitian perturbation; kahler mode comes from a potential"},
      {"fubini_study_local", "n in 1..2", "(1+|z|^2)^-2 for n=1, d dbar log(1+|z|^2) for n=2, affine chart"},
      {"hopf_round", "n in 1..4", "delta/|z|^2 on the annulus 0.5<|z|<2"},
      {"hopf_family", "n in 1..4, a > 0, a + b > 0", "a delta/|z|^2 + b zbar_i z_j/|z|^4 on the annulus"},
      {"product", "none (n = 2)", "flat C/(Z+iZ) times fubini_study_local(1)"},
  };
  return entries;
}

MetricSpec catalog_spec(const std::string& name, const MetricParams& p) {
  if (name == "flat_torus") {
    const int n = param_n(p, 1, kMaxDim, name);
    MetricSpec s;
    s.n = n;
    s.name = "flat_torus(" + std::to_string(n) + ")";
    s.chart = Chart::torus(n);
    s.entries = identity_entries(n);
    s.flags.kahler = true;
    s.flags.griffiths_nonneg = true;
    return s;
  }
  if (name == "perturbed_torus") return perturbed_torus(p);
  if (name == "fubini_study_local") return fubini_study(p);
  if (name == "hopf_round") {
    const int n = param_n(p, 1, kMaxDim, name);
    return hopf(n, 1.0, 0.0, "hopf_round(" + std::to_string(n) + ")");
  }
  if (name == "hopf_family") {
    const int n = param_n(p, 1, kMaxDim, name);
    const double a = p.get("a", 1.0), b = p.get("b", 0.0);
    std::ostringstream os;
    os << "hopf_family(" << n << "," << a << "," << b << ")";
    MetricSpec s = hopf(n, a, b, os.str());
    s.flags.griffiths_nonneg.reset();
    return s;
  }
  if (name == "product") return product(p);
  throw ConfigError("unknown metric: " + name);
}

MetricField metric_catalog(const std::string& name, const MetricParams& params) {
  return from_spec(catalog_spec(name, params));
}

std::vector<MetricField> standard_catalog() {
  auto P = [](int n, std::map<std::string, double> v = {}, std::string mode = "") {
    MetricParams p;
    p.n = n;
    p.values = std::move(v);
    p.mode = std::move(mode);
    return p;
  };
  return {
      metric_catalog("flat_torus", P(1)),
      metric_catalog("flat_torus", P(2)),
      metric_catalog("perturbed_torus", P(1, {{"eps", 0.2}})),
      metric_catalog("perturbed_torus", P(2, {{"eps", 0.2}}, "generic")),
      metric_catalog("perturbed_torus", P(2, {{"eps", 0.2}}, "kahler")),
      metric_catalog("fubini_study_local", P(1)),
      metric_catalog("fubini_study_local", P(2)),
      metric_catalog("hopf_round", P(2)),
      metric_catalog("hopf_family", P(2, {{"a", 1.0}, {"b", 0.5}})),
      metric_catalog("product", P(2)),
  };
}

}  // namespace hcf
