#include "hcf/flow.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <Eigen/QR>

#include "hcf/errors.hpp"
#include "hcf/random.hpp"

namespace hcf {

std::string to_string(FlowVariant v) { return v == FlowVariant::hcf ? "hcf" : "chern_ricci"; }
std::string to_string(FlowBackend b) { return b == FlowBackend::grid ? "grid" : "ansatz"; }

FlowVariant parse_variant(const std::string& s) {
  if (s == "hcf") return FlowVariant::hcf;
  if (s == "chern_ricci") return FlowVariant::chern_ricci;
  throw ConfigError("unknown flow variant: " + s);
}

FlowBackend parse_backend(const std::string& s) {
  if (s == "grid") return FlowBackend::grid;
  if (s == "ansatz") return FlowBackend::ansatz;
  throw ConfigError("unknown flow backend: " + s);
}

// ---------------------------------------------------------------------------
// Ansatz families

MetricField AnsatzFamily::field(const std::vector<double>& c) const {
  if (c.size() != basis.size()) throw StructuralError(name + ": wrong number of ansatz coefficients");
  MetricSpec s;
  s.n = n;
  s.chart = chart;
  s.flags.kahler = kahler;
  std::ostringstream os;
  os << name << "[";
  for (std::size_t k = 0; k < c.size(); ++k) os << (k ? "," : "") << c[k];
  os << "]";
  s.name = os.str();
  s.entries.assign(n * n, Expr(0.0));
  for (std::size_t k = 0; k < c.size(); ++k)
    for (int e = 0; e < n * n; ++e) s.entries[e] = s.entries[e] + Expr(c[k]) * basis[k][e];
  return from_spec(s, false);
}

CMat AnsatzFamily::value(const std::vector<double>& c, const Point& x) const {
  CMat g = CMat::Zero(n, n);
  for (std::size_t k = 0; k < c.size(); ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) += c[k] * basis[k][i * n + j].eval(x);
  return g;
}

std::shared_ptr<const AnsatzFamily> ansatz_family(const std::string& name, int n) {
  auto f = std::make_shared<AnsatzFamily>();
  f->name = name;
  f->n = n;
  auto zeros = [n] { return std::vector<Expr>(n * n, Expr(0.0)); };
  if (name == "hopf") {
    if (n < 1 || n > kMaxDim) throw ConfigError("hopf ansatz: n must be in 1..4");
    Expr r2 = norm_sq(n);
    std::vector<Expr> b1 = zeros(), b2 = zeros();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) b1[i * n + j] = pow(r2, -1);
        b2[i * n + j] = Expr::zbar(i) * Expr::z(j) * pow(r2, -2);
      }
    f->basis = {b1, b2};
    f->chart = Chart::hopf_annulus(n);
    f->representative.assign(n, cplx(0.0));
    if (n == 1) {
      f->representative[0] = cplx(0.6, 0.8);
    } else {
      f->representative[0] = 0.6;
      f->representative[1] = cplx(0, 0.8);
    }
    f->kahler = (n == 1);
  } else if (name == "fubini_study") {
    MetricParams p;
    p.n = n;
    MetricSpec s = catalog_spec("fubini_study_local", p);
    f->basis = {s.entries};
    f->chart = s.chart;
    f->representative = {cplx(0.3, 0.2), cplx(-0.1, 0.4)};
    f->representative.resize(n);
    f->kahler = true;
  } else if (name == "product") {
    if (n != 2) throw ConfigError("product ansatz is two-dimensional");
    MetricSpec s = catalog_spec("product", MetricParams{});
    std::vector<Expr> b1 = zeros(), b2 = zeros();
    b1[0] = Expr(1.0);
    b2[3] = s.entries[3];
    f->basis = {b1, b2};
    f->chart = s.chart;
    f->representative = {cplx(0.25, 0.5), cplx(0.3, -0.2)};
    f->kahler = true;
  } else if (name == "flat") {
    if (n < 1 || n > kMaxDim) throw ConfigError("flat ansatz: n must be in 1..4");
    std::vector<Expr> b1 = zeros();
    for (int i = 0; i < n; ++i) b1[i * n + i] = Expr(1.0);
    f->basis = {b1};
    f->chart = Chart::torus(n);
    f->representative.assign(n, cplx(0.3, 0.1));
    f->kahler = true;
  } else {
    throw ConfigError("unknown ansatz family: " + name);
  }
  return f;
}

// ---------------------------------------------------------------------------
// States

std::vector<int> FlowState::dims() const {
  if (backend == FlowBackend::ansatz) return {};
  return std::vector<int>(2 * n, N);
}

MetricField FlowState::field(int table_order) const {
  if (backend == FlowBackend::grid) return spectral_metric(grid(), samples, table_order);
  return family->field(coeffs);
}

double FlowState::min_metric_eigenvalue() const {
  if (backend == FlowBackend::ansatz) return min_eigenvalue(family->value(coeffs, family->representative));
  double m = INFINITY;
  for (const auto& g : samples) m = std::min(m, min_eigenvalue(g));
  return m;
}

int default_grid_size(int n) { return n == 1 ? 32 : 8; }

FlowState grid_state(const MetricField& m, int N) {
  const int n = m.dim();
  for (auto c : m.chart().coords)
    if (c != Chart::Coord::Periodic) throw ConfigError(m.name() + ": grid backend needs a periodic chart");
  PeriodicGrid grid(n, N);
  FlowState s;
  s.backend = FlowBackend::grid;
  s.n = n;
  s.N = N;
  s.samples.reserve(grid.size());
  for (std::size_t p = 0; p < grid.size(); ++p) {
    CMat g = m.value(grid.point(p));
    s.samples.push_back(0.5 * (g + g.adjoint()));
  }
  return s;
}

FlowState ansatz_state(const std::string& family, int n, std::vector<double> coeffs) {
  FlowState s;
  s.backend = FlowBackend::ansatz;
  s.n = n;
  s.family = ansatz_family(family, n);
  if (coeffs.size() != s.family->basis.size()) throw ConfigError(family + ": wrong number of ansatz coefficients");
  s.coeffs = std::move(coeffs);
  if (!(s.min_metric_eigenvalue() > kMetricFloor)) throw ConfigError(family + ": initial ansatz metric not positive");
  return s;
}

FlowState initial_state(const std::string& metric, const MetricParams& params, FlowBackend backend, int N) {
  if (backend == FlowBackend::grid) {
    MetricField m = metric_catalog(metric, params);
    return grid_state(m, N > 0 ? N : default_grid_size(m.dim()));
  }
  if (metric == "hopf_round") return ansatz_state("hopf", params.n, {1.0, 0.0});
  if (metric == "hopf_family") {
    catalog_spec(metric, params);  // parameter validation
    return ansatz_state("hopf", params.n, {params.get("a", 1.0), params.get("b", 0.0)});
  }
  if (metric == "fubini_study_local") {
    catalog_spec(metric, params);
    return ansatz_state("fubini_study", params.n, {1.0});
  }
  if (metric == "product") return ansatz_state("product", 2, {1.0, 1.0});
  if (metric == "flat_torus") {
    catalog_spec(metric, params);
    return ansatz_state("flat", params.n, {1.0});
  }
  throw ConfigError(metric + ": no ansatz family; use the grid backend");
}

// ---------------------------------------------------------------------------
// Right-hand side and stepping

CMat pointwise_rhs(const PointGeometry& f, FlowVariant v) {
  if (v == FlowVariant::hcf) return flow_rhs_pointwise(f);
  CMat r = -first_ricci(f);
  return 0.5 * (r + r.adjoint());
}

namespace {

constexpr double kEscapeTol = 1e-8;

std::vector<double> project_ansatz(const AnsatzFamily& fam, const CMat& R, double* escape) {
  const int n = fam.n;
  const int K = static_cast<int>(fam.basis.size());
  Eigen::MatrixXd A(2 * n * n, K);
  Eigen::VectorXd b(2 * n * n);
  for (int k = 0; k < K; ++k) {
    std::vector<double> e(K, 0.0);
    e[k] = 1.0;
    CMat B = fam.value(e, fam.representative);
    for (int i = 0; i < n * n; ++i) {
      A(2 * i, k) = B(i / n, i % n).real();
      A(2 * i + 1, k) = B(i / n, i % n).imag();
    }
  }
  for (int i = 0; i < n * n; ++i) {
    b(2 * i) = R(i / n, i % n).real();
    b(2 * i + 1) = R(i / n, i % n).imag();
  }
  Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
  const double rn = b.norm();
  *escape = rn > 0 ? (A * c - b).norm() / rn : 0.0;
  return std::vector<double>(c.data(), c.data() + K);
}

FlowState advance(const FlowState& s, const FlowRhs& r, double h) {
  FlowState o = s;
  o.t = s.t + h;
  if (s.backend == FlowBackend::grid) {
    for (std::size_t p = 0; p < o.samples.size(); ++p) o.samples[p] += h * r.grid[p];
  } else {
    for (std::size_t k = 0; k < o.coeffs.size(); ++k) o.coeffs[k] += h * r.coeffs[k];
  }
  return o;
}

void require_floor(const FlowState& s, const char* where) {
  const double lam = s.min_metric_eigenvalue();
  if (!(lam > kMetricFloor)) {
    std::ostringstream os;
    os << "metric floor violated " << where << " at t = " << s.t << " (min eigenvalue " << lam << ")";
    throw BlowupError(os.str());
  }
}

FlowState rk4(const FlowState& s, double dt, FlowVariant v) {
  FlowRhs k1 = flow_rhs(s, v);
  FlowState s2 = advance(s, k1, dt / 2);
  require_floor(s2, "in an RK4 stage");
  FlowRhs k2 = flow_rhs(s2, v);
  FlowState s3 = advance(s, k2, dt / 2);
  require_floor(s3, "in an RK4 stage");
  FlowRhs k3 = flow_rhs(s3, v);
  FlowState s4 = advance(s, k3, dt);
  require_floor(s4, "in an RK4 stage");
  FlowRhs k4 = flow_rhs(s4, v);

  FlowState o = s;
  o.t = s.t + dt;
  if (s.backend == FlowBackend::grid) {
    for (std::size_t p = 0; p < o.samples.size(); ++p) {
      CMat g = s.samples[p] + (dt / 6) * (k1.grid[p] + 2.0 * k2.grid[p] + 2.0 * k3.grid[p] + k4.grid[p]);
      o.samples[p] = 0.5 * (g + g.adjoint());
    }
  } else {
    for (std::size_t k = 0; k < o.coeffs.size(); ++k)
      o.coeffs[k] = s.coeffs[k] + dt / 6 * (k1.coeffs[k] + 2 * k2.coeffs[k] + 2 * k3.coeffs[k] + k4.coeffs[k]);
  }
  require_floor(o, "after the step");
  return o;
}

}  // namespace

FlowRhs flow_rhs(const FlowState& s, FlowVariant v) {
  FlowRhs r;
  if (s.backend == FlowBackend::ansatz) {
    MetricField m = s.family->field(s.coeffs);
    PointGeometry f = compute_frame(m, s.family->representative, 0);
    CMat R = pointwise_rhs(f, v);
    r.coeffs = project_ansatz(*s.family, R, &r.escape);
    if (r.escape > kEscapeTol) {
      std::ostringstream os;
      os << s.family->name << ": RHS left the ansatz family at t = " << s.t << " (relative residual " << r.escape
         << ")";
      throw AnsatzEscapeError(os.str());
    }
    return r;
  }
  MetricField m = s.field(2);
  PeriodicGrid grid = s.grid();
  r.grid.resize(grid.size());
  for (std::size_t p = 0; p < grid.size(); ++p) r.grid[p] = pointwise_rhs(compute_frame(m, grid.point(p), 0), v);
  return r;
}

FlowState flow_step(const FlowState& s, double dt, FlowVariant v) {
  if (!(dt > 0)) throw PreconditionError("flow_step needs dt > 0");
  return rk4(s, dt, v);
}

// ---------------------------------------------------------------------------
// Monitors

std::vector<Point> monitor_points(const FlowState& s, int count) {
  if (s.backend == FlowBackend::ansatz) return {s.family->representative};
  PeriodicGrid grid = s.grid();
  const std::size_t total = grid.size();
  const std::size_t k = std::min<std::size_t>(std::max(count, 1), total);
  std::vector<Point> pts;
  for (std::size_t i = 0; i < k; ++i) {
    // Odd multiplier: a permutation of the lattice, spreading the subset over all axes.
    const std::size_t idx = (i * 2654435761ULL) % total;
    pts.push_back(grid.point(idx));
  }
  return pts;
}

FlowMonitorRecord monitor(const FlowState& s, const MonitorOptions& opts, bool accepted) {
  FlowMonitorRecord r;
  r.t = s.t;
  r.step_accepted = accepted;
  r.min_metric_eigenvalue = s.min_metric_eigenvalue();
  MetricField m = s.field(3);
  r.min_griffiths = INFINITY;
  for (const Point& x : monitor_points(s, opts.points)) {
    PointGeometry f = compute_frame(m, x, 1);
    r.bianchi_max = std::max(r.bianchi_max, bianchi_residuals(f).max());
    r.torsion_norm = std::max(r.torsion_norm, torsion_norm(f));
    r.min_griffiths = std::min(r.min_griffiths, min_griffiths(f.omega, f.g, opts.griffiths).min_value);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Driver

FlowRun run_flow(const FlowConfig& cfg) {
  if (!(cfg.dt > 0)) throw ConfigError("flow: dt must be positive");
  if (!(cfg.t_end >= 0)) throw ConfigError("flow: t_end must be non-negative");
  if (cfg.cadence < 1) throw ConfigError("flow: cadence must be >= 1");
  MonitorOptions mopts = cfg.monitor;
  mopts.griffiths.seed = cfg.seed;

  FlowRun run;
  FlowState s = initial_state(cfg.metric, cfg.params, cfg.backend, cfg.grid_size);

  auto record = [&](const FlowState& st, bool accepted) {
    run.records.push_back(monitor(st, mopts, accepted));
    run.states.push_back(st);
    if (cfg.snapshot_every > 0 && !cfg.snapshot_path.empty() &&
        (run.records.size() - 1) % static_cast<std::size_t>(cfg.snapshot_every) == 0) {
      char suffix[32];
      std::snprintf(suffix, sizeof suffix, "-%06d.hcf1", run.steps);
      write_snapshot(cfg.snapshot_path + suffix, st);
    }
  };
  auto flush_csv = [&] {
    if (cfg.csv_path.empty()) return;
    std::ofstream os(cfg.csv_path, std::ios::binary);
    if (!os) throw ConfigError("cannot write " + cfg.csv_path);
    write_monitor_csv(os, run.records);
  };

  record(s, true);
  double dt = cfg.dt;
  bool clean = true;
  const double t_tol = 1e-12 * std::max(1.0, cfg.t_end);
  try {
    while (s.t < cfg.t_end - t_tol) {
      const double h = std::min(dt, cfg.t_end - s.t);
      FlowState next = flow_step(s, h, cfg.variant);
      if (next.min_metric_eigenvalue() < 0.5 * s.min_metric_eigenvalue()) {
        dt /= 2;
        clean = false;
        ++run.rejected;
        if (dt < 1e-12) throw BlowupError("time step underflow while halving");
        continue;
      }
      s = std::move(next);
      ++run.steps;
      const bool last = !(s.t < cfg.t_end - t_tol);
      if (run.steps % cfg.cadence == 0 || last) {
        record(s, clean);
        clean = true;
      }
    }
  } catch (const BlowupError& e) {
    run.blowup = true;
    run.message = e.what();
  }
  flush_csv();
  return run;
}

void write_monitor_csv(std::ostream& os, const std::vector<FlowMonitorRecord>& records) {
  os << "t,min_griffiths,bianchi_max,min_metric_eig,torsion_norm,step_accepted\n";
  char buf[256];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", r.t, r.min_griffiths, r.bianchi_max,
                  r.min_metric_eigenvalue, r.torsion_norm, r.step_accepted ? 1 : 0);
    os << buf;
  }
}

std::string monitor_csv(const std::vector<FlowMonitorRecord>& records) {
  std::ostringstream os;
  write_monitor_csv(os, records);
  return os.str();
}

// ---------------------------------------------------------------------------
// Snapshots

namespace {

template <class T>
void put(std::ostream& os, T v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto* b = reinterpret_cast<unsigned char*>(&v);
    std::reverse(b, b + sizeof(T));
  }
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw ConfigError("snapshot truncated");
  if constexpr (std::endian::native == std::endian::big) {
    auto* b = reinterpret_cast<unsigned char*>(&v);
    std::reverse(b, b + sizeof(T));
  }
  return v;
}

}  // namespace

void write_snapshot(const std::string& path, const FlowState& s) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write " + path);
  os.write("HCF1", 4);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(s.n));
  std::vector<int> dims = s.dims();
  put<std::uint32_t>(os, static_cast<std::uint32_t>(dims.size()));
  for (int d : dims) put<std::uint32_t>(os, static_cast<std::uint32_t>(d));
  put<double>(os, s.t);
  std::vector<CMat> out = s.backend == FlowBackend::grid
                              ? s.samples
                              : std::vector<CMat>{s.family->value(s.coeffs, s.family->representative)};
  for (const auto& g : out)
    for (int i = 0; i < s.n; ++i)
      for (int j = 0; j < s.n; ++j) {
        put<double>(os, g(i, j).real());
        put<double>(os, g(i, j).imag());
      }
}

FlowState read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot read " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "HCF1", 4) != 0) throw ConfigError(path + ": not an HCF1 snapshot");
  FlowState s;
  s.n = static_cast<int>(get<std::uint32_t>(is));
  const std::uint32_t nd = get<std::uint32_t>(is);
  std::size_t count = 1;
  for (std::uint32_t k = 0; k < nd; ++k) {
    const int d = static_cast<int>(get<std::uint32_t>(is));
    if (k > 0 && d != s.N) throw ConfigError(path + ": unequal lattice dimensions");
    s.N = d;
    count *= static_cast<std::size_t>(d);
  }
  s.backend = nd > 0 ? FlowBackend::grid : FlowBackend::ansatz;
  s.t = get<double>(is);
  s.samples.assign(count, CMat(s.n, s.n));
  for (auto& g : s.samples)
    for (int i = 0; i < s.n; ++i)
      for (int j = 0; j < s.n; ++j) {
        const double re = get<double>(is);
        const double im = get<double>(is);
        g(i, j) = cplx(re, im);
      }
  return s;
}

// ---------------------------------------------------------------------------
// Evolution consistency

namespace {

ConsistencyReport compare_on_pairs(const Tensor<4>& D, const Tensor<4>& E, const CMat& g, int pairs,
                                   std::uint64_t seed) {
  Rng rng(seed);
  const int n = g.rows();
  ConsistencyReport r;
  for (int k = 0; k < pairs; ++k) {
    CVec xi = random_cvec(rng, n), eta = random_cvec(rng, n);
    xi /= g_norm(g, xi);
    eta /= g_norm(g, eta);
    const cplx d = evaluate(D, xi, xi, eta, eta), e = evaluate(E, xi, xi, eta, eta);
    r.residual = std::max(r.residual, std::abs(d - e));
    r.rhs_norm = std::max(r.rhs_norm, std::abs(e));
  }
  r.relative = r.rhs_norm > 0 ? r.residual / r.rhs_norm : r.residual;
  return r;
}

Tensor<4> central_difference(const CurvatureTensor& plus, const CurvatureTensor& minus, double dt) {
  return cplx(1.0 / (2 * dt)) * (Tensor<4>(plus) - Tensor<4>(minus));
}

}  // namespace

ConsistencyReport evolution_consistency_check(const FlowState& s, double dt, const Point& x, int pairs,
                                              std::uint64_t seed) {
  if (!(dt > 0)) throw PreconditionError("evolution_consistency_check needs dt > 0");
  if (s.backend == FlowBackend::grid) return evolution_consistency_check(s.field(4), dt, x, pairs, seed);
  FlowState sp = rk4(s, dt, FlowVariant::hcf);
  FlowState sm = rk4(s, -dt, FlowVariant::hcf);
  MetricField m = s.field();
  Tensor<4> D = central_difference(compute_frame(sp.field(), x, 0).omega, compute_frame(sm.field(), x, 0).omega, dt);
  return compare_on_pairs(D, evolution_rhs(m, x), m.value(x), pairs, seed);
}

ConsistencyReport evolution_consistency_check(const MetricField& m, double dt, const Point& x, int pairs,
                                              std::uint64_t seed) {
  if (!(dt > 0)) throw PreconditionError("evolution_consistency_check needs dt > 0");
  MetricField R = rhs_field(m);
  MetricField mp = m.plus(R, dt), mm = m.plus(R, -dt);
  for (const MetricField* f : {&mp, &mm})
    if (!(min_eigenvalue(f->value(x)) > kMetricFloor)) throw BlowupError("metric floor violated in the differencing window");
  Tensor<4> D = central_difference(compute_frame(mp, x, 0).omega, compute_frame(mm, x, 0).omega, dt);
  return compare_on_pairs(D, evolution_rhs(m, x), m.value(x), pairs, seed);
}

MetricField rhs_field(const MetricField& m, FlowVariant v) {
  const int n = m.dim();
  MetricField::Evaluator ev = [m, n, v](const Point& x, int order) {
    detail::JetFrame f = detail::jet_frame(m, x, order);
    JetMatrix R(n, ComplexJet(x, order));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        ComplexJet& r = R(i, j);
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) {
            if (v == FlowVariant::hcf) {
              r.add_product(f.g_inv(a, b), f.omega(a, b, i, j), -1.0);
            } else {
              r.add_product(f.g_inv(a, b), f.omega(i, j, a, b), -1.0);
            }
          }
        if (v == FlowVariant::hcf) {
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
              for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q) {
                  ComplexJet gg = f.g_inv(a, b) * f.g_inv(p, q);
                  r.add_product(gg, f.t_low(p, a, j) * f.t_bar_low(q, b, i), -0.5);
                }
        }
      }
    JetMatrix H(n, ComplexJet());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) H(i, j) = (R(i, j) + R(j, i).conjugate()) * cplx(0.5);
    return H;
  };
  return MetricField("rhs(" + m.name() + ")", m.chart(), MetricFlags{}, ev, std::max(0, m.max_order() - 2));
}

// ---------------------------------------------------------------------------
// Barrier

BarrierProbe barrier_probe(const FlowState& s, double eps0, double K, const MonitorOptions& opts) {
  if (!(eps0 >= 0)) throw PreconditionError("barrier_probe needs eps0 >= 0");
  BarrierProbe b;
  b.epsilon = eps0 * std::exp(K * s.t);
  b.min_metric_eigenvalue = s.min_metric_eigenvalue();
  b.min_value = b.min_griffiths = INFINITY;
  MetricField m = s.field(2);
  for (const Point& x : monitor_points(s, opts.points)) {
    PointGeometry f = compute_frame(m, x, 0);
    Tensor<4> u = Tensor<4>(f.omega) + cplx(b.epsilon) * Tensor<4>(metric_square(f.g));
    b.min_value = std::min(b.min_value, min_griffiths(u, f.g, opts.griffiths).min_value);
    b.min_griffiths = std::min(b.min_griffiths, min_griffiths(f.omega, f.g, opts.griffiths).min_value);
  }
  return b;
}

}  // namespace hcf
