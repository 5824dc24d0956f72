#include "hcf/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <yaml-cpp/yaml.h>

#include "hcf/curvature_ops.hpp"
#include "hcf/errors.hpp"
#include "hcf/geometry.hpp"
#include "hcf/random.hpp"

#ifndef HCF_VERSION
#define HCF_VERSION "unknown"
#endif

namespace hcf {

using nlohmann::json;

const char* version() { return HCF_VERSION; }

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double relative(double err, double scale) { return scale > 0 ? err / scale : err; }

}  // namespace

// Spectral radius of g^{-1} k at x, so that eps / g_relative_size is a step of size eps measured in g.
double g_relative_size(const MetricField& g, const MetricField& k, const Point& x) {
  const CMat a = g.value(x).inverse() * k.value(x);
  const double r = a.eigenvalues().cwiseAbs().maxCoeff();
  return r > 0 ? r : 1.0;
}

namespace {

}  // namespace

// ---------------------------------------------------------------------------
// verify and certify

VerifyReport verify_metric(const MetricField& m, const VerifyOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  VerifyReport r;
  r.metric = m.name();
  r.points = opts.points;
  const char* names[] = {"curvature_type", "bianchi_first_1", "bianchi_first_2", "bianchi_second_1",
                         "bianchi_second_2", "variation_nabla", "variation_torsion", "variation_omega",
                         "evolution_curvature_type"};
  const double tols[] = {opts.tol_curvature, opts.tol_bianchi,   opts.tol_bianchi,   opts.tol_bianchi,
                         opts.tol_bianchi,   opts.tol_variation, opts.tol_variation, opts.tol_variation,
                         opts.tol_evolution};
  double worst[9] = {};
  Rng rng(opts.seed);
  MetricField k = random_hermitian_field(m.chart(), rng);
  for (int p = 0; p < opts.points; ++p) {
    const Point x = m.chart().sample(rng);
    PointGeometry f = compute_frame(m, x, 2);
    BianchiResiduals b = bianchi_residuals(f);
    VariationErrors v = variation_check(m, k, x, opts.variation_eps / g_relative_size(m, k, x));
    CurvatureTensor e = evolution_rhs(m, x);
    const double vals[] = {check_curvature_type(f.omega),
                           b.first_1,
                           b.first_2,
                           b.second_1,
                           b.second_2,
                           relative(v.dNabla_err, v.dNabla_scale),
                           relative(v.dTorsion_err, v.dTorsion_scale),
                           relative(v.dOmega_err, v.dOmega_scale),
                           relative(check_curvature_type(e), max_abs(e))};
    for (int i = 0; i < 9; ++i) worst[i] = std::max(worst[i], vals[i]);
  }
  r.pass = true;
  for (int i = 0; i < 9; ++i) {
    const bool ok = worst[i] <= tols[i];
    r.identities.push_back({names[i], worst[i], tols[i], ok});
    r.pass = r.pass && ok;
  }
  r.wall_seconds = seconds_since(t0);
  return r;
}

CertifyReport certify_metric(const MetricField& m, const CertifyOptions& opts, std::uint64_t seed) {
  if (opts.tensor != "omega" && opts.tensor != "omega_prime")
    throw ConfigError("certify: tensor must be omega or omega_prime");
  CertifyReport r;
  r.metric = m.name();
  r.tensor = opts.tensor;
  r.min_value = INFINITY;
  Rng rng(seed);
  GriffithsOptions g = opts.griffiths;
  g.seed = seed;
  for (int p = 0; p < opts.points; ++p) {
    const Point x = m.chart().sample(rng);
    PointGeometry f = compute_frame(m, x, 0);
    const Tensor<4> u = opts.tensor == "omega" ? Tensor<4>(f.omega) : Tensor<4>(metric_square(f.g));
    GriffithsReport rep = min_griffiths(u, f.g, g);
    r.min_value = std::min(r.min_value, rep.min_value);
    r.points.push_back(x);
    r.per_point.push_back(std::move(rep));
  }
  r.verdict = r.min_value > opts.tol ? "positive" : r.min_value >= -opts.tol ? "nonnegative" : "negative";
  return r;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

json vec_json(const CVec& v) {
  json a = json::array();
  for (int k = 0; k < v.size(); ++k) a.push_back(cjson(v(k)));
  return a;
}

json point_json(const Point& x) {
  json a = json::array();
  for (auto z : x) a.push_back(cjson(z));
  return a;
}

std::string mode_name(TransportMode m) {
  switch (m) {
    case TransportMode::twisted: return "twisted";
    case TransportMode::plain: return "plain";
    case TransportMode::plain_xi: return "plain_xi";
  }
  return "twisted";
}

}  // namespace

json to_json(const VerifyReport& r) {
  json ids = json::array();
  for (const auto& i : r.identities)
    ids.push_back({{"identity", i.name}, {"max_residual", i.max_residual}, {"tolerance", i.tolerance}, {"pass", i.pass}});
  return {{"metric", r.metric}, {"points", r.points}, {"identities", ids}, {"pass", r.pass},
          {"wall_seconds", r.wall_seconds}};
}

json to_json(const CertifyReport& r) {
  json pts = json::array();
  for (std::size_t k = 0; k < r.points.size(); ++k) {
    const auto& g = r.per_point[k];
    json p = {{"x", point_json(r.points[k])},
              {"min_value", g.min_value},
              {"argmin_xi", vec_json(g.argmin_xi)},
              {"argmin_eta", vec_json(g.argmin_eta)},
              {"method", g.method},
              {"restarts", g.restarts}};
    if (g.certified_grid_resolution) p["certified_grid_resolution"] = *g.certified_grid_resolution;
    pts.push_back(p);
  }
  return {{"metric", r.metric}, {"tensor", r.tensor}, {"min_value", r.min_value}, {"verdict", r.verdict},
          {"points", pts}};
}

json config_json(const RunConfig& c) {
  json metric = {{"name", c.metric}, {"n", c.params.n}, {"params", c.params.values}};
  if (!c.params.mode.empty()) metric["mode"] = c.params.mode;
  json j = {{"metric", metric}, {"seed", c.seed}, {"out", c.out_dir}, {"quiet", c.quiet}};
  if (c.command == "verify") {
    const auto& v = c.verify;
    j["verify"] = {{"points", v.points},           {"tol_curvature", v.tol_curvature},
                   {"tol_bianchi", v.tol_bianchi}, {"tol_variation", v.tol_variation},
                   {"tol_evolution", v.tol_evolution}, {"variation_eps", v.variation_eps}};
  } else if (c.command == "flow") {
    const auto& f = c.flow;
    j["flow"] = {{"backend", c.auto_backend ? std::string("auto") : to_string(f.backend)},
                 {"variant", to_string(f.variant)},
                 {"dt", f.dt},
                 {"t_end", f.t_end},
                 {"grid_size", f.grid_size},
                 {"cadence", f.cadence},
                 {"monitor_points", f.monitor.points},
                 {"griffiths_restarts", f.monitor.griffiths.restarts},
                 {"griffiths_grid", f.monitor.griffiths.grid_resolution},
                 {"snapshot_every", f.snapshot_every}};
  } else if (c.command == "certify") {
    const auto& s = c.certify;
    j["certify"] = {{"tensor", s.tensor},
                    {"points", s.points},
                    {"tol", s.tol},
                    {"restarts", s.griffiths.restarts},
                    {"max_iter", s.griffiths.max_iter},
                    {"grid_resolution", s.griffiths.grid_resolution}};
  } else if (c.command == "transport") {
    const auto& t = c.transport;
    json tj = {{"curve", t.curve},         {"steps", t.steps},           {"mode", mode_name(t.mode)},
               {"normalize", t.normalize}, {"zero_set", t.zero_set},     {"flow_t0", t.flow_t0},
               {"flow_dt", t.flow_dt},     {"tol_pairing", t.tol_pairing}, {"tol_zero", t.tol_zero}};
    if (t.curve == "circle") {
      tj["center"] = point_json(t.center);
      tj["radius"] = t.radius;
      if (t.u.size()) tj["u"] = vec_json(t.u);
      if (t.w.size()) tj["w"] = vec_json(t.w);
    }
    if (t.xi.size()) tj["xi"] = vec_json(t.xi);
    if (t.eta.size()) tj["eta"] = vec_json(t.eta);
    j["transport"] = tj;
  }
  return j;
}

// ---------------------------------------------------------------------------
// Config parsing

namespace {

void check_keys(const YAML::Node& n, const std::string& where, const std::set<std::string>& allowed) {
  if (!n) return;
  if (!n.IsMap()) throw ConfigError(where + " must be a mapping");
  for (const auto& kv : n) {
    const std::string k = kv.first.as<std::string>();
    if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
  }
}

template <class T>
void read(const YAML::Node& n, const std::string& key, T& out) {
  if (!n || !n[key]) return;
  try {
    out = n[key].as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("bad value for '" + key + "'");
  }
}

cplx read_complex(const YAML::Node& n) {
  if (n.IsScalar()) return n.as<double>();
  if (n.IsSequence() && n.size() == 2) return {n[0].as<double>(), n[1].as<double>()};
  throw ConfigError("complex numbers are written as x or [re, im]");
}

CVec read_cvec(const YAML::Node& n) {
  if (!n.IsSequence()) throw ConfigError("vectors are sequences of complex numbers");
  CVec v(n.size());
  for (std::size_t k = 0; k < n.size(); ++k) v(k) = read_complex(n[k]);
  return v;
}

TransportMode parse_mode(const std::string& s) {
  if (s == "twisted") return TransportMode::twisted;
  if (s == "plain") return TransportMode::plain;
  if (s == "plain_xi") return TransportMode::plain_xi;
  throw ConfigError("unknown transport mode: " + s);
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& command) {
  RunConfig c;
  c.command = command;
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config is not valid YAML: ") + e.what());
  }
  if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  try {
    check_keys(root, "config", {"metric", "seed", "out", "quiet", "verify", "flow", "certify", "transport"});
    if (YAML::Node m = root["metric"]) {
      if (m.IsScalar()) {
        c.metric = m.as<std::string>();
      } else {
        check_keys(m, "metric", {"name", "n", "params", "mode"});
        read(m, "name", c.metric);
        read(m, "n", c.params.n);
        read(m, "mode", c.params.mode);
        if (YAML::Node p = m["params"]) {
          if (!p.IsMap()) throw ConfigError("metric.params must be a mapping");
          for (const auto& kv : p) c.params.values[kv.first.as<std::string>()] = kv.second.as<double>();
        }
      }
    }
    read(root, "seed", c.seed);
    read(root, "out", c.out_dir);
    read(root, "quiet", c.quiet);

    const YAML::Node v = root["verify"];
    check_keys(v, "verify", {"points", "tol_curvature", "tol_bianchi", "tol_variation", "tol_evolution", "variation_eps"});
    read(v, "points", c.verify.points);
    read(v, "tol_curvature", c.verify.tol_curvature);
    read(v, "tol_bianchi", c.verify.tol_bianchi);
    read(v, "tol_variation", c.verify.tol_variation);
    read(v, "tol_evolution", c.verify.tol_evolution);
    read(v, "variation_eps", c.verify.variation_eps);

    const YAML::Node f = root["flow"];
    check_keys(f, "flow", {"backend", "variant", "dt", "t_end", "grid_size", "cadence", "monitor_points",
                           "griffiths_restarts", "griffiths_grid", "snapshot_every"});
    std::string backend = "auto", variant = to_string(c.flow.variant);
    read(f, "backend", backend);
    read(f, "variant", variant);
    c.auto_backend = backend == "auto";
    if (!c.auto_backend) c.flow.backend = parse_backend(backend);
    c.flow.variant = parse_variant(variant);
    read(f, "dt", c.flow.dt);
    read(f, "t_end", c.flow.t_end);
    read(f, "grid_size", c.flow.grid_size);
    read(f, "cadence", c.flow.cadence);
    read(f, "monitor_points", c.flow.monitor.points);
    read(f, "griffiths_restarts", c.flow.monitor.griffiths.restarts);
    read(f, "griffiths_grid", c.flow.monitor.griffiths.grid_resolution);
    read(f, "snapshot_every", c.flow.snapshot_every);

    const YAML::Node s = root["certify"];
    check_keys(s, "certify", {"tensor", "points", "tol", "restarts", "max_iter", "grid_resolution"});
    read(s, "tensor", c.certify.tensor);
    read(s, "points", c.certify.points);
    read(s, "tol", c.certify.tol);
    read(s, "restarts", c.certify.griffiths.restarts);
    read(s, "max_iter", c.certify.griffiths.max_iter);
    read(s, "grid_resolution", c.certify.griffiths.grid_resolution);

    const YAML::Node t = root["transport"];
    check_keys(t, "transport", {"curve", "center", "radius", "u", "w", "steps", "mode", "xi", "eta", "normalize",
                                "zero_set", "flow_t0", "flow_dt", "tol_pairing", "tol_zero"});
    read(t, "curve", c.transport.curve);
    if (c.transport.curve != "loop" && c.transport.curve != "circle")
      throw ConfigError("transport.curve must be loop or circle");
    if (t && t["center"]) {
      CVec ctr = read_cvec(t["center"]);
      c.transport.center.assign(ctr.data(), ctr.data() + ctr.size());
    }
    read(t, "radius", c.transport.radius);
    if (t && t["u"]) c.transport.u = read_cvec(t["u"]);
    if (t && t["w"]) c.transport.w = read_cvec(t["w"]);
    if (t && t["xi"]) c.transport.xi = read_cvec(t["xi"]);
    if (t && t["eta"]) c.transport.eta = read_cvec(t["eta"]);
    read(t, "steps", c.transport.steps);
    std::string mode = "twisted";
    read(t, "mode", mode);
    c.transport.mode = parse_mode(mode);
    read(t, "normalize", c.transport.normalize);
    read(t, "zero_set", c.transport.zero_set);
    read(t, "flow_t0", c.transport.flow_t0);
    read(t, "flow_dt", c.transport.flow_dt);
    read(t, "tol_pairing", c.transport.tol_pairing);
    read(t, "tol_zero", c.transport.tol_zero);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (c.verify.points < 1 || c.certify.points < 1 || c.transport.steps < 1)
    throw ConfigError("point and step counts must be positive");
  return c;
}

RunConfig load_config(const std::string& path, const std::string& command) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str(), command);
}

// ---------------------------------------------------------------------------
// Commands

namespace {

namespace fs = std::filesystem;

struct Outputs {
  fs::path dir;
  std::vector<std::string> files;

  std::string path(const std::string& name) {
    files.push_back(name);
    return (dir / name).string();
  }
};

void write_json(const std::string& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path);
  os << j.dump(2) << "\n";
}

void write_manifest(const RunConfig& cfg, Outputs& out, int code, double wall) {
  json m = {{"tool", "hcflab"},
            {"version", version()},
            {"command", cfg.command},
            {"seed", cfg.seed},
            {"config", config_json(cfg)},
            {"outputs", out.files},
            {"exit_code", code},
            {"wall_seconds", wall}};
  write_json((out.dir / (cfg.command + ".manifest.json")).string(), m);
}

int cmd_verify(const RunConfig& cfg, Outputs& out, std::ostream& os) {
  MetricField m = metric_catalog(cfg.metric, cfg.params);
  VerifyOptions v = cfg.verify;
  v.seed = cfg.seed;
  VerifyReport r = verify_metric(m, v);
  write_json(out.path("verify.json"), to_json(r));
  if (!cfg.quiet) {
    for (const auto& i : r.identities)
      os << (i.pass ? "pass " : "FAIL ") << i.name << " max " << i.max_residual << " tol " << i.tolerance << "\n";
  }
  return r.pass ? kExitPass : kExitFailure;
}

int cmd_certify(const RunConfig& cfg, Outputs& out, std::ostream& os) {
  MetricField m = metric_catalog(cfg.metric, cfg.params);
  CertifyReport r = certify_metric(m, cfg.certify, cfg.seed);
  write_json(out.path("certify.json"), to_json(r));
  if (!cfg.quiet) os << r.tensor << " on " << r.metric << ": min " << r.min_value << ", " << r.verdict << "\n";
  return r.verdict == "negative" ? kExitFailure : kExitPass;
}

int cmd_flow(const RunConfig& cfg, Outputs& out, std::ostream& os) {
  FlowConfig f = cfg.flow;
  f.metric = cfg.metric;
  f.params = cfg.params;
  f.seed = cfg.seed;
  if (cfg.auto_backend) {
    const Chart chart = metric_catalog(cfg.metric, cfg.params).chart();
    const bool torus = std::all_of(chart.coords.begin(), chart.coords.end(),
                                   [](Chart::Coord c) { return c == Chart::Coord::Periodic; });
    f.backend = torus ? FlowBackend::grid : FlowBackend::ansatz;
  }
  f.csv_path = out.path("flow.csv");
  if (f.snapshot_every > 0) f.snapshot_path = (out.dir / "snapshot").string();
  FlowRun run = run_flow(f);
  if (f.snapshot_every > 0) {
    std::vector<std::string> snaps;
    for (const auto& e : fs::directory_iterator(out.dir))
      if (e.path().extension() == ".hcf1") snaps.push_back(e.path().filename().string());
    std::sort(snaps.begin(), snaps.end());
    out.files.insert(out.files.end(), snaps.begin(), snaps.end());
  }
  double min_g = INFINITY;
  for (const auto& r : run.records) min_g = std::min(min_g, r.min_griffiths);
  json rep = {{"metric", cfg.metric},
              {"variant", to_string(f.variant)},
              {"backend", to_string(f.backend)},
              {"records", run.records.size()},
              {"steps", run.steps},
              {"rejected_steps", run.rejected},
              {"t_final", run.records.empty() ? 0.0 : run.records.back().t},
              {"min_griffiths", min_g},
              {"blowup", run.blowup},
              {"message", run.message}};
  write_json(out.path("flow.json"), rep);
  if (!cfg.quiet) {
    os << "flow " << to_string(f.variant) << " on " << cfg.metric << ": " << run.steps << " steps to t = "
       << rep["t_final"].get<double>() << ", min_griffiths " << min_g << "\n";
    if (run.blowup) os << "blowup: " << run.message << "\n";
  }
  return run.blowup ? kExitBlowup : kExitPass;
}

int cmd_transport(const RunConfig& cfg, Outputs& out, std::ostream& os) {
  const TransportOptions& t = cfg.transport;
  MetricField m;
  if (t.flow_t0 > 0) {
    FlowState s = initial_state(cfg.metric, cfg.params, FlowBackend::ansatz);
    while (s.t < t.flow_t0 - 1e-12) s = flow_step(s, std::min(t.flow_dt, t.flow_t0 - s.t), FlowVariant::hcf);
    m = s.field();
  } else {
    m = metric_catalog(cfg.metric, cfg.params);
  }
  const int n = m.dim();
  Curve curve;
  if (t.curve == "loop") {
    curve = Curve::default_loop(m.chart());
  } else {
    if (static_cast<int>(t.center.size()) != n) throw ConfigError("transport.center must have n entries");
    CVec u = t.u, w = t.w;
    if (!u.size()) u = CVec::Unit(n, 0);
    if (!w.size()) w = n > 1 ? CVec(CVec::Unit(n, 1)) : CVec(cplx(0, 1) * CVec::Unit(n, 0));
    curve = Curve::circle(t.center, t.radius, u, w);
  }
  Rng rng(cfg.seed);
  CVec xi = t.xi.size() ? t.xi : CVec(CVec::Unit(n, 0));
  CVec eta = t.eta.size() ? t.eta : random_cvec(rng, n);
  if (xi.size() != n || eta.size() != n) throw ConfigError("transport.xi and eta must have n entries");
  if (t.normalize) {
    const CMat g0 = m.value(curve.at(curve.s0));
    xi /= g_norm(g0, xi);
    eta /= g_norm(g0, eta);
  }
  std::vector<TransportState> traj;
  double max_zero = 0;
  if (t.zero_set) {
    ZeroSetReport z = zero_set_invariance_check(m, curve, xi, eta, t.steps, t.mode);
    traj = std::move(z.trajectory);
    max_zero = z.max_value;
  } else {
    traj = transport_pair(m, curve, xi, eta, t.steps, t.mode);
  }
  const double drift = pairing_invariance_check(traj);
  {
    std::ofstream csv(out.path("transport.csv"), std::ios::binary);
    write_trajectory_csv(csv, traj);
  }
  // Only the twisted transport carries the invariants; the controls are reported.
  bool pass = true;
  if (t.mode == TransportMode::twisted) {
    pass = drift <= t.tol_pairing;
    if (t.zero_set) pass = pass && max_zero <= t.tol_zero;
  }
  json rep = {{"metric", m.name()},     {"mode", mode_name(t.mode)}, {"steps", t.steps},
              {"pairing_drift", drift}, {"zero_set", t.zero_set},    {"max_griffiths", max_zero},
              {"pass", pass}};
  write_json(out.path("transport.json"), rep);
  if (!cfg.quiet) {
    os << "transport (" << mode_name(t.mode) << ") on " << m.name() << ": pairing drift " << drift;
    if (t.zero_set) os << ", max |Omega| on the pair " << max_zero;
    os << "\n";
  }
  return pass ? kExitPass : kExitFailure;
}

int cmd_list(std::ostream& os) {
  for (const auto& e : catalog_entries()) os << e.name << "\n  params: " << e.params << "\n  " << e.description << "\n";
  return kExitPass;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hermitian curvature flow laboratory", "hcflab"};
  std::string command, config_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  bool quiet = false;
  app.add_option("command", command, "verify | flow | certify | transport | list-metrics")
      ->required()
      ->check(CLI::IsMember({"verify", "flow", "certify", "transport", "list-metrics"}));
  app.add_option("--config", config_path, "YAML config file");
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--tol", tol, "override the command's tolerances");
  app.add_flag("--quiet", quiet, "no summary on stdout");
  app.set_version_flag("--version", std::string(version()));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitPass;
    }
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  const auto t0 = std::chrono::steady_clock::now();
  if (command == "list-metrics") return cmd_list(out);

  RunConfig cfg;
  Outputs outputs;
  try {
    cfg = config_path.empty() ? parse_config("", command) : load_config(config_path, command);
    if (seed) cfg.seed = *seed;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (quiet) cfg.quiet = true;
    if (tol) {
      if (!(*tol >= 0)) throw ConfigError("--tol must be non-negative");
      cfg.verify.tol_curvature = cfg.verify.tol_bianchi = cfg.verify.tol_variation = cfg.verify.tol_evolution = *tol;
      cfg.certify.tol = *tol;
      cfg.transport.tol_pairing = *tol;
    }
    outputs.dir = cfg.out_dir;
    fs::create_directories(outputs.dir);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const fs::filesystem_error& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  }

  int code = kExitFailure;
  try {
    if (command == "verify") code = cmd_verify(cfg, outputs, out);
    if (command == "certify") code = cmd_certify(cfg, outputs, out);
    if (command == "flow") code = cmd_flow(cfg, outputs, out);
    if (command == "transport") code = cmd_transport(cfg, outputs, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    code = kExitUsage;
  } catch (const BlowupError& e) {
    err << "blowup: " << e.what() << "\n";
    code = kExitBlowup;
  } catch (const DegenerateMetricError& e) {
    err << "blowup: " << e.what() << "\n";
    code = kExitBlowup;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    code = kExitFailure;
  }
  try {
    write_manifest(cfg, outputs, code, seconds_since(t0));
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    if (code == kExitPass) code = kExitFailure;
  }
  return code;
}

}  // namespace hcf
