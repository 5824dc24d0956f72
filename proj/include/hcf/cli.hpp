#pragma once

// The hcflab command line: config loading, the verify/certify/flow/transport
// commands and their JSON reports.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hcf/flow.hpp"
#include "hcf/metrics.hpp"
#include "hcf/positivity.hpp"
#include "hcf/transport.hpp"

namespace hcf {

const char* version();

// Exit codes.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitBlowup = 3;

struct VerifyOptions {
  int points = 100;
  std::uint64_t seed = 1;
  double tol_curvature = 1e-12;
  double tol_bianchi = 1e-9;
  double tol_variation = 1e-6;
  double tol_evolution = 1e-10;
  double variation_eps = 1e-4;
};

struct IdentityResult {
  std::string name;
  double max_residual = 0;
  double tolerance = 0;
  bool pass = false;
};

struct VerifyReport {
  std::string metric;
  int points = 0;
  std::vector<IdentityResult> identities;
  bool pass = false;
  double wall_seconds = 0;
};

// Identity suite at random chart points: curvature type of Omega, the four Bianchi
// identities, the variation formulas (relative) and the curvature type of the
// evolution right-hand side.
// Spectral radius of g^{-1} k at x (1 if zero); verify divides the variation step by it.
double g_relative_size(const MetricField& g, const MetricField& k, const Point& x);

VerifyReport verify_metric(const MetricField& m, const VerifyOptions& opts);

struct CertifyOptions {
  std::string tensor = "omega";  // omega or omega_prime (g tensor g)
  int points = 10;
  double tol = 1e-8;
  GriffithsOptions griffiths;
};

struct CertifyReport {
  std::string metric, tensor;
  double min_value = 0;
  std::string verdict;  // positive, nonnegative or negative
  std::vector<Point> points;
  std::vector<GriffithsReport> per_point;
};

CertifyReport certify_metric(const MetricField& m, const CertifyOptions& opts, std::uint64_t seed);

struct TransportOptions {
  std::string curve = "loop";  // loop or circle
  Point center;                // circle
  double radius = 0.3;
  CVec u, w;
  int steps = 512;
  TransportMode mode = TransportMode::twisted;
  CVec xi, eta;         // empty: first basis vector and a seeded random vector
  bool normalize = true;  // scale xi, eta to g-unit length at the start
  bool zero_set = false;  // require a zero pair and report the Griffiths maximum
  double flow_t0 = 0;     // flow the metric (ansatz, HCF) to t0 first
  double flow_dt = 1e-3;
  double tol_pairing = 1e-8;
  double tol_zero = 1e-7;
};

struct RunConfig {
  std::string command;
  std::string metric = "flat_torus";
  MetricParams params;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  bool quiet = false;
  VerifyOptions verify;
  FlowConfig flow;
  bool auto_backend = true;  // flow.backend: auto picks grid on tori, ansatz otherwise
  CertifyOptions certify;
  TransportOptions transport;
};

// Parses a YAML config (JSON is accepted as a subset). Unknown keys are errors.
RunConfig parse_config(const std::string& text, const std::string& command);
RunConfig load_config(const std::string& path, const std::string& command);
// Normalized config: every field with its effective value. Feeding it back
// through parse_config reproduces the run.
nlohmann::json config_json(const RunConfig& cfg);

nlohmann::json to_json(const VerifyReport& r);
nlohmann::json to_json(const CertifyReport& r);

// Entry point shared by tools/hcflab; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hcf
