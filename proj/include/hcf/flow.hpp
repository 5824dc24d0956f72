#pragma once

// Time integration of dg/dt = -S - Q (and of the Chern-Ricci comparison flow
// dg/dt = -Ric1) on periodic grids and on finite-dimensional ansatz families.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hcf/curvature_ops.hpp"
#include "hcf/geometry.hpp"
#include "hcf/metrics.hpp"
#include "hcf/positivity.hpp"
#include "hcf/spectral.hpp"

namespace hcf {

enum class FlowVariant { hcf, chern_ricci };
enum class FlowBackend { grid, ansatz };

std::string to_string(FlowVariant v);
std::string to_string(FlowBackend b);
FlowVariant parse_variant(const std::string& s);
FlowBackend parse_backend(const std::string& s);

// g = sum_k c_k B_k with fixed Hermitian basis fields B_k and real c_k.
struct AnsatzFamily {
  std::string name;  // hopf, fubini_study, product, flat
  int n = 0;
  std::vector<std::vector<Expr>> basis;  // row-major n*n entries per basis element
  Chart chart;
  Point representative;  // where the RHS is evaluated and projected
  bool kahler = false;

  MetricField field(const std::vector<double>& c) const;
  CMat value(const std::vector<double>& c, const Point& x) const;
};

// hopf: (a, b) -> a delta/|z|^2 + b zbar_i z_j/|z|^4; fubini_study: c g_FS;
// product (n = 2): diag(c1, c2 g_FS); flat: c delta on the torus.
std::shared_ptr<const AnsatzFamily> ansatz_family(const std::string& name, int n);

struct FlowState {
  double t = 0;
  FlowBackend backend = FlowBackend::ansatz;
  int n = 0;
  // grid backend
  int N = 0;
  std::vector<CMat> samples;
  // ansatz backend
  std::shared_ptr<const AnsatzFamily> family;
  std::vector<double> coeffs;

  // Real lattice dimensions (2n entries of N); empty for an ansatz state.
  std::vector<int> dims() const;
  PeriodicGrid grid() const { return PeriodicGrid(n, N); }
  // The metric at this time; grid states carry jet tables up to table_order.
  MetricField field(int table_order = 2) const;
  double min_metric_eigenvalue() const;
};

// Samples a periodic metric on the lattice. The chart must be a torus.
FlowState grid_state(const MetricField& m, int N);
FlowState ansatz_state(const std::string& family, int n, std::vector<double> coeffs);
// Initial state for a catalog metric. N = 0 picks the default lattice (32 for n = 1, 8 for n = 2).
FlowState initial_state(const std::string& metric, const MetricParams& params, FlowBackend backend, int N = 0);
int default_grid_size(int n);

// Pointwise RHS (Hermitian): -S - Q or -Ric1.
CMat pointwise_rhs(const PointGeometry& f, FlowVariant v);

struct FlowRhs {
  std::vector<CMat> grid;      // per lattice point
  std::vector<double> coeffs;  // ansatz rates
  double escape = 0;           // ansatz projection residual / |RHS|
};

// Throws AnsatzEscapeError if the ansatz projection residual exceeds 1e-8 |RHS|.
FlowRhs flow_rhs(const FlowState& s, FlowVariant v);

// One classical RK4 step. Throws BlowupError if any stage violates the metric floor.
FlowState flow_step(const FlowState& s, double dt, FlowVariant v);

struct FlowMonitorRecord {
  double t = 0;
  double min_griffiths = 0;
  double bianchi_max = 0;
  double min_metric_eigenvalue = 0;
  double torsion_norm = 0;
  bool step_accepted = true;
};

struct MonitorOptions {
  int points = 16;  // lattice points sampled by the grid monitors
  GriffithsOptions griffiths{8, 300, 1, 32};
};

// Monitor points of a state: the representative point, or an evenly strided lattice subset.
std::vector<Point> monitor_points(const FlowState& s, int count);
FlowMonitorRecord monitor(const FlowState& s, const MonitorOptions& opts, bool accepted = true);

struct FlowConfig {
  std::string metric = "hopf_round";
  MetricParams params;
  FlowBackend backend = FlowBackend::ansatz;
  FlowVariant variant = FlowVariant::hcf;
  double dt = 1e-3;
  double t_end = 0.1;
  int grid_size = 0;
  int cadence = 10;  // steps between records
  MonitorOptions monitor;
  std::string csv_path;
  std::string snapshot_path;  // <path>-<step>.hcf1, at every snapshot_every-th record
  int snapshot_every = 0;     // records between snapshots
  std::uint64_t seed = 1;
};

struct FlowRun {
  std::vector<FlowState> states;  // one per record
  std::vector<FlowMonitorRecord> records;
  bool blowup = false;
  std::string message;
  int steps = 0;
  int rejected = 0;
};

// Halves dt when the smallest metric eigenvalue drops by more than half in a step;
// stops at blowup keeping the records so far.
FlowRun run_flow(const FlowConfig& cfg);

void write_monitor_csv(std::ostream& os, const std::vector<FlowMonitorRecord>& records);
std::string monitor_csv(const std::vector<FlowMonitorRecord>& records);

// Binary snapshot: "HCF1", uint32 n, uint32 ndims, uint32 dims[ndims], float64 t,
// then the samples as row-major n x n complex doubles. Little-endian.
void write_snapshot(const std::string& path, const FlowState& s);
FlowState read_snapshot(const std::string& path);

struct ConsistencyReport {
  double residual = 0;  // max over pairs of |D(xi,xibar,eta,etabar) - E(...)|
  double rhs_norm = 0;  // max over pairs of |E(...)|
  double relative = 0;
};

// Central difference of Omega(x) over t -/+ dt (RK4 steps of the ansatz) against
// evolution_rhs at t. HCF only.
ConsistencyReport evolution_consistency_check(const FlowState& s, double dt, const Point& x, int pairs = 64,
                                              std::uint64_t seed = 1);
// Same for a general field, differencing Omega along g +/- dt (-S - Q) with the
// RHS lifted to a field through jets.
ConsistencyReport evolution_consistency_check(const MetricField& m, double dt, const Point& x, int pairs = 64,
                                              std::uint64_t seed = 1);

// The field -S - Q (or -Ric1) of m, with jets of order up to max_order - 2.
MetricField rhs_field(const MetricField& m, FlowVariant v = FlowVariant::hcf);

struct BarrierProbe {
  double epsilon = 0;
  double min_value = 0;      // min of (Omega + eps g (x) g) over g-unit pairs and monitor points
  double min_griffiths = 0;  // same with eps = 0
  double min_metric_eigenvalue = 0;
};

BarrierProbe barrier_probe(const FlowState& s, double eps0, double K, const MonitorOptions& opts = {});

}  // namespace hcf
