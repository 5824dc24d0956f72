#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hcf/expr.hpp"
#include "hcf/jets.hpp"
#include "hcf/random.hpp"
#include "hcf/tensor.hpp"

namespace hcf {

using JetMatrix = Tensor<2, ComplexJet>;

// Smallest admissible eigenvalue of g.
inline constexpr double kMetricFloor = 1e-8;

// Coordinate domain. Periodic coordinates live on C/(Z + iZ); free coordinates
// are unbounded and sampled in a disc; an optional annulus constrains |z|.
struct Chart {
  enum class Coord { Periodic, Free };
  std::vector<Coord> coords;
  double sample_radius = 1.0;  // for free coordinates
  std::optional<std::pair<double, double>> annulus;

  int dim() const { return static_cast<int>(coords.size()); }
  bool contains(const Point& x) const;
  Point sample(Rng& rng) const;
  std::string describe() const;

  static Chart torus(int n);
  static Chart affine(int n, double radius);
  static Chart hopf_annulus(int n, double r_min = 0.5, double r_max = 2.0);
};

struct MetricFlags {
  bool kahler = false;
  std::optional<bool> griffiths_nonneg;
};

// A Hermitian metric on a chart, given by a jet-valued evaluator.
class MetricField {
 public:
  using Evaluator = std::function<JetMatrix(const Point&, int)>;

  MetricField() = default;
  MetricField(std::string name, Chart chart, MetricFlags flags, Evaluator eval, int max_order = kMaxOrder);

  const std::string& name() const { return name_; }
  int dim() const { return chart_.dim(); }
  const Chart& chart() const { return chart_; }
  const MetricFlags& flags() const { return flags_; }
  int max_order() const { return max_order_; }

  // Jets of g_{i jbar} at x; throws DomainError outside the chart.
  JetMatrix jets(const Point& x, int order) const;
  // g(i, j) = g_{i jbar}.
  CMat value(const Point& x) const;

  // g + s k where k is another field on the same chart.
  MetricField plus(const MetricField& k, double s) const;

 private:
  std::string name_;
  Chart chart_;
  MetricFlags flags_;
  Evaluator eval_;
  int max_order_ = kMaxOrder;
};

struct MetricSpec {
  std::string name;
  int n = 1;
  std::vector<Expr> entries;  // row-major g_{i jbar}; only i <= j is read
  Chart chart;
  MetricFlags flags;
};

// Build a field from closed forms; checks Hermitian positive definiteness on 100
// sample points and throws ConfigError if it fails. Perturbation fields that are
// only Hermitian pass check_positive = false.
MetricField from_spec(const MetricSpec& spec, bool check_positive = true);

// A smooth Hermitian (not necessarily definite) field: constant, linear and
// |z|^2 parts with random coefficients. Used as a variation direction.
MetricField random_hermitian_field(const Chart& chart, Rng& rng);

struct MetricParams {
  int n = 2;
  std::map<std::string, double> values;
  std::string mode;

  double get(const std::string& key, double fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
  }
};

MetricSpec catalog_spec(const std::string& name, const MetricParams& params);
MetricField metric_catalog(const std::string& name, const MetricParams& params);

struct CatalogEntry {
  std::string name;
  std::string params;
  std::string description;
};
const std::vector<CatalogEntry>& catalog_entries();

// The default instances used by identity suites: every catalog entry at n = 1 and 2
// where applicable.
std::vector<MetricField> standard_catalog();

// Smallest eigenvalue of the Hermitian part of g.
double min_eigenvalue(const CMat& g);

}  // namespace hcf
