#pragma once

// Parallel transport of a vector pair along a curve with the torsion-twisted
// connections: xi moves by nabla - T, eta by its g-dual.
//
// Coordinate form along gamma with (1,0)-velocity v:
//   dxi^p/ds  = -Gamma^p_{iq} v^i xi^q + T^p_{iq} v^i xi^q
//   deta^p/ds = -Gamma^p_{iq} v^i eta^q - g^{p sbar} conj(v^i) T_{ibar sbar j} eta^j

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hcf/errors.hpp"
#include "hcf/expr.hpp"
#include "hcf/metrics.hpp"
#include "hcf/tensor.hpp"

namespace hcf {

// gamma(s) for s in [s0, s1]; each component is an expression in the real
// parameter, written as the variable z_0.
struct Curve {
  std::string name;
  std::vector<Expr> components;
  double s0 = 0, s1 = 1;

  int dim() const { return static_cast<int>(components.size()); }
  Point at(double s) const;
  // (1,0)-part of gamma'(s): v^k = d gamma^k / ds.
  CVec velocity(double s) const;

  // center + r cos(2 pi s) u + r sin(2 pi s) w.
  static Curve circle(const Point& center, double r, const CVec& u, const CVec& w);
  // A closed loop inside the chart that moves in every coordinate.
  static Curve default_loop(const Chart& chart);
};

enum class TransportMode {
  twisted,   // the pair (nabla^1, nabla^2)
  plain,     // Chern connection for both
  plain_xi,  // Chern connection for xi only (negative control)
};

struct TransportState {
  double s = 0;
  Point x;
  CVec xi, eta;
  cplx pairing;           // g(xi, conj(eta)) at x
  double griffiths = 0;   // Omega(xi, xibar, eta, etabar) at x
};

// Frame evaluation failed along the curve; carries the trajectory up to that point.
class TransportAborted : public TransportError {
 public:
  TransportAborted(const std::string& what, std::vector<TransportState> partial)
      : TransportError(what), partial_(std::move(partial)) {}
  const std::vector<TransportState>& partial() const { return partial_; }

 private:
  std::vector<TransportState> partial_;
};

// RK4 with `steps` equal steps; returns steps + 1 states.
std::vector<TransportState> transport_pair(const MetricField& m, const Curve& curve, const CVec& xi0,
                                           const CVec& eta0, int steps, TransportMode mode = TransportMode::twisted);

// max_s |pairing(s) - pairing(0)|
double pairing_invariance_check(const std::vector<TransportState>& traj);

struct ZeroSetReport {
  double start_value = 0;
  double max_value = 0;  // max |Omega(xi, xibar, eta, etabar)| along the curve
  std::vector<TransportState> trajectory;
};

// Requires (xi0, eta0) to be a zero of Omega at the curve start (PreconditionError otherwise).
ZeroSetReport zero_set_invariance_check(const MetricField& m, const Curve& curve, const CVec& xi0, const CVec& eta0,
                                        int steps = 512, TransportMode mode = TransportMode::twisted);

// Columns: s, Re/Im of xi and eta, Re/Im of the pairing, Griffiths value.
void write_trajectory_csv(std::ostream& os, const std::vector<TransportState>& traj);

}  // namespace hcf
