#pragma once

// Griffiths positivity of curvature-type tensors and the identities satisfied
// at zeros of a non-negative one.

#include <cstdint>
#include <optional>
#include <string>

#include "hcf/geometry.hpp"
#include "hcf/tensor.hpp"

namespace hcf {

struct GriffithsOptions {
  int restarts = 32;
  int max_iter = 500;
  std::uint64_t seed = 1;
  // Dense sphere-product grid for n <= 2 (0 disables it).
  int grid_resolution = 64;
};

struct GriffithsReport {
  double min_value = 0;
  CVec argmin_xi, argmin_eta;  // g-unit
  std::string method;          // alternating, grid or hybrid
  int restarts = 0;
  std::optional<int> certified_grid_resolution;
};

// u(e_a, conj(e_b), e_c, conj(e_d)) for the columns of E.
CurvatureTensor frame_components(const Tensor<4>& u, const CMat& E);

// g-norm of a vector.
double g_norm(const CMat& g, const CVec& v);

// Minimum of u(xi, conj(xi), eta, conj(eta)) over g-unit xi, eta.
GriffithsReport min_griffiths(const Tensor<4>& u, const CMat& g, const GriffithsOptions& opts = {});

// Zero test after normalizing xi and eta to g-unit length.
bool is_zero_pair(const Tensor<4>& u, const CMat& g, const CVec& xi, const CVec& eta, double rel_tol = 1e-9);

struct ZeroPairResiduals {
  double mixed_slot = 0;  // max over basis zeta of |u(xi, zetabar, eta, etabar)|, |u(xi, xibar, eta, zetabar)|
  double grad = 0;        // max over m of |nabla_m u(...)|, |nabla_mbar u(...)|
};

// Throws PreconditionError if (xi, eta) is not a zero or u is visibly negative somewhere.
ZeroPairResiduals zero_pair_first_variation(const Tensor<4>& u, const CMat& g, const Tensor<5>& du,
                                            const Tensor<5>& dbar_u, const CVec& xi, const CVec& eta);

// d^2/ds^2 u(xi + s nu, ..., eta + s zeta, ...) at s = 0, from the exact s^2 coefficient.
double second_variation(const Tensor<4>& u, const CVec& xi, const CVec& eta, const CVec& nu, const CVec& zeta);

struct TraceInequality {
  double lhs = 0, rhs = 0;
  bool holds = false;
};

// For Q(v + w) = A(v, vbar) + 2 Re B(v, w) + C(w, wbar) positive semidefinite:
// sum a_ij conj(c_ij) >= sum b_ij conj(b_ji). Throws PreconditionError if Q is not PSD.
TraceInequality trace_inequality_check(const CMat& A, const CMat& B, const CMat& C);

// Smallest eigenvalue of the real 4n x 4n matrix of the quadratic form Q above.
double block_form_min_eigenvalue(const CMat& A, const CMat& B, const CMat& C);

// sum_{ij} u(xi, xibar, e_i, ebar_j) u(e_j, ebar_i, eta, etabar) - u(xi, ebar_i, eta, ebar_j) u(e_j, xibar, e_i, etabar)
// in a g-orthonormal frame (the Cholesky frame unless one is given). Requires a zero pair.
double cor44_sum(const Tensor<4>& u, const CMat& g, const CVec& xi, const CVec& eta, const CMat* frame = nullptr);

struct SecondVariationBound {
  double lhs = 0;        // the frame sum above, without the zero-pair requirement
  double K0 = 0;         // -inf of the second variation over |nu|^2 + |zeta|^2 <= 1, exact
  double K0_sampled = 0; // same, from random directions
  double K = 0;          // tr A0 + tr C0 + n K0
  double rhs = 0;        // -K K0
  bool holds = false;
  bool holds_sampled = false;  // with K0_sampled in place of K0
};

SecondVariationBound second_variation_bound(const Tensor<4>& u, const CMat& g, const CVec& xi, const CVec& eta,
                                            int samples = 10000, std::uint64_t seed = 1);

struct Theorem72Residuals {
  double id1 = 0, id2 = 0, id3 = 0;
};

// Diagnostics at a zero pair of Omega; id3 needs frame depth >= 1 and is 0 otherwise.
Theorem72Residuals theorem72_diagnostics(const PointGeometry& f, const CVec& xi, const CVec& eta);

}  // namespace hcf
