#pragma once

// Operations on curvature-type 4-tensors u_{a bbar c dbar}: symmetry check,
// first-order variations, the quadratic terms F2 and Q2, the torsion-twisted
// derivative and Laplacian, and the explicit curvature evolution under HCF.

#include <array>
#include <optional>

#include "hcf/geometry.hpp"
#include "hcf/tensor.hpp"

namespace hcf {

// max |u_{a bbar c dbar} - conj(u_{b abar d cbar})|
double check_curvature_type(const Tensor<4>& u);

// A(p, a) = A^p_a acts on slot 1, B(s, b) = B^{sbar}_{bbar} on slot 2,
// C(p, c) on slot 3, D(s, d) on slot 4; a^p and b^{sbar} multiply nabla_p u, nabla_sbar u.
struct FirstOrderCoefficients {
  CMat A, B, C, D;
  CVec a, b;

  static FirstOrderCoefficients zero(int n);
};

// du(p, ...) = nabla_p u and dbar_u(s, ...) = nabla_sbar u; required when a or b is nonzero.
CurvatureTensor f1_apply(const Tensor<4>& u, const FirstOrderCoefficients& c, const Tensor<5>* du = nullptr,
                         const Tensor<5>* dbar_u = nullptr);

struct F1Projection {
  FirstOrderCoefficients coeffs;
  double residual = 0;  // max-norm of w - F1(coeffs)
  double norm = 0;      // max-norm of w
  int rank = 0;         // dimension of the span at this point
};

// Least-squares projection of w onto { f1_apply(u, c, du, dbar_u) : c }.
F1Projection project_f1(const Tensor<4>& w, const Tensor<4>& u, const Tensor<5>& du, const Tensor<5>& dbar_u);

// F2(u)_{a bbar c dbar} = g^{m nbar} g^{p sbar} (u_{a bbar m sbar} u_{p nbar c dbar}
//   + u_{m bbar c sbar} u_{a nbar p dbar} - u_{m bbar p dbar} u_{a sbar c nbar})
CurvatureTensor f2_quadratic(const Tensor<4>& u, const CMat& g);

// Q2_{a bbar c dbar} = 1/2 g^{p sbar} g^{m nbar} nabla_a T_{p m dbar} nabla_bbar T_{sbar nbar c}
CurvatureTensor q2_grad_torsion(const PointGeometry& f);

using detail::Dir;

// Torsion-twisted first derivative of u given its Chern derivative du in the
// same direction. Result index 0 is the direction.
Tensor<5> twisted_covariant_derivative(const Tensor<4>& u, const Tensor<5>& du, const PointGeometry& f, Dir dir);
// Same, for u = Omega of the frame (depth >= 1).
Tensor<5> twisted_covariant_derivative(const PointGeometry& f, Dir dir);

// 1/2 g^{m nbar} (nabla_m nabla_nbar + nabla_nbar nabla_m) Omega, frame depth 2.
CurvatureTensor chern_laplacian(const PointGeometry& f);
// g^{m nbar} nabla_m nabla_nbar Omega, frame depth 2.
CurvatureTensor rough_laplacian(const PointGeometry& f);

// Delta^T Omega at x, built on jets from the twisted derivatives.
CurvatureTensor twisted_laplacian(const MetricField& m, const Point& x);

// The eight torsion terms that the twisted Laplacian absorbs, for u = Omega.
std::array<CurvatureTensor, 8> lemma_torsion_terms(const PointGeometry& f);

struct EvolutionTerms {
  // Explicit right-hand side of d Omega / dt under HCF, term by term.
  CurvatureTensor laplacian;             // g^{m nbar} nabla_m nabla_nbar Omega
  std::array<CurvatureTensor, 8> torsion;  // the eight torsion terms
  CurvatureTensor q2;                    // 1/2 |nabla_a T_{..dbar}|^2
  CurvatureTensor f2;
  std::array<CurvatureTensor, 3> ricci;  // the three -(S, Q) contraction terms
  CurvatureTensor total;

  // Decomposition Delta^T Omega + Q2 + F2 + remainder
  CurvatureTensor twisted_laplacian;
  CurvatureTensor remainder;
};

// Requires metric jets of order 4.
EvolutionTerms evolution_terms(const MetricField& m, const Point& x);
CurvatureTensor evolution_rhs(const MetricField& m, const Point& x);

}  // namespace hcf
