#pragma once

// Chern connection, torsion, curvature and their covariant derivatives at a point.
//
// Conventions (all indices 0-based):
//   g(i, j)            = g_{i jbar}
//   g_inv(k, l)        = g^{k lbar}, so sum_l g^{k lbar} g_{j lbar} = delta_kj
//   gamma(k, i, j)     = Gamma^k_{ij} = g^{k sbar} d_i g_{j sbar}
//   torsion_up(k,i,j)  = T^k_{ij} = Gamma^k_{ij} - Gamma^k_{ji}
//   torsion_low(i,j,l) = T_{i j lbar} = d_i g_{j lbar} - d_j g_{i lbar}
//   omega(i,j,k,l)     = Omega_{i jbar k lbar} = -d_i dbar_j g_{k lbar} + g^{p sbar} d_i g_{k sbar} dbar_j g_{p lbar}
// Covariant derivative indices come first, in the order they are applied
// from the outside in: nabla2_omega_mn(m, n, ...) = nabla_m nabla_nbar Omega.
// The barred torsion T_{ibar jbar l} is conj(T_{i j lbar}).

#include <optional>

#include "hcf/jets.hpp"
#include "hcf/metrics.hpp"
#include "hcf/tensor.hpp"

namespace hcf {

struct PointGeometry {
  Point x;
  int n = 0;
  int depth = 0;
  CMat g;
  CMat g_inv;
  Tensor<3> gamma;
  Tensor<3> torsion_up;
  Tensor<3> torsion_low;
  CurvatureTensor omega;
  // depth >= 1
  Tensor<4> nabla_torsion;      // (m, i, j, l) = nabla_m T_{i j lbar}
  Tensor<4> nabla_bar_torsion;  // (m, i, j, l) = nabla_mbar T_{i j lbar}
  Tensor<5> nabla_omega;        // (m, a, b, c, d) = nabla_m Omega_{a bbar c dbar}
  Tensor<5> nabla_bar_omega;    // (m, a, b, c, d) = nabla_mbar Omega
  // depth 2
  Tensor<6> nabla2_omega_mn;  // (m, n, ...) = nabla_m nabla_nbar Omega
  Tensor<6> nabla2_omega_nm;  // (n, m, ...) = nabla_nbar nabla_m Omega

  // T_{ibar jbar l}
  cplx torsion_bar_low(int i, int j, int l) const { return std::conj(torsion_low(i, j, l)); }
  // conj(T^k_{ij}) = T^{kbar}_{ibar jbar}
  cplx torsion_bar_up(int k, int i, int j) const { return std::conj(torsion_up(k, i, j)); }
};

PointGeometry compute_frame(const MetricField& m, const Point& x, int depth);

// Columns e_i with g(e_i, conj(e_j)) = delta_ij, from a Cholesky factor of g.
CMat orthonormal_frame(const CMat& g);

// Omega via -dbar_j Gamma^p_{ik} g_{p lbar}, the second route used as a cross-check.
CurvatureTensor omega_from_connection(const MetricField& m, const Point& x);

struct BianchiResiduals {
  double first_1 = 0, first_2 = 0, second_1 = 0, second_2 = 0;
  double max() const;
};

BianchiResiduals bianchi_residuals(const PointGeometry& f);

// S_{i jbar} = g^{m nbar} Omega_{m nbar i jbar}
CMat second_ricci(const PointGeometry& f);
// Q_{i jbar} = 1/2 g^{m nbar} g^{p sbar} T_{p m jbar} T_{sbar nbar i}
CMat torsion_q(const PointGeometry& f);
// First Chern-Ricci contraction g^{k lbar} Omega_{i jbar k lbar}
CMat first_ricci(const PointGeometry& f);
// -S - Q
CMat flow_rhs_pointwise(const PointGeometry& f);
// sqrt(sum |T_{i j lbar}|^2) measured with g
double torsion_norm(const PointGeometry& f);

struct VariationErrors {
  double dNabla_err = 0, dTorsion_err = 0, dOmega_err = 0;
  // Sizes of the closed forms, for relative errors.
  double dNabla_scale = 0, dTorsion_scale = 0, dOmega_scale = 0;
};

// Central differences of Gamma, T and Omega along g + s k against the closed
// variation formulas, at x. k must be Hermitian.
VariationErrors variation_check(const MetricField& m, const MetricField& k, const Point& x, double eps);

namespace detail {

// Jets of the Chern data at one point, all truncated to the same order.
struct JetFrame {
  int n = 0;
  int order = 0;
  Tensor<2, ComplexJet> g, g_inv;
  Tensor<3, ComplexJet> dg, dbar_g;  // (i, j, l): d_i g_{j lbar}, dbar_i g_{j lbar}
  Tensor<3, ComplexJet> gamma, gamma_bar;  // gamma_bar(k, i, j) = conj(Gamma^k_{ij})
  Tensor<3, ComplexJet> t_up, t_low, t_bar_up, t_bar_low;
  Tensor<4, ComplexJet> omega;
};

JetFrame jet_frame(const MetricField& m, const Point& x, int order);

enum class Slot { Lower, LowerBar, Upper, UpperBar };
enum class Dir { Holo, Anti };

// Chern covariant derivative of a jet tensor; result slot 0 is the direction.
template <std::size_t R>
Tensor<R + 1, ComplexJet> covariant(const Tensor<R, ComplexJet>& X, const std::array<Slot, R>& slots, Dir dir,
                                    const JetFrame& f);

template <std::size_t R>
Tensor<R> values(const Tensor<R, ComplexJet>& X);

CMat matrix_values(const Tensor<2, ComplexJet>& X);

}  // namespace detail

}  // namespace hcf
