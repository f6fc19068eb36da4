// Curvature of a metric jet at a point: Christoffel symbols and derivatives,
// lowered Riemann tensor, Ricci, scalar curvature with gradient, Weyl, and
// covariant derivatives of scalar fields up to third order.
//
// Index and sign convention, fixed once for the whole engine:
//   Gamma^k_ij   = (1/2) g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)
//   R^m_jkl      = d_k Gamma^m_lj - d_l Gamma^m_kj
//                  + Gamma^m_kp Gamma^p_lj - Gamma^m_lp Gamma^p_kj
//   R_ijkl       = g_im R^m_jkl                     (all indices lowered)
//   Ric_jl       = g^{ik} R_ijkl = R^k_jkl
//   R            = g^{jl} Ric_jl
// With this sign, round spheres have positive sectional curvature
// K(e_a, e_b) = R_abab, and the commutator of covariant derivatives on a
// scalar satisfies f_kji - f_kij = f^l R_lkji.
#pragma once

#include <Eigen/Dense>

#include "qys/jets.hpp"
#include "qys/tensor.hpp"

namespace qys {

struct CurvaturePack {
    int n = 0;
    Eigen::MatrixXd g, ginv;
    Tensor3 dginv;       // (k,i,j) = d_k g^ij
    Tensor3 gamma;       // (k,i,j) = Gamma^k_ij
    Tensor4 dgamma;      // (l,k,i,j) = d_l Gamma^k_ij
    Tensor4 riemann;     // (i,j,k,l) = R_ijkl, lowered
    Eigen::MatrixXd ricci;
    double scalar = 0.0;
    Eigen::VectorXd grad_scalar;  // (i) = d_i R (covariant gradient of a scalar)
    Tensor3 grad_ricci;           // (i,j,k) = R_ij;k covariant
    Tensor4 weyl;                 // (i,j,k,l) = W_ijkl, lowered
};

/// Full curvature pipeline. The scalar-curvature gradient is assembled by the
/// analytic chain rule through Gamma and its first two derivative levels, so
/// the metric jet must carry third-order partials.
CurvaturePack curvature_pack(const MetricJet3& mj);

/// Covariant Hessian f_ij = d_i d_j f - Gamma^k_ij f_k.
Eigen::MatrixXd covariant_hessian(const ScalarJet3& sj, const CurvaturePack& cp);

/// Full third covariant derivative, stored as t(k,j,i) = f_kji with the
/// outermost derivative applied last.
Tensor3 third_covariant_scalar(const ScalarJet3& sj, const CurvaturePack& cp);

/// Laplace-Beltrami of a scalar at the point: g^{ij} f_ij.
double laplacian(const ScalarJet3& sj, const CurvaturePack& cp);

}  // namespace qys
