// Pointwise identity checks on a soliton instance: the defining equation,
// its contracted and differentiated consequences, the 3-tensor D built from
// Ricci, scalar curvature and grad f, the Weyl contraction identity, the
// two-route |D|^2 computation, and the weighted operator
// L(u) = Delta u - (1/m) <grad f, grad u>.
#pragma once

#include "qys/instance.hpp"
#include "qys/levelset.hpp"

namespace qys {

/// One named residual with its tolerance verdict.
struct ResidualReport {
    std::string name;
    double value = 0.0;      // max-abs norm of the residual
    double frobenius = 0.0;  // Frobenius norm where meaningful, else == value
    double tolerance = 0.0;
    bool pass = false;
    Eigen::VectorXd point;

    static ResidualReport make(std::string name, double value, double tol,
                               const Eigen::VectorXd& p, double frob = -1.0) {
        ResidualReport r;
        r.name = std::move(name);
        r.value = value;
        r.frobenius = frob < 0.0 ? value : frob;
        r.tolerance = tol;
        r.pass = value <= tol;
        r.point = p;
        return r;
    }
};

/// Residual of the defining equation:
/// E_ij = f_ij - (1/m) f_i f_j - (R - rho) g_ij.
Eigen::MatrixXd soliton_residual(const PointContext& ctx, const SolitonParams& params);

/// The three scalar consequences of the defining equation:
///  [0] trace:     n (R - rho) - (Delta f - |grad f|^2 / m)
///  [1] grad-norm: (|grad f|^2)_i - 2 (R - rho) f_i - (2/m) |grad f|^2 f_i,
///                 with (|grad f|^2)_i computed as 2 f_ij f^j
///  [2] grad-R:    R_i - ((R - rho)/m) f_i + R_ij f^j / (n - 1)
/// Each vanishes exactly when the defining equation holds at the point.
std::array<ResidualReport, 3> soliton_consequence_residuals(const PointContext& ctx,
                                                            const SolitonParams& params,
                                                            double tol);

/// D_ijk = 1/(n-2) (R_kj f_i - R_ki f_j)
///       + 1/((n-1)(n-2)) (R_il g_jk f^l - R_jl g_ik f^l)
///       - R/((n-1)(n-2)) (g_kj f_i - g_ki f_j),
/// assembled antisymmetrically in (i,j) so D_ijk = -D_jik holds exactly.
Tensor3 d_tensor(const PointContext& ctx);

/// max |g^{ij} D_ijk| and max |g^{ik} D_ijk| (both vanish for arbitrary data).
std::pair<double, double> d_tensor_traces(const PointContext& ctx, const Tensor3& d);

/// max |D_ijk - W_ijkl f^l|; zero at points where the defining equation holds.
ResidualReport weyl_contraction_residual(const PointContext& ctx, double tol);

/// |D|^2 two ways: full contraction with metric inverses against the
/// adapted-frame expression
///   2|grad f|^2 / ((n-1)(n-2)^2) { (n-2) sum_a R_1a^2
///     + (n-1) |R_ab - ((R - R_11)/(n-1)) delta_ab|^2 }.
/// Returns the relative difference; holds for arbitrary (g, f) at regular
/// points. Throws CriticalPointError below the gradient floor.
ResidualReport d_norm_split_residual(const PointContext& ctx, double tol);

/// Ricci-identity commutator on f: max |f_kji - f_kij - f^l R_lkji| over all
/// index triples; an engine self-consistency check valid for arbitrary data.
ResidualReport ricci_identity_residual(const PointContext& ctx, double tol);

/// Weighted operator applied to a test function u at the context point.
double weighted_L(const PointContext& ctx, const ScalarJet3& u, const SolitonParams& params);
double weighted_L(const SolitonInstance& inst, const ScalarField& u, const Eigen::VectorXd& p);

}  // namespace qys
