// Level-surface geometry at regular points of the potential: the adapted
// orthonormal frame with e_1 = grad f / |grad f|, second fundamental form,
// mean curvature, Ricci eigenstructure, Gauss-equation sectional curvatures,
// and the restricted Weyl components in dimension four.
#pragma once

#include "qys/instance.hpp"

namespace qys {

/// g-orthonormal frame; row i holds the chart components of e_i, with
/// e_1 = grad f / |grad f| and the remaining rows tangent to the level set.
struct AdaptedFrame {
    Eigen::MatrixXd vectors;

    int dim() const { return static_cast<int>(vectors.rows()); }
    Eigen::VectorXd e(int i) const { return vectors.row(i).transpose(); }
};

struct LevelSetReport {
    double level = 0.0;           // f value at the point
    double grad_norm = 0.0;       // |grad f|
    double grad_norm2 = 0.0;
    double scalar = 0.0;          // ambient scalar curvature R
    Eigen::MatrixXd h;            // second fundamental form in the tangent frame
    double H = 0.0;               // mean curvature = trace h
    double h_isotropy_dev = 0.0;  // max |h_ab - (H/(n-1)) delta_ab|
    Eigen::VectorXd ric_mixed;    // R_1a, a = 2..n
    double ric_mixed_max = 0.0;
    double ric_tangent_dev = 0.0;  // max |R_ab - ((R - R_11)/(n-1)) delta_ab|
    double lambda = 0.0;           // R_11
    double mu = 0.0;               // (R - R_11)/(n-1)
    std::vector<double> sect;      // Gauss-equation sectional curvatures, all tangent 2-planes
    double sect_min = 0.0, sect_max = 0.0;
};

/// Build the adapted frame by Gram-Schmidt over the coordinate basis, seeded
/// with e_1 and skipping the basis vector most parallel to it. Throws
/// CriticalPointError below the gradient floor.
AdaptedFrame adapted_frame(const PointContext& ctx);

/// Second fundamental form h_ab = f_ab / |grad f| in the tangent frame and
/// the mean curvature H (fills h, H, h_isotropy_dev).
LevelSetReport second_fundamental_form(const PointContext& ctx);

/// Frame Ricci components: R_1a, tangent isotropy deviation, lambda = R_11,
/// mu = (R - R_11)/(n-1).
LevelSetReport ricci_eigenstructure(const PointContext& ctx);

/// Intrinsic sectional curvatures of the level surface through the Gauss
/// equation: RSigma_abab = R_abab + h_aa h_bb - h_ab^2 over all tangent pairs.
LevelSetReport level_sectional(const PointContext& ctx);

/// Everything above in one pass (single frame construction).
LevelSetReport level_set_report(const PointContext& ctx);

/// Dimension-4 restricted Weyl check: the larger of max |W(e_i,e_j,e_k,e_1)|
/// and max |W(e_a,e_b,e_c,e_d)| over tangent indices. Throws
/// WrongDimensionError unless n == 4.
double restricted_weyl_max(const PointContext& ctx);

/// n = 3 closed form for the level-surface sectional curvature of a soliton:
/// R/2 - R_11 + R_rho^2 / |grad f|^2.
double sectional_closed_form_3d(const PointContext& ctx, const SolitonParams& params);

}  // namespace qys
