// A soliton instance: chart metric field, potential field, parameters (m, rho)
// and a domain box. PointContext bundles everything the per-point identity
// checks consume, evaluated once.
#pragma once

#include <memory>

#include "qys/curvature.hpp"
#include "qys/field.hpp"

namespace qys {

/// Parameters of the defining equation (R - rho) g = Hess f - (1/m) df x df.
/// m may be the symbolic value infinity, in which case every 1/m term drops
/// and the classical equation (R - rho) g = Hess f remains.
struct SolitonParams {
    double m = 1.0;
    bool m_infinite = false;
    double rho = 0.0;

    double inv_m() const { return m_infinite ? 0.0 : 1.0 / m; }

    static SolitonParams infinite(double rho_) {
        SolitonParams p;
        p.m_infinite = true;
        p.m = 0.0;
        p.rho = rho_;
        return p;
    }
    static SolitonParams finite(double m_, double rho_) {
        if (m_ == 0.0) throw ConfigError("soliton parameter m must be nonzero");
        SolitonParams p;
        p.m = m_;
        p.rho = rho_;
        return p;
    }
};

struct SolitonInstance {
    int n = 0;
    std::shared_ptr<const MetricField> metric;
    std::shared_ptr<const ScalarField> potential;
    SolitonParams params;
    Box box;            // sampling box; must lie inside the metric's own box
    std::string name;
    bool radial = false;  // chart is (r, angles...) and fields depend on r only
};

/// Everything evaluated at one point: metric jet, curvature pack, potential
/// jet, and the derived gradient/Hessian data of f.
struct PointContext {
    Eigen::VectorXd p;
    MetricJet3 mj;
    CurvaturePack cp;
    ScalarJet3 fj;

    Eigen::VectorXd grad_f;     // f_i (coordinate = covariant for scalars)
    Eigen::VectorXd grad_f_up;  // f^i = g^{ij} f_j
    double grad_norm2 = 0.0;    // |grad f|^2
    double grad_norm = 0.0;
    Eigen::MatrixXd hess_f;     // covariant Hessian f_ij
    double lap_f = 0.0;         // g^{ij} f_ij
};

/// Regular-point floor: |grad f| must exceed this for frame-based geometry.
inline double gradient_floor(double f_value) { return 1e-8 * (1.0 + std::abs(f_value)); }

PointContext make_context(const SolitonInstance& inst, const Eigen::VectorXd& p);

}  // namespace qys
