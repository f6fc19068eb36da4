// Jets: field values together with all coordinate partials up to order 3 at a
// point. Analytic fields are differentiated exactly with three nested levels
// of first-order duals; black boxes fall back to central finite differences.
#pragma once

#include <Eigen/Dense>

#include "qys/field.hpp"
#include "qys/tensor.hpp"

namespace qys {

/// Scalar field jet. grad[i] = d_i f, hess(i,j) = d_i d_j f,
/// third(i,j,k) = d_i d_j d_k f; coordinate partials, not covariant.
struct ScalarJet3 {
    double value = 0.0;
    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;
    Tensor3 third;
};

/// Metric jet. dg(k,i,j) = d_k g_ij, d2g(k,l,i,j) = d_k d_l g_ij,
/// d3g(k,l,m,i,j) = d_k d_l d_m g_ij.
struct MetricJet3 {
    Eigen::MatrixXd g;
    Tensor3 dg;
    Tensor4 d2g;
    Tensor5 d3g;

    int dim() const { return static_cast<int>(g.rows()); }
};

struct InverseMetricJet {
    Eigen::MatrixXd ginv;
    Tensor3 dginv;  // dginv(k,i,j) = d_k g^ij
};

struct FdOptions {
    double step = 1e-3;
    bool richardson = true;  // combine steps h and 2h for O(h^4) accuracy
};

/// Evaluate the full order-3 jet of a metric field at p. Uses the analytic
/// dual path when available, otherwise finite differences. Checks that p lies
/// in the field's domain box and that g(p) is positive definite (pivoted
/// Cholesky); throws OutOfDomainError / NotPositiveDefiniteError.
MetricJet3 evaluate_metric_jet(const MetricField& field, const Eigen::VectorXd& p);

/// Evaluate the order-3 jet of a scalar field at p (box check only if the
/// caller provides one via the instance; scalar fields carry no box).
ScalarJet3 evaluate_scalar_jet(const ScalarField& field, const Eigen::VectorXd& p);

/// ginv = g^{-1}; dginv_k = -ginv (d_k g) ginv. Throws NotPositiveDefiniteError.
InverseMetricJet inverse_metric_jet(const MetricJet3& mj);

// finite-difference jets, also used as the independent oracle in tests
ScalarJet3 fd_scalar_jet(const ScalarField& field, const Eigen::VectorXd& p,
                         const FdOptions& opt = {});
MetricJet3 fd_metric_jet(const MetricField& field, const Eigen::VectorXd& p,
                         const FdOptions& opt = {});

/// Single third partial d_p d_q d_r of a scalar field with an explicit seed
/// ordering; exposes the raw nested-dual corner for symmetry tests.
double scalar_third_partial(const ScalarField& field, const Eigen::VectorXd& x, int p, int q, int r);

/// Positive-definiteness gate used everywhere a metric value is consumed.
void require_positive_definite(const Eigen::MatrixXd& g, const std::string& where);

}  // namespace qys
