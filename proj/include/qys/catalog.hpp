// Built-in chart metrics, scalar fields, and named instances: flat space in
// Cartesian and polar charts, conformal flat metrics, round spheres,
// hyperbolic half-space, a non-conformally-flat product, seeded random
// polynomial perturbations of flat space, the closed-form steady soliton on a
// half-space, and the constructed warped-product instances.
#pragma once

#include <cstdint>
#include <optional>

#include "qys/instance.hpp"

namespace qys {

std::shared_ptr<const MetricField> flat_metric(int n);
std::shared_ptr<const MetricField> polar3_metric();
/// g = exp(2u) delta with u given as an expression over x1..xn.
std::shared_ptr<const MetricField> conformal_flat_metric(int n, const std::string& u_expr,
                                                         Box box);
std::shared_ptr<const MetricField> sphere_metric(int n, double radius);
std::shared_ptr<const MetricField> halfspace_hyperbolic3();
std::shared_ptr<const MetricField> product_s2xr2();
std::shared_ptr<const MetricField> product_s2xr2_conformal();
std::shared_ptr<const MetricField> randompoly_metric(int n, std::uint64_t seed);
std::shared_ptr<const ScalarField> randompoly_scalar(int n, std::uint64_t seed);
std::shared_ptr<const ScalarField> constant_scalar(int n, double c);
std::shared_ptr<const ScalarField> expression_scalar(int n, const std::string& text,
                                                     const std::map<std::string, double>& constants = {});

/// Uniform sample points inside the box shrunk by an absolute margin per axis.
std::vector<Eigen::VectorXd> sample_points(const Box& box, int count, std::uint64_t seed,
                                           double margin);

/// True when the metric is positive definite at every given point.
bool positive_definite_at(const MetricField& metric, const std::vector<Eigen::VectorXd>& points);

/// Random polynomial instance with positive definiteness verified at sampled
/// points before use; the seed is advanced until verification passes.
SolitonInstance make_randompoly_instance(int n, std::uint64_t seed);

struct InstanceOverrides {
    std::optional<SolitonParams> params;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> potential_expr;
    std::optional<double> radius;
};

/// Named catalog instances: FLAT3, POLAR3, CONF3, CONF4, SPHERE3, HYP3,
/// PRODUCT4, PRODUCT4CONF, RANDOMPOLY3/4/5, HALF_STEADY, WARP3/4/5.
SolitonInstance catalog_instance(const std::string& name, const InstanceOverrides& ov = {});

std::vector<std::string> catalog_names();

}  // namespace qys
