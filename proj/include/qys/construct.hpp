// Constructor of rotationally symmetric solitons: the warped-product
// reduction ds^2 = dr^2 + phi(r)^2 g_{S^{n-1}} turns the defining equation
// into a radial ODE system,
//   f''   = (phi'/phi) f' + (1/m) f'^2
//   phi'' = [ (n-1)(n-2)(1 - phi'^2)/phi^2 - rho - (phi'/phi) f' ]
//           * phi / (2(n-1))
// with scalar curvature
//   R = -2(n-1) phi''/phi + (n-1)(n-2)(1 - phi'^2)/phi^2.
// Profiles integrate by classical RK4 from a series start at the pole and
// convert into chart fields (quintic Hermite interpolation) for the full
// coordinate engine. Also hosts the spherical product quadrature used by the
// compact-case integral identities.
#pragma once

#include <array>
#include <optional>

#include "qys/instance.hpp"
#include "qys/soliton.hpp"

namespace qys {

enum class ProfileStatus { complete, phi_collapse, blowup };

std::string to_string(ProfileStatus s);

struct ProfileParams {
    int n = 3;
    SolitonParams params;
    double q = 0.0;      // f''(0) proxy: f'(eps) = q * eps
    double r_max = 3.0;
    double h_r = 3e-3;
};

struct Profile {
    ProfileParams params;
    ProfileStatus status = ProfileStatus::complete;
    std::vector<double> r, phi, dphi, d2phi, f, df, d2f, scalarR;

    std::size_t size() const { return r.size(); }
    /// Lowest radius served by the interpolating instance.
    double r_lo() const;
    double r_hi() const { return r.back(); }
    /// Largest radius up to which the grid still resolves the solution
    /// (h |y''| <= 0.01 (1 + |y'|) for both phi and f). Blowup profiles carry
    /// steep tails that interpolation cannot represent; everything derived
    /// from the profile is trimmed to this range.
    double r_resolved() const;
};

/// Right side of the radial system; state = (phi, phi', f, f'), returns
/// (phi', phi'', f', f''). Throws PhiNonPositiveError when phi <= 0.
/// Templated over the scalar so dual-seeded states yield the higher radial
/// derivatives of solutions exactly.
template <class T>
std::array<T, 4> soliton_ode_rhs_t(const std::array<T, 4>& state, int n,
                                   const SolitonParams& params) {
    const T& phi = state[0];
    const T& dphi = state[1];
    const T& df = state[3];
    if (leading_value(phi) <= 0.0) throw PhiNonPositiveError("phi <= 0 in radial system");
    const T ratio = dphi / phi;
    const T d2f = ratio * df + params.inv_m() * df * df;
    const T d2phi = ((n - 1.0) * (n - 2.0) * (1.0 - dphi * dphi) / (phi * phi) - params.rho -
                     ratio * df) *
                    phi / (2.0 * (n - 1.0));
    return {dphi, d2phi, df, d2f};
}

std::array<double, 4> soliton_ode_rhs(const std::array<double, 4>& state, int n,
                                      const SolitonParams& params);

/// Radial derivatives of the solution through a node state, harvested from
/// the right side with dual seeding: out[k][j] = d^{j}/dr^{j} of state
/// component k's value, j = 0..5, for k in {phi, f}.
struct NodeDerivatives {
    std::array<double, 6> phi;  // phi, phi', ..., phi^(5)
    std::array<double, 6> f;
};
NodeDerivatives node_derivatives(const std::array<double, 4>& state, int n,
                                 const SolitonParams& params);

/// Warped-product scalar curvature closed form.
double warped_scalar_curvature(int n, double phi, double dphi, double d2phi);

/// RK4 from r = 1e-6 with the smooth-pole series start phi = eps, phi' = 1,
/// f = 0, f' = q eps. Dense output keeps second derivatives from the right
/// side at every node. Integration stops early (status, not error) when phi
/// reaches zero or the state magnitude exceeds 1e8.
Profile integrate_profile(const ProfileParams& pp);

/// Chart fields in polar coordinates (r, theta..., psi): metric
/// diag(1, phi^2, phi^2 sin^2 theta_1, ...) and potential f(r), both through
/// quintic Hermite interpolants matching (value, first, second) at the nodes.
SolitonInstance profile_to_instance(const Profile& pr);

/// Convenience: integrate and convert in one call.
SolitonInstance make_warp_instance(int n, const SolitonParams& params, double q,
                                   double r_max = 3.0, double h_r = 3e-3);

/// Minimum sectional curvature along the profile (radial and spherical
/// 2-plane families), measured over nodes with r >= r_lo.
double profile_min_sectional(const Profile& pr);

/// CSV export: header comment with the parameters, then one row per node:
/// r, phi, dphi, d2phi, f, df, d2f, R, residual_max at 17 significant digits.
/// residual_max is the full-engine defining-equation residual at the node
/// radius (nan below the interpolation floor).
void write_profile_csv(const Profile& pr, const std::string& path);
Profile read_profile_csv(const std::string& path);

/// Engine round-trip residuals of the defining equation at `count` radii.
std::vector<double> profile_roundtrip_residuals(const Profile& pr, int count, std::uint64_t seed);

// ---------------------------------------------------------------------------
// compact-case integral identities on the round sphere

struct QuadratureResult {
    double selfadjoint = 0.0;  // | int v L(u) - int u L(v) | d(mu)
    double parts = 0.0;        // | int v L(u) + int <grad u, grad v> | d(mu)
    double mean = 0.0;         // | int L(u) d(mu) |
    double volume_rel_err = 0.0;
    // raw integrals, for scale context and non-vacuousness checks
    double int_v_lu = 0.0;
    double int_u_lv = 0.0;
    double int_grad = 0.0;
    double int_lu = 0.0;
};

/// Product Gauss-Legendre quadrature over the round S^n with the weighted
/// measure e^{-f/m} dV. All three identity residuals vanish with resolution.
QuadratureResult sphere_quadrature_identities(int n, const ScalarField& f, const ScalarField& u,
                                              const ScalarField& v, const SolitonParams& params,
                                              int resolution);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int k, std::vector<double>& nodes, std::vector<double>& weights);

// ---------------------------------------------------------------------------
// identity chain for the weighted operator applied to R - rho

struct ChainCheck {
    double max_residual = 0.0;
    double coefficient = 0.0;  // (n-2)/(2(n-1))
};

/// Along the radial profile, compares L(R_rho) computed by 1-D central
/// finite differences of the stored scalar-curvature array against
/// [1/m - 1/(2(n-1))] R_rho' f' + (n/m) R_rho^2 - R_rho R/(n-1).
/// Throws ProfileTooShortError with fewer than 10 usable interior nodes.
ChainCheck chain_identity_check(const Profile& pr);

}  // namespace qys
