// Constructed warped instances exercised through the full engine: the
// defining-equation consequences, the Weyl contraction identity, level-set
// geometry, and the weighted operator.
#include <doctest.h>

#include "qys/catalog.hpp"
#include "qys/construct.hpp"

using namespace qys;

TEST_CASE("constructed n=3 instance: consequence identities hold at profile points") {
    const SolitonInstance inst = catalog_instance("WARP3");  // n=3, m=1, rho=1, q=0.5
    for (const auto& p : sample_points(inst.box, 20, 19, 0.02)) {
        const PointContext ctx = make_context(inst, p);
        for (const auto& r : soliton_consequence_residuals(ctx, inst.params, 1e-6)) {
            CAPTURE(r.name);
            CHECK(r.value < 1e-6);
        }
    }
}

TEST_CASE("constructed n=3 instance: D and the Weyl contraction both vanish") {
    // dimension 3 forces W = 0, hence D = 0 wherever the defining equation holds
    const SolitonInstance inst = catalog_instance("WARP3");
    for (const auto& p : sample_points(inst.box, 10, 23, 0.02)) {
        const PointContext ctx = make_context(inst, p);
        CHECK(max_abs(d_tensor(ctx)) < 1e-6);
        double wf = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) {
                    double acc = 0.0;
                    for (int l = 0; l < 3; ++l)
                        acc += ctx.cp.weyl(i, j, k, l) * ctx.grad_f_up[l];
                    wf = std::max(wf, std::abs(acc));
                }
        CHECK(wf < 1e-6);
    }
}

TEST_CASE("constructed n=4 instance: Weyl contraction identity") {
    const SolitonInstance inst = catalog_instance("WARP4");  // n=4, m=2, rho=1, q=0.5
    for (const auto& p : sample_points(inst.box, 10, 29, 0.02))
        CHECK(weyl_contraction_residual(make_context(inst, p), 1e-6).value < 1e-6);
}

TEST_CASE("non-soliton data leaves the Weyl contraction residual visibly nonzero") {
    const SolitonInstance inst = make_randompoly_instance(5, 321);
    double biggest = 0.0;
    for (const auto& p : sample_points(inst.box, 10, 31, 0.1)) {
        const ResidualReport r = weyl_contraction_residual(make_context(inst, p), 1e-6);
        biggest = std::max(biggest, r.value);
        CHECK_FALSE(r.value < 0.0);
    }
    CHECK(biggest > 1e-3);
}

TEST_CASE("constructed instances satisfy the level-surface structure") {
    const SolitonInstance inst = catalog_instance("WARP3");
    const double r_lo = inst.box.lo[0], r_hi = inst.box.hi[0];
    for (int li = 0; li < 3; ++li) {
        const double r = r_lo + (r_hi - r_lo) * (li + 1.0) / 4.0;
        Eigen::Vector3d p(r, 1.1 + 0.2 * li, 2.0 + 0.5 * li);
        const PointContext ctx = make_context(inst, p);
        const LevelSetReport rep = level_set_report(ctx);
        const double r_rho = ctx.cp.scalar - inst.params.rho;

        // mean curvature identity H = (n-1) (R - rho)/|grad f|
        CHECK(std::abs(rep.H - 2.0 * r_rho / ctx.grad_norm) < 1e-6);
        // isotropy of the second fundamental form and of the tangent Ricci
        CHECK(rep.h_isotropy_dev < 1e-6);
        CHECK(rep.ric_mixed_max < 1e-6);
        CHECK(rep.ric_tangent_dev < 1e-6);
        // closed-form sectional value of the level surface
        CHECK(std::abs(rep.sect.front() - sectional_closed_form_3d(ctx, inst.params)) < 1e-6);
    }
}

TEST_CASE("restricted Weyl vanishes on level sets of the constructed n=4 instance") {
    const SolitonInstance inst = catalog_instance("WARP4");
    for (const auto& p : sample_points(inst.box, 8, 37, 0.02))
        CHECK(restricted_weyl_max(make_context(inst, p)) < 1e-6);
}

TEST_CASE("the weighted operator applied to the potential gives n (R - rho)") {
    const SolitonInstance inst = catalog_instance("WARP3");
    for (const auto& p : sample_points(inst.box, 10, 41, 0.02)) {
        const PointContext ctx = make_context(inst, p);
        const double lf = weighted_L(ctx, ctx.fj, inst.params);
        CHECK(std::abs(lf - 3.0 * (ctx.cp.scalar - inst.params.rho)) < 1e-6);
    }
}

TEST_CASE("classical-mode construction behaves like the m -> infinity limit") {
    const SolitonInstance inst =
        make_warp_instance(3, SolitonParams::infinite(1.0), 0.5, 3.0, 3e-3);
    for (const auto& p : sample_points(inst.box, 10, 43, 0.02)) {
        const PointContext ctx = make_context(inst, p);
        // defining equation without the 1/m term
        const Eigen::MatrixXd e = soliton_residual(ctx, inst.params);
        CHECK(e.cwiseAbs().maxCoeff() < 1e-6);
        // trace identity reduces to Delta f = n (R - rho)
        CHECK(std::abs(ctx.lap_f - 3.0 * (ctx.cp.scalar - inst.params.rho)) < 1e-6);
    }
}
