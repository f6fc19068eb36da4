#include <doctest.h>

#include "qys/catalog.hpp"
#include "qys/soliton.hpp"

using namespace qys;

TEST_CASE("the half-space steady soliton satisfies the defining equation exactly") {
    const SolitonInstance inst = catalog_instance("HALF_STEADY");
    const Eigen::Vector3d p(0.5, 0.1, -0.2);
    const PointContext ctx = make_context(inst, p);

    CHECK(soliton_residual(ctx, inst.params).cwiseAbs().maxCoeff() < 1e-12);

    const auto cons = soliton_consequence_residuals(ctx, inst.params, 1e-11);
    for (const auto& r : cons) {
        CAPTURE(r.name);
        CHECK(r.value < 1e-11);
        CHECK(r.pass);
    }
    CHECK(weyl_contraction_residual(ctx, 1e-11).value < 1e-11);
}

TEST_CASE("constant potential on the round sphere") {
    SolitonInstance inst = catalog_instance("SPHERE3");  // radius 1, rho = 6, f = 0
    const auto pts = sample_points(inst.box, 5, 3, 0.2);

    for (const auto& p : pts) {
        const PointContext ctx = make_context(inst, p);
        CHECK(soliton_residual(ctx, inst.params).cwiseAbs().maxCoeff() < 1e-10);
    }

    // rho = 0 leaves E = -R g
    inst.params.rho = 0.0;
    const PointContext ctx = make_context(inst, pts.front());
    const Eigen::MatrixXd e = soliton_residual(ctx, inst.params);
    CHECK((e + 6.0 * ctx.mj.g).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("a non-soliton configuration reports a failing residual") {
    SolitonInstance inst = catalog_instance("SPHERE3");
    inst.potential = expression_scalar(3, "x1");
    inst.params.rho = 0.0;
    const auto pts = sample_points(inst.box, 5, 9, 0.2);
    const PointContext ctx = make_context(inst, pts.front());
    const auto cons = soliton_consequence_residuals(ctx, inst.params, 1e-6);
    CHECK(cons[0].value > 0.1);
    CHECK_FALSE(cons[0].pass);
}

TEST_CASE("D-tensor structure") {
    // flat metric: Ricci and R vanish, so D = 0 for any potential
    {
        SolitonInstance inst = catalog_instance("FLAT3");
        inst.potential = randompoly_scalar(3, 5);
        const PointContext ctx = make_context(inst, Eigen::Vector3d(0.3, -0.4, 0.2));
        CHECK(max_abs(d_tensor(ctx)) == 0.0);
    }
    // vanishing gradient: every term carries a factor of grad f
    {
        SolitonInstance inst = catalog_instance("SPHERE3");
        const auto pts = sample_points(inst.box, 1, 4, 0.3);
        const PointContext ctx = make_context(inst, pts.front());
        CHECK(max_abs(d_tensor(ctx)) == 0.0);
    }
    // random data: antisymmetry exact, both traces vanish
    for (int n = 3; n <= 5; ++n) {
        const SolitonInstance inst = make_randompoly_instance(n, 60 + n);
        for (const auto& p : sample_points(inst.box, 10, 5 * n, 0.1)) {
            const PointContext ctx = make_context(inst, p);
            const Tensor3 d = d_tensor(ctx);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k) CHECK(d(i, j, k) == -d(j, i, k));
            const auto [t12, t13] = d_tensor_traces(ctx, d);
            CHECK(t12 < 1e-11);
            CHECK(t13 < 1e-11);
        }
    }
}

TEST_CASE("two-route |D|^2 agreement holds without any soliton assumption") {
    for (int n = 3; n <= 5; ++n) {
        const SolitonInstance inst = make_randompoly_instance(n, 80 + n);
        int used = 0;
        for (const auto& p : sample_points(inst.box, 40, 7 * n + 1, 0.1)) {
            PointContext ctx = make_context(inst, p);
            if (ctx.grad_norm <= gradient_floor(ctx.fj.value)) continue;
            const ResidualReport r = d_norm_split_residual(ctx, 1e-9);
            CAPTURE(n);
            CHECK(r.value < 1e-9);
            if (++used == 30) break;
        }
        CHECK(used == 30);
    }
}

TEST_CASE("|D|^2 split on flat data and at critical points") {
    SolitonInstance inst = catalog_instance("FLAT3");
    inst.potential = randompoly_scalar(3, 5);
    const auto pts = sample_points(inst.box, 1, 31, 0.2);
    PointContext ctx = make_context(inst, pts.front());
    if (ctx.grad_norm > gradient_floor(ctx.fj.value))
        CHECK(d_norm_split_residual(ctx, 1e-9).value == 0.0);  // both routes identically zero

    inst.potential = constant_scalar(3, 1.0);
    PointContext flat_ctx = make_context(inst, pts.front());
    CHECK_THROWS_AS(d_norm_split_residual(flat_ctx, 1e-9), CriticalPointError);
}

TEST_CASE("weighted operator: constants, plain Laplacian, and linearity") {
    SolitonInstance flat = catalog_instance("FLAT3");
    flat.potential = randompoly_scalar(3, 19);
    const Eigen::Vector3d p(0.25, -0.35, 0.15);

    CHECK(weighted_L(flat, *constant_scalar(3, 7.0), p) == doctest::Approx(0.0));

    SolitonInstance inf = flat;
    inf.params = SolitonParams::infinite(0.0);
    CHECK(weighted_L(inf, *expression_scalar(3, "x1^2"), p) == doctest::Approx(2.0));

    // linearity in u for fixed instance
    const auto u = expression_scalar(3, "sin(x1)*x2");
    const auto v = expression_scalar(3, "exp(x2)*x3 + x1");
    const double a = 1.7, b = -2.3;
    const auto combo = expression_scalar(3, "1.7*(sin(x1)*x2) + (-2.3)*(exp(x2)*x3 + x1)");
    const double lhs = weighted_L(flat, *combo, p);
    const double rhs = a * weighted_L(flat, *u, p) + b * weighted_L(flat, *v, p);
    CHECK(std::abs(lhs - rhs) < 1e-10);
}

TEST_CASE("weighted operator linearity on curved random data") {
    const SolitonInstance inst = make_randompoly_instance(4, 91);
    const auto pts = sample_points(inst.box, 5, 41, 0.1);
    const auto u = expression_scalar(4, "sin(x1)*x2 + x4");
    const auto v = expression_scalar(4, "x3*x3*x1");
    const auto combo = expression_scalar(4, "0.8*(sin(x1)*x2 + x4) + 1.9*(x3*x3*x1)");
    for (const auto& p : pts) {
        const double lhs = weighted_L(inst, *combo, p);
        const double rhs = 0.8 * weighted_L(inst, *u, p) + 1.9 * weighted_L(inst, *v, p);
        CHECK(std::abs(lhs - rhs) < 1e-10);
    }
}
