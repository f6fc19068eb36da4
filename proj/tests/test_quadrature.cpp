#include <doctest.h>

#include <numbers>

#include "qys/catalog.hpp"
#include "qys/construct.hpp"

using namespace qys;

TEST_CASE("Gauss-Legendre nodes integrate polynomials exactly") {
    std::vector<double> x, w;
    gauss_legendre(3, x, w);
    // k nodes are exact through degree 2k-1
    double acc = 0.0;
    for (int i = 0; i < 3; ++i) acc += w[i] * std::pow(x[i], 4);
    CHECK(acc == doctest::Approx(2.0 / 5.0).epsilon(1e-14));

    gauss_legendre(16, x, w);
    double total = 0.0;
    double expsum = 0.0;
    for (int i = 0; i < 16; ++i) {
        total += w[i];
        expsum += w[i] * std::exp(x[i]);
    }
    CHECK(total == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(expsum == doctest::Approx(std::exp(1.0) - std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("product grid reproduces sphere volumes") {
    const auto zero = constant_scalar(3, 0.0);
    const QuadratureResult qr = sphere_quadrature_identities(
        3, *zero, *zero, *zero, SolitonParams::finite(1.0, 0.0), 24);
    CHECK(qr.volume_rel_err < 1e-10);  // vol(S^3) = 2 pi^2
}

TEST_CASE("constant test function gives zero residuals up to rounding") {
    const auto f = expression_scalar(3, "cos(x1)");
    const auto one = constant_scalar(3, 1.0);
    const auto v = expression_scalar(3, "cos(x1)");
    const QuadratureResult qr =
        sphere_quadrature_identities(3, *f, *one, *v, SolitonParams::finite(2.0, 0.0), 16);
    CHECK(qr.selfadjoint < 1e-10);
    CHECK(qr.parts < 1e-10);
    CHECK(qr.mean < 1e-10);
}

TEST_CASE("weighted integral identities hold on the round three-sphere") {
    const auto f = expression_scalar(3, "cos(x1)");
    const auto u = expression_scalar(3, "sin(x1)*cos(x2)");
    const auto v = expression_scalar(3, "cos(x1)");
    const QuadratureResult qr =
        sphere_quadrature_identities(3, *f, *u, *v, SolitonParams::finite(2.0, 0.0), 32);
    CHECK(qr.selfadjoint < 1e-6);
    CHECK(qr.parts < 1e-6);
    CHECK(qr.mean < 1e-6);
}

TEST_CASE("infinite m reduces to the unweighted divergence theorem") {
    const auto f = expression_scalar(3, "cos(x1)");  // ignored by the operator at m = inf
    const auto u = expression_scalar(3, "sin(x1)*cos(x2)");
    const auto one = constant_scalar(3, 1.0);
    const QuadratureResult qr =
        sphere_quadrature_identities(3, *f, *u, *one, SolitonParams::infinite(0.0), 24);
    CHECK(qr.mean < 1e-8);  // | int Delta u dV |
}

TEST_CASE("residuals decay at fourth order or better under resolution doubling") {
    // test functions chosen so no integral vanishes by symmetry alone
    const auto f = expression_scalar(3, "cos(x1) + 0.4*sin(x1)*cos(x2)");
    const auto u = expression_scalar(3, "exp(0.7*sin(x1)*cos(x2))");
    const auto v = expression_scalar(3, "cos(2*x1) + sin(x1)*sin(x2)*cos(x3)");
    const SolitonParams m1 = SolitonParams::finite(1.0, 0.0);
    const QuadratureResult coarse = sphere_quadrature_identities(3, *f, *u, *v, m1, 4);
    const QuadratureResult fine = sphere_quadrature_identities(3, *f, *u, *v, m1, 8);

    CHECK(std::abs(coarse.int_grad) > 1e-3);  // the identities compare nonzero quantities
    const double floor = 1e-13;
    CHECK(coarse.parts > floor);  // measurable error at the coarse resolution
    CHECK(fine.parts <= coarse.parts / 16.0 + floor);
    if (coarse.selfadjoint > floor) CHECK(fine.selfadjoint <= coarse.selfadjoint / 16.0 + floor);
    if (coarse.mean > floor) CHECK(fine.mean <= coarse.mean / 16.0 + floor);
}
