#include "qys/levelset.hpp"

#include <limits>

namespace qys {

namespace {

double g_inner(const Eigen::MatrixXd& g, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    return u.dot(g * v);
}

}  // namespace

AdaptedFrame adapted_frame(const PointContext& ctx) {
    const int n = static_cast<int>(ctx.p.size());
    if (ctx.grad_norm <= gradient_floor(ctx.fj.value))
        throw CriticalPointError("gradient of f below regular-point floor");

    AdaptedFrame fr;
    fr.vectors = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd e1 = ctx.grad_f_up / ctx.grad_norm;
    fr.vectors.row(0) = e1.transpose();

    // skip the coordinate direction most parallel to e_1:
    // g(e_1, d_i) = f_i / |grad f|
    int skip = 0;
    double best = -1.0;
    for (int i = 0; i < n; ++i) {
        const double a = std::abs(ctx.grad_f[i]);
        if (a > best) {
            best = a;
            skip = i;
        }
    }

    int row = 1;
    for (int i = 0; i < n && row < n; ++i) {
        if (i == skip) continue;
        Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
        w[i] = 1.0;
        for (int k = 0; k < row; ++k) {
            const Eigen::VectorXd ek = fr.e(k);
            w -= g_inner(ctx.mj.g, w, ek) * ek;
        }
        const double norm2 = g_inner(ctx.mj.g, w, w);
        if (norm2 <= 1e-24)
            throw CriticalPointError("degenerate Gram-Schmidt pivot in adapted frame");
        fr.vectors.row(row) = (w / std::sqrt(norm2)).transpose();
        ++row;
    }
    return fr;
}

namespace {

void fill_second_fundamental(const PointContext& ctx, const AdaptedFrame& fr, LevelSetReport& rep) {
    const int n = fr.dim();
    rep.h = Eigen::MatrixXd::Zero(n - 1, n - 1);
    for (int a = 1; a < n; ++a)
        for (int b = 1; b < n; ++b)
            rep.h(a - 1, b - 1) = fr.e(a).dot(ctx.hess_f * fr.e(b)) / ctx.grad_norm;
    rep.h = 0.5 * (rep.h + rep.h.transpose()).eval();
    rep.H = rep.h.trace();
    const double iso = rep.H / (n - 1.0);
    rep.h_isotropy_dev = 0.0;
    for (int a = 0; a < n - 1; ++a)
        for (int b = 0; b < n - 1; ++b) {
            const double dev = std::abs(rep.h(a, b) - (a == b ? iso : 0.0));
            rep.h_isotropy_dev = std::max(rep.h_isotropy_dev, dev);
        }
}

void fill_ricci(const PointContext& ctx, const AdaptedFrame& fr, LevelSetReport& rep) {
    const int n = fr.dim();
    Eigen::MatrixXd ric_frame(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) ric_frame(i, j) = fr.e(i).dot(ctx.cp.ricci * fr.e(j));

    rep.lambda = ric_frame(0, 0);
    rep.mu = (ctx.cp.scalar - rep.lambda) / (n - 1.0);
    rep.ric_mixed = Eigen::VectorXd(n - 1);
    rep.ric_mixed_max = 0.0;
    for (int a = 1; a < n; ++a) {
        rep.ric_mixed[a - 1] = ric_frame(0, a);
        rep.ric_mixed_max = std::max(rep.ric_mixed_max, std::abs(ric_frame(0, a)));
    }
    rep.ric_tangent_dev = 0.0;
    for (int a = 1; a < n; ++a)
        for (int b = 1; b < n; ++b) {
            const double dev = std::abs(ric_frame(a, b) - (a == b ? rep.mu : 0.0));
            rep.ric_tangent_dev = std::max(rep.ric_tangent_dev, dev);
        }
}

void fill_sectional(const PointContext& ctx, const AdaptedFrame& fr, LevelSetReport& rep) {
    const int n = fr.dim();
    rep.sect.clear();
    rep.sect_min = std::numeric_limits<double>::infinity();
    rep.sect_max = -std::numeric_limits<double>::infinity();
    for (int a = 1; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            // lowered Riemann contracted with frame vectors: R(e_a, e_b, e_a, e_b)
            double r_abab = 0.0;
            const Eigen::VectorXd ea = fr.e(a), eb = fr.e(b);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k)
                        for (int l = 0; l < n; ++l)
                            r_abab += ctx.cp.riemann(i, j, k, l) * ea[i] * eb[j] * ea[k] * eb[l];
            const double ha = rep.h(a - 1, a - 1), hb = rep.h(b - 1, b - 1),
                         hab = rep.h(a - 1, b - 1);
            const double sect = r_abab + ha * hb - hab * hab;
            rep.sect.push_back(sect);
            rep.sect_min = std::min(rep.sect_min, sect);
            rep.sect_max = std::max(rep.sect_max, sect);
        }
}

LevelSetReport base_report(const PointContext& ctx) {
    LevelSetReport rep;
    rep.level = ctx.fj.value;
    rep.grad_norm = ctx.grad_norm;
    rep.grad_norm2 = ctx.grad_norm2;
    rep.scalar = ctx.cp.scalar;
    return rep;
}

}  // namespace

LevelSetReport second_fundamental_form(const PointContext& ctx) {
    const AdaptedFrame fr = adapted_frame(ctx);
    LevelSetReport rep = base_report(ctx);
    fill_second_fundamental(ctx, fr, rep);
    return rep;
}

LevelSetReport ricci_eigenstructure(const PointContext& ctx) {
    const AdaptedFrame fr = adapted_frame(ctx);
    LevelSetReport rep = base_report(ctx);
    fill_ricci(ctx, fr, rep);
    return rep;
}

LevelSetReport level_sectional(const PointContext& ctx) {
    const AdaptedFrame fr = adapted_frame(ctx);
    LevelSetReport rep = base_report(ctx);
    fill_second_fundamental(ctx, fr, rep);
    fill_sectional(ctx, fr, rep);
    return rep;
}

LevelSetReport level_set_report(const PointContext& ctx) {
    const AdaptedFrame fr = adapted_frame(ctx);
    LevelSetReport rep = base_report(ctx);
    fill_second_fundamental(ctx, fr, rep);
    fill_ricci(ctx, fr, rep);
    fill_sectional(ctx, fr, rep);
    return rep;
}

double restricted_weyl_max(const PointContext& ctx) {
    const int n = static_cast<int>(ctx.p.size());
    if (n != 4) throw WrongDimensionError("restricted Weyl check requires dimension 4");
    const AdaptedFrame fr = adapted_frame(ctx);

    // frame components W(e_i, e_j, e_k, e_l)
    Tensor4 wf(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double acc = 0.0;
                    for (int a = 0; a < n; ++a)
                        for (int b = 0; b < n; ++b)
                            for (int c = 0; c < n; ++c)
                                for (int d = 0; d < n; ++d)
                                    acc += ctx.cp.weyl(a, b, c, d) * fr.vectors(i, a) *
                                           fr.vectors(j, b) * fr.vectors(k, c) * fr.vectors(l, d);
                    wf(i, j, k, l) = acc;
                }

    double normal_family = 0.0;   // any component with the last slot normal
    double tangent_family = 0.0;  // all slots tangent
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                normal_family = std::max(normal_family, std::abs(wf(i, j, k, 0)));
                for (int l = 0; l < n; ++l)
                    if (i > 0 && j > 0 && k > 0 && l > 0)
                        tangent_family = std::max(tangent_family, std::abs(wf(i, j, k, l)));
            }
    return std::max(normal_family, tangent_family);
}

double sectional_closed_form_3d(const PointContext& ctx, const SolitonParams& params) {
    if (ctx.p.size() != 3) throw WrongDimensionError("closed-form sectional value requires n = 3");
    const LevelSetReport rep = ricci_eigenstructure(ctx);
    const double r_rho = ctx.cp.scalar - params.rho;
    return 0.5 * ctx.cp.scalar - rep.lambda + r_rho * r_rho / ctx.grad_norm2;
}

}  // namespace qys
