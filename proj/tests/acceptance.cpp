// Acceptance suite: one pass/fail line per criterion, exit code 0 only if
// every criterion passes. Runs at desk scale on one core.
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <vector>

#include "qys/catalog.hpp"
#include "qys/construct.hpp"
#include "qys/runner.hpp"

using namespace qys;

namespace {

struct Criterion {
    std::string name;
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        pass = false;
        if (!detail.empty()) detail += "; ";
        detail += why;
    }
    void note(const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

// ---------------------------------------------------------------------------

Criterion criterion_weyl_dim3() {
    Criterion c{"dimension-3 Weyl vanishing (5 metrics x 50 points, tol 1e-9)"};
    double worst = 0.0;
    for (int s = 0; s < 5; ++s) {
        const SolitonInstance inst = make_randompoly_instance(3, 1000 + 17 * s);
        for (const auto& p : sample_points(inst.box, 50, 300 + s, 0.05)) {
            const MetricJet3 mj = evaluate_metric_jet(*inst.metric, p);
            worst = std::max(worst, max_abs(curvature_pack(mj).weyl));
        }
    }
    if (worst >= 1e-9) c.fail("max|W| = " + fmt(worst));
    c.note("max|W| = " + fmt(worst));
    return c;
}

Criterion criterion_dnorm_split() {
    Criterion c{"two-route |D|^2 identity (90 random samples, n = 3,4,5, rel tol 1e-9)"};
    double worst = 0.0;
    int used = 0;
    for (int n = 3; n <= 5; ++n) {
        const SolitonInstance inst = make_randompoly_instance(n, 2000 + n);
        int count = 0;
        for (const auto& p : sample_points(inst.box, 90, 400 + n, 0.05)) {
            const PointContext ctx = make_context(inst, p);
            if (ctx.grad_norm <= gradient_floor(ctx.fj.value)) continue;
            worst = std::max(worst, d_norm_split_residual(ctx, 1e-9).value);
            ++used;
            if (++count == 30) break;
        }
        if (count < 30) c.fail("only " + std::to_string(count) + " regular points in n=" + std::to_string(n));
    }
    if (worst >= 1e-9) c.fail("worst relative difference = " + fmt(worst));
    c.note("worst rel diff = " + fmt(worst) + " over " + std::to_string(used) + " samples");
    return c;
}

Criterion criterion_d_structure() {
    Criterion c{"D-tensor structure: exact antisymmetry, traces < 1e-11"};
    double worst_trace = 0.0;
    for (int n = 3; n <= 5; ++n) {
        const SolitonInstance inst = make_randompoly_instance(n, 3000 + n);
        for (const auto& p : sample_points(inst.box, 15, 500 + n, 0.05)) {
            const PointContext ctx = make_context(inst, p);
            const Tensor3 d = d_tensor(ctx);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k)
                        if (d(i, j, k) != -d(j, i, k)) c.fail("antisymmetry not exact");
            const auto [t12, t13] = d_tensor_traces(ctx, d);
            worst_trace = std::max({worst_trace, t12, t13});
        }
    }
    if (worst_trace >= 1e-11) c.fail("worst trace = " + fmt(worst_trace));
    c.note("worst trace = " + fmt(worst_trace));
    return c;
}

Criterion criterion_half_steady() {
    Criterion c{"closed-form steady soliton: all residuals < 1e-11 at 20 points"};
    const SolitonInstance inst = catalog_instance("HALF_STEADY");
    double worst = 0.0;
    for (const auto& p : sample_points(inst.box, 20, 77, 0.05)) {
        const PointContext ctx = make_context(inst, p);
        worst = std::max(worst, soliton_residual(ctx, inst.params).cwiseAbs().maxCoeff());
        for (const auto& r : soliton_consequence_residuals(ctx, inst.params, 1e-11))
            worst = std::max(worst, r.value);
        worst = std::max(worst, weyl_contraction_residual(ctx, 1e-11).value);
    }
    if (worst >= 1e-11) c.fail("worst residual = " + fmt(worst));
    c.note("worst residual = " + fmt(worst));
    return c;
}

struct CellResult {
    bool usable = false;
    std::string label;
    double roundtrip = 0.0;
    double levelset_worst = 0.0;  // spreads and identities, all < 1e-6 required
    double weyl4 = 0.0;
    bool levelset_checked = false;
};

CellResult run_grid_cell(int n, const SolitonParams& params, double q) {
    CellResult out;
    std::ostringstream lbl;
    lbl << "(n=" << n << ",m=" << (params.m_infinite ? std::string("inf") : fmt(params.m))
        << ",rho=" << params.rho << ",q=" << q << ")";
    out.label = lbl.str();

    ProfileParams pp;
    pp.n = n;
    pp.params = params;
    pp.q = q;
    pp.r_max = 3.0;
    pp.h_r = 3e-3;
    const Profile pr = integrate_profile(pp);

    SolitonInstance inst;
    try {
        inst = profile_to_instance(pr);
    } catch (const ProfileTooShortError&) {
        out.label += " [" + to_string(pr.status) + ", unusable]";
        return out;
    }
    out.usable = true;
    out.label += " [" + to_string(pr.status) + "]";

    const auto res = profile_roundtrip_residuals(pr, 20, 11);
    out.roundtrip = *std::max_element(res.begin(), res.end());

    if (q == 0.0) return out;  // constant potential: no regular points, no level sets

    out.levelset_checked = true;
    const double r_lo = inst.box.lo[0], r_hi = inst.box.hi[0];
    for (int li = 0; li < 3; ++li) {
        const double r = r_lo + (r_hi - r_lo) * (li + 1.0) / 4.0;
        Box level_box = inst.box;
        level_box.lo[0] = r;
        level_box.hi[0] = r;
        auto pts = sample_points(level_box, 10, 600 + li, 0.0);
        for (auto& p : pts) p[0] = r;

        std::vector<LevelSetReport> reps;
        double mean_dev = 0.0, weyl4 = 0.0;
        for (const auto& p : pts) {
            const PointContext ctx = make_context(inst, p);
            reps.push_back(level_set_report(ctx));
            const double r_rho = ctx.cp.scalar - params.rho;
            mean_dev = std::max(mean_dev,
                                std::abs(reps.back().H - (n - 1.0) * r_rho / ctx.grad_norm));
            if (n == 4) weyl4 = std::max(weyl4, restricted_weyl_max(ctx));
        }
        auto spread = [&](auto&& get) {
            double mn = std::numeric_limits<double>::infinity(), mx = -mn;
            for (const auto& lr : reps) {
                mn = std::min(mn, get(lr));
                mx = std::max(mx, get(lr));
            }
            return mx - mn;
        };
        double sect_mn = std::numeric_limits<double>::infinity(), sect_mx = -sect_mn;
        double worst = 0.0;
        for (const auto& lr : reps) {
            sect_mn = std::min(sect_mn, lr.sect_min);
            sect_mx = std::max(sect_mx, lr.sect_max);
            worst = std::max({worst, lr.h_isotropy_dev, lr.ric_mixed_max, lr.ric_tangent_dev});
        }
        worst = std::max({worst, spread([](const LevelSetReport& lr) { return lr.grad_norm2; }),
                          spread([](const LevelSetReport& lr) { return lr.scalar; }),
                          spread([](const LevelSetReport& lr) { return lr.lambda; }),
                          spread([](const LevelSetReport& lr) { return lr.mu; }),
                          spread([](const LevelSetReport& lr) { return lr.H; }),
                          sect_mx - sect_mn, mean_dev});
        out.levelset_worst = std::max(out.levelset_worst, worst);
        out.weyl4 = std::max(out.weyl4, weyl4);
    }
    return out;
}

Criterion criterion_constructive_grid() {
    Criterion c{"constructive witnesses over the (n,m,rho,q) grid (72 cells, tol 1e-6)"};
    const std::vector<SolitonParams> ms = {
        SolitonParams::finite(1.0, 0.0), SolitonParams::finite(2.0, 0.0),
        SolitonParams::finite(-1.0, 0.0), SolitonParams::infinite(0.0)};
    int usable = 0, total = 0, skipped = 0;
    double worst_rt = 0.0, worst_ls = 0.0, worst_w4 = 0.0;
    for (int n = 3; n <= 5; ++n)
        for (SolitonParams base : ms)
            for (const double rho : {-1.0, 0.0, 1.0})
                for (const double q : {0.0, 0.5}) {
                    ++total;
                    SolitonParams params = base;
                    params.rho = rho;
                    const CellResult cell = run_grid_cell(n, params, q);
                    if (!cell.usable) {
                        ++skipped;
                        c.note("skipped " + cell.label);
                        continue;
                    }
                    ++usable;
                    worst_rt = std::max(worst_rt, cell.roundtrip);
                    if (cell.roundtrip >= 1e-6) c.fail(cell.label + " roundtrip " + fmt(cell.roundtrip));
                    if (cell.levelset_checked) {
                        worst_ls = std::max(worst_ls, cell.levelset_worst);
                        if (cell.levelset_worst >= 1e-6)
                            c.fail(cell.label + " level-set " + fmt(cell.levelset_worst));
                        if (n == 4) {
                            worst_w4 = std::max(worst_w4, cell.weyl4);
                            if (cell.weyl4 >= 1e-6)
                                c.fail(cell.label + " restricted Weyl " + fmt(cell.weyl4));
                        }
                    }
                }
    if (usable < total - 8) c.fail("too many unusable cells: " + std::to_string(skipped));
    c.note(std::to_string(usable) + "/" + std::to_string(total) + " usable, worst roundtrip = " +
           fmt(worst_rt) + ", worst level-set = " + fmt(worst_ls) + ", worst restricted Weyl = " +
           fmt(worst_w4));
    return c;
}

Criterion criterion_sphere_recovery() {
    Criterion c{"sphere recovery: phi = sin r and R = 6 to 1e-8, collapse near pi"};
    ProfileParams pp;
    pp.n = 3;
    pp.params = SolitonParams::finite(1.0, 6.0);
    pp.q = 0.0;
    pp.r_max = 3.2;
    pp.h_r = 1e-3;
    const Profile pr = integrate_profile(pp);
    double worst = 0.0;
    for (std::size_t k = 0; k < pr.size() && pr.r[k] <= 3.0; ++k) {
        worst = std::max(worst, std::abs(pr.phi[k] - std::sin(pr.r[k])));
        worst = std::max(worst, std::abs(pr.scalarR[k] - 6.0));
    }
    if (worst >= 1e-8) c.fail("worst deviation = " + fmt(worst));
    if (pr.status != ProfileStatus::phi_collapse) c.fail("expected collapse status");
    if (pr.r_hi() < 3.0 || pr.r_hi() > std::numbers::pi) c.fail("collapse at r = " + fmt(pr.r_hi()));
    c.note("worst deviation = " + fmt(worst) + ", collapse at r = " + fmt(pr.r_hi()));
    return c;
}

Criterion criterion_quadrature() {
    Criterion c{"weighted integral identities on S^3 (res 48, tol 1e-6; 4th-order decay)"};
    const auto f = expression_scalar(3, "cos(x1)");
    const auto u = expression_scalar(3, "sin(x1)*cos(x2)");
    const auto v = expression_scalar(3, "cos(x1)");
    const SolitonParams m2 = SolitonParams::finite(2.0, 0.0);
    const QuadratureResult qr = sphere_quadrature_identities(3, *f, *u, *v, m2, 48);
    if (qr.selfadjoint >= 1e-6) c.fail("self-adjointness " + fmt(qr.selfadjoint));
    if (qr.parts >= 1e-6) c.fail("integration by parts " + fmt(qr.parts));
    if (qr.mean >= 1e-6) c.fail("mean of L(u) " + fmt(qr.mean));
    if (qr.volume_rel_err >= 1e-8) c.fail("volume " + fmt(qr.volume_rel_err));
    c.note("residuals " + fmt(qr.selfadjoint) + " / " + fmt(qr.parts) + " / " + fmt(qr.mean) +
           ", volume rel err " + fmt(qr.volume_rel_err));

    // decay measured on test functions whose integrals are not killed by
    // symmetry; resolutions 4 -> 8 sit above the rounding floor
    const auto fd = expression_scalar(3, "cos(x1) + 0.4*sin(x1)*cos(x2)");
    const auto ud = expression_scalar(3, "exp(0.7*sin(x1)*cos(x2))");
    const auto vd = expression_scalar(3, "cos(2*x1) + sin(x1)*sin(x2)*cos(x3)");
    const SolitonParams m1 = SolitonParams::finite(1.0, 0.0);
    const QuadratureResult coarse = sphere_quadrature_identities(3, *fd, *ud, *vd, m1, 4);
    const QuadratureResult fine = sphere_quadrature_identities(3, *fd, *ud, *vd, m1, 8);
    if (coarse.parts <= 1e-13) c.fail("decay unmeasurable at coarse resolution");
    if (fine.parts > coarse.parts / 16.0 + 1e-13)
        c.fail("decay " + fmt(coarse.parts) + " -> " + fmt(fine.parts));
    c.note("decay (parts) " + fmt(coarse.parts) + " -> " + fmt(fine.parts));
    return c;
}

Criterion criterion_chain() {
    Criterion c{"weighted-operator chain along profiles (tol 1e-4) and its coefficient"};
    struct Case {
        int n;
        SolitonParams params;
        double q, coeff;
    };
    const std::vector<Case> cases = {{3, SolitonParams::finite(1.0, 1.0), 0.5, 0.25},
                                     {4, SolitonParams::finite(2.0, 1.0), 0.5, 1.0 / 3.0},
                                     {5, SolitonParams::finite(1.0, 1.0), 0.5, 0.375}};
    double worst = 0.0;
    for (const auto& cs : cases) {
        ProfileParams pp;
        pp.n = cs.n;
        pp.params = cs.params;
        pp.q = cs.q;
        pp.r_max = 3.0;
        pp.h_r = 3e-3;
        const ChainCheck cc = chain_identity_check(integrate_profile(pp));
        worst = std::max(worst, cc.max_residual);
        if (cc.max_residual >= 1e-4)
            c.fail("n=" + std::to_string(cs.n) + " residual " + fmt(cc.max_residual));
        if (cc.coefficient != cs.coeff)
            c.fail("n=" + std::to_string(cs.n) + " coefficient " + fmt(cc.coefficient));
    }
    c.note("worst residual = " + fmt(worst) + ", coefficients 1/4, 1/3, 3/8 exact");
    return c;
}

Criterion criterion_convergence() {
    Criterion c{"integrator order (>= 8x per halving) and AD vs FD jets (rel tol 1e-5)"};
    std::vector<double> errors;
    for (const double h : {8e-3, 4e-3, 2e-3}) {
        ProfileParams pp;
        pp.n = 3;
        pp.params = SolitonParams::finite(1.0, 6.0);
        pp.q = 0.0;
        pp.r_max = 8.0;
        pp.h_r = h;
        const Profile pr = integrate_profile(pp);
        double worst = 0.0;
        for (std::size_t k = 0; k < pr.size(); ++k)
            worst = std::max(worst, std::abs(pr.phi[k] - std::sin(pr.r[k])));
        errors.push_back(worst);
    }
    const double r1 = errors[0] / errors[1], r2 = errors[1] / errors[2];
    if (r1 < 8.0 || r2 < 8.0) c.fail("ratios " + fmt(r1) + ", " + fmt(r2));
    c.note("halving ratios " + fmt(r1) + ", " + fmt(r2));

    double worst_jet = 0.0;
    for (int n = 3; n <= 4; ++n) {
        const auto metric = randompoly_metric(n, 9000 + n);
        const auto scalar = randompoly_scalar(n, 9100 + n);
        for (const auto& p : sample_points(metric->box(), 5, 700 + n, 0.1)) {
            const MetricJet3 ad = evaluate_metric_jet(*metric, p);
            const MetricJet3 fd = fd_metric_jet(*metric, p, {1e-2, true});
            const ScalarJet3 sad = evaluate_scalar_jet(*scalar, p);
            const ScalarJet3 sfd = fd_scalar_jet(*scalar, p, {1e-2, true});
            auto rel = [](double a, double b) {
                return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0});
            };
            for (int k = 0; k < n; ++k) {
                worst_jet = std::max(worst_jet, rel(sad.grad[k], sfd.grad[k]));
                for (int i = 0; i < n; ++i) {
                    worst_jet = std::max(worst_jet, rel(sad.hess(k, i), sfd.hess(k, i)));
                    for (int j = 0; j < n; ++j) {
                        worst_jet = std::max(worst_jet, rel(ad.dg(k, i, j), fd.dg(k, i, j)));
                        worst_jet =
                            std::max(worst_jet, rel(sad.third(k, i, j), sfd.third(k, i, j)));
                        for (int l = 0; l < n; ++l)
                            worst_jet =
                                std::max(worst_jet, rel(ad.d2g(k, l, i, j), fd.d2g(k, l, i, j)));
                    }
                }
            }
        }
    }
    if (worst_jet >= 1e-5) c.fail("AD vs FD relative deviation " + fmt(worst_jet));
    c.note("AD vs FD worst rel deviation = " + fmt(worst_jet));
    return c;
}

}  // namespace

int main() {
    std::vector<std::function<Criterion()>> criteria = {
        criterion_weyl_dim3,   criterion_dnorm_split, criterion_d_structure,
        criterion_half_steady, criterion_constructive_grid, criterion_sphere_recovery,
        criterion_quadrature,  criterion_chain,       criterion_convergence};

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const Criterion c = criteria[i]();
        std::printf("[%zu/%zu] %s  %s\n        %s\n", i + 1, criteria.size(),
                    c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
        std::fflush(stdout);
        if (!c.pass) ++failed;
    }
    if (failed == 0) {
        std::printf("ACCEPTANCE: all %zu criteria pass\n", criteria.size());
    } else {
        std::printf("ACCEPTANCE: %d of %zu criteria FAILED\n", failed, criteria.size());
    }
    return failed == 0 ? 0 : 1;
}
