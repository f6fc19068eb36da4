#include "qys/construct.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "qys/catalog.hpp"

namespace qys {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPoleMargin = 0.2;     // chart box margin at theta in {0, pi}
constexpr double kSeriesStart = 1e-6;   // pole offset of the series start
constexpr double kBlowupLimit = 1e8;

// ---------------------------------------------------------------------------
// quintic Hermite interpolation over a uniform grid, matching value, first
// and second derivative at both segment ends

struct HermiteQuintic {
    double r0 = 0.0, h = 0.0;
    double lo = 0.0, hi = 0.0;  // serviced range
    std::vector<std::array<double, 6>> seg;

    static HermiteQuintic build(const std::vector<double>& r, const std::vector<double>& y,
                                const std::vector<double>& dy, const std::vector<double>& d2y,
                                double lo, double hi) {
        HermiteQuintic q;
        q.r0 = r.front();
        q.h = r[1] - r[0];
        q.lo = lo;
        q.hi = hi;
        const std::size_t segments = r.size() - 1;
        q.seg.resize(segments);
        for (std::size_t k = 0; k < segments; ++k) {
            const double h = q.h;
            const double A = y[k + 1] - y[k] - dy[k] * h - 0.5 * d2y[k] * h * h;
            const double B = dy[k + 1] - dy[k] - d2y[k] * h;
            const double C = d2y[k + 1] - d2y[k];
            q.seg[k] = {y[k],
                        dy[k],
                        0.5 * d2y[k],
                        (10.0 * A - 4.0 * B * h + 0.5 * C * h * h) / (h * h * h),
                        (-15.0 * A + 7.0 * B * h - C * h * h) / (h * h * h * h),
                        (6.0 * A - 3.0 * B * h + 0.5 * C * h * h) / (h * h * h * h * h)};
        }
        return q;
    }

    template <class T>
    T eval(const T& x) const {
        const double xv = leading_value(x);
        if (xv < lo - 1e-12 || xv > hi + 1e-12)
            throw OutOfProfileRangeError("radius " + std::to_string(xv) +
                                         " outside profile range [" + std::to_string(lo) + ", " +
                                         std::to_string(hi) + "]");
        int k = static_cast<int>(std::floor((xv - r0) / h));
        k = std::max(0, std::min(k, static_cast<int>(seg.size()) - 1));
        const auto& c = seg[k];
        const T t = x - (r0 + k * h);
        return ((((c[5] * t + c[4]) * t + c[3]) * t + c[2]) * t + c[1]) * t + c[0];
    }
};

// leading_value also applies to plain doubles inside eval
// (see dual.hpp)

/// Interpolants for a profile function and its first three radial
/// derivatives, each represented by its own quintic built from analytically
/// computed node data. Interpolating every derivative level as a value keeps
/// third derivatives free of the 1/h^3 noise amplification that
/// differentiating a single interpolant would incur.
struct DerivativeBank {
    std::array<HermiteQuintic, 4> level;

    double eval(int j, double r) const { return level[j].eval(r); }
};

// derivatives of A = prod sin^2(theta_a) over a factor set, via
// log-derivatives u_a = 2 cot(theta_a)
struct AngularProduct {
    double value = 1.0;
    int count = 0;              // factors theta_1..theta_count (chart slots 1..count)
    std::array<double, 6> u{};  // u_a
    std::array<double, 6> du{};
    std::array<double, 6> d2u{};

    static AngularProduct build(const Eigen::VectorXd& p, int count) {
        AngularProduct a;
        a.count = count;
        for (int i = 0; i < count; ++i) {
            const double th = p[1 + i];
            const double s = std::sin(th), c = std::cos(th);
            a.value *= s * s;
            a.u[i] = 2.0 * c / s;
            a.du[i] = -2.0 / (s * s);
            a.d2u[i] = 4.0 * c / (s * s * s);
        }
        return a;
    }

    bool in_set(int chart_axis) const { return chart_axis >= 1 && chart_axis <= count; }

    // first partial wrt chart axis a (1-based angle slots)
    double d1(int a) const { return in_set(a) ? value * u[a - 1] : 0.0; }
    double d2(int a, int b) const {
        if (!in_set(a) || !in_set(b)) return 0.0;
        if (a != b) return value * u[a - 1] * u[b - 1];
        return value * (u[a - 1] * u[a - 1] + du[a - 1]);
    }
    double d3(int a, int b, int c) const {
        if (!in_set(a) || !in_set(b) || !in_set(c)) return 0.0;
        if (a == b && b == c) {
            const int i = a - 1;
            return value * (u[i] * u[i] * u[i] + 3.0 * u[i] * du[i] + d2u[i]);
        }
        if (a == b) return d2(a, a) * u[c - 1];
        if (a == c) return d2(a, a) * u[b - 1];
        if (b == c) return d2(b, b) * u[a - 1];
        return value * u[a - 1] * u[b - 1] * u[c - 1];
    }
};

class WarpMetricField final : public MetricField {
public:
    WarpMetricField(int n, DerivativeBank phi, Box box, std::string label)
        : n_(n), phi_(std::move(phi)), box_(std::move(box)), label_(std::move(label)) {}
    int dim() const override { return n_; }
    const Box& box() const override { return box_; }
    std::string describe() const override { return label_; }

    void value(const Eigen::VectorXd& x, Eigen::MatrixXd& g) const override {
        g = Eigen::MatrixXd::Zero(n_, n_);
        const double ph = phi_.eval(0, x[0]);
        g(0, 0) = 1.0;
        double s = ph * ph;
        g(1, 1) = s;
        for (int k = 2; k < n_; ++k) {
            const double sk = std::sin(x[k - 1]);
            s *= sk * sk;
            g(k, k) = s;
        }
    }

    bool direct_jet(const Eigen::VectorXd& p, MetricJet3& mj) const override {
        const int n = n_;
        mj.g = Eigen::MatrixXd::Zero(n, n);
        mj.dg = Tensor3(n);
        mj.d2g = Tensor4(n);
        mj.d3g = Tensor5(n);
        mj.g(0, 0) = 1.0;

        // phi^2 and its radial derivatives from the per-level interpolants
        double ph[4];
        for (int j = 0; j < 4; ++j) ph[j] = phi_.eval(j, p[0]);
        const double P[4] = {ph[0] * ph[0], 2.0 * ph[0] * ph[1],
                             2.0 * (ph[1] * ph[1] + ph[0] * ph[2]),
                             2.0 * (3.0 * ph[1] * ph[2] + ph[0] * ph[3])};

        for (int c = 1; c < n; ++c) {
            const AngularProduct A = AngularProduct::build(p, c - 1);
            mj.g(c, c) = P[0] * A.value;
            for (int k = 0; k < n; ++k) {
                mj.dg(k, c, c) = (k == 0) ? P[1] * A.value : P[0] * A.d1(k);
                for (int l = 0; l < n; ++l) {
                    double d2v;
                    const int t2 = (k == 0) + (l == 0);
                    if (t2 == 2) d2v = P[2] * A.value;
                    else if (t2 == 1) d2v = P[1] * A.d1(k == 0 ? l : k);
                    else d2v = P[0] * A.d2(k, l);
                    mj.d2g(k, l, c, c) = d2v;
                    for (int m = 0; m < n; ++m) {
                        const int t3 = (k == 0) + (l == 0) + (m == 0);
                        double d3v;
                        if (t3 == 3) {
                            d3v = P[3] * A.value;
                        } else if (t3 == 2) {
                            d3v = P[2] * A.d1(k != 0 ? k : (l != 0 ? l : m));
                        } else if (t3 == 1) {
                            int a1 = -1, a2 = -1;
                            for (const int idx : {k, l, m}) {
                                if (idx == 0) continue;
                                if (a1 < 0) a1 = idx;
                                else a2 = idx;
                            }
                            d3v = P[1] * A.d2(a1, a2);
                        } else {
                            d3v = P[0] * A.d3(k, l, m);
                        }
                        mj.d3g(k, l, m, c, c) = d3v;
                    }
                }
            }
        }
        return true;
    }

private:
    int n_;
    DerivativeBank phi_;
    Box box_;
    std::string label_;
};

class WarpScalarField final : public ScalarField {
public:
    WarpScalarField(int n, DerivativeBank f, std::string label)
        : n_(n), f_(std::move(f)), label_(std::move(label)) {}
    int dim() const override { return n_; }
    std::string describe() const override { return label_; }

    double value(const Eigen::VectorXd& x) const override { return f_.eval(0, x[0]); }

    bool direct_jet(const Eigen::VectorXd& p, ScalarJet3& sj) const override {
        sj.value = f_.eval(0, p[0]);
        sj.grad = Eigen::VectorXd::Zero(n_);
        sj.hess = Eigen::MatrixXd::Zero(n_, n_);
        sj.third = Tensor3(n_);
        sj.grad[0] = f_.eval(1, p[0]);
        sj.hess(0, 0) = f_.eval(2, p[0]);
        sj.third(0, 0, 0) = f_.eval(3, p[0]);
        return true;
    }

private:
    int n_;
    DerivativeBank f_;
    std::string label_;
};

std::string params_label(const ProfileParams& pp) {
    std::ostringstream os;
    os << "WARP(n=" << pp.n << ", m=";
    if (pp.params.m_infinite)
        os << "inf";
    else
        os << pp.params.m;
    os << ", rho=" << pp.params.rho << ", q=" << pp.q << ")";
    return os.str();
}

}  // namespace

std::string to_string(ProfileStatus s) {
    switch (s) {
        case ProfileStatus::complete: return "complete";
        case ProfileStatus::phi_collapse: return "phi_collapse";
        case ProfileStatus::blowup: return "blowup";
    }
    return "unknown";
}

std::array<double, 4> soliton_ode_rhs(const std::array<double, 4>& state, int n,
                                      const SolitonParams& params) {
    return soliton_ode_rhs_t(state, n, params);
}

NodeDerivatives node_derivatives(const std::array<double, 4>& state, int n,
                                 const SolitonParams& params) {
    NodeDerivatives nd{};
    nd.phi[0] = state[0];
    nd.phi[1] = state[1];
    nd.f[0] = state[2];
    nd.f[1] = state[3];

    const auto second = soliton_ode_rhs_t(state, n, params);
    nd.phi[2] = second[1];
    nd.f[2] = second[3];

    // third derivatives: seed each state component as a 1-jet in r
    {
        std::array<d1, 4> s{d1{state[0], state[1]}, d1{state[1], nd.phi[2]},
                            d1{state[2], state[3]}, d1{state[3], nd.f[2]}};
        const auto out = soliton_ode_rhs_t(s, n, params);
        nd.phi[3] = out[1].d;
        nd.f[3] = out[3].d;
    }
    // fourth: 2-jets
    {
        auto jet2 = [](double v, double v1, double v2) {
            return d2{d1{v, v1}, d1{v1, v2}};
        };
        std::array<d2, 4> s{jet2(nd.phi[0], nd.phi[1], nd.phi[2]),
                            jet2(nd.phi[1], nd.phi[2], nd.phi[3]),
                            jet2(nd.f[0], nd.f[1], nd.f[2]),
                            jet2(nd.f[1], nd.f[2], nd.f[3])};
        const auto out = soliton_ode_rhs_t(s, n, params);
        nd.phi[4] = out[1].d.d;
        nd.f[4] = out[3].d.d;
    }
    // fifth: 3-jets
    {
        auto jet3 = [](double v, double v1, double v2, double v3) {
            return d3{d2{d1{v, v1}, d1{v1, v2}}, d2{d1{v1, v2}, d1{v2, v3}}};
        };
        std::array<d3, 4> s{jet3(nd.phi[0], nd.phi[1], nd.phi[2], nd.phi[3]),
                            jet3(nd.phi[1], nd.phi[2], nd.phi[3], nd.phi[4]),
                            jet3(nd.f[0], nd.f[1], nd.f[2], nd.f[3]),
                            jet3(nd.f[1], nd.f[2], nd.f[3], nd.f[4])};
        const auto out = soliton_ode_rhs_t(s, n, params);
        nd.phi[5] = out[1].d.d.d;
        nd.f[5] = out[3].d.d.d;
    }
    return nd;
}

double warped_scalar_curvature(int n, double phi, double dphi, double d2phi) {
    return -2.0 * (n - 1.0) * d2phi / phi +
           (n - 1.0) * (n - 2.0) * (1.0 - dphi * dphi) / (phi * phi);
}

double Profile::r_lo() const { return r.front() + 10.0 * params.h_r; }

double Profile::r_resolved() const {
    const double c = 0.004;
    const double h = params.h_r;
    for (std::size_t k = 0; k < size(); ++k) {
        const bool ok = h * std::abs(d2f[k]) <= c * (1.0 + std::abs(df[k])) &&
                        h * std::abs(d2phi[k]) <= c * (1.0 + std::abs(dphi[k]));
        if (!ok) return k == 0 ? r.front() : r[k - 1];
    }
    return r.back();
}

Profile integrate_profile(const ProfileParams& pp) {
    if (pp.n < 3) throw ConfigError("warped construction requires n >= 3");
    if (!pp.params.m_infinite && pp.params.m == 0.0) throw ConfigError("m must be nonzero");
    if (pp.h_r <= 0.0 || pp.h_r > 1e-3 * pp.r_max + 1e-15)
        throw ConfigError("step must satisfy 0 < h_r <= 1e-3 * r_max");

    Profile pr;
    pr.params = pp;

    const double h = pp.h_r;
    std::array<double, 4> y{kSeriesStart, 1.0, 0.0, pp.q * kSeriesStart};
    double r = kSeriesStart;

    auto push_node = [&](double rv, const std::array<double, 4>& s) {
        const auto d = soliton_ode_rhs(s, pp.n, pp.params);
        pr.r.push_back(rv);
        pr.phi.push_back(s[0]);
        pr.dphi.push_back(s[1]);
        pr.d2phi.push_back(d[1]);
        pr.f.push_back(s[2]);
        pr.df.push_back(s[3]);
        pr.d2f.push_back(d[3]);
        pr.scalarR.push_back(warped_scalar_curvature(pp.n, s[0], s[1], d[1]));
    };

    push_node(r, y);

    enum class StepOutcome { ok, collapse, blowup };
    auto rk4_step = [&](std::array<double, 4>& state, double hs) {
        std::array<double, 4> k1, k2, k3, k4, t;
        try {
            k1 = soliton_ode_rhs(state, pp.n, pp.params);
            for (int i = 0; i < 4; ++i) t[i] = state[i] + 0.5 * hs * k1[i];
            k2 = soliton_ode_rhs(t, pp.n, pp.params);
            for (int i = 0; i < 4; ++i) t[i] = state[i] + 0.5 * hs * k2[i];
            k3 = soliton_ode_rhs(t, pp.n, pp.params);
            for (int i = 0; i < 4; ++i) t[i] = state[i] + hs * k3[i];
            k4 = soliton_ode_rhs(t, pp.n, pp.params);
        } catch (const PhiNonPositiveError&) {
            return StepOutcome::collapse;
        }
        bool finite = true;
        double mag = 0.0;
        for (int i = 0; i < 4; ++i) {
            state[i] += hs / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            finite = finite && std::isfinite(state[i]);
            mag = std::max(mag, std::abs(state[i]));
        }
        if (!finite || mag > kBlowupLimit) return StepOutcome::blowup;
        if (state[0] <= 0.0) return StepOutcome::collapse;
        return StepOutcome::ok;
    };

    // The right side is near-singular where the chart degenerates (phi ~ 0 at
    // the pole or at a collapse). Substep those regions with effective step
    // ~ 3 h min(r, phi): the degenerate regions then contribute O(h^4) like
    // the interior, and the output grid stays uniform.

    // first interval: geometric walk out of the pole
    {
        double rr = kSeriesStart;
        const double target = kSeriesStart + h;
        while (rr < target) {
            const double hs = std::min(std::max(3.0 * h * rr, 1e-7 * h), target - rr);
            const StepOutcome oc = rk4_step(y, hs);
            if (oc != StepOutcome::ok) {
                pr.status = oc == StepOutcome::collapse ? ProfileStatus::phi_collapse
                                                        : ProfileStatus::blowup;
                return pr;
            }
            rr += hs;
        }
        push_node(target, y);
    }

    // Inverse length scale of the state: small near the pole (1/r), near a
    // collapse (1/phi), and wherever the derivatives steepen (blowup tails).
    const auto substeps_for = [&](double rk, const std::array<double, 4>& state) {
        double scale = std::min(rk, state[0]);
        try {
            const auto d = soliton_ode_rhs(state, pp.n, pp.params);
            scale = std::min(scale, (1.0 + std::abs(state[1])) / (1.0 + std::abs(d[1])));
            scale = std::min(scale, (1.0 + std::abs(state[3])) / (1.0 + std::abs(d[3])));
        } catch (const PhiNonPositiveError&) {
        }
        scale = std::max(scale, 1e-9);
        return static_cast<int>(std::clamp(std::ceil(1.0 / (1.5 * scale)), 1.0, 512.0));
    };

    const auto steps = static_cast<std::size_t>(std::llround((pp.r_max - kSeriesStart) / h));
    for (std::size_t k = 1; k < steps; ++k) {
        const int s = substeps_for(kSeriesStart + k * h, y);
        StepOutcome oc = StepOutcome::ok;
        for (int i = 0; i < s && oc == StepOutcome::ok; ++i) oc = rk4_step(y, h / s);
        if (oc != StepOutcome::ok) {
            pr.status = oc == StepOutcome::collapse ? ProfileStatus::phi_collapse
                                                    : ProfileStatus::blowup;
            return pr;
        }
        r = kSeriesStart + (k + 1) * h;
        push_node(r, y);
    }
    pr.status = ProfileStatus::complete;
    return pr;
}

SolitonInstance profile_to_instance(const Profile& pr) {
    const int n = pr.params.n;
    const double lo = pr.r_lo();
    const double hi = std::min(pr.r_hi(), pr.r_resolved());
    if (pr.size() < 16 || hi <= lo + 5.0 * pr.params.h_r)
        throw ProfileTooShortError("profile too short to interpolate: [" + std::to_string(lo) +
                                   ", " + std::to_string(hi) + "]");

    // radial derivatives of the solution at every node, exact from the ODE
    std::array<std::vector<double>, 6> dphi_all, df_all;
    for (int j = 0; j < 6; ++j) {
        dphi_all[j].reserve(pr.size());
        df_all[j].reserve(pr.size());
    }
    for (std::size_t k = 0; k < pr.size(); ++k) {
        const NodeDerivatives nd =
            node_derivatives({pr.phi[k], pr.dphi[k], pr.f[k], pr.df[k]}, n, pr.params.params);
        for (int j = 0; j < 6; ++j) {
            dphi_all[j].push_back(nd.phi[j]);
            df_all[j].push_back(nd.f[j]);
        }
    }
    DerivativeBank phi, f;
    for (int j = 0; j < 4; ++j) {
        phi.level[j] =
            HermiteQuintic::build(pr.r, dphi_all[j], dphi_all[j + 1], dphi_all[j + 2], lo, hi);
        f.level[j] = HermiteQuintic::build(pr.r, df_all[j], df_all[j + 1], df_all[j + 2], lo, hi);
    }

    Box box;
    box.lo = Eigen::VectorXd::Constant(n, kPoleMargin);
    box.hi = Eigen::VectorXd::Constant(n, kPi - kPoleMargin);
    box.lo[0] = lo;
    box.hi[0] = hi;
    box.lo[n - 1] = 0.1;
    box.hi[n - 1] = 2.0 * kPi - 0.1;

    const std::string label = params_label(pr.params);
    SolitonInstance inst;
    inst.n = n;
    inst.metric = std::make_shared<WarpMetricField>(n, std::move(phi), box, label + " metric");
    inst.potential = std::make_shared<WarpScalarField>(n, std::move(f), label + " potential");
    inst.params = pr.params.params;
    inst.box = box;
    inst.name = label;
    inst.radial = true;
    return inst;
}

SolitonInstance make_warp_instance(int n, const SolitonParams& params, double q, double r_max,
                                   double h_r) {
    ProfileParams pp;
    pp.n = n;
    pp.params = params;
    pp.q = q;
    pp.r_max = r_max;
    pp.h_r = h_r;
    return profile_to_instance(integrate_profile(pp));
}

double profile_min_sectional(const Profile& pr) {
    const double lo = pr.r_lo();
    const double hi = pr.r_resolved();
    double mn = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < pr.size(); ++k) {
        if (pr.r[k] < lo || pr.r[k] > hi) continue;
        const double radial = -pr.d2phi[k] / pr.phi[k];
        const double spherical = (1.0 - pr.dphi[k] * pr.dphi[k]) / (pr.phi[k] * pr.phi[k]);
        mn = std::min({mn, radial, pr.params.n > 2 ? spherical : radial});
    }
    return mn;
}

std::vector<double> profile_roundtrip_residuals(const Profile& pr, int count, std::uint64_t seed) {
    const SolitonInstance inst = profile_to_instance(pr);
    Box shrunk = inst.box;
    const double pad = 2.0 * pr.params.h_r;
    shrunk.lo[0] += pad;
    shrunk.hi[0] -= pad;
    const auto pts = sample_points(shrunk, count, seed, 0.0);
    std::vector<double> out;
    out.reserve(pts.size());
    for (const auto& p : pts) {
        const PointContext ctx = make_context(inst, p);
        out.push_back(soliton_residual(ctx, inst.params).cwiseAbs().maxCoeff());
    }
    return out;
}

void write_profile_csv(const Profile& pr, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open '" + path + "' for writing");

    os << "# qys profile n=" << pr.params.n << " m=";
    if (pr.params.params.m_infinite)
        os << "inf";
    else
        os << pr.params.params.m;
    os << " rho=" << pr.params.params.rho << " q=" << pr.params.q << " r_max=" << pr.params.r_max
       << " h_r=" << pr.params.h_r << " status=" << to_string(pr.status) << "\n";
    os << "r,phi,dphi,d2phi,f,df,d2f,R,residual_max\n";

    // full-engine residual column where the interpolant serves
    std::vector<double> residual(pr.size(), std::numeric_limits<double>::quiet_NaN());
    try {
        const SolitonInstance inst = profile_to_instance(pr);
        Eigen::VectorXd p(pr.params.n);
        for (int i = 1; i < pr.params.n; ++i) p[i] = 0.5 * (inst.box.lo[i] + inst.box.hi[i]);
        for (std::size_t k = 0; k < pr.size(); ++k) {
            if (pr.r[k] < inst.box.lo[0] || pr.r[k] > inst.box.hi[0]) continue;
            p[0] = pr.r[k];
            const PointContext ctx = make_context(inst, p);
            residual[k] = soliton_residual(ctx, inst.params).cwiseAbs().maxCoeff();
        }
    } catch (const ProfileTooShortError&) {
        // residual column stays nan
    }

    char buf[512];
    for (std::size_t k = 0; k < pr.size(); ++k) {
        std::snprintf(buf, sizeof(buf),
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", pr.r[k],
                      pr.phi[k], pr.dphi[k], pr.d2phi[k], pr.f[k], pr.df[k], pr.d2f[k],
                      pr.scalarR[k], residual[k]);
        os << buf;
    }
}

Profile read_profile_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open profile '" + path + "'");

    std::string line;
    if (!std::getline(is, line) || line.rfind("# qys profile", 0) != 0)
        throw ConfigError("'" + path + "' is not a profile export");

    Profile pr;
    {
        std::istringstream hs(line.substr(std::string("# qys profile").size()));
        std::string tok;
        double m = 1.0;
        bool m_inf = false;
        double rho = 0.0;
        while (hs >> tok) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = tok.substr(0, eq);
            const std::string val = tok.substr(eq + 1);
            if (key == "n") pr.params.n = std::stoi(val);
            else if (key == "m") {
                if (val == "inf") m_inf = true;
                else m = std::stod(val);
            } else if (key == "rho") rho = std::stod(val);
            else if (key == "q") pr.params.q = std::stod(val);
            else if (key == "r_max") pr.params.r_max = std::stod(val);
            else if (key == "h_r") pr.params.h_r = std::stod(val);
            else if (key == "status") {
                if (val == "complete") pr.status = ProfileStatus::complete;
                else if (val == "phi_collapse") pr.status = ProfileStatus::phi_collapse;
                else if (val == "blowup") pr.status = ProfileStatus::blowup;
                else throw ConfigError("unknown profile status '" + val + "'");
            }
        }
        pr.params.params = m_inf ? SolitonParams::infinite(rho) : SolitonParams::finite(m, rho);
    }

    if (!std::getline(is, line)) throw ConfigError("profile '" + path + "' missing header row");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::array<double, 9> col{};
        std::string cell;
        for (int c = 0; c < 9 && std::getline(ls, cell, ','); ++c) col[c] = std::strtod(cell.c_str(), nullptr);
        pr.r.push_back(col[0]);
        pr.phi.push_back(col[1]);
        pr.dphi.push_back(col[2]);
        pr.d2phi.push_back(col[3]);
        pr.f.push_back(col[4]);
        pr.df.push_back(col[5]);
        pr.d2f.push_back(col[6]);
        pr.scalarR.push_back(col[7]);
    }
    if (pr.size() < 2) throw ConfigError("profile '" + path + "' has too few rows");
    return pr;
}

// ---------------------------------------------------------------------------

void gauss_legendre(int k, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(k, 0.0);
    weights.assign(k, 0.0);
    const int half = (k + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (k + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Legendre recurrence for P_k(x) and P'_k(x)
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= k; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            pp = k * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[k - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[k - 1 - i] = w;
    }
}

QuadratureResult sphere_quadrature_identities(int n, const ScalarField& f, const ScalarField& u,
                                              const ScalarField& v, const SolitonParams& params,
                                              int resolution) {
    if (n < 3) throw ConfigError("sphere quadrature requires n >= 3");
    if (resolution < 2) throw ConfigError("quadrature resolution must be >= 2");

    SolitonInstance inst;
    inst.n = n;
    inst.metric = sphere_metric(n, 1.0);
    inst.potential = std::shared_ptr<const ScalarField>(&f, [](const ScalarField*) {});
    inst.params = params;
    inst.box = inst.metric->box();
    inst.name = "round sphere quadrature";

    std::vector<double> t, w;
    gauss_legendre(resolution, t, w);

    // polar angles on (0, pi), azimuthal on (0, 2 pi)
    std::vector<double> node_polar(resolution), w_polar(resolution);
    std::vector<double> node_azim(resolution), w_azim(resolution);
    for (int i = 0; i < resolution; ++i) {
        node_polar[i] = 0.5 * kPi * (t[i] + 1.0);
        w_polar[i] = 0.5 * kPi * w[i];
        node_azim[i] = kPi * (t[i] + 1.0);
        w_azim[i] = kPi * w[i];
    }

    const double im = params.inv_m();
    double i_vlu = 0.0, i_ulv = 0.0, i_grad = 0.0, i_lu = 0.0, vol = 0.0;

    std::vector<int> idx(n, 0);
    Eigen::VectorXd p(n);
    while (true) {
        double wprod = 1.0, sqrtg = 1.0;
        for (int a = 0; a < n; ++a) {
            const bool azim = (a == n - 1);
            p[a] = azim ? node_azim[idx[a]] : node_polar[idx[a]];
            wprod *= azim ? w_azim[idx[a]] : w_polar[idx[a]];
            if (!azim) sqrtg *= std::pow(std::sin(p[a]), n - 1 - a);
        }

        const PointContext ctx = make_context(inst, p);
        const ScalarJet3 uj = evaluate_scalar_jet(u, p);
        const ScalarJet3 vj = evaluate_scalar_jet(v, p);
        const double lu = weighted_L(ctx, uj, params);
        const double lv = weighted_L(ctx, vj, params);
        double grad_uv = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) grad_uv += ctx.cp.ginv(i, j) * uj.grad[i] * vj.grad[j];

        const double mu_weight = std::exp(-im * ctx.fj.value);
        const double dmu = wprod * sqrtg * mu_weight;
        i_vlu += vj.value * lu * dmu;
        i_ulv += uj.value * lv * dmu;
        i_grad += grad_uv * dmu;
        i_lu += lu * dmu;
        vol += wprod * sqrtg;

        int a = n - 1;
        while (a >= 0 && ++idx[a] == resolution) {
            idx[a] = 0;
            --a;
        }
        if (a < 0) break;
    }

    const double vol_exact =
        2.0 * std::pow(kPi, 0.5 * (n + 1.0)) / std::tgamma(0.5 * (n + 1.0));

    QuadratureResult qr;
    qr.selfadjoint = std::abs(i_vlu - i_ulv);
    qr.parts = std::abs(i_vlu + i_grad);
    qr.mean = std::abs(i_lu);
    qr.volume_rel_err = std::abs(vol - vol_exact) / vol_exact;
    qr.int_v_lu = i_vlu;
    qr.int_u_lv = i_ulv;
    qr.int_grad = i_grad;
    qr.int_lu = i_lu;
    return qr;
}

ChainCheck chain_identity_check(const Profile& pr) {
    const int n = pr.params.n;
    const double h = pr.params.h_r;
    const double lo = pr.r_lo();
    const double im = pr.params.params.inv_m();
    const double rho = pr.params.params.rho;

    ChainCheck cc;
    cc.coefficient = (n - 2.0) / (2.0 * (n - 1.0));

    const double hi = pr.r_resolved();
    std::size_t usable = 0;
    double max_res = 0.0;
    for (std::size_t k = 2; k + 2 < pr.size(); ++k) {
        if (pr.r[k] < lo || pr.r[k] > hi) continue;
        // central differences are meaningless where the grid no longer
        // resolves the fourth derivative of R; gate on a 5-point estimate
        const double d4 = (pr.scalarR[k - 2] - 4.0 * pr.scalarR[k - 1] + 6.0 * pr.scalarR[k] -
                           4.0 * pr.scalarR[k + 1] + pr.scalarR[k + 2]) /
                          (h * h * h * h);
        if (h * h * std::abs(d4) / 12.0 > 1e-5) continue;
        ++usable;
        const double r_rho = pr.scalarR[k] - rho;
        const double d1 = (pr.scalarR[k + 1] - pr.scalarR[k - 1]) / (2.0 * h);
        const double d2 = (pr.scalarR[k + 1] - 2.0 * pr.scalarR[k] + pr.scalarR[k - 1]) / (h * h);
        const double lap = d2 + (n - 1.0) * (pr.dphi[k] / pr.phi[k]) * d1;
        const double l_rrho = lap - im * d1 * pr.df[k];
        const double rhs = (im - 0.5 / (n - 1.0)) * d1 * pr.df[k] + n * im * r_rho * r_rho -
                           r_rho * pr.scalarR[k] / (n - 1.0);
        max_res = std::max(max_res, std::abs(l_rrho - rhs));
    }
    if (usable < 10) throw ProfileTooShortError("fewer than 10 interior nodes for the chain check");
    cc.max_residual = max_res;
    return cc;
}

}  // namespace qys
