#include "qys/jets.hpp"

#include <Eigen/Cholesky>
#include <functional>

namespace qys {

namespace {

// Seed coordinate i for the directional triple (p,q,r): the three dual levels
// carry one direction each, so the evaluated corners hold every mixed partial
// of the triple.
d3 seed_coordinate(double x, int i, int p, int q, int r) {
    d3 s;
    s.v.v.v = x;
    s.v.v.d = (i == r) ? 1.0 : 0.0;
    s.v.d.v = (i == q) ? 1.0 : 0.0;
    s.d.v.v = (i == p) ? 1.0 : 0.0;
    return s;
}

struct Corners {
    double value, dp, dq, dr, dpq, dpr, dqr, dpqr;
};

Corners corners_of(const d3& y) {
    return {y.v.v.v, y.d.v.v, y.v.d.v, y.v.v.d, y.d.d.v, y.d.v.d, y.v.d.d, y.d.d.d};
}

void seed_point(const Eigen::VectorXd& x, int p, int q, int r, std::vector<d3>& out) {
    const int n = static_cast<int>(x.size());
    out.resize(n);
    for (int i = 0; i < n; ++i) out[i] = seed_coordinate(x[i], i, p, q, r);
}

void scatter_scalar(const Corners& c, int p, int q, int r, ScalarJet3& jet) {
    jet.value = c.value;
    jet.grad[p] = c.dp;
    jet.grad[q] = c.dq;
    jet.grad[r] = c.dr;
    jet.hess(p, q) = c.dpq;
    jet.hess(q, p) = c.dpq;
    jet.hess(p, r) = c.dpr;
    jet.hess(r, p) = c.dpr;
    jet.hess(q, r) = c.dqr;
    jet.hess(r, q) = c.dqr;
    const int idx[3] = {p, q, r};
    int perm[3] = {0, 1, 2};
    // all six orderings of the triple receive the same mixed partial
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c3 = 0; c3 < 3; ++c3) {
                if (a == b || a == c3 || b == c3) continue;
                perm[0] = idx[a];
                perm[1] = idx[b];
                perm[2] = idx[c3];
                jet.third(perm[0], perm[1], perm[2]) = c.dpqr;
            }
}

ScalarJet3 ad_scalar_jet(const ScalarField& field, const Eigen::VectorXd& x) {
    const int n = static_cast<int>(x.size());
    ScalarJet3 jet;
    jet.grad = Eigen::VectorXd::Zero(n);
    jet.hess = Eigen::MatrixXd::Zero(n, n);
    jet.third = Tensor3(n);
    std::vector<d3> seeds;
    for (int p = 0; p < n; ++p)
        for (int q = p; q < n; ++q)
            for (int r = q; r < n; ++r) {
                seed_point(x, p, q, r, seeds);
                d3 y;
                field.value_d3(std::span<const d3>(seeds), y);
                scatter_scalar(corners_of(y), p, q, r, jet);
            }
    return jet;
}

MetricJet3 ad_metric_jet(const MetricField& field, const Eigen::VectorXd& x) {
    const int n = static_cast<int>(x.size());
    MetricJet3 mj;
    mj.g = Eigen::MatrixXd::Zero(n, n);
    mj.dg = Tensor3(n);
    mj.d2g = Tensor4(n);
    mj.d3g = Tensor5(n);
    std::vector<d3> seeds;
    std::vector<d3> gbuf(static_cast<std::size_t>(n) * n);
    for (int p = 0; p < n; ++p)
        for (int q = p; q < n; ++q)
            for (int r = q; r < n; ++r) {
                seed_point(x, p, q, r, seeds);
                field.value_d3(std::span<const d3>(seeds), std::span<d3>(gbuf));
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        const Corners c = corners_of(gbuf[static_cast<std::size_t>(i) * n + j]);
                        mj.g(i, j) = c.value;
                        mj.dg(p, i, j) = c.dp;
                        mj.dg(q, i, j) = c.dq;
                        mj.dg(r, i, j) = c.dr;
                        mj.d2g(p, q, i, j) = c.dpq;
                        mj.d2g(q, p, i, j) = c.dpq;
                        mj.d2g(p, r, i, j) = c.dpr;
                        mj.d2g(r, p, i, j) = c.dpr;
                        mj.d2g(q, r, i, j) = c.dqr;
                        mj.d2g(r, q, i, j) = c.dqr;
                        const int idx[3] = {p, q, r};
                        for (int a = 0; a < 3; ++a)
                            for (int b = 0; b < 3; ++b)
                                for (int c3 = 0; c3 < 3; ++c3) {
                                    if (a == b || a == c3 || b == c3) continue;
                                    mj.d3g(idx[a], idx[b], idx[c3], i, j) = c.dpqr;
                                }
                    }
            }
    return mj;
}

// finite differences -------------------------------------------------------

double fd_richardson(const std::function<double(double)>& f, double h, bool richardson) {
    // f(h) is assumed to be the O(h^2) central estimate at step h
    const double d1 = f(h);
    if (!richardson) return d1;
    const double d2 = f(2.0 * h);
    return (4.0 * d1 - d2) / 3.0;
}

}  // namespace

void require_positive_definite(const Eigen::MatrixXd& g, const std::string& where) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(g);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
        ldlt.vectorD().minCoeff() <= 0.0)
        throw NotPositiveDefiniteError("metric not positive definite at " + where);
}

MetricJet3 evaluate_metric_jet(const MetricField& field, const Eigen::VectorXd& p) {
    if (p.size() != field.dim())
        throw WrongDimensionError("point dimension does not match metric field");
    if (!field.box().contains(p)) throw OutOfDomainError("point outside domain box of " + field.describe());
    MetricJet3 mj;
    if (!field.direct_jet(p, mj)) mj = field.analytic() ? ad_metric_jet(field, p) : fd_metric_jet(field, p);
    require_positive_definite(mj.g, field.describe());
    return mj;
}

ScalarJet3 evaluate_scalar_jet(const ScalarField& field, const Eigen::VectorXd& p) {
    if (p.size() != field.dim())
        throw WrongDimensionError("point dimension does not match scalar field");
    ScalarJet3 sj;
    if (field.direct_jet(p, sj)) return sj;
    return field.analytic() ? ad_scalar_jet(field, p) : fd_scalar_jet(field, p);
}

InverseMetricJet inverse_metric_jet(const MetricJet3& mj) {
    const int n = mj.dim();
    require_positive_definite(mj.g, "inverse_metric_jet");
    InverseMetricJet out;
    out.ginv = Eigen::LDLT<Eigen::MatrixXd>(mj.g).solve(Eigen::MatrixXd::Identity(n, n));
    // symmetrize away solver noise
    out.ginv = 0.5 * (out.ginv + out.ginv.transpose()).eval();
    out.dginv = Tensor3(n);
    Eigen::MatrixXd dgk(n, n), tmp(n, n);
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) dgk(i, j) = mj.dg(k, i, j);
        tmp = -out.ginv * dgk * out.ginv;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) out.dginv(k, i, j) = tmp(i, j);
    }
    return out;
}

ScalarJet3 fd_scalar_jet(const ScalarField& field, const Eigen::VectorXd& p, const FdOptions& opt) {
    const int n = static_cast<int>(p.size());
    auto f = [&](const Eigen::VectorXd& x) { return field.value(x); };

    auto grad_at = [&](const Eigen::VectorXd& x, int i, double h) {
        Eigen::VectorXd a = x, b = x;
        a[i] += h;
        b[i] -= h;
        return (f(a) - f(b)) / (2.0 * h);
    };
    auto hess_at = [&](const Eigen::VectorXd& x, int i, int j, double h) {
        Eigen::VectorXd a = x, b = x;
        a[i] += h;
        b[i] -= h;
        return (grad_at(a, j, h) - grad_at(b, j, h)) / (2.0 * h);
    };

    ScalarJet3 jet;
    jet.value = f(p);
    jet.grad = Eigen::VectorXd::Zero(n);
    jet.hess = Eigen::MatrixXd::Zero(n, n);
    jet.third = Tensor3(n);

    for (int i = 0; i < n; ++i)
        jet.grad[i] = fd_richardson([&](double h) { return grad_at(p, i, h); }, opt.step,
                                    opt.richardson);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double v = fd_richardson([&](double h) { return hess_at(p, i, j, h); }, opt.step,
                                           opt.richardson);
            jet.hess(i, j) = v;
            jet.hess(j, i) = v;
        }
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int k = j; k < n; ++k) {
                const double v = fd_richardson(
                    [&](double h) {
                        Eigen::VectorXd a = p, b = p;
                        a[i] += h;
                        b[i] -= h;
                        return (hess_at(a, j, k, h) - hess_at(b, j, k, h)) / (2.0 * h);
                    },
                    opt.step, opt.richardson);
                const int idx[3] = {i, j, k};
                for (int a = 0; a < 3; ++a)
                    for (int b = 0; b < 3; ++b)
                        for (int c = 0; c < 3; ++c) {
                            if (a == b || a == c || b == c) continue;
                            jet.third(idx[a], idx[b], idx[c]) = v;
                        }
            }
    return jet;
}

MetricJet3 fd_metric_jet(const MetricField& field, const Eigen::VectorXd& p, const FdOptions& opt) {
    const int n = static_cast<int>(p.size());
    MetricJet3 mj;
    mj.dg = Tensor3(n);
    mj.d2g = Tensor4(n);
    mj.d3g = Tensor5(n);
    field.value(p, mj.g);

    // reuse the scalar FD path per component
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            BlackBoxScalarField comp(
                [&field, a, b](const Eigen::VectorXd& x) {
                    Eigen::MatrixXd g;
                    field.value(x, g);
                    return g(a, b);
                },
                n, "metric component");
            const ScalarJet3 sj = fd_scalar_jet(comp, p, opt);
            for (int k = 0; k < n; ++k) {
                mj.dg(k, a, b) = sj.grad[k];
                mj.dg(k, b, a) = sj.grad[k];
                for (int l = 0; l < n; ++l) {
                    mj.d2g(k, l, a, b) = sj.hess(k, l);
                    mj.d2g(k, l, b, a) = sj.hess(k, l);
                    for (int m = 0; m < n; ++m) {
                        mj.d3g(k, l, m, a, b) = sj.third(k, l, m);
                        mj.d3g(k, l, m, b, a) = sj.third(k, l, m);
                    }
                }
            }
        }
    return mj;
}

double scalar_third_partial(const ScalarField& field, const Eigen::VectorXd& x, int p, int q, int r) {
    std::vector<d3> seeds;
    seed_point(x, p, q, r, seeds);
    d3 y;
    if (!field.value_d3(std::span<const d3>(seeds), y))
        throw ConfigError("scalar_third_partial requires an analytic field");
    return y.d.d.d;
}

}  // namespace qys
