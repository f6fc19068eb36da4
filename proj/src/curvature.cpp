#include "qys/curvature.hpp"

namespace qys {

namespace {

// S(l,i,j) = d_i g_jl + d_j g_il - d_l g_ij, so Gamma^k_ij = (1/2) g^{kl} S_lij
inline double S_of(const MetricJet3& mj, int l, int i, int j) {
    return mj.dg(i, j, l) + mj.dg(j, i, l) - mj.dg(l, i, j);
}

// dS(p,l,i,j) = d_p S_lij
inline double dS_of(const MetricJet3& mj, int p, int l, int i, int j) {
    return mj.d2g(p, i, j, l) + mj.d2g(p, j, i, l) - mj.d2g(p, l, i, j);
}

// d2S(q,p,l,i,j) = d_q d_p S_lij
inline double d2S_of(const MetricJet3& mj, int q, int p, int l, int i, int j) {
    return mj.d3g(q, p, i, j, l) + mj.d3g(q, p, j, i, l) - mj.d3g(q, p, l, i, j);
}

}  // namespace

CurvaturePack curvature_pack(const MetricJet3& mj) {
    const int n = mj.dim();
    CurvaturePack cp;
    cp.n = n;
    cp.g = mj.g;

    const InverseMetricJet inv = inverse_metric_jet(mj);
    cp.ginv = inv.ginv;
    cp.dginv = inv.dginv;

    // Christoffel symbols and first derivatives
    cp.gamma = Tensor3(n);
    cp.dgamma = Tensor4(n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                double acc = 0.0;
                for (int l = 0; l < n; ++l) acc += cp.ginv(k, l) * S_of(mj, l, i, j);
                cp.gamma(k, i, j) = 0.5 * acc;
                cp.gamma(k, j, i) = 0.5 * acc;
            }
    for (int p = 0; p < n; ++p)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    double acc = 0.0;
                    for (int l = 0; l < n; ++l)
                        acc += cp.dginv(p, k, l) * S_of(mj, l, i, j) +
                               cp.ginv(k, l) * dS_of(mj, p, l, i, j);
                    cp.dgamma(p, k, i, j) = 0.5 * acc;
                    cp.dgamma(p, k, j, i) = 0.5 * acc;
                }

    // second derivatives of Gamma (local; feeds grad_scalar and grad_ricci)
    // d2ginv(q,p,k,l) = -[dginv_q g_p' ginv + ginv g_qp'' ginv + ginv g_p' dginv_q]
    Tensor5 d2gamma(n);
    {
        Tensor4 d2ginv(n);
        for (int q = 0; q < n; ++q)
            for (int p = 0; p < n; ++p)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        double acc = 0.0;
                        for (int a = 0; a < n; ++a)
                            for (int b = 0; b < n; ++b)
                                acc += cp.dginv(q, k, a) * mj.dg(p, a, b) * cp.ginv(b, l) +
                                       cp.ginv(k, a) * mj.d2g(q, p, a, b) * cp.ginv(b, l) +
                                       cp.ginv(k, a) * mj.dg(p, a, b) * cp.dginv(q, b, l);
                        d2ginv(q, p, k, l) = -acc;
                    }
        for (int q = 0; q < n; ++q)
            for (int p = 0; p < n; ++p)
                for (int k = 0; k < n; ++k)
                    for (int i = 0; i < n; ++i)
                        for (int j = i; j < n; ++j) {
                            double acc = 0.0;
                            for (int l = 0; l < n; ++l)
                                acc += d2ginv(q, p, k, l) * S_of(mj, l, i, j) +
                                       cp.dginv(p, k, l) * dS_of(mj, q, l, i, j) +
                                       cp.dginv(q, k, l) * dS_of(mj, p, l, i, j) +
                                       cp.ginv(k, l) * d2S_of(mj, q, p, l, i, j);
                            d2gamma(q, p, k, i, j) = 0.5 * acc;
                            d2gamma(q, p, k, j, i) = 0.5 * acc;
                        }
    }

    // Riemann with the first index up, then lowered
    Tensor4 rup(n);
    for (int m = 0; m < n; ++m)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double acc = cp.dgamma(k, m, l, j) - cp.dgamma(l, m, k, j);
                    for (int p = 0; p < n; ++p)
                        acc += cp.gamma(m, k, p) * cp.gamma(p, l, j) -
                               cp.gamma(m, l, p) * cp.gamma(p, k, j);
                    rup(m, j, k, l) = acc;
                }
    cp.riemann = Tensor4(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double acc = 0.0;
                    for (int m = 0; m < n; ++m) acc += mj.g(i, m) * rup(m, j, k, l);
                    cp.riemann(i, j, k, l) = acc;
                }

    cp.ricci = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
            double acc = 0.0;
            for (int k = 0; k < n; ++k) acc += rup(k, j, k, l);
            cp.ricci(j, l) = acc;
        }
    // symmetrize roundoff
    cp.ricci = 0.5 * (cp.ricci + cp.ricci.transpose()).eval();

    cp.scalar = 0.0;
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) cp.scalar += cp.ginv(j, l) * cp.ricci(j, l);

    // coordinate partials of Ricci via the chain rule through Gamma and dGamma
    Tensor3 dricci(n);  // (p,j,l) = d_p Ric_jl
    for (int p = 0; p < n; ++p)
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l) {
                double acc = 0.0;
                for (int k = 0; k < n; ++k) {
                    acc += d2gamma(p, k, k, l, j) - d2gamma(p, l, k, k, j);
                    for (int q = 0; q < n; ++q)
                        acc += cp.dgamma(p, k, k, q) * cp.gamma(q, l, j) +
                               cp.gamma(k, k, q) * cp.dgamma(p, q, l, j) -
                               cp.dgamma(p, k, l, q) * cp.gamma(q, k, j) -
                               cp.gamma(k, l, q) * cp.dgamma(p, q, k, j);
                }
                dricci(p, j, l) = acc;
            }

    cp.grad_scalar = Eigen::VectorXd::Zero(n);
    for (int p = 0; p < n; ++p) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l)
                acc += cp.dginv(p, j, l) * cp.ricci(j, l) + cp.ginv(j, l) * dricci(p, j, l);
        cp.grad_scalar[p] = acc;
    }

    cp.grad_ricci = Tensor3(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double acc = 0.5 * (dricci(k, i, j) + dricci(k, j, i));
                for (int l = 0; l < n; ++l)
                    acc -= cp.gamma(l, k, i) * cp.ricci(l, j) + cp.gamma(l, k, j) * cp.ricci(i, l);
                cp.grad_ricci(i, j, k) = acc;
            }

    // Weyl: totally trace-free part of Riemann
    cp.weyl = Tensor4(n);
    const double c1 = 1.0 / (n - 2.0);
    const double c2 = cp.scalar / ((n - 1.0) * (n - 2.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    cp.weyl(i, j, k, l) =
                        cp.riemann(i, j, k, l) -
                        c1 * (cp.ricci(i, k) * mj.g(j, l) - cp.ricci(i, l) * mj.g(j, k) +
                              cp.ricci(j, l) * mj.g(i, k) - cp.ricci(j, k) * mj.g(i, l)) +
                        c2 * (mj.g(i, k) * mj.g(j, l) - mj.g(i, l) * mj.g(j, k));

    return cp;
}

Eigen::MatrixXd covariant_hessian(const ScalarJet3& sj, const CurvaturePack& cp) {
    const int n = cp.n;
    Eigen::MatrixXd h(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double acc = sj.hess(i, j);
            for (int k = 0; k < n; ++k) acc -= cp.gamma(k, i, j) * sj.grad[k];
            h(i, j) = acc;
        }
    return h;
}

Tensor3 third_covariant_scalar(const ScalarJet3& sj, const CurvaturePack& cp) {
    const int n = cp.n;
    const Eigen::MatrixXd h = covariant_hessian(sj, cp);

    // coordinate partial of the covariant Hessian:
    // d_i f_kj = f_ikj - dGamma(i,m,k,j) f_m - Gamma(m,k,j) f_im
    Tensor3 dh(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j) {
                double acc = sj.third(i, k, j);
                for (int m = 0; m < n; ++m)
                    acc -= cp.dgamma(i, m, k, j) * sj.grad[m] + cp.gamma(m, k, j) * sj.hess(i, m);
                dh(i, k, j) = acc;
            }

    Tensor3 t(n);  // t(k,j,i) = f_kji
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                double acc = dh(i, k, j);
                for (int m = 0; m < n; ++m)
                    acc -= cp.gamma(m, i, k) * h(m, j) + cp.gamma(m, i, j) * h(k, m);
                t(k, j, i) = acc;
            }
    return t;
}

double laplacian(const ScalarJet3& sj, const CurvaturePack& cp) {
    const int n = cp.n;
    const Eigen::MatrixXd h = covariant_hessian(sj, cp);
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) acc += cp.ginv(i, j) * h(i, j);
    return acc;
}

}  // namespace qys
