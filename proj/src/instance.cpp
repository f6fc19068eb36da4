#include "qys/instance.hpp"

namespace qys {

PointContext make_context(const SolitonInstance& inst, const Eigen::VectorXd& p) {
    if (p.size() != inst.n) throw WrongDimensionError("point dimension does not match instance");
    if (!inst.box.contains(p)) throw OutOfDomainError("point outside instance box");

    PointContext ctx;
    ctx.p = p;
    ctx.mj = evaluate_metric_jet(*inst.metric, p);
    ctx.cp = curvature_pack(ctx.mj);
    ctx.fj = evaluate_scalar_jet(*inst.potential, p);

    const int n = inst.n;
    ctx.grad_f = ctx.fj.grad;
    ctx.grad_f_up = ctx.cp.ginv * ctx.grad_f;
    ctx.grad_norm2 = ctx.grad_f.dot(ctx.grad_f_up);
    ctx.grad_norm = std::sqrt(std::max(0.0, ctx.grad_norm2));
    ctx.hess_f = covariant_hessian(ctx.fj, ctx.cp);
    ctx.lap_f = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) ctx.lap_f += ctx.cp.ginv(i, j) * ctx.hess_f(i, j);
    return ctx;
}

}  // namespace qys
