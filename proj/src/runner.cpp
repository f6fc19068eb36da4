#include "qys/runner.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

namespace qys {

namespace {

void require_keys(const ordered_json& j, const std::set<std::string>& allowed,
                  const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

double parse_m(const ordered_json& v, bool& infinite) {
    if (v.is_string()) {
        if (v.get<std::string>() == "inf") {
            infinite = true;
            return 0.0;
        }
        throw ConfigError("m must be a number or \"inf\"");
    }
    infinite = false;
    const double m = v.get<double>();
    if (m == 0.0) throw ConfigError("m must be nonzero");
    return m;
}

Box parse_box(const ordered_json& v) {
    Box b;
    const int n = static_cast<int>(v.size());
    b.lo = Eigen::VectorXd(n);
    b.hi = Eigen::VectorXd(n);
    for (int i = 0; i < n; ++i) {
        if (!v[i].is_array() || v[i].size() != 2) throw ConfigError("box entries must be [lo, hi]");
        b.lo[i] = v[i][0].get<double>();
        b.hi[i] = v[i][1].get<double>();
        if (b.hi[i] <= b.lo[i]) throw ConfigError("box interval is empty");
    }
    return b;
}

std::map<std::string, double> parse_constants(const ordered_json& j) {
    std::map<std::string, double> c;
    for (auto it = j.begin(); it != j.end(); ++it) c[it.key()] = it.value().get<double>();
    return c;
}

std::shared_ptr<const MetricField> parse_metric_spec(const ordered_json& j) {
    require_keys(j, {"kind", "name", "dim", "entries", "box", "constants", "radius", "seed", "path"},
                 "instance.metric");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "catalog") {
        const std::string name = j.at("name").get<std::string>();
        InstanceOverrides ov;
        if (j.contains("seed")) ov.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("radius")) ov.radius = j["radius"].get<double>();
        return catalog_instance(name, ov).metric;
    }
    if (kind == "diag" || kind == "components") {
        const int dim = j.at("dim").get<int>();
        if (dim < 3) throw ConfigError("metric dimension must be >= 3");
        Box box = j.contains("box") ? parse_box(j["box"]) : Box::unit(dim);
        const auto constants = j.contains("constants") ? parse_constants(j["constants"])
                                                       : std::map<std::string, double>{};
        if (kind == "diag") {
            std::vector<std::string> entries;
            for (const auto& e : j.at("entries")) entries.push_back(e.get<std::string>());
            if (static_cast<int>(entries.size()) != dim)
                throw ConfigError("diag metric needs exactly dim entries");
            return std::make_shared<ExprMetricField>(entries, box, constants, "config metric");
        }
        std::vector<std::vector<std::string>> entries;
        for (const auto& row : j.at("entries")) {
            std::vector<std::string> r;
            for (const auto& e : row) r.push_back(e.get<std::string>());
            entries.push_back(std::move(r));
        }
        return std::make_shared<ExprMetricField>(entries, box, constants, "config metric");
    }
    if (kind == "profile") {
        return profile_to_instance(read_profile_csv(j.at("path").get<std::string>())).metric;
    }
    throw ConfigError("unknown metric kind '" + kind + "'");
}

std::shared_ptr<const ScalarField> parse_potential_spec(const ordered_json& j, int dim) {
    if (j.is_string()) return expression_scalar(dim, j.get<std::string>());
    require_keys(j, {"kind", "text", "value", "constants"}, "instance.potential");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "expr") {
        const auto constants = j.contains("constants") ? parse_constants(j["constants"])
                                                       : std::map<std::string, double>{};
        return expression_scalar(dim, j.at("text").get<std::string>(), constants);
    }
    if (kind == "constant") return constant_scalar(dim, j.at("value").get<double>());
    throw ConfigError("unknown potential kind '" + kind + "'");
}

SolitonInstance parse_instance_spec(const ordered_json& j) {
    require_keys(j, {"profile", "metric", "potential", "m", "rho", "box", "radial"}, "instance");

    SolitonInstance inst;
    if (j.contains("profile")) {
        inst = profile_to_instance(read_profile_csv(j["profile"].get<std::string>()));
    } else {
        if (!j.contains("metric")) throw ConfigError("instance needs 'metric' or 'profile'");
        inst.metric = parse_metric_spec(j["metric"]);
        inst.n = inst.metric->dim();
        inst.box = inst.metric->box();
        inst.potential = constant_scalar(inst.n, 0.0);
        inst.params = SolitonParams::finite(1.0, 0.0);
        inst.name = "config instance";
    }
    if (j.contains("potential")) inst.potential = parse_potential_spec(j["potential"], inst.n);
    if (j.contains("m")) {
        bool inf = false;
        const double m = parse_m(j["m"], inf);
        inst.params = inf ? SolitonParams::infinite(inst.params.rho)
                          : SolitonParams::finite(m, inst.params.rho);
    }
    if (j.contains("rho")) inst.params.rho = j["rho"].get<double>();
    if (j.contains("box")) inst.box = parse_box(j["box"]);
    if (j.contains("radial")) inst.radial = j["radial"].get<bool>();
    if (inst.box.dim() != inst.n) throw ConfigError("instance box dimension mismatch");
    return inst;
}

}  // namespace

RunConfig parse_config(const ordered_json& j) {
    require_keys(j, {"command",  "catalog",   "instance", "from_profile", "suite",  "points",
                     "seed",     "margin",    "m",        "rho",          "potential",
                     "catalog_seed", "radius", "tolerances", "quadrature", "construct",
                     "levelset", "csv",       "report"},
                 "config");
    RunConfig cfg;
    cfg.command = j.at("command").get<std::string>();
    if (cfg.command != "verify" && cfg.command != "construct" && cfg.command != "levelset")
        throw ConfigError("command must be verify, construct, or levelset");

    if (j.contains("catalog")) cfg.catalog = j["catalog"].get<std::string>();
    if (j.contains("instance")) cfg.instance_spec = j["instance"];
    if (j.contains("from_profile")) cfg.from_profile = j["from_profile"].get<std::string>();
    if (j.contains("suite")) {
        cfg.suites.clear();
        if (j["suite"].is_string())
            cfg.suites.push_back(j["suite"].get<std::string>());
        else
            for (const auto& s : j["suite"]) cfg.suites.push_back(s.get<std::string>());
    }
    for (const auto& s : cfg.suites)
        if (s != "algebraic" && s != "soliton" && s != "levelset" && s != "quadrature")
            throw ConfigError("unknown suite '" + s + "'");

    if (j.contains("points")) cfg.sample.count = j["points"].get<int>();
    if (j.contains("seed")) cfg.sample.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("margin")) cfg.sample.margin = j["margin"].get<double>();
    if (j.contains("m")) cfg.m_override = parse_m(j["m"], cfg.m_infinite_override);
    if (j.contains("rho")) cfg.rho_override = j["rho"].get<double>();
    if (j.contains("potential")) cfg.potential_override = j["potential"].get<std::string>();
    if (j.contains("catalog_seed")) cfg.catalog_seed = j["catalog_seed"].get<std::uint64_t>();
    if (j.contains("radius")) cfg.radius = j["radius"].get<double>();

    if (j.contains("tolerances")) {
        const auto& t = j["tolerances"];
        require_keys(t,
                     {"soliton", "algebraic", "trace", "ricci", "symmetry", "frame", "quadrature",
                      "volume", "chain"},
                     "tolerances");
        if (t.contains("soliton")) cfg.tol.soliton = t["soliton"].get<double>();
        if (t.contains("algebraic")) cfg.tol.algebraic = t["algebraic"].get<double>();
        if (t.contains("trace")) cfg.tol.trace = t["trace"].get<double>();
        if (t.contains("ricci")) cfg.tol.ricci = t["ricci"].get<double>();
        if (t.contains("symmetry")) cfg.tol.symmetry = t["symmetry"].get<double>();
        if (t.contains("frame")) cfg.tol.frame = t["frame"].get<double>();
        if (t.contains("quadrature")) cfg.tol.quadrature = t["quadrature"].get<double>();
        if (t.contains("volume")) cfg.tol.volume = t["volume"].get<double>();
        if (t.contains("chain")) cfg.tol.chain = t["chain"].get<double>();
    }

    if (j.contains("quadrature")) {
        const auto& q = j["quadrature"];
        require_keys(q, {"n", "f", "u", "v", "m", "resolution"}, "quadrature");
        if (q.contains("n")) cfg.quad.n = q["n"].get<int>();
        if (q.contains("f")) cfg.quad.f = q["f"].get<std::string>();
        if (q.contains("u")) cfg.quad.u = q["u"].get<std::string>();
        if (q.contains("v")) cfg.quad.v = q["v"].get<std::string>();
        if (q.contains("m")) cfg.quad.m = parse_m(q["m"], cfg.quad.m_infinite);
        if (q.contains("resolution")) cfg.quad.resolution = q["resolution"].get<int>();
    }

    if (j.contains("construct")) {
        const auto& c = j["construct"];
        require_keys(c, {"n", "m", "rho", "q", "r_max", "h_r"}, "construct");
        if (c.contains("n")) cfg.construct.n = c["n"].get<int>();
        if (c.contains("m")) cfg.construct.m = parse_m(c["m"], cfg.construct.m_infinite);
        if (c.contains("rho")) cfg.construct.rho = c["rho"].get<double>();
        if (c.contains("q")) cfg.construct.q = c["q"].get<double>();
        if (c.contains("r_max")) cfg.construct.r_max = c["r_max"].get<double>();
        if (c.contains("h_r")) cfg.construct.h_r = c["h_r"].get<double>();
    }

    if (j.contains("levelset")) {
        const auto& l = j["levelset"];
        require_keys(l, {"levels", "azimuthal"}, "levelset");
        if (l.contains("levels")) cfg.levelset.levels = l["levels"].get<int>();
        if (l.contains("azimuthal")) cfg.levelset.azimuthal = l["azimuthal"].get<int>();
    }

    if (j.contains("csv")) cfg.csv_path = j["csv"].get<std::string>();
    if (j.contains("report")) cfg.report_path = j["report"].get<std::string>();
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config '" + path + "'");
    ordered_json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config parse failure: ") + e.what());
    }
    return parse_config(j);
}

SolitonInstance resolve_instance(const RunConfig& cfg) {
    SolitonInstance inst;
    if (!cfg.from_profile.empty()) {
        inst = profile_to_instance(read_profile_csv(cfg.from_profile));
    } else if (!cfg.catalog.empty()) {
        InstanceOverrides ov;
        ov.seed = cfg.catalog_seed;
        ov.radius = cfg.radius;
        inst = catalog_instance(cfg.catalog, ov);
    } else if (!cfg.instance_spec.is_null()) {
        inst = parse_instance_spec(cfg.instance_spec);
    } else {
        throw ConfigError("no instance: provide catalog, instance, or from_profile");
    }

    if (cfg.m_override) {
        inst.params = cfg.m_infinite_override
                          ? SolitonParams::infinite(inst.params.rho)
                          : SolitonParams::finite(*cfg.m_override, inst.params.rho);
    } else if (cfg.m_infinite_override) {
        inst.params = SolitonParams::infinite(inst.params.rho);
    }
    if (cfg.rho_override) inst.params.rho = *cfg.rho_override;
    if (cfg.potential_override)
        inst.potential = expression_scalar(inst.n, *cfg.potential_override);
    return inst;
}

// ---------------------------------------------------------------------------
// per-point aggregation

namespace {

class Agg {
public:
    Agg(std::string name, double tol) : name_(std::move(name)), tol_(tol) {}

    void add(double value, const Eigen::VectorXd& p) {
        if (!seen_ || value > worst_) {
            worst_ = value;
            at_ = p;
        }
        seen_ = true;
    }

    bool seen() const { return seen_; }

    ResidualReport report() const {
        return ResidualReport::make(name_, seen_ ? worst_ : std::numeric_limits<double>::quiet_NaN(),
                                    tol_, at_);
    }

private:
    std::string name_;
    double tol_;
    bool seen_ = false;
    double worst_ = 0.0;
    Eigen::VectorXd at_ = Eigen::VectorXd::Zero(0);
};

void push_if_seen(std::vector<ResidualReport>& checks, const Agg& a) {
    if (a.seen()) checks.push_back(a.report());
}

double riemann_symmetry_residual(const CurvaturePack& cp) {
    const int n = cp.n;
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    const double r = cp.riemann(i, j, k, l);
                    worst = std::max(worst, std::abs(r + cp.riemann(j, i, k, l)));
                    worst = std::max(worst, std::abs(r + cp.riemann(i, j, l, k)));
                    worst = std::max(worst, std::abs(r - cp.riemann(k, l, i, j)));
                }
    return worst;
}

double first_bianchi_residual(const CurvaturePack& cp) {
    const int n = cp.n;
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    worst = std::max(worst, std::abs(cp.riemann(i, j, k, l) +
                                                     cp.riemann(i, k, l, j) +
                                                     cp.riemann(i, l, j, k)));
    return worst;
}

double weyl_trace_residual(const CurvaturePack& cp) {
    const int n = cp.n;
    double worst = 0.0;
    // contract each slot pair that is not killed by antisymmetry
    const int pairs[4][2] = {{0, 2}, {0, 3}, {1, 2}, {1, 3}};
    for (const auto& pr : pairs) {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                double acc = 0.0;
                for (int c = 0; c < n; ++c)
                    for (int d = 0; d < n; ++d) {
                        int idx[4];
                        idx[pr[0]] = c;
                        idx[pr[1]] = d;
                        int free_slot = 0;
                        int free_vals[2] = {a, b};
                        int fv = 0;
                        for (int s = 0; s < 4; ++s) {
                            if (s == pr[0] || s == pr[1]) continue;
                            idx[s] = free_vals[fv++];
                            (void)free_slot;
                        }
                        acc += cp.ginv(c, d) * cp.weyl(idx[0], idx[1], idx[2], idx[3]);
                    }
                worst = std::max(worst, std::abs(acc));
            }
    }
    return worst;
}

double contracted_bianchi_residual(const PointContext& ctx) {
    const int n = ctx.cp.n;
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) acc += ctx.cp.ginv(i, k) * ctx.cp.grad_ricci(i, j, k);
        worst = std::max(worst, std::abs(acc - 0.5 * ctx.cp.grad_scalar[j]));
    }
    return worst;
}

double d_antisymmetry_residual(const Tensor3& d) {
    const int n = d.dim();
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) worst = std::max(worst, std::abs(d(i, j, k) + d(j, i, k)));
    return worst;
}

double frame_orthonormality_residual(const PointContext& ctx, const AdaptedFrame& fr) {
    const int n = fr.dim();
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double gij = fr.e(i).dot(ctx.mj.g * fr.e(j));
            worst = std::max(worst, std::abs(gij - (i == j ? 1.0 : 0.0)));
        }
    return worst;
}

struct SkipCounter {
    int critical = 0;
    int domain = 0;
    int degenerate = 0;

    int total() const { return critical + domain + degenerate; }
};

void append_skip_row(std::vector<ResidualReport>& checks, const SkipCounter& skips,
                     const Eigen::VectorXd& anywhere) {
    if (skips.total() == 0) return;
    checks.push_back(
        ResidualReport::make("points_skipped", skips.total(), kInformational, anywhere));
}

void run_algebraic_suite(const SolitonInstance& inst, const std::vector<Eigen::VectorXd>& points,
                         const Tolerances& tol, std::vector<ResidualReport>& checks) {
    Agg sym("riemann_symmetries", tol.symmetry);
    Agg bianchi("first_bianchi", tol.symmetry);
    Agg wtrace("weyl_traces", tol.symmetry);
    Agg cbianchi("contracted_bianchi", tol.ricci);
    Agg ricci_id("ricci_identity", tol.ricci);
    Agg d_anti("d_antisymmetry", 0.0);
    Agg d_tr12("d_trace_first_pair", tol.trace);
    Agg d_tr13("d_trace_outer_pair", tol.trace);
    Agg dnorm("dnorm_split", tol.algebraic);
    SkipCounter skips;

    for (const auto& p : points) {
        try {
            const PointContext ctx = make_context(inst, p);
            sym.add(riemann_symmetry_residual(ctx.cp), p);
            bianchi.add(first_bianchi_residual(ctx.cp), p);
            wtrace.add(weyl_trace_residual(ctx.cp), p);
            cbianchi.add(contracted_bianchi_residual(ctx), p);
            ricci_id.add(ricci_identity_residual(ctx, tol.ricci).value, p);
            const Tensor3 d = d_tensor(ctx);
            d_anti.add(d_antisymmetry_residual(d), p);
            const auto [t12, t13] = d_tensor_traces(ctx, d);
            d_tr12.add(t12, p);
            d_tr13.add(t13, p);
            try {
                dnorm.add(d_norm_split_residual(ctx, tol.algebraic).value, p);
            } catch (const CriticalPointError&) {
                ++skips.critical;
            }
        } catch (const NotPositiveDefiniteError&) {
            ++skips.degenerate;
        } catch (const OutOfDomainError&) {
            ++skips.domain;
        }
    }
    for (const Agg* a : {&sym, &bianchi, &wtrace, &cbianchi, &ricci_id, &d_anti, &d_tr12, &d_tr13, &dnorm})
        push_if_seen(checks, *a);
    append_skip_row(checks, skips, points.empty() ? Eigen::VectorXd() : points.front());
}

void run_soliton_suite(const SolitonInstance& inst, const std::vector<Eigen::VectorXd>& points,
                       const Tolerances& tol, std::vector<ResidualReport>& checks) {
    Agg eq("soliton_eq", tol.soliton);
    Agg trace("trace_identity", tol.soliton);
    Agg gradnorm("gradnorm_identity", tol.soliton);
    Agg gradscalar("gradscalar_identity", tol.soliton);
    Agg weylc("weyl_contraction", tol.soliton);
    SkipCounter skips;

    for (const auto& p : points) {
        try {
            const PointContext ctx = make_context(inst, p);
            eq.add(soliton_residual(ctx, inst.params).cwiseAbs().maxCoeff(), p);
            const auto cons = soliton_consequence_residuals(ctx, inst.params, tol.soliton);
            trace.add(cons[0].value, p);
            gradnorm.add(cons[1].value, p);
            gradscalar.add(cons[2].value, p);
            weylc.add(weyl_contraction_residual(ctx, tol.soliton).value, p);
        } catch (const NotPositiveDefiniteError&) {
            ++skips.degenerate;
        } catch (const OutOfDomainError&) {
            ++skips.domain;
        }
    }
    for (const Agg* a : {&eq, &trace, &gradnorm, &gradscalar, &weylc}) push_if_seen(checks, *a);
    append_skip_row(checks, skips, points.empty() ? Eigen::VectorXd() : points.front());
}

void run_levelset_suite(const SolitonInstance& inst, const std::vector<Eigen::VectorXd>& points,
                        const Tolerances& tol, std::vector<ResidualReport>& checks) {
    Agg ortho("frame_orthonormality", tol.frame);
    Agg mean_curv("mean_curvature_identity", tol.soliton);
    Agg h_iso("h_isotropy", tol.soliton);
    Agg ric_mixed("ric_mixed", tol.soliton);
    Agg ric_dev("ric_tangent_isotropy", tol.soliton);
    Agg sect3("sectional_closed_form", tol.soliton);
    Agg weyl4("restricted_weyl", tol.soliton);
    SkipCounter skips;

    for (const auto& p : points) {
        try {
            const PointContext ctx = make_context(inst, p);
            const AdaptedFrame fr = adapted_frame(ctx);
            ortho.add(frame_orthonormality_residual(ctx, fr), p);
            const LevelSetReport rep = level_set_report(ctx);
            const double r_rho = ctx.cp.scalar - inst.params.rho;
            mean_curv.add(std::abs(rep.H - (inst.n - 1.0) * r_rho / ctx.grad_norm), p);
            h_iso.add(rep.h_isotropy_dev, p);
            ric_mixed.add(rep.ric_mixed_max, p);
            ric_dev.add(rep.ric_tangent_dev, p);
            if (inst.n == 3)
                sect3.add(std::abs(rep.sect.front() -
                                   sectional_closed_form_3d(ctx, inst.params)),
                          p);
            if (inst.n == 4) weyl4.add(restricted_weyl_max(ctx), p);
        } catch (const CriticalPointError&) {
            ++skips.critical;
        } catch (const NotPositiveDefiniteError&) {
            ++skips.degenerate;
        } catch (const OutOfDomainError&) {
            ++skips.domain;
        }
    }
    for (const Agg* a : {&ortho, &mean_curv, &h_iso, &ric_mixed, &ric_dev, &sect3, &weyl4})
        push_if_seen(checks, *a);
    append_skip_row(checks, skips, points.empty() ? Eigen::VectorXd() : points.front());
}

void run_quadrature_suite(const QuadratureConfig& qc, const Tolerances& tol,
                          std::vector<ResidualReport>& checks) {
    const SolitonParams params = qc.m_infinite ? SolitonParams::infinite(0.0)
                                               : SolitonParams::finite(qc.m, 0.0);
    const auto f = expression_scalar(qc.n, qc.f);
    const auto u = expression_scalar(qc.n, qc.u);
    const auto v = expression_scalar(qc.n, qc.v);
    const QuadratureResult qr =
        sphere_quadrature_identities(qc.n, *f, *u, *v, params, qc.resolution);
    Eigen::VectorXd none;
    checks.push_back(ResidualReport::make("quadrature_selfadjoint", qr.selfadjoint, tol.quadrature, none));
    checks.push_back(ResidualReport::make("quadrature_parts", qr.parts, tol.quadrature, none));
    checks.push_back(ResidualReport::make("quadrature_mean", qr.mean, tol.quadrature, none));
    checks.push_back(ResidualReport::make("quadrature_volume", qr.volume_rel_err,
                                          qc.resolution >= 48 ? tol.volume : kInformational, none));
}

Report run_verify(const RunConfig& cfg) {
    Report rep;
    const bool needs_instance =
        std::any_of(cfg.suites.begin(), cfg.suites.end(),
                    [](const std::string& s) { return s != "quadrature"; });
    SolitonInstance inst;
    std::vector<Eigen::VectorXd> points;
    if (needs_instance) {
        inst = resolve_instance(cfg);
        points = sample_points(inst.box, cfg.sample.count, cfg.sample.seed, cfg.sample.margin);
        rep.instance = inst.name;
    } else {
        rep.instance = "round S^" + std::to_string(cfg.quad.n) + " quadrature";
    }

    for (const auto& suite : cfg.suites) {
        if (suite == "algebraic") run_algebraic_suite(inst, points, cfg.tol, rep.checks);
        else if (suite == "soliton") run_soliton_suite(inst, points, cfg.tol, rep.checks);
        else if (suite == "levelset") run_levelset_suite(inst, points, cfg.tol, rep.checks);
        else if (suite == "quadrature") run_quadrature_suite(cfg.quad, cfg.tol, rep.checks);
    }
    return rep;
}

Report run_construct(const RunConfig& cfg) {
    ProfileParams pp;
    pp.n = cfg.construct.n;
    pp.params = cfg.construct.m_infinite ? SolitonParams::infinite(cfg.construct.rho)
                                         : SolitonParams::finite(cfg.construct.m, cfg.construct.rho);
    pp.q = cfg.construct.q;
    pp.r_max = cfg.construct.r_max;
    pp.h_r = cfg.construct.h_r;

    const Profile pr = integrate_profile(pp);

    Report rep;
    std::ostringstream label;
    label << "WARP(n=" << pp.n << ", m=" << (pp.params.m_infinite ? std::string("inf")
                                                                  : std::to_string(pp.params.m))
          << ", rho=" << pp.params.rho << ", q=" << pp.q << ") [" << to_string(pr.status)
          << ", r_hi=" << pr.r_hi() << "]";
    rep.instance = label.str();

    if (!cfg.csv_path.empty()) write_profile_csv(pr, cfg.csv_path);

    Eigen::VectorXd none;
    try {
        const auto residuals = profile_roundtrip_residuals(pr, cfg.sample.count, cfg.sample.seed);
        const double worst = *std::max_element(residuals.begin(), residuals.end());
        rep.checks.push_back(
            ResidualReport::make("roundtrip_soliton_eq", worst, cfg.tol.soliton, none));
        const ChainCheck cc = chain_identity_check(pr);
        rep.checks.push_back(
            ResidualReport::make("chain_identity", cc.max_residual, cfg.tol.chain, none));
        rep.checks.push_back(
            ResidualReport::make("chain_coefficient", cc.coefficient, kInformational, none));
    } catch (const ProfileTooShortError& e) {
        ResidualReport r = ResidualReport::make("profile_long_enough", 1.0, 0.0, none);
        r.name += std::string(" (") + e.what() + ")";
        rep.checks.push_back(r);
    }
    rep.checks.push_back(
        ResidualReport::make("min_sectional", profile_min_sectional(pr), kInformational, none));
    return rep;
}

Report run_levelset_cmd(const RunConfig& cfg) {
    const SolitonInstance inst = resolve_instance(cfg);
    Report rep;
    rep.instance = inst.name;

    if (!inst.radial) {
        // informational per-point reports; no constancy claims possible
        const auto points =
            sample_points(inst.box, cfg.sample.count, cfg.sample.seed, cfg.sample.margin);
        run_levelset_suite(inst, points, cfg.tol, rep.checks);
        SkipCounter skips;
        for (const auto& p : points) {
            try {
                const PointContext ctx = make_context(inst, p);
                const LevelSetReport lr = level_set_report(ctx);
                std::ostringstream name;
                name.precision(6);
                name << "point_f=" << lr.level;
                Eigen::VectorXd pt = p;
                rep.checks.push_back(
                    ResidualReport::make(name.str() + "/H", lr.H, kInformational, pt));
                rep.checks.push_back(
                    ResidualReport::make(name.str() + "/lambda", lr.lambda, kInformational, pt));
                rep.checks.push_back(
                    ResidualReport::make(name.str() + "/mu", lr.mu, kInformational, pt));
                rep.checks.push_back(ResidualReport::make(name.str() + "/ric_mixed_max",
                                                          lr.ric_mixed_max, kInformational, pt));
            } catch (const CriticalPointError&) {
                ++skips.critical;
            } catch (const NotPositiveDefiniteError&) {
                ++skips.degenerate;
            } catch (const OutOfDomainError&) {
                ++skips.domain;
            }
        }
        append_skip_row(rep.checks, skips, Eigen::VectorXd());
        return rep;
    }

    // radial chart: levels are radii, azimuthal samples stay on one level
    const double r_lo = inst.box.lo[0], r_hi = inst.box.hi[0];
    const int levels = std::max(1, cfg.levelset.levels);
    const int azim = std::max(2, cfg.levelset.azimuthal);
    SkipCounter skips;

    for (int li = 0; li < levels; ++li) {
        const double r = r_lo + (r_hi - r_lo) * (li + 0.5) / levels;
        Box level_box = inst.box;
        level_box.lo[0] = r;
        level_box.hi[0] = r + 1e-12;
        std::vector<Eigen::VectorXd> pts;
        try {
            pts = sample_points(level_box, azim, cfg.sample.seed + li, 0.0);
        } catch (const ConfigError&) {
            continue;
        }
        for (auto& p : pts) p[0] = r;

        std::vector<LevelSetReport> reps;
        double weyl4_max = 0.0, sect_cf_max = 0.0, mean_dev = 0.0, ortho_max = 0.0;
        for (const auto& p : pts) {
            try {
                const PointContext ctx = make_context(inst, p);
                const AdaptedFrame fr = adapted_frame(ctx);
                ortho_max = std::max(ortho_max, frame_orthonormality_residual(ctx, fr));
                reps.push_back(level_set_report(ctx));
                const double r_rho = ctx.cp.scalar - inst.params.rho;
                mean_dev = std::max(mean_dev, std::abs(reps.back().H - (inst.n - 1.0) * r_rho /
                                                                           ctx.grad_norm));
                if (inst.n == 3)
                    sect_cf_max = std::max(
                        sect_cf_max, std::abs(reps.back().sect.front() -
                                              sectional_closed_form_3d(ctx, inst.params)));
                if (inst.n == 4) weyl4_max = std::max(weyl4_max, restricted_weyl_max(ctx));
            } catch (const CriticalPointError&) {
                ++skips.critical;
            } catch (const NotPositiveDefiniteError&) {
                ++skips.degenerate;
            } catch (const OutOfDomainError&) {
                ++skips.domain;
            }
        }
        if (reps.empty()) continue;

        auto spread = [&](auto&& get) {
            double mn = std::numeric_limits<double>::infinity(), mx = -mn;
            for (const auto& lr : reps) {
                const double v = get(lr);
                mn = std::min(mn, v);
                mx = std::max(mx, v);
            }
            return mx - mn;
        };
        double sect_mn = std::numeric_limits<double>::infinity(), sect_mx = -sect_mn;
        double h_iso = 0.0, ric_mix = 0.0, ric_dev = 0.0;
        for (const auto& lr : reps) {
            sect_mn = std::min(sect_mn, lr.sect_min);
            sect_mx = std::max(sect_mx, lr.sect_max);
            h_iso = std::max(h_iso, lr.h_isotropy_dev);
            ric_mix = std::max(ric_mix, lr.ric_mixed_max);
            ric_dev = std::max(ric_dev, lr.ric_tangent_dev);
        }

        std::ostringstream tag;
        tag.precision(6);
        tag << "level_r=" << r;
        Eigen::VectorXd pt = pts.front();
        auto add = [&](const std::string& what, double value, double tol) {
            rep.checks.push_back(ResidualReport::make(tag.str() + "/" + what, value, tol, pt));
        };
        add("gradnorm2_spread", spread([](const LevelSetReport& lr) { return lr.grad_norm2; }),
            cfg.tol.soliton);
        add("scalar_spread", spread([](const LevelSetReport& lr) { return lr.scalar; }),
            cfg.tol.soliton);
        add("lambda_spread", spread([](const LevelSetReport& lr) { return lr.lambda; }),
            cfg.tol.soliton);
        add("mu_spread", spread([](const LevelSetReport& lr) { return lr.mu; }), cfg.tol.soliton);
        add("H_spread", spread([](const LevelSetReport& lr) { return lr.H; }), cfg.tol.soliton);
        add("sectional_spread", sect_mx - sect_mn, cfg.tol.soliton);
        add("h_isotropy", h_iso, cfg.tol.soliton);
        add("ric_mixed", ric_mix, cfg.tol.soliton);
        add("ric_tangent_isotropy", ric_dev, cfg.tol.soliton);
        add("mean_curvature_identity", mean_dev, cfg.tol.soliton);
        add("frame_orthonormality", ortho_max, cfg.tol.frame);
        if (inst.n == 3) add("sectional_closed_form", sect_cf_max, cfg.tol.soliton);
        if (inst.n == 4) add("restricted_weyl", weyl4_max, cfg.tol.soliton);
    }
    append_skip_row(rep.checks, skips, Eigen::VectorXd());
    return rep;
}

}  // namespace

Report run(const RunConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    Report rep;
    if (cfg.command == "verify") rep = run_verify(cfg);
    else if (cfg.command == "construct") rep = run_construct(cfg);
    else if (cfg.command == "levelset") rep = run_levelset_cmd(cfg);
    else throw ConfigError("unknown command '" + cfg.command + "'");

    const auto t1 = std::chrono::steady_clock::now();
    rep.total_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    if (!cfg.report_path.empty()) write_report(rep, cfg.report_path);
    return rep;
}

}  // namespace qys
