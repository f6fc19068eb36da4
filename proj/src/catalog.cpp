#include "qys/catalog.hpp"

#include <functional>
#include <numbers>
#include <random>

#include "qys/construct.hpp"
#include "qys/jets.hpp"

namespace qys {

namespace {

constexpr double kPi = std::numbers::pi;

double canonical_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
}

double uniform_pm1(std::mt19937_64& rng) { return 2.0 * canonical_unit(rng) - 1.0; }

// ---------------------------------------------------------------------------
// simple analytic metrics

class FlatMetric final : public AnalyticMetricField<FlatMetric> {
public:
    explicit FlatMetric(int n) : n_(n), box_(Box::unit(n)) {}
    FlatMetric(int n, Box box) : n_(n), box_(std::move(box)) {}
    int dim() const override { return n_; }
    const Box& box() const override { return box_; }
    std::string describe() const override { return "flat R^" + std::to_string(n_); }

    template <class T>
    void eval(std::span<const T> x, T* g) const {
        (void)x;
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) g[i * n_ + j] = T(i == j ? 1.0 : 0.0);
    }

private:
    int n_;
    Box box_;
};

class Polar3Metric final : public AnalyticMetricField<Polar3Metric> {
public:
    Polar3Metric() {
        box_.lo = Eigen::Vector3d(0.5, 0.3, 0.1);
        box_.hi = Eigen::Vector3d(3.0, kPi - 0.3, 2.0 * kPi - 0.1);
    }
    int dim() const override { return 3; }
    const Box& box() const override { return box_; }
    std::string describe() const override { return "flat R^3, polar chart"; }

    template <class T>
    void eval(std::span<const T> x, T* g) const {
        for (int i = 0; i < 9; ++i) g[i] = T(0.0);
        const T r2 = x[0] * x[0];
        const T st = sin(x[1]);
        g[0] = T(1.0);
        g[4] = r2;
        g[8] = r2 * st * st;
    }

private:
    Box box_;
};

class SphereMetric final : public AnalyticMetricField<SphereMetric> {
public:
    SphereMetric(int n, double radius) : n_(n), r2_(radius * radius) {
        box_.lo = Eigen::VectorXd::Constant(n, 0.0);
        box_.hi = Eigen::VectorXd::Constant(n, kPi);
        box_.hi[n - 1] = 2.0 * kPi;
    }
    int dim() const override { return n_; }
    const Box& box() const override { return box_; }
    std::string describe() const override {
        return "round S^" + std::to_string(n_) + ", radius " + std::to_string(std::sqrt(r2_));
    }

    template <class T>
    void eval(std::span<const T> x, T* g) const {
        for (int i = 0; i < n_ * n_; ++i) g[i] = T(0.0);
        T s = T(r2_);
        g[0] = s;
        for (int k = 1; k < n_; ++k) {
            const T sk = sin(x[k - 1]);
            s = s * sk * sk;
            g[k * n_ + k] = s;
        }
    }

private:
    int n_;
    double r2_;
    Box box_;
};

class Hyperbolic3Metric final : public AnalyticMetricField<Hyperbolic3Metric> {
public:
    Hyperbolic3Metric() {
        box_.lo = Eigen::Vector3d(-1.0, -1.0, 0.5);
        box_.hi = Eigen::Vector3d(1.0, 1.0, 2.0);
    }
    int dim() const override { return 3; }
    const Box& box() const override { return box_; }
    std::string describe() const override { return "hyperbolic half-space H^3"; }

    template <class T>
    void eval(std::span<const T> x, T* g) const {
        for (int i = 0; i < 9; ++i) g[i] = T(0.0);
        const T w = 1.0 / (x[2] * x[2]);
        g[0] = w;
        g[4] = w;
        g[8] = w;
    }

private:
    Box box_;
};

class ProductS2R2Metric final : public AnalyticMetricField<ProductS2R2Metric> {
public:
    explicit ProductS2R2Metric(bool conformal) : conformal_(conformal) {
        box_.lo = Eigen::Vector4d(0.3, 0.1, -1.0, -1.0);
        box_.hi = Eigen::Vector4d(kPi - 0.3, 2.0 * kPi - 0.1, 1.0, 1.0);
    }
    int dim() const override { return 4; }
    const Box& box() const override { return box_; }
    std::string describe() const override {
        return conformal_ ? "conformally scaled S^2 x R^2" : "S^2(1) x R^2";
    }

    template <class T>
    void eval(std::span<const T> x, T* g) const {
        for (int i = 0; i < 16; ++i) g[i] = T(0.0);
        const T st = sin(x[0]);
        T w = T(1.0);
        if (conformal_) w = exp(0.6 * sin(x[0]) * cos(x[2]));
        g[0] = w;
        g[5] = w * st * st;
        g[10] = w;
        g[15] = w;
    }

private:
    bool conformal_;
    Box box_;
};

class ConformalFlatMetric final : public AnalyticMetricField<ConformalFlatMetric> {
public:
    ConformalFlatMetric(int n, const std::string& u_expr, Box box)
        : n_(n), box_(std::move(box)), text_(u_expr), u_(parse_expression(u_expr, n)) {}
    int dim() const override { return n_; }
    const Box& box() const override { return box_; }
    std::string describe() const override { return "exp(2(" + text_ + ")) * delta"; }

    template <class T>
    void eval(std::span<const T> x, T* g) const {
        const T w = exp(2.0 * eval_expression(*u_, x));
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) g[i * n_ + j] = (i == j) ? w : T(0.0);
    }

private:
    int n_;
    Box box_;
    std::string text_;
    ExprPtr u_;
};

// ---------------------------------------------------------------------------
// seeded polynomial fields

struct Monomial {
    double coef;
    std::array<std::uint8_t, 6> exp;  // per-coordinate exponents, n <= 6
};

template <class T>
T eval_monomials(const std::vector<Monomial>& mono, std::span<const T> x) {
    T acc = T(0.0);
    for (const Monomial& m : mono) {
        T term = T(m.coef);
        for (std::size_t i = 0; i < x.size(); ++i)
            for (int e = 0; e < m.exp[i]; ++e) term = term * x[i];
        acc = acc + term;
    }
    return acc;
}

// all exponent tuples with total degree <= 3, deterministic order
std::vector<std::array<std::uint8_t, 6>> monomial_basis(int n) {
    std::vector<std::array<std::uint8_t, 6>> basis;
    std::array<std::uint8_t, 6> e{};
    std::function<void(int, int)> rec = [&](int i, int remaining) {
        if (i == n) {
            basis.push_back(e);
            return;
        }
        for (int d = 0; d <= remaining; ++d) {
            e[i] = static_cast<std::uint8_t>(d);
            rec(i + 1, remaining - d);
        }
        e[i] = 0;
    };
    rec(0, 3);
    return basis;
}

std::vector<Monomial> random_polynomial(int n, std::mt19937_64& rng) {
    std::vector<Monomial> mono;
    for (const auto& e : monomial_basis(n)) mono.push_back({uniform_pm1(rng), e});
    return mono;
}

class PolyScalarField final : public AnalyticScalarField<PolyScalarField> {
public:
    PolyScalarField(int n, std::vector<Monomial> mono, std::string label)
        : n_(n), mono_(std::move(mono)), label_(std::move(label)) {}
    int dim() const override { return n_; }
    std::string describe() const override { return label_; }

    template <class T>
    T eval(std::span<const T> x) const {
        return eval_monomials(mono_, x);
    }

private:
    int n_;
    std::vector<Monomial> mono_;
    std::string label_;
};

class PolyMetricField final : public AnalyticMetricField<PolyMetricField> {
public:
    PolyMetricField(int n, double eps, std::vector<std::vector<Monomial>> upper, std::string label)
        : n_(n), eps_(eps), upper_(std::move(upper)), box_(Box::unit(n)), label_(std::move(label)) {}
    int dim() const override { return n_; }
    const Box& box() const override { return box_; }
    std::string describe() const override { return label_; }

    template <class T>
    void eval(std::span<const T> x, T* g) const {
        int idx = 0;
        for (int i = 0; i < n_; ++i)
            for (int j = i; j < n_; ++j) {
                T v = eps_ * eval_monomials(upper_[idx++], x);
                if (i == j) v = v + 1.0;
                g[i * n_ + j] = v;
                g[j * n_ + i] = v;
            }
    }

private:
    int n_;
    double eps_;
    std::vector<std::vector<Monomial>> upper_;
    Box box_;
    std::string label_;
};

class ConstantScalarField final : public AnalyticScalarField<ConstantScalarField> {
public:
    ConstantScalarField(int n, double c) : n_(n), c_(c) {}
    int dim() const override { return n_; }
    std::string describe() const override { return "constant " + std::to_string(c_); }

    template <class T>
    T eval(std::span<const T>) const {
        return T(c_);
    }

private:
    int n_;
    double c_;
};

}  // namespace

std::shared_ptr<const MetricField> flat_metric(int n) { return std::make_shared<FlatMetric>(n); }

std::shared_ptr<const MetricField> polar3_metric() { return std::make_shared<Polar3Metric>(); }

std::shared_ptr<const MetricField> conformal_flat_metric(int n, const std::string& u_expr, Box box) {
    return std::make_shared<ConformalFlatMetric>(n, u_expr, std::move(box));
}

std::shared_ptr<const MetricField> sphere_metric(int n, double radius) {
    return std::make_shared<SphereMetric>(n, radius);
}

std::shared_ptr<const MetricField> halfspace_hyperbolic3() {
    return std::make_shared<Hyperbolic3Metric>();
}

std::shared_ptr<const MetricField> product_s2xr2() {
    return std::make_shared<ProductS2R2Metric>(false);
}

std::shared_ptr<const MetricField> product_s2xr2_conformal() {
    return std::make_shared<ProductS2R2Metric>(true);
}

std::shared_ptr<const MetricField> randompoly_metric(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::vector<Monomial>> upper;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) upper.push_back(random_polynomial(n, rng));
    return std::make_shared<PolyMetricField>(
        n, 0.05, std::move(upper),
        "randompoly metric n=" + std::to_string(n) + " seed=" + std::to_string(seed));
}

std::shared_ptr<const ScalarField> randompoly_scalar(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return std::make_shared<PolyScalarField>(
        n, random_polynomial(n, rng),
        "randompoly scalar n=" + std::to_string(n) + " seed=" + std::to_string(seed));
}

std::shared_ptr<const ScalarField> constant_scalar(int n, double c) {
    return std::make_shared<ConstantScalarField>(n, c);
}

std::shared_ptr<const ScalarField> expression_scalar(int n, const std::string& text,
                                                     const std::map<std::string, double>& constants) {
    return std::make_shared<ExprScalarField>(text, n, constants);
}

std::vector<Eigen::VectorXd> sample_points(const Box& box, int count, std::uint64_t seed,
                                           double margin) {
    const int n = box.dim();
    std::mt19937_64 rng(seed);
    std::vector<Eigen::VectorXd> pts;
    pts.reserve(count);
    for (int k = 0; k < count; ++k) {
        Eigen::VectorXd p(n);
        for (int i = 0; i < n; ++i) {
            const double lo = box.lo[i] + margin;
            const double hi = box.hi[i] - margin;
            if (hi < lo) throw ConfigError("sampling margin exceeds box width");
            p[i] = lo + (hi - lo) * canonical_unit(rng);
        }
        pts.push_back(std::move(p));
    }
    return pts;
}

bool positive_definite_at(const MetricField& metric, const std::vector<Eigen::VectorXd>& points) {
    Eigen::MatrixXd g;
    for (const auto& p : points) {
        metric.value(p, g);
        Eigen::LDLT<Eigen::MatrixXd> ldlt(g);
        if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || ldlt.vectorD().minCoeff() <= 0.0)
            return false;
    }
    return true;
}

SolitonInstance make_randompoly_instance(int n, std::uint64_t seed) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        const std::uint64_t s = seed + static_cast<std::uint64_t>(attempt);
        auto metric = randompoly_metric(n, s);
        const auto pts = sample_points(metric->box(), 60, s ^ 0x9e3779b97f4a7c15ULL, 0.05);
        if (!positive_definite_at(*metric, pts)) continue;
        SolitonInstance inst;
        inst.n = n;
        inst.metric = metric;
        inst.potential = randompoly_scalar(n, s + 101);
        inst.params = SolitonParams::finite(1.0, 0.0);
        inst.box = metric->box();
        inst.name = "RANDOMPOLY" + std::to_string(n) + " seed=" + std::to_string(s);
        return inst;
    }
    throw ConfigError("no positive definite random polynomial metric found near seed " +
                      std::to_string(seed));
}

SolitonInstance catalog_instance(const std::string& name, const InstanceOverrides& ov) {
    SolitonInstance inst;
    const std::uint64_t seed = ov.seed.value_or(20240801ULL);

    auto finish = [&](std::shared_ptr<const MetricField> metric,
                      std::shared_ptr<const ScalarField> potential, SolitonParams params,
                      bool radial = false) {
        inst.n = metric->dim();
        inst.metric = metric;
        inst.potential = ov.potential_expr
                             ? expression_scalar(inst.n, *ov.potential_expr)
                             : potential;
        inst.params = ov.params.value_or(params);
        inst.box = metric->box();
        inst.name = name;
        inst.radial = radial;
        return inst;
    };

    if (name == "FLAT3") {
        return finish(flat_metric(3), constant_scalar(3, 0.0), SolitonParams::finite(1.0, 0.0));
    }
    if (name == "POLAR3") {
        return finish(polar3_metric(), constant_scalar(3, 0.0), SolitonParams::finite(1.0, 0.0));
    }
    if (name == "CONF3") {
        return finish(conformal_flat_metric(3, "x1", Box::unit(3)), constant_scalar(3, 0.0),
                      SolitonParams::finite(1.0, 0.0));
    }
    if (name == "CONF4") {
        return finish(conformal_flat_metric(4, "0.3*sin(x1)*cos(x2)", Box::unit(4)),
                      constant_scalar(4, 0.0), SolitonParams::finite(1.0, 0.0));
    }
    if (name == "SPHERE3") {
        const double radius = ov.radius.value_or(1.0);
        const double r_catalog = 6.0 / (radius * radius);  // R of the round metric
        return finish(sphere_metric(3, radius), constant_scalar(3, 0.0),
                      SolitonParams::finite(1.0, r_catalog));
    }
    if (name == "HYP3") {
        return finish(halfspace_hyperbolic3(), constant_scalar(3, 0.0),
                      SolitonParams::finite(1.0, -6.0));
    }
    if (name == "PRODUCT4") {
        return finish(product_s2xr2(), expression_scalar(4, "x1"), SolitonParams::finite(1.0, 0.0));
    }
    if (name == "PRODUCT4CONF") {
        return finish(product_s2xr2_conformal(), expression_scalar(4, "x1"),
                      SolitonParams::finite(1.0, 0.0));
    }
    if (name == "RANDOMPOLY3" || name == "RANDOMPOLY4" || name == "RANDOMPOLY5") {
        const int n = name.back() - '0';
        SolitonInstance r = make_randompoly_instance(n, seed);
        if (ov.params) r.params = *ov.params;
        if (ov.potential_expr) r.potential = expression_scalar(n, *ov.potential_expr);
        return r;
    }
    if (name == "HALF_STEADY") {
        const SolitonParams params =
            ov.params.value_or(SolitonParams::finite(2.0, 0.0));
        if (params.m_infinite)
            throw ConfigError("HALF_STEADY requires finite m");
        Box box;
        box.lo = Eigen::Vector3d(-0.5, -1.0, -1.0);
        box.hi = Eigen::Vector3d(1.5, 1.0, 1.0);
        auto metric = std::make_shared<FlatMetric>(3, box);
        SolitonInstance r;
        r.n = 3;
        r.metric = metric;
        r.potential = expression_scalar(
            3, "-m*ln(1+x1)", {{"m", params.m}});
        r.params = params;
        r.box = box;
        r.name = name;
        return r;
    }
    if (name == "WARP3") {
        return make_warp_instance(3, ov.params.value_or(SolitonParams::finite(1.0, 1.0)), 0.5);
    }
    if (name == "WARP4") {
        return make_warp_instance(4, ov.params.value_or(SolitonParams::finite(2.0, 1.0)), 0.5);
    }
    if (name == "WARP5") {
        return make_warp_instance(5, ov.params.value_or(SolitonParams::finite(1.0, 1.0)), 0.5);
    }
    throw ConfigError("unknown catalog instance '" + name + "'");
}

std::vector<std::string> catalog_names() {
    return {"FLAT3",    "POLAR3",      "CONF3",       "CONF4",       "SPHERE3",
            "HYP3",     "PRODUCT4",    "PRODUCT4CONF", "RANDOMPOLY3", "RANDOMPOLY4",
            "RANDOMPOLY5", "HALF_STEADY", "WARP3",       "WARP4",       "WARP5"};
}

}  // namespace qys
