// Metric and scalar fields on a single chart: the evaluation surface consumed
// by the jet evaluator. Analytic fields expose a nested-dual entry point for
// exact derivatives; black boxes only expose plain values and are
// differentiated by finite differences.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "qys/dual.hpp"
#include "qys/errors.hpp"
#include "qys/expr.hpp"

namespace qys {

/// Axis-aligned chart domain box.
struct Box {
    Eigen::VectorXd lo, hi;

    static Box unit(int n, double half_width = 1.0) {
        Box b;
        b.lo = Eigen::VectorXd::Constant(n, -half_width);
        b.hi = Eigen::VectorXd::Constant(n, half_width);
        return b;
    }

    int dim() const { return static_cast<int>(lo.size()); }

    bool contains(const Eigen::VectorXd& p) const {
        if (p.size() != lo.size()) return false;
        for (int i = 0; i < p.size(); ++i)
            if (p[i] < lo[i] || p[i] > hi[i]) return false;
        return true;
    }
};

struct ScalarJet3;
struct MetricJet3;

class ScalarField {
public:
    virtual ~ScalarField() = default;
    virtual int dim() const = 0;
    virtual double value(const Eigen::VectorXd& x) const = 0;
    /// True when the field supports the nested-dual path.
    virtual bool analytic() const { return false; }
    /// Analytic evaluation on seeded third-order duals. Returns false when the
    /// field is a black box and only finite differences apply.
    virtual bool value_d3(std::span<const d3> x, d3& out) const {
        (void)x;
        (void)out;
        return false;
    }
    /// Fields that know their own derivatives (profile interpolants) fill the
    /// jet directly and bypass the dual pipeline.
    virtual bool direct_jet(const Eigen::VectorXd& p, ScalarJet3& out) const {
        (void)p;
        (void)out;
        return false;
    }
    virtual std::string describe() const = 0;
};

class MetricField {
public:
    virtual ~MetricField() = default;
    virtual int dim() const = 0;
    virtual void value(const Eigen::VectorXd& x, Eigen::MatrixXd& g) const = 0;
    virtual bool analytic() const { return false; }
    /// Analytic evaluation of all components on seeded duals; g is row-major n*n.
    virtual bool value_d3(std::span<const d3> x, std::span<d3> g) const {
        (void)x;
        (void)g;
        return false;
    }
    /// See ScalarField::direct_jet.
    virtual bool direct_jet(const Eigen::VectorXd& p, MetricJet3& out) const {
        (void)p;
        (void)out;
        return false;
    }
    virtual const Box& box() const = 0;
    virtual std::string describe() const = 0;
};

/// CRTP shim: Derived supplies `template <class T> T eval(std::span<const T>) const`.
template <class Derived>
class AnalyticScalarField : public ScalarField {
public:
    double value(const Eigen::VectorXd& x) const override {
        std::vector<double> c(x.data(), x.data() + x.size());
        return derived().template eval<double>(std::span<const double>(c));
    }
    bool analytic() const override { return true; }
    bool value_d3(std::span<const d3> x, d3& out) const override {
        out = derived().template eval<d3>(x);
        return true;
    }

private:
    const Derived& derived() const { return static_cast<const Derived&>(*this); }
};

/// CRTP shim for metrics: Derived supplies
/// `template <class T> void eval(std::span<const T>, T* g) const` filling all n*n entries.
template <class Derived>
class AnalyticMetricField : public MetricField {
public:
    void value(const Eigen::VectorXd& x, Eigen::MatrixXd& g) const override {
        const int n = dim();
        std::vector<double> c(x.data(), x.data() + x.size());
        std::vector<double> buf(static_cast<std::size_t>(n) * n);
        derived().template eval<double>(std::span<const double>(c), buf.data());
        g.resize(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g(i, j) = buf[static_cast<std::size_t>(i) * n + j];
    }
    bool analytic() const override { return true; }
    bool value_d3(std::span<const d3> x, std::span<d3> g) const override {
        derived().template eval<d3>(x, g.data());
        return true;
    }

private:
    const Derived& derived() const { return static_cast<const Derived&>(*this); }
};

// ---------------------------------------------------------------------------
// expression-backed fields

class ExprScalarField final : public AnalyticScalarField<ExprScalarField> {
public:
    ExprScalarField(std::string text, int n, const std::map<std::string, double>& constants = {})
        : text_(std::move(text)), n_(n), ast_(parse_expression(text_, n, constants)) {}

    int dim() const override { return n_; }
    std::string describe() const override { return text_; }

    template <class T>
    T eval(std::span<const T> x) const {
        return eval_expression(*ast_, x);
    }

private:
    std::string text_;
    int n_;
    ExprPtr ast_;
};

class ExprMetricField final : public AnalyticMetricField<ExprMetricField> {
public:
    /// Full component matrix; entries below the diagonal may be empty strings
    /// and are mirrored from above.
    ExprMetricField(std::vector<std::vector<std::string>> components, Box box,
                    const std::map<std::string, double>& constants = {},
                    std::string label = "expr metric");
    /// Diagonal metric.
    ExprMetricField(std::vector<std::string> diagonal, Box box,
                    const std::map<std::string, double>& constants = {},
                    std::string label = "expr metric");

    int dim() const override { return n_; }
    const Box& box() const override { return box_; }
    std::string describe() const override { return label_; }

    template <class T>
    void eval(std::span<const T> x, T* g) const {
        const int n = n_;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                T v = ast_[static_cast<std::size_t>(i) * n + j]
                          ? eval_expression(*ast_[static_cast<std::size_t>(i) * n + j], x)
                          : T(0.0);
                g[static_cast<std::size_t>(i) * n + j] = v;
                g[static_cast<std::size_t>(j) * n + i] = v;
            }
    }

private:
    int n_;
    Box box_;
    std::string label_;
    std::vector<ExprPtr> ast_;  // n*n, upper triangle populated
};

/// Scalar field wrapping an arbitrary callable; jets fall back to finite
/// differences since no dual path exists.
class BlackBoxScalarField final : public ScalarField {
public:
    BlackBoxScalarField(std::function<double(const Eigen::VectorXd&)> fn, int n, std::string label)
        : fn_(std::move(fn)), n_(n), label_(std::move(label)) {}
    int dim() const override { return n_; }
    double value(const Eigen::VectorXd& x) const override { return fn_(x); }
    std::string describe() const override { return label_; }

private:
    std::function<double(const Eigen::VectorXd&)> fn_;
    int n_;
    std::string label_;
};

}  // namespace qys
