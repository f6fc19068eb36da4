#include "qys/field.hpp"

namespace qys {

ExprMetricField::ExprMetricField(std::vector<std::vector<std::string>> components, Box box,
                                 const std::map<std::string, double>& constants, std::string label)
    : n_(static_cast<int>(components.size())), box_(std::move(box)), label_(std::move(label)) {
    if (box_.dim() != n_) throw ConfigError("metric component matrix does not match box dimension");
    ast_.resize(static_cast<std::size_t>(n_) * n_);
    for (int i = 0; i < n_; ++i) {
        if (static_cast<int>(components[i].size()) != n_)
            throw ConfigError("metric component matrix is not square");
        for (int j = i; j < n_; ++j) {
            const std::string& upper = components[i][j];
            const std::string& lower = components[j][i];
            const std::string& text = upper.empty() ? lower : upper;
            if (!upper.empty() && !lower.empty() && upper != lower)
                throw ConfigError("metric components (" + std::to_string(i + 1) + "," +
                                  std::to_string(j + 1) + ") and transpose disagree");
            if (!text.empty()) ast_[static_cast<std::size_t>(i) * n_ + j] = parse_expression(text, n_, constants);
        }
    }
}

ExprMetricField::ExprMetricField(std::vector<std::string> diagonal, Box box,
                                 const std::map<std::string, double>& constants, std::string label)
    : n_(static_cast<int>(diagonal.size())), box_(std::move(box)), label_(std::move(label)) {
    if (box_.dim() != n_) throw ConfigError("metric diagonal does not match box dimension");
    ast_.resize(static_cast<std::size_t>(n_) * n_);
    for (int i = 0; i < n_; ++i)
        ast_[static_cast<std::size_t>(i) * n_ + i] = parse_expression(diagonal[i], n_, constants);
}

}  // namespace qys
