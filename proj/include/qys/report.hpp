// JSON reports: deterministic serialization of check results.
#pragma once

#include <nlohmann/json.hpp>

#include "qys/soliton.hpp"

namespace qys {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "1.0.0";

/// Informational rows carry an infinite tolerance: they always pass and the
/// tolerance serializes as null.
inline constexpr double kInformational = std::numeric_limits<double>::infinity();

struct Report {
    std::string instance;
    std::vector<ResidualReport> checks;
    double total_ms = 0.0;

    bool summary() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    ordered_json to_json() const;
};

ordered_json residual_to_json(const ResidualReport& r);

/// Serialize with a stable layout; `timings` is the only nondeterministic key.
void write_report(const Report& rep, const std::string& path);

}  // namespace qys
