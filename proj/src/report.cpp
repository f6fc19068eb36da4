#include "qys/report.hpp"

#include <fstream>

namespace qys {

ordered_json residual_to_json(const ResidualReport& r) {
    ordered_json j;
    j["name"] = r.name;
    j["value"] = r.value;
    j["tolerance"] = std::isfinite(r.tolerance) ? ordered_json(r.tolerance) : ordered_json(nullptr);
    j["pass"] = r.pass;
    ordered_json pt = ordered_json::array();
    for (int i = 0; i < r.point.size(); ++i) pt.push_back(r.point[i]);
    j["point"] = pt;
    return j;
}

ordered_json Report::to_json() const {
    ordered_json j;
    j["version"] = kToolVersion;
    j["instance"] = instance;
    ordered_json arr = ordered_json::array();
    for (const auto& c : checks) arr.push_back(residual_to_json(c));
    j["checks"] = arr;
    j["summary"] = summary() ? "pass" : "fail";
    j["timings"] = ordered_json{{"total_ms", total_ms}};
    return j;
}

void write_report(const Report& rep, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open '" + path + "' for writing");
    os << rep.to_json().dump(2) << "\n";
}

}  // namespace qys
