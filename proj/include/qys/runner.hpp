// Batch front-end: run configuration (file or flag driven), instance
// resolution, check-suite execution, and report assembly.
#pragma once

#include <optional>

#include "qys/catalog.hpp"
#include "qys/construct.hpp"
#include "qys/report.hpp"

namespace qys {

struct SamplePolicy {
    int count = 20;
    std::uint64_t seed = 1;
    double margin = 0.05;
};

struct Tolerances {
    double soliton = 1e-6;     // defining equation and its consequences
    double algebraic = 1e-9;   // two-route |D|^2 relative difference
    double trace = 1e-11;      // D-tensor traces
    double ricci = 1e-8;       // Ricci identity, contracted second Bianchi
    double symmetry = 1e-10;   // Riemann symmetries, first Bianchi, Weyl traces
    double frame = 1e-12;      // frame orthonormality
    double quadrature = 1e-6;
    double volume = 1e-8;
    double chain = 1e-4;       // finite-difference-limited radial identity
};

struct QuadratureConfig {
    int n = 3;
    std::string f = "cos(x1)";
    std::string u = "sin(x1)*cos(x2)";
    std::string v = "cos(x1)";
    double m = 2.0;
    bool m_infinite = false;
    int resolution = 48;
};

struct ConstructConfig {
    int n = 3;
    double m = 1.0;
    bool m_infinite = false;
    double rho = 6.0;
    double q = 0.0;
    double r_max = 3.2;
    double h_r = 3.2e-3;
};

struct LevelsetConfig {
    int levels = 5;
    int azimuthal = 12;
};

struct RunConfig {
    std::string command;                 // verify | construct | levelset
    std::string catalog;                 // catalog instance name, or empty
    ordered_json instance_spec;          // inline instance, or null
    std::string from_profile;            // CSV path, or empty
    std::vector<std::string> suites{"algebraic"};
    SamplePolicy sample;
    Tolerances tol;
    std::optional<double> m_override;
    bool m_infinite_override = false;
    std::optional<double> rho_override;
    std::optional<std::string> potential_override;
    std::optional<std::uint64_t> catalog_seed;
    std::optional<double> radius;
    QuadratureConfig quad;
    ConstructConfig construct;
    LevelsetConfig levelset;
    std::string csv_path;
    std::string report_path;
};

/// Strict parse: unknown keys anywhere are rejected with ConfigError.
RunConfig parse_config(const ordered_json& j);
RunConfig load_config_file(const std::string& path);

/// Resolve the instance a verify/levelset run operates on.
SolitonInstance resolve_instance(const RunConfig& cfg);

Report run(const RunConfig& cfg);

}  // namespace qys
