// qys command line: verify / construct / levelset.
// Exit codes: 0 all checks pass, 1 at least one check fails, 2 usage or
// config errors.
#include <CLI11.hpp>
#include <iostream>

#include "qys/runner.hpp"

namespace {

struct CommonFlags {
    std::string config;
    std::string catalog;
    std::string from_profile;
    std::string potential;
    std::string m_text;
    double rho = 0.0;
    bool rho_set = false;
    int points = 20;
    bool points_set = false;
    std::uint64_t seed = 1;
    bool seed_set = false;
    double margin = 0.05;
    bool margin_set = false;
    std::uint64_t catalog_seed = 0;
    bool catalog_seed_set = false;
    double radius = 0.0;
    bool radius_set = false;
    std::string report;
    double tol_soliton = 0.0;
    bool tol_soliton_set = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config, "JSON config file; flags override its values");
    cmd->add_option("--catalog", f.catalog, "catalog instance name");
    cmd->add_option("--from-profile", f.from_profile, "load the instance from a profile CSV");
    cmd->add_option("--f", f.potential, "potential expression over x1..xn");
    cmd->add_option("--m", f.m_text, "soliton parameter m (number or 'inf')");
    cmd->add_option("--rho", f.rho, "soliton parameter rho")->each([&](const std::string&) {
        f.rho_set = true;
    });
    cmd->add_option("--points", f.points, "sample point count")->each([&](const std::string&) {
        f.points_set = true;
    });
    cmd->add_option("--seed", f.seed, "sample seed")->each([&](const std::string&) {
        f.seed_set = true;
    });
    cmd->add_option("--margin", f.margin, "sampling margin inside the box")
        ->each([&](const std::string&) { f.margin_set = true; });
    cmd->add_option("--catalog-seed", f.catalog_seed, "seed for seeded catalog instances")
        ->each([&](const std::string&) { f.catalog_seed_set = true; });
    cmd->add_option("--radius", f.radius, "radius for the round-sphere catalog metric")
        ->each([&](const std::string&) { f.radius_set = true; });
    cmd->add_option("-o,--output", f.report, "write the JSON report here");
    cmd->add_option("--tol-soliton", f.tol_soliton, "soliton residual tolerance")
        ->each([&](const std::string&) { f.tol_soliton_set = true; });
}

qys::ordered_json base_config(const CommonFlags& f, const std::string& command) {
    qys::ordered_json j;
    if (!f.config.empty()) {
        std::ifstream is(f.config);
        if (!is) throw qys::ConfigError("cannot open config '" + f.config + "'");
        is >> j;
    }
    j["command"] = command;
    if (!f.catalog.empty()) j["catalog"] = f.catalog;
    if (!f.from_profile.empty()) j["from_profile"] = f.from_profile;
    if (!f.potential.empty()) j["potential"] = f.potential;
    if (!f.m_text.empty()) {
        if (f.m_text == "inf") j["m"] = "inf";
        else j["m"] = std::stod(f.m_text);
    }
    if (f.rho_set) j["rho"] = f.rho;
    if (f.points_set || !j.contains("points")) j["points"] = f.points;
    if (f.seed_set || !j.contains("seed")) j["seed"] = f.seed;
    if (f.margin_set || !j.contains("margin")) j["margin"] = f.margin;
    if (f.catalog_seed_set) j["catalog_seed"] = f.catalog_seed;
    if (f.radius_set) j["radius"] = f.radius;
    if (!f.report.empty()) j["report"] = f.report;
    if (f.tol_soliton_set) j["tolerances"]["soliton"] = f.tol_soliton;
    return j;
}

int finish(const qys::Report& rep) {
    std::cout << rep.to_json().dump(2) << "\n";
    return rep.summary() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical verification engine for quasi Yamabe gradient solitons"};
    app.require_subcommand(1);

    CommonFlags vf, lf, cf;
    std::vector<std::string> suites;
    int quad_resolution = 0;

    auto* verify = app.add_subcommand("verify", "run identity check suites over sampled points");
    add_common(verify, vf);
    verify->add_option("--suite", suites,
                       "suites: algebraic, soliton, levelset, quadrature (repeatable)");
    verify->add_option("--resolution", quad_resolution, "quadrature nodes per angle");

    auto* construct =
        app.add_subcommand("construct", "integrate a rotationally symmetric soliton profile");
    add_common(construct, cf);
    int c_n = 0;
    double c_q = 0.0, c_rmax = 0.0, c_hr = 0.0;
    bool c_n_set = false, c_q_set = false, c_rmax_set = false, c_hr_set = false;
    std::string csv_path;
    construct->add_option("--n", c_n, "dimension (>= 3)")->each([&](const std::string&) {
        c_n_set = true;
    });
    construct->add_option("--q", c_q, "potential curvature parameter f''(0)")
        ->each([&](const std::string&) { c_q_set = true; });
    construct->add_option("--r-max", c_rmax, "integration endpoint")->each([&](const std::string&) {
        c_rmax_set = true;
    });
    construct->add_option("--h-r", c_hr, "step size (<= 1e-3 * r_max)")
        ->each([&](const std::string&) { c_hr_set = true; });
    construct->add_option("--csv", csv_path, "profile CSV output path");

    auto* levelset =
        app.add_subcommand("levelset", "level-surface geometry reports per sampled level");
    add_common(levelset, lf);
    int ls_levels = 0, ls_azim = 0;
    bool ls_levels_set = false, ls_azim_set = false;
    levelset->add_option("--levels", ls_levels, "number of levels (radial instances)")
        ->each([&](const std::string&) { ls_levels_set = true; });
    levelset->add_option("--azimuthal", ls_azim, "samples per level")
        ->each([&](const std::string&) { ls_azim_set = true; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (verify->parsed()) {
            qys::ordered_json j = base_config(vf, "verify");
            if (!suites.empty()) {
                qys::ordered_json arr = qys::ordered_json::array();
                for (const auto& s : suites) arr.push_back(s);
                j["suite"] = arr;
            }
            if (quad_resolution > 0) j["quadrature"]["resolution"] = quad_resolution;
            return finish(qys::run(qys::parse_config(j)));
        }
        if (construct->parsed()) {
            qys::ordered_json j = base_config(cf, "construct");
            if (c_n_set) j["construct"]["n"] = c_n;
            if (!cf.m_text.empty()) {
                j.erase("m");
                if (cf.m_text == "inf") j["construct"]["m"] = "inf";
                else j["construct"]["m"] = std::stod(cf.m_text);
            }
            if (cf.rho_set) {
                j.erase("rho");
                j["construct"]["rho"] = cf.rho;
            }
            if (c_q_set) j["construct"]["q"] = c_q;
            if (c_rmax_set) j["construct"]["r_max"] = c_rmax;
            if (c_hr_set) j["construct"]["h_r"] = c_hr;
            if (!csv_path.empty()) j["csv"] = csv_path;
            return finish(qys::run(qys::parse_config(j)));
        }
        qys::ordered_json j = base_config(lf, "levelset");
        if (ls_levels_set) j["levelset"]["levels"] = ls_levels;
        if (ls_azim_set) j["levelset"]["azimuthal"] = ls_azim;
        return finish(qys::run(qys::parse_config(j)));
    } catch (const qys::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
