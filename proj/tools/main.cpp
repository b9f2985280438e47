#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "quedyn/run.hpp"
#include "quedyn/scenario.hpp"

namespace {

std::vector<double> parse_grid(const std::string& grid) {
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos < grid.size()) {
        std::size_t comma = grid.find(',', pos);
        std::string tok = grid.substr(pos, comma == std::string::npos ? std::string::npos
                                                                      : comma - pos);
        if (!tok.empty()) {
            std::size_t used = 0;
            double v = std::stod(tok, &used);
            if (used != tok.size())
                throw std::runtime_error("bad grid entry '" + tok + "'");
            values.push_back(v);
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (values.empty()) throw std::runtime_error("--grid needs at least one step size");
    return values;
}

int cmd_run(const std::string& scenario_path, const quedyn::RunOptions& opts) {
    quedyn::Scenario scn = quedyn::load_scenario(scenario_path);
    quedyn::RunResult res = quedyn::run_scenario(scn, opts);
    std::printf("engine %s seed %llu: %zu points, %zu tracked states, %.2f s\n",
                res.engine.c_str(), static_cast<unsigned long long>(res.seed),
                res.series.size(), res.tracked_rows.size(), res.wall_clock_seconds);
    std::printf("wrote %s\n", res.csv_path.c_str());
    if (!res.compare_path.empty()) {
        const auto& d = res.deviation;
        std::printf(
            "compare vs tdci: max |dP| = %.3e, dipole rms = %.3e, final norm dev = %+.3e "
            "(%zu common points)\n",
            d.max_population_deviation, d.dipole_rms_deviation, d.final_norm_deviation,
            d.common_points);
        std::printf("wrote %s\n", res.compare_path.c_str());
    }
    std::printf("wrote %s\n", res.manifest_path.c_str());
    if (!opts.qite_records_path.empty())
        std::printf("wrote %s\n", opts.qite_records_path.c_str());
    return 0;
}

int cmd_scan(const std::string& scenario_path, const std::string& grid_spec,
             const quedyn::RunOptions& opts, bool write_csv) {
    quedyn::Scenario scn = quedyn::load_scenario(scenario_path);
    std::vector<double> grid = parse_grid(grid_spec);
    std::vector<quedyn::ScanRow> rows = quedyn::scan_dt(scn, grid, opts);
    std::printf("%10s %8s %12s %12s\n", "dt", "points", "max|dP|", "dipole rms");
    for (const auto& r : rows)
        std::printf("%10.4f %8zu %12.3e %12.3e\n", r.dt, r.common_points,
                    r.max_population_deviation, r.dipole_rms_deviation);
    if (write_csv) {
        std::string path = opts.out_dir + "/" + scn.output_prefix + ".scan.csv";
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write '" + path + "'");
        out << "dt,common_points,max_population_deviation,dipole_rms_deviation\n";
        for (const auto& r : rows) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "%.17g,%zu,%.17g,%.17g\n", r.dt,
                          r.common_points, r.max_population_deviation,
                          r.dipole_rms_deviation);
            out << buf;
        }
        std::printf("wrote %s\n", path.c_str());
    }
    return 0;
}

int cmd_spectrum(const std::string& molecule, const std::string& fixtures_dir,
                 bool as_json) {
    bool bundled = false;
    std::string fixture = quedyn::resolve_fixture(molecule, fixtures_dir, &bundled);
    quedyn::verify_fixture_checksums(fixture, bundled);
    quedyn::MoleculeContext ctx = quedyn::build_context(fixture);

    int gs = ctx.eig.singlet_states.empty() ? 0 : ctx.eig.singlet_states.front();
    double e0 = ctx.eig.energies[gs];
    nlohmann::json states = nlohmann::json::array();
    if (!as_json)
        std::printf("%8s %6s %14s %12s %9s %9s %9s %9s\n", "singlet", "state", "energy",
                    "excitation", "t_x", "t_y", "t_z", "perm_z");
    for (std::size_t k = 0; k < ctx.eig.singlet_states.size(); ++k) {
        int s = ctx.eig.singlet_states[k];
        double tx = ctx.mu_eig[0](gs, s), ty = ctx.mu_eig[1](gs, s),
               tz = ctx.mu_eig[2](gs, s);
        double perm_z = ctx.mu_eig[2](s, s);
        if (as_json) {
            states.push_back({{"singlet", k},
                              {"state", s},
                              {"energy", ctx.eig.energies[s]},
                              {"excitation", ctx.eig.energies[s] - e0},
                              {"s2", ctx.eig.s2_values[s]},
                              {"transition_dipole", {tx, ty, tz}},
                              {"permanent_dipole",
                               {ctx.mu_eig[0](s, s), ctx.mu_eig[1](s, s), perm_z}}});
        } else {
            std::printf("%8zu %6d %14.6f %12.6f %9.4f %9.4f %9.4f %9.4f\n", k, s,
                        ctx.eig.energies[s], ctx.eig.energies[s] - e0, tx, ty, tz,
                        perm_z);
        }
    }
    if (as_json) {
        nlohmann::json out = {{"molecule", molecule},
                              {"num_states", ctx.eig.num_states()},
                              {"singlets", states}};
        std::printf("%s\n", out.dump(2).c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"laser-driven electron dynamics: exact CI reference engine and "
                 "statevector quantum engines"};
    app.require_subcommand(1);

    quedyn::RunOptions opts;
    std::string scenario_path, grid_spec, molecule, compare_target;
    std::optional<std::uint64_t> seed;
    bool as_json = false;
    bool have_out = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--fixtures", opts.fixtures_dir,
                        "directory holding bundled fixtures")
            ->capture_default_str();
        cmd->add_option("--seed", seed, "override the scenario seed");
    };

    CLI::App* run_cmd =
        app.add_subcommand("run", "propagate one scenario; writes CSV and manifest");
    run_cmd->add_option("scenario", scenario_path, "scenario file")
        ->required()
        ->check(CLI::ExistingFile);
    run_cmd->add_option("--engine", opts.engine_override,
                        "override the scenario engine (tdci|qdyn|hadamard|qite)");
    run_cmd
        ->add_option("--compare", compare_target,
                     "also run this reference engine and write a deviation report")
        ->check(CLI::IsMember({"tdci"}));
    run_cmd->add_option("--out", opts.out_dir, "output directory")->capture_default_str();
    run_cmd->add_option("--qite-records", opts.qite_records_path,
                        "with the qite engine, dump per-step solve diagnostics here");
    add_common(run_cmd);

    CLI::App* scan_cmd = app.add_subcommand(
        "scan-dt", "step-size convergence scan against the reference engine");
    scan_cmd->add_option("scenario", scenario_path, "scenario file")
        ->required()
        ->check(CLI::ExistingFile);
    scan_cmd->add_option("--grid", grid_spec, "comma-separated step sizes")->required();
    scan_cmd->add_option("--out", opts.out_dir, "also write <prefix>.scan.csv here");
    add_common(scan_cmd);

    CLI::App* spec_cmd = app.add_subcommand(
        "spectrum", "print singlet energies and dipoles for a molecule fixture");
    spec_cmd->add_option("molecule", molecule, "fixture name or .fcidump path")
        ->required();
    spec_cmd->add_option("--fixtures", opts.fixtures_dir,
                         "directory holding bundled fixtures")
        ->capture_default_str();
    spec_cmd->add_flag("--json", as_json, "machine-readable output");

    CLI11_PARSE(app, argc, argv);

    try {
        opts.seed_override = seed;
        if (run_cmd->parsed()) {
            opts.compare_tdci = compare_target == "tdci";
            return cmd_run(scenario_path, opts);
        }
        if (scan_cmd->parsed()) {
            have_out = scan_cmd->count("--out") > 0;
            return cmd_scan(scenario_path, grid_spec, opts, have_out);
        }
        return cmd_spectrum(molecule, opts.fixtures_dir, as_json);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
