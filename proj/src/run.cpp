#include "quedyn/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "quedyn/hadamard.hpp"
#include "quedyn/qdyn.hpp"
#include "quedyn/qite.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace quedyn {

// ---------------------------------------------------------------------------
// Fixture integrity

std::uint64_t fnv1a64(const void* data, std::size_t size) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 14695981039346656037ull;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for checksumming");
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string bytes = buf.str();
    return fnv1a64(bytes.data(), bytes.size());
}

namespace {

std::string to_hex16(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string fixture_base(const std::string& fcidump_path) {
    const std::string suffix = ".fcidump";
    if (fcidump_path.size() <= suffix.size() ||
        fcidump_path.substr(fcidump_path.size() - suffix.size()) != suffix)
        throw std::runtime_error("fixture path '" + fcidump_path +
                                 "' does not end in .fcidump");
    return fcidump_path.substr(0, fcidump_path.size() - suffix.size());
}

std::vector<std::string> fixture_file_set(const std::string& fcidump_path) {
    std::string base = fixture_base(fcidump_path);
    return {base + ".fcidump", base + ".dipole.x", base + ".dipole.y",
            base + ".dipole.z", base + ".orben"};
}

/// filename -> checksum hex for the whole fixture set.
std::vector<std::pair<std::string, std::string>> collect_fixture_checksums(
    const std::string& fcidump_path) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& f : fixture_file_set(fcidump_path))
        out.emplace_back(fs::path(f).filename().string(), to_hex16(fnv1a64_file(f)));
    return out;
}

std::map<std::string, std::string> read_checksum_registry(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open checksum registry '" + path + "'");
    std::map<std::string, std::string> reg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream row(line);
        std::string hex, name;
        if (!(row >> hex)) continue;  // blank line
        if (hex.front() == '#') continue;
        if (!(row >> name) || hex.size() != 16)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected '<16-hex-digits> <filename>'");
        reg[name] = hex;
    }
    return reg;
}

}  // namespace

std::string resolve_fixture(const std::string& molecule, const std::string& fixtures_dir,
                            bool* bundled) {
    bool is_path = molecule.find('/') != std::string::npos ||
                   molecule.find('\\') != std::string::npos ||
                   (molecule.size() > 8 &&
                    molecule.substr(molecule.size() - 8) == ".fcidump");
    if (bundled) *bundled = !is_path;
    if (is_path) return molecule;
    return fixtures_dir + "/" + molecule + ".fcidump";
}

void verify_fixture_checksums(const std::string& fcidump_path, bool bundled) {
    std::string registry_path =
        (fs::path(fcidump_path).parent_path() / "checksums.txt").string();
    bool have_registry = fs::exists(registry_path);
    if (!have_registry) {
        if (bundled)
            throw std::runtime_error("bundled fixture '" + fcidump_path +
                                     "' has no checksum registry at " + registry_path);
        return;  // ad-hoc fixture outside the bundled set
    }
    auto registry = read_checksum_registry(registry_path);
    for (const auto& file : fixture_file_set(fcidump_path)) {
        std::string name = fs::path(file).filename().string();
        auto it = registry.find(name);
        if (it == registry.end()) {
            if (bundled)
                throw std::runtime_error("fixture file '" + name +
                                         "' missing from registry " + registry_path);
            continue;
        }
        std::string actual = to_hex16(fnv1a64_file(file));
        if (actual != it->second)
            throw std::runtime_error("fixture checksum mismatch for '" + file +
                                     "': expected " + it->second + ", got " + actual);
    }
}

// ---------------------------------------------------------------------------
// Context construction

MoleculeContext build_context(const std::string& fcidump_path,
                              std::optional<double> cap_d) {
    MoleculeContext ctx;
    ctx.mi = load_molecule(fcidump_path);
    ctx.num_qubits = 2 * ctx.mi.num_spatial_orbitals;
    ctx.basis = enumerate_determinants(ctx.num_qubits, ctx.mi.num_electrons);

    FermionOperator h_f = build_electronic_hamiltonian(ctx.mi);
    FermionOperator s2_f = build_s2_operator(ctx.mi.num_spatial_orbitals);
    Eigen::MatrixXcd h_mat = build_matrix(h_f, ctx.basis);
    Eigen::MatrixXcd s2_mat = build_matrix(s2_f, ctx.basis);

    std::array<FermionOperator, 3> mu_f;
    std::array<Eigen::MatrixXcd, 3> mu_mats;
    for (int a = 0; a < 3; ++a) {
        mu_f[a] = build_dipole_operator(ctx.mi, a);
        mu_mats[a] = build_matrix(mu_f[a], ctx.basis);
    }

    ctx.eig = diagonalize_ci(h_mat, s2_mat, &mu_mats);
    for (int a = 0; a < 3; ++a) ctx.mu_eig[a] = to_eigenbasis_real(mu_mats[a], ctx.eig);

    auto ordering = SpinOrbitalOrdering::interleaved();
    ctx.h_jw = jordan_wigner(h_f, ordering);
    for (int a = 0; a < 3; ++a) ctx.mu_jw[a] = jordan_wigner(mu_f[a], ordering);

    if (cap_d) {
        FermionOperator cap_f = build_cap_operator(ctx.mi, *cap_d);
        add_cap_shifts(ctx.eig, cap_f, ctx.basis);
        ctx.cap_jw = jordan_wigner(cap_f, ordering);
    }
    return ctx;
}

// ---------------------------------------------------------------------------
// Engine dispatch

namespace {

CIWavepacket initial_state(const Scenario& scn, const MoleculeContext& ctx) {
    if (scn.initial_determinant < 0) return initial_wavepacket_ground(ctx.eig);
    if (scn.initial_determinant >= ctx.basis.size())
        throw std::runtime_error("initial determinant index " +
                                 std::to_string(scn.initial_determinant) +
                                 " outside basis of size " +
                                 std::to_string(ctx.basis.size()));
    return initial_wavepacket_determinant(ctx.eig, scn.initial_determinant);
}

/// Reference-engine record stride reproducing the quantum record grid.
int aligned_reference_every(const Scenario& scn) {
    double interval = scn.config.dt * scn.config.record_every;
    double k = interval / scn.reference_dt;
    auto kl = static_cast<long long>(std::llround(k));
    if (kl < 1 || std::abs(k - static_cast<double>(kl)) > 1e-9 * std::max(1.0, k))
        throw std::runtime_error(
            "record interval dt*record_every = " + std::to_string(interval) +
            " is not a multiple of reference_dt = " + std::to_string(scn.reference_dt));
    return static_cast<int>(kl);
}

TimeSeries run_tdci(const Scenario& scn, const MoleculeContext& ctx) {
    TdciConfig cfg;
    cfg.dt = scn.reference_dt;
    cfg.t_final = scn.config.t_final;
    cfg.record_every = aligned_reference_every(scn);
    cfg.record_axis = scn.config.record_axis;
    return tdci_propagate(ctx.eig, ctx.mu_eig, scn.pulse, cfg, initial_state(scn, ctx));
}

TimeSeries run_qdyn(const Scenario& scn, const MoleculeContext& ctx) {
    QubitRegister reg = prepare_register(ctx.eig, ctx.basis, initial_state(scn, ctx));
    StepObserver rec =
        make_ci_recorder(ctx.eig, ctx.basis, ctx.mu_jw[scn.config.record_axis]);
    return propagate_quantum(reg, ctx.h_jw, ctx.mu_jw, scn.pulse, scn.config, rec);
}

TimeSeries run_hadamard(const Scenario& scn, const MoleculeContext& ctx,
                        std::uint64_t seed) {
    if (!scn.has_hadamard)
        throw std::runtime_error("engine 'hadamard' requires a [hadamard] section in " +
                                 scn.source_path);
    const HadamardPlan& plan = scn.hadamard;
    const PauliSum& mu_full = ctx.mu_jw[scn.config.record_axis];
    // The identity share of the dipole (nuclear frame term plus the trace the
    // encoding moves onto the identity string) is added back classically; the
    // circuit only sees the traceless remainder.
    double c0 = mu_full.identity_coefficient().real();
    PauliSum mu_prime = mu_full.without_identity();
    StepObserver base = make_ci_recorder(ctx.eig, ctx.basis, mu_full);

    if (plan.restart_mode == RestartMode::cached_register) {
        StepObserver obs = [&, c0, seed](double t, const QubitRegister& reg,
                                         double norm_scale, TimeSeries& ts) {
            base(t, reg, norm_scale, ts);
            std::uint64_t tidx = ts.times.size() - 1;
            double est =
                hadamard_test([&reg] { return reg; }, mu_prime, plan, seed, tidx);
            ts.dipole_estimate.push_back(estimate_dipole(est, plan.delta_x) + c0);
        };
        QubitRegister reg = prepare_register(ctx.eig, ctx.basis, initial_state(scn, ctx));
        return propagate_quantum(reg, ctx.h_jw, ctx.mu_jw, scn.pulse, scn.config, obs);
    }

    // Honest restarts: one full re-propagation from t = 0 per recorded point.
    TimeSeries ts = run_qdyn(scn, ctx);
    for (std::size_t r = 0; r < ts.times.size(); ++r) {
        double t_r = ts.times[r];
        StatePreparer prepare = [&scn, &ctx, t_r] {
            QubitRegister fresh =
                prepare_register(ctx.eig, ctx.basis, initial_state(scn, ctx));
            auto steps = static_cast<long long>(std::llround(t_r / scn.config.dt));
            for (long long k = 0; k < steps; ++k) {
                double t_mid = (static_cast<double>(k) + 0.5) * scn.config.dt;
                PauliSum h =
                    assemble_step_hamiltonian(ctx.h_jw, ctx.mu_jw, scn.pulse, t_mid);
                trotter_step(fresh, h, scn.config.dt, scn.config.trotter_order);
            }
            return fresh;
        };
        double est = hadamard_test(prepare, mu_prime, plan, seed, r);
        ts.dipole_estimate.push_back(estimate_dipole(est, plan.delta_x) + c0);
    }
    return ts;
}

TimeSeries run_qite(const Scenario& scn, const MoleculeContext& ctx,
                    std::uint64_t seed, std::vector<QiteStepRecord>* records) {
    if (ctx.cap_jw.empty())
        throw std::runtime_error("engine 'qite' requires a [cap] section in " +
                                 scn.source_path);
    QiteConfig qcfg = scn.qite;
    qcfg.seed = seed;
    QubitRegister reg = prepare_register(ctx.eig, ctx.basis, initial_state(scn, ctx));
    StepObserver rec =
        make_ci_recorder(ctx.eig, ctx.basis, ctx.mu_jw[scn.config.record_axis]);
    return propagate_with_cap(reg, ctx.h_jw, ctx.mu_jw, ctx.cap_jw, scn.pulse,
                              scn.config, qcfg, rec, records);
}

void write_qite_records_csv(const std::string& path,
                            const std::vector<QiteStepRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "unit_step,c_squared,residual,condition_estimate\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", i,
                      records[i].c_squared, records[i].residual,
                      records[i].condition_estimate);
        out << buf;
    }
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

void check_engine_name(const std::string& engine) {
    static const std::set<std::string> kEngines = {"tdci", "qdyn", "hadamard", "qite"};
    if (!kEngines.count(engine))
        throw std::runtime_error("unknown engine '" + engine +
                                 "' (expected tdci, qdyn, hadamard or qite)");
}

}  // namespace

TimeSeries run_engine(const Scenario& scn, const std::string& engine,
                      const MoleculeContext& ctx, std::uint64_t seed) {
    check_engine_name(engine);
    if (engine == "tdci") return run_tdci(scn, ctx);
    if (engine == "qdyn") return run_qdyn(scn, ctx);
    if (engine == "hadamard") return run_hadamard(scn, ctx, seed);
    return run_qite(scn, ctx, seed, nullptr);
}

// ---------------------------------------------------------------------------
// Outputs

std::vector<std::size_t> select_tracked_rows(const TimeSeries& ts, double threshold) {
    std::vector<std::size_t> rows;
    std::size_t initial_row = 0;
    double initial_best = -1.0;
    for (std::size_t r = 0; r < ts.populations.size(); ++r) {
        if (!ts.populations[r].empty() && ts.populations[r].front() > initial_best) {
            initial_best = ts.populations[r].front();
            initial_row = r;
        }
    }
    for (std::size_t r = 0; r < ts.populations.size(); ++r) {
        double peak = 0.0;
        for (double p : ts.populations[r]) peak = std::max(peak, p);
        if (peak >= threshold || (r == initial_row && initial_best >= 0.0))
            rows.push_back(r);
    }
    return rows;
}

namespace {

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_timeseries_csv(const std::string& path, const TimeSeries& ts,
                          const std::vector<std::size_t>& tracked_rows) {
    ts.check_consistent();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "time,field_x,field_y,field_z,norm,dipole";
    bool with_estimate = !ts.dipole_estimate.empty();
    if (with_estimate) out << ",dipole_estimate";
    for (std::size_t r : tracked_rows) out << ",P_" << ts.state_labels.at(r);
    out << "\n";
    for (std::size_t i = 0; i < ts.size(); ++i) {
        out << fmt_double(ts.times[i]) << ',' << fmt_double(ts.field[i][0]) << ','
            << fmt_double(ts.field[i][1]) << ',' << fmt_double(ts.field[i][2]) << ','
            << fmt_double(ts.norm[i]) << ',' << fmt_double(ts.dipole[i]);
        if (with_estimate) out << ',' << fmt_double(ts.dipole_estimate[i]);
        for (std::size_t r : tracked_rows) out << ',' << fmt_double(ts.populations[r][i]);
        out << "\n";
    }
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

DeviationReport compare_series(const TimeSeries& test, const TimeSeries& reference) {
    test.check_consistent();
    reference.check_consistent();
    if (test.state_labels != reference.state_labels)
        throw std::runtime_error("cannot compare series with different state rows");

    DeviationReport rep;
    double dipole_sq_sum = 0.0;
    std::ptrdiff_t last_test = -1, last_ref = -1;
    for (std::size_t i = 0; i < test.size(); ++i) {
        double t = test.times[i];
        auto it = std::lower_bound(reference.times.begin(), reference.times.end(),
                                   t - 1e-6);
        if (it == reference.times.end() || std::abs(*it - t) > 1e-6) continue;
        std::size_t j = static_cast<std::size_t>(it - reference.times.begin());
        ++rep.common_points;
        last_test = static_cast<std::ptrdiff_t>(i);
        last_ref = static_cast<std::ptrdiff_t>(j);
        for (std::size_t r = 0; r < test.populations.size(); ++r) {
            double d = std::abs(test.populations[r][i] - reference.populations[r][j]);
            int label = test.state_labels[r];
            auto [entry, inserted] = rep.per_state_max.try_emplace(label, d);
            if (!inserted) entry->second = std::max(entry->second, d);
            rep.max_population_deviation = std::max(rep.max_population_deviation, d);
        }
        double dd = test.dipole[i] - reference.dipole[j];
        dipole_sq_sum += dd * dd;
        rep.max_norm_deviation = std::max(rep.max_norm_deviation,
                                          std::abs(test.norm[i] - reference.norm[j]));
    }
    if (rep.common_points == 0)
        throw std::runtime_error("engine and reference grids share no time points");
    rep.dipole_rms_deviation =
        std::sqrt(dipole_sq_sum / static_cast<double>(rep.common_points));
    rep.final_norm_deviation = test.norm[static_cast<std::size_t>(last_test)] -
                               reference.norm[static_cast<std::size_t>(last_ref)];
    return rep;
}

namespace {

json scenario_parameters(const Scenario& scn) {
    json params;
    params["molecule"] = scn.molecule;
    params["initial_state"] = scn.initial_determinant < 0
                                  ? std::string("ground")
                                  : std::to_string(scn.initial_determinant);
    params["pulse"] = {{"omega", scn.pulse.omega},
                       {"sigma", scn.pulse.sigma},
                       {"t_p", scn.pulse.t_p},
                       {"f0", {scn.pulse.f0[0], scn.pulse.f0[1], scn.pulse.f0[2]}}};
    params["propagation"] = {
        {"dt", scn.config.dt},
        {"trotter_order", scn.config.trotter_order},
        {"t_final", scn.config.t_final},
        {"record_every", scn.config.record_every},
        {"record_axis", std::string(1, "xyz"[scn.config.record_axis])},
        {"reference_dt", scn.reference_dt}};
    if (scn.has_hadamard)
        params["hadamard"] = {
            {"delta_x", scn.hadamard.delta_x},
            {"shots", scn.hadamard.shots},
            {"part", scn.hadamard.part == HadamardPart::imaginary ? "imaginary" : "real"},
            {"trotter_order", scn.hadamard.trotter_order_for_u},
            {"restart",
             scn.hadamard.restart_mode == RestartMode::cached_register ? "cached"
                                                                       : "honest"}};
    if (scn.has_cap)
        params["cap"] = {
            {"d", scn.cap_d},
            {"delta", scn.qite.delta},
            {"mode", scn.qite.mode == ReadoutMode::exact ? "exact" : "sampled"},
            {"shots", scn.qite.shots}};
    params["output"] = {{"prefix", scn.output_prefix},
                        {"population_threshold", scn.population_threshold}};
    return params;
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << j.dump(2) << "\n";
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

json deviation_to_json(const std::string& engine, const DeviationReport& rep) {
    json per_state;
    for (const auto& [label, dev] : rep.per_state_max)
        per_state["P_" + std::to_string(label)] = dev;
    return json{{"engine", engine},
                {"reference", "tdci"},
                {"common_points", rep.common_points},
                {"max_population_deviation", rep.max_population_deviation},
                {"per_state_max_deviation", per_state},
                {"dipole_rms_deviation", rep.dipole_rms_deviation},
                {"max_norm_deviation", rep.max_norm_deviation},
                {"final_norm_deviation", rep.final_norm_deviation}};
}

}  // namespace

RunResult run_scenario(const Scenario& scenario, const RunOptions& opts) {
    Scenario scn = scenario;
    std::string engine = opts.engine_override.empty() ? scn.engine : opts.engine_override;
    check_engine_name(engine);
    if (opts.seed_override) scn.seed = *opts.seed_override;
    if (engine == "hadamard" && !scn.has_hadamard)
        throw std::runtime_error("engine 'hadamard' requires a [hadamard] section in " +
                                 scn.source_path);
    if (engine == "qite" && !scn.has_cap)
        throw std::runtime_error("engine 'qite' requires a [cap] section in " +
                                 scn.source_path);
    if (scn.has_cap && (engine == "qdyn" || engine == "hadamard"))
        throw std::runtime_error("engine '" + engine +
                                 "' cannot run a scenario with a [cap] section");
    if (!opts.qite_records_path.empty() && engine != "qite")
        throw std::runtime_error("step records are only produced by the qite engine");

    bool bundled = false;
    std::string fixture = resolve_fixture(scn.molecule, opts.fixtures_dir, &bundled);
    verify_fixture_checksums(fixture, bundled);
    auto checksums = collect_fixture_checksums(fixture);

    auto t0 = std::chrono::steady_clock::now();
    MoleculeContext ctx = build_context(
        fixture, scn.has_cap ? std::optional<double>(scn.cap_d) : std::nullopt);

    if (!opts.out_dir.empty()) fs::create_directories(opts.out_dir);
    std::string stem =
        (opts.out_dir.empty() ? scn.output_prefix
                              : opts.out_dir + "/" + scn.output_prefix);

    RunResult res;
    res.engine = engine;
    res.seed = scn.seed;
    std::vector<std::string> written;
    try {
        if (engine == "qite" && !opts.qite_records_path.empty()) {
            std::vector<QiteStepRecord> records;
            res.series = run_qite(scn, ctx, scn.seed, &records);
            write_qite_records_csv(opts.qite_records_path, records);
            written.push_back(opts.qite_records_path);
        } else {
            res.series = run_engine(scn, engine, ctx, scn.seed);
        }
        res.tracked_rows = select_tracked_rows(res.series, scn.population_threshold);
        res.csv_path = stem + ".csv";
        write_timeseries_csv(res.csv_path, res.series, res.tracked_rows);
        written.push_back(res.csv_path);

        if (opts.compare_tdci) {
            TimeSeries ref = run_engine(scn, "tdci", ctx, scn.seed);
            res.deviation = compare_series(res.series, ref);
            res.compare_path = stem + ".compare.json";
            write_json_file(res.compare_path, deviation_to_json(engine, res.deviation));
            written.push_back(res.compare_path);
        }

        auto t1 = std::chrono::steady_clock::now();
        res.wall_clock_seconds = std::chrono::duration<double>(t1 - t0).count();

        json manifest;
        manifest["version"] = kVersion;
        manifest["engine"] = engine;
        manifest["seed"] = scn.seed;
        manifest["scenario_file"] = scn.source_path;
        manifest["parameters"] = scenario_parameters(scn);
        json sums;
        for (const auto& [name, hex] : checksums) sums[name] = hex;
        manifest["fixture"] = {{"path", fixture}, {"checksums", sums}};
        json tracked = json::array();
        for (std::size_t r : res.tracked_rows)
            tracked.push_back(res.series.state_labels.at(r));
        manifest["tracked_states"] = tracked;
        json outputs;
        outputs["timeseries"] = fs::path(res.csv_path).filename().string();
        if (!res.compare_path.empty())
            outputs["compare"] = fs::path(res.compare_path).filename().string();
        manifest["outputs"] = outputs;
        manifest["wall_clock_seconds"] = res.wall_clock_seconds;
        res.manifest_path = stem + ".manifest.json";
        write_json_file(res.manifest_path, manifest);
        written.push_back(res.manifest_path);
    } catch (...) {
        for (const auto& p : written) {
            std::error_code ec;
            fs::remove(p, ec);
        }
        throw;
    }
    return res;
}

std::vector<ScanRow> scan_dt(const Scenario& scenario, const std::vector<double>& grid,
                             const RunOptions& opts) {
    if (grid.empty()) throw std::runtime_error("scan grid is empty");
    Scenario scn = scenario;
    if (opts.seed_override) scn.seed = *opts.seed_override;
    std::string engine = opts.engine_override.empty() ? scn.engine : opts.engine_override;
    check_engine_name(engine);
    if (engine == "hadamard") engine = "qdyn";  // scan the underlying propagation

    bool bundled = false;
    std::string fixture = resolve_fixture(scn.molecule, opts.fixtures_dir, &bundled);
    verify_fixture_checksums(fixture, bundled);
    MoleculeContext ctx = build_context(
        fixture, scn.has_cap ? std::optional<double>(scn.cap_d) : std::nullopt);

    std::vector<ScanRow> rows;
    for (double dt : grid) {
        if (dt <= 0.0) throw std::runtime_error("scan grid contains non-positive dt");
        Scenario s = scn;
        s.config.dt = dt;
        // Smallest record stride whose interval lands on the reference grid.
        int stride = 0;
        for (int k = 1; k <= 100000; ++k) {
            double m = k * dt / s.reference_dt;
            double ml = std::round(m);
            if (ml >= 1.0 && std::abs(m - ml) <= 1e-9 * std::max(1.0, m)) {
                stride = k;
                break;
            }
        }
        if (stride == 0)
            throw std::runtime_error("dt = " + std::to_string(dt) +
                                     " never aligns with reference_dt = " +
                                     std::to_string(s.reference_dt));
        s.config.record_every = stride;

        TimeSeries q = run_engine(s, engine, ctx, s.seed);
        TimeSeries ref = run_engine(s, "tdci", ctx, s.seed);
        DeviationReport dev = compare_series(q, ref);
        rows.push_back(ScanRow{dt, dev.common_points, dev.max_population_deviation,
                               dev.dipole_rms_deviation});
    }
    return rows;
}

}  // namespace quedyn
