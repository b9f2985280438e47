#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "quedyn/refdyn.hpp"
#include "quedyn/scenario.hpp"
#include "quedyn/timeseries.hpp"

namespace quedyn {

inline constexpr const char* kVersion = "0.3.0";

/// Everything derived from one fixture: integrals, determinant basis, CI
/// eigenbasis (with CAP level shifts when `cap_d` is set), dipole matrices in
/// the eigenbasis, and the qubit-side operators.
struct MoleculeContext {
    MolecularIntegrals mi;
    DeterminantBasis basis;
    CIEigenbasis eig;
    std::array<Eigen::MatrixXd, 3> mu_eig;
    PauliSum h_jw;
    std::array<PauliSum, 3> mu_jw;
    PauliSum cap_jw;  // empty without a CAP
    int num_qubits = 0;
};

MoleculeContext build_context(const std::string& fcidump_path,
                              std::optional<double> cap_d = std::nullopt);

/// 64-bit FNV-1a over a byte range / a file's contents.
std::uint64_t fnv1a64(const void* data, std::size_t size);
std::uint64_t fnv1a64_file(const std::string& path);

/// Resolves a scenario's molecule token: a bare name maps to
/// <fixtures_dir>/<name>.fcidump, anything with a path separator or a
/// .fcidump suffix is used as-is. `bundled` reports which case applied.
std::string resolve_fixture(const std::string& molecule,
                            const std::string& fixtures_dir, bool* bundled = nullptr);

/// Compares the fixture file set (fcidump + sidecars) against the
/// checksums.txt registry in the fixture's directory. For bundled fixtures a
/// missing registry or entry is an error; path-referenced fixtures are only
/// checked against entries that exist.
void verify_fixture_checksums(const std::string& fcidump_path, bool bundled);

struct RunOptions {
    std::string fixtures_dir = "fixtures";
    std::string out_dir = ".";
    std::string engine_override;  // empty keeps the scenario's engine
    std::optional<std::uint64_t> seed_override;
    bool compare_tdci = false;
    // Non-empty: the qite engine also writes its per-step solve diagnostics
    // (c^2, residual, condition estimate) to this path.
    std::string qite_records_path;
};

struct DeviationReport {
    std::size_t common_points = 0;
    double max_population_deviation = 0.0;
    std::map<int, double> per_state_max;  // singlet label -> max |dP|
    double dipole_rms_deviation = 0.0;
    double max_norm_deviation = 0.0;
    double final_norm_deviation = 0.0;  // test - reference, signed
};

/// Pointwise deviation between two series for the same molecule; rows are
/// matched by singlet label, times by binary search to 1e-6.
DeviationReport compare_series(const TimeSeries& test, const TimeSeries& reference);

struct RunResult {
    std::string engine;
    std::uint64_t seed = 0;
    TimeSeries series;
    std::vector<std::size_t> tracked_rows;  // indices into series.populations
    std::string csv_path;
    std::string manifest_path;
    std::string compare_path;  // empty without --compare
    DeviationReport deviation;  // filled in compare mode
    double wall_clock_seconds = 0.0;
};

/// Population rows whose peak reaches `threshold`; the initially occupied row
/// is always kept.
std::vector<std::size_t> select_tracked_rows(const TimeSeries& ts, double threshold);

/// Runs one engine in-memory (no files written).
TimeSeries run_engine(const Scenario& scn, const std::string& engine,
                      const MoleculeContext& ctx, std::uint64_t seed);

/// Full run: fixture integrity check, engine dispatch, CSV + manifest (and
/// comparison report with --compare) under opts.out_dir. Partial outputs are
/// removed when a step fails.
RunResult run_scenario(const Scenario& scn, const RunOptions& opts);

void write_timeseries_csv(const std::string& path, const TimeSeries& ts,
                          const std::vector<std::size_t>& tracked_rows);

struct ScanRow {
    double dt = 0.0;
    std::size_t common_points = 0;
    double max_population_deviation = 0.0;
    double dipole_rms_deviation = 0.0;
};

/// Convergence scan: reruns the scenario's propagation engine on each step
/// size and compares against the reference engine on the common time grid.
/// The sampled-estimator engine scans its underlying unitary propagation.
std::vector<ScanRow> scan_dt(const Scenario& scn, const std::vector<double>& grid,
                             const RunOptions& opts);

}  // namespace quedyn
