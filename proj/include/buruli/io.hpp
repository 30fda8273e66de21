// Run configuration files and deterministic output artifacts: full-precision
// CSV field snapshots, grayscale raster heatmaps with scale sidecars, summary
// and difference tables, and the reproducibility manifest.
#ifndef BURULI_IO_HPP
#define BURULI_IO_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "buruli/grid.hpp"
#include "buruli/imex.hpp"
#include "buruli/params.hpp"
#include "buruli/scenarios.hpp"

namespace buruli {

struct GridConfig {
    int nx = 100;
    int ny = 100;
};

struct OutputConfig {
    std::string dir = "out";
    bool csv = true;
    bool pgm = true;
};

// Everything a run needs, assembled from defaults plus a config file. The
// gamma*_set flags record which taxis sensitivities the file set explicitly;
// resolve_params lets those win over the scenario presets, so unset
// sensitivities are represented by the preset, not by params.gamma1/2/3.
struct RunConfig {
    DimensionalParams params;
    bool gamma1_set = false;
    bool gamma2_set = false;
    bool gamma3_set = false;
    GridConfig grid;
    StepperConfig stepper;
    ScenarioSpec scenario;
    OutputConfig output;
};

// INI-style parser: [section] headers, key = value lines, full-line comments
// starting with '#' or ';'. Sections are [parameters], [grid], [stepper],
// [scenario] and [output]; unknown sections, unknown keys, malformed values
// and out-of-range values raise std::runtime_error citing "<origin>:<line>".
// A scenario id preset is applied before any explicit keys, so key order in
// the file never matters.
RunConfig parse_config_text(const std::string& text, const std::string& origin);
RunConfig load_config(const std::string& path);

// Deterministic dump of every setting, parseable by parse_config_text. The
// gamma1/gamma2/gamma3 lines appear only when the matching _set flag is on
// (absence of the key is what "use the scenario preset" means). This text is
// the input of the manifest's config hash, so the hash covers defaults too.
std::string canonical_config_text(const RunConfig& cfg);

// Dimensionless coefficients for the configured run: scenario presets with
// any explicitly configured sensitivities taking precedence. An explicit
// gamma3 turns the toxin-gradient term on in every scenario, not just S4.
NondimParams resolve_params(const RunConfig& cfg);

// FNV-1a, 64 bit.
std::uint64_t fnv1a64(const std::string& text);

const char* code_version();

// Field CSV layout: line 1 is the header "nx,ny,t", line 2 the values of
// those three, then ny rows of nx comma-separated cell values (row j=0
// first, x fastest). Doubles are printed with 17 significant digits so the
// read-back reproduces the field bit for bit.
void write_field_csv(const Field& f, double t, const std::string& path);
Field read_field_csv(const std::string& path, double* t_out = nullptr);

// 8-bit binary graymap, min-max scaled per file; "<path>.scale.txt" records
// "min max". A constant field renders as all-zero bytes. Row j=ny-1 is
// written first so y points up in the image, matching plot orientation.
void write_pgm(const Field& f, const std::string& path);

// Writes prefix + "_u.csv", "_m.csv", "_v.csv", "_n.csv" (when csv) and the
// corresponding ".pgm" renders with sidecars (when pgm).
void write_snapshot(const State& s, const std::string& prefix,
                    bool csv = true, bool pgm = true);

// CSV read-back of a snapshot written by write_snapshot. The four files must
// agree on grid and time.
State read_snapshot(const std::string& prefix);

// "snap_t<t>" with '.' replaced by 'p', e.g. snap_t5, snap_t2p5.
std::string snapshot_tag(double t);

// Prefixes (directory + tag) of every snapshot found in dir, sorted by time.
std::vector<std::pair<double, std::string>> discover_snapshots(const std::string& dir);

// Header t,int_u,...,sup_n; one row per snapshot with 17 significant digits.
void write_summary(const std::vector<SummaryRow>& rows, const std::string& path);

// Per-snapshot difference statistics of two runs, one row per snapshot.
void write_diff_summary(const std::vector<DiffSummary>& rows, const std::string& path);

struct ManifestData {
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
    std::string scenario;
    std::string model;
    int nx = 0;
    int ny = 0;
    double dt_config = 0.0;
    double dt_first_step = 0.0; // dt the guard admits at t=0
    // (name, outcome) pairs, e.g. ("non_negativity", "ok floor=-1.2e-12").
    std::vector<std::pair<std::string, std::string>> invariants;
    bool valid = true;
    std::string breach; // failure description when !valid
};

// key=value lines; deterministic except for the trailing timestamp line, so
// identical runs produce manifests that differ only there.
void write_manifest(const ManifestData& m, const std::string& path);

} // namespace buruli

#endif
