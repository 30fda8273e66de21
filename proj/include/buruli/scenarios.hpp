#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "buruli/grid.hpp"
#include "buruli/imex.hpp"
#include "buruli/params.hpp"

namespace buruli {

// The five published parameter settings. S1 is the baseline with equal weak
// haptotaxis toward necrotic matter and normal tissue; S2 and S3 raise one
// sensitivity by two decades; S4 adds chemotaxis toward the toxin; S5 keeps
// the S1 sensitivities but starts with almost no normal tissue.
enum class ScenarioId { S1, S2, S3, S4, S5 };

const char* scenario_name(ScenarioId id);
ScenarioId parse_scenario(const std::string& text); // "S1".."S5" or "1".."5"

enum class V0Mode {
    UniformRandom,       // v0 ~ U(0,1) i.i.d. per cell
    ScaledUniformRandom, // v0 = v0_scale * U(0,1)
    Constant,            // v0 = v0_value everywhere
};

struct InitialConditionSpec {
    // Gaussian bumps centered in the domain for u, m, n.
    double u0_amp = 0.95;
    double m0_amp = 0.001;
    double n0_amp = 0.0001;
    double center_x = 0.5;
    double center_y = 0.5;
    double gauss_width = 0.01; // denominator inside exp(-r^2/width)
    V0Mode v0_mode = V0Mode::UniformRandom;
    double v0_scale = 0.0001;
    double v0_value = 1.0;
};

void validate(const InitialConditionSpec& ic);

struct ScenarioSpec {
    ScenarioId id = ScenarioId::S1;
    ModelKind model = ModelKind::Linear;
    InitialConditionSpec ic;
    double horizon = 250.0;
    std::vector<double> snapshots{5.0, 50.0, 100.0, 250.0};
    std::uint64_t rng_seed = 12345;
};

// Preset spec for a scenario id (model, ICs, horizon, default snapshots).
ScenarioSpec scenario_spec(ScenarioId id);

// Overwrites dp.gamma1/dp.gamma2 with the sensitivities the scenario
// prescribes; every other field is left alone.
void apply_scenario_sensitivities(ScenarioId id, DimensionalParams& dp);

// Dimensionless coefficients for a scenario: the usual scaling of dp with the
// scenario's taxis sensitivities imposed (dp's own gamma1/gamma2 are ignored;
// dp.gamma3 feeds g3_t in S4 only).
NondimParams scenario_params(ScenarioId id, const DimensionalParams& dp);

// Cell-center sampled initial fields. v0 noise comes from a fixed-seed
// mt19937_64 filled in row-major order, so a seed uniquely determines the
// state on a given grid across platforms.
State build_initial_state(const InitialConditionSpec& ic, const Grid& grid,
                          std::uint64_t seed);

struct ScenarioRun {
    ScenarioSpec spec;
    NondimParams np;
    std::vector<State> snapshots;
};

ScenarioRun run_scenario(const ScenarioSpec& spec, const NondimParams& np,
                         const Grid& grid, const StepperConfig& cfg);
ScenarioRun run_scenario(ScenarioId id, const Grid& grid, const StepperConfig& cfg,
                         const DimensionalParams& dp = DimensionalParams{});

// Snapshot-by-snapshot difference of two runs (second minus first).
struct StateDiff {
    double t;
    Field du, dm, dv, dn;
};

struct FieldDiffStats {
    double sup = 0.0;      // max |difference|
    double integral = 0.0; // signed integral of the difference
    double min = 0.0;
    double max = 0.0;
};

struct DiffSummary {
    double t = 0.0;
    FieldDiffStats u, m, v, n;
};

std::vector<StateDiff> compare_runs(const std::vector<State>& a,
                                    const std::vector<State>& b);
DiffSummary summarize(const StateDiff& d);

// Scalar reductions of one state, one row of the run summary table.
struct SummaryRow {
    double t = 0.0;
    double int_u = 0.0, int_m = 0.0, int_v = 0.0, int_n = 0.0;
    double sup_u = 0.0, sup_m = 0.0, sup_v = 0.0, sup_n = 0.0;
};

SummaryRow summarize_state(const State& s);

// Centered moving average of consecutive increments of a time series; used
// for the single-dip analysis of the scenario mass curves. window must be
// odd. The result has values.size()-1-(window-1) entries.
std::vector<double> smoothed_increments(const std::vector<double>& values, int window);

// Number of sign flips in a sequence, ignoring exact zeros.
int count_sign_flips(const std::vector<double>& seq);

} // namespace buruli
