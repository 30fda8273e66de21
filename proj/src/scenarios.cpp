#include "buruli/scenarios.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace buruli {

const char* scenario_name(ScenarioId id) {
    switch (id) {
        case ScenarioId::S1: return "S1";
        case ScenarioId::S2: return "S2";
        case ScenarioId::S3: return "S3";
        case ScenarioId::S4: return "S4";
        case ScenarioId::S5: return "S5";
    }
    throw std::logic_error("scenario_name: unreachable");
}

ScenarioId parse_scenario(const std::string& text) {
    std::string t = text;
    if (!t.empty() && (t[0] == 'S' || t[0] == 's')) t = t.substr(1);
    if (t == "1") return ScenarioId::S1;
    if (t == "2") return ScenarioId::S2;
    if (t == "3") return ScenarioId::S3;
    if (t == "4") return ScenarioId::S4;
    if (t == "5") return ScenarioId::S5;
    throw std::invalid_argument("unknown scenario id: " + text);
}

void validate(const InitialConditionSpec& ic) {
    auto amp_ok = [](double a) { return a >= 0.0 && a <= 1.0; };
    if (!amp_ok(ic.u0_amp)) throw std::invalid_argument("InitialConditionSpec: u0_amp must lie in [0,1]");
    if (!amp_ok(ic.m0_amp)) throw std::invalid_argument("InitialConditionSpec: m0_amp must lie in [0,1]");
    if (!amp_ok(ic.n0_amp)) throw std::invalid_argument("InitialConditionSpec: n0_amp must lie in [0,1]");
    if (!(ic.gauss_width > 0.0)) throw std::invalid_argument("InitialConditionSpec: gauss_width must be positive");
    if (!(ic.center_x >= 0.0 && ic.center_x <= 1.0) || !(ic.center_y >= 0.0 && ic.center_y <= 1.0)) {
        throw std::invalid_argument("InitialConditionSpec: bump center must lie inside the unit square");
    }
    if (!(ic.v0_scale >= 0.0 && ic.v0_scale <= 1.0)) {
        throw std::invalid_argument("InitialConditionSpec: v0_scale must lie in [0,1]");
    }
    if (!(ic.v0_value >= 0.0 && ic.v0_value <= 1.0)) {
        throw std::invalid_argument("InitialConditionSpec: v0_value must lie in [0,1]");
    }
}

ScenarioSpec scenario_spec(ScenarioId id) {
    ScenarioSpec spec;
    spec.id = id;
    if (id == ScenarioId::S5) {
        spec.ic.v0_mode = V0Mode::ScaledUniformRandom;
    }
    return spec;
}

void apply_scenario_sensitivities(ScenarioId id, DimensionalParams& dp) {
    switch (id) {
        case ScenarioId::S1:
        case ScenarioId::S4:
        case ScenarioId::S5:
            dp.gamma1 = 1e-5;
            dp.gamma2 = 1e-5;
            break;
        case ScenarioId::S2:
            dp.gamma1 = 1e-3;
            dp.gamma2 = 1e-5;
            break;
        case ScenarioId::S3:
            dp.gamma1 = 1e-5;
            dp.gamma2 = 1e-3;
            break;
    }
}

NondimParams scenario_params(ScenarioId id, const DimensionalParams& dp) {
    DimensionalParams p = dp;
    apply_scenario_sensitivities(id, p);
    NondimParams np = nondimensionalize_linear(p);
    if (id != ScenarioId::S4) np.g3_t = 0.0;
    return np;
}

namespace {

// Deterministic uniform draw in (0,1). The top 53 bits of the generator
// output are used directly so the sequence of doubles is identical on any
// platform with IEEE doubles, unlike std::uniform_real_distribution whose
// algorithm is implementation-defined.
inline double unit_draw(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

} // namespace

State build_initial_state(const InitialConditionSpec& ic, const Grid& grid,
                          std::uint64_t seed) {
    validate(ic);
    State s = State::zeros(grid);
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            double dx = grid.xc(i) - ic.center_x;
            double dy = grid.yc(j) - ic.center_y;
            double g = std::exp(-(dx * dx + dy * dy) / ic.gauss_width);
            s.u(i, j) = ic.u0_amp * g;
            s.m(i, j) = ic.m0_amp * g;
            s.n(i, j) = ic.n0_amp * g;
        }
    }
    if (ic.v0_mode == V0Mode::Constant) {
        for (double& x : s.v.data) x = ic.v0_value;
    } else {
        double scale = ic.v0_mode == V0Mode::ScaledUniformRandom ? ic.v0_scale : 1.0;
        std::mt19937_64 rng(seed);
        for (double& x : s.v.data) x = scale * unit_draw(rng);
    }
    s.t = 0.0;
    return s;
}

ScenarioRun run_scenario(const ScenarioSpec& spec, const NondimParams& np,
                         const Grid& grid, const StepperConfig& cfg) {
    validate(np);
    State initial = build_initial_state(spec.ic, grid, spec.rng_seed);
    ScenarioRun result;
    result.spec = spec;
    result.np = np;
    result.snapshots = run(initial, spec.model, np, cfg, spec.horizon, spec.snapshots);
    return result;
}

ScenarioRun run_scenario(ScenarioId id, const Grid& grid, const StepperConfig& cfg,
                         const DimensionalParams& dp) {
    return run_scenario(scenario_spec(id), scenario_params(id, dp), grid, cfg);
}

std::vector<StateDiff> compare_runs(const std::vector<State>& a,
                                    const std::vector<State>& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("compare_runs: snapshot counts differ");
    }
    std::vector<StateDiff> out;
    out.reserve(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (std::fabs(a[k].t - b[k].t) > 1e-9 * std::max(1.0, std::fabs(a[k].t))) {
            throw std::invalid_argument("compare_runs: snapshot times differ");
        }
        StateDiff d{a[k].t, diff(a[k].u, b[k].u), diff(a[k].m, b[k].m),
                    diff(a[k].v, b[k].v), diff(a[k].n, b[k].n)};
        out.push_back(std::move(d));
    }
    return out;
}

namespace {

FieldDiffStats field_stats(const Field& f) {
    FieldDiffStats st;
    st.sup = sup_norm(f);
    st.integral = integrate(f);
    st.min = min_value(f);
    st.max = max_value(f);
    return st;
}

} // namespace

DiffSummary summarize(const StateDiff& d) {
    DiffSummary s;
    s.t = d.t;
    s.u = field_stats(d.du);
    s.m = field_stats(d.dm);
    s.v = field_stats(d.dv);
    s.n = field_stats(d.dn);
    return s;
}

SummaryRow summarize_state(const State& s) {
    SummaryRow row;
    row.t = s.t;
    row.int_u = integrate(s.u);
    row.int_m = integrate(s.m);
    row.int_v = integrate(s.v);
    row.int_n = integrate(s.n);
    row.sup_u = sup_norm(s.u);
    row.sup_m = sup_norm(s.m);
    row.sup_v = sup_norm(s.v);
    row.sup_n = sup_norm(s.n);
    return row;
}

std::vector<double> smoothed_increments(const std::vector<double>& values, int window) {
    if (window < 1 || window % 2 == 0) {
        throw std::invalid_argument("smoothed_increments: window must be odd and positive");
    }
    if (values.size() < static_cast<std::size_t>(window) + 1) {
        throw std::invalid_argument("smoothed_increments: series too short for window");
    }
    std::vector<double> inc(values.size() - 1);
    for (std::size_t k = 0; k + 1 < values.size(); ++k) inc[k] = values[k + 1] - values[k];
    int half = window / 2;
    std::vector<double> out;
    out.reserve(inc.size() - 2 * half);
    for (std::size_t k = half; k + half < inc.size(); ++k) {
        double acc = 0.0;
        for (int j = -half; j <= half; ++j) acc += inc[k + j];
        out.push_back(acc / window);
    }
    return out;
}

int count_sign_flips(const std::vector<double>& seq) {
    int flips = 0;
    int prev = 0;
    for (double x : seq) {
        int sgn = x > 0.0 ? 1 : (x < 0.0 ? -1 : 0);
        if (sgn == 0) continue;
        if (prev != 0 && sgn != prev) ++flips;
        prev = sgn;
    }
    return flips;
}

} // namespace buruli
