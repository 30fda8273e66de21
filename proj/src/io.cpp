#include "buruli/io.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cinttypes>
#include <climits>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace buruli {

namespace {

constexpr const char* kVersion = "0.1.0";

// %.17g round-trips every finite double through strtod.
std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
    throw std::runtime_error(origin + ":" + std::to_string(line) + ": " + msg);
}

struct Loc {
    const std::string& origin;
    int line;
    const std::string& key;
};

[[noreturn]] void bad_value(const Loc& at, const std::string& value, const char* expected) {
    fail(at.origin, at.line, at.key + ": expected " + expected + ", got '" + value + "'");
}

double parse_double(const Loc& at, const std::string& v) {
    errno = 0;
    char* end = nullptr;
    double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE || !std::isfinite(x)) {
        bad_value(at, v, "a finite number");
    }
    return x;
}

int parse_int(const Loc& at, const std::string& v) {
    errno = 0;
    char* end = nullptr;
    long long x = std::strtoll(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE ||
        x < INT_MIN || x > INT_MAX) {
        bad_value(at, v, "an integer");
    }
    return static_cast<int>(x);
}

std::uint64_t parse_u64(const Loc& at, const std::string& v) {
    errno = 0;
    char* end = nullptr;
    unsigned long long x = std::strtoull(v.c_str(), &end, 10);
    if (v.empty() || v[0] == '-' || end != v.c_str() + v.size() || errno == ERANGE) {
        bad_value(at, v, "an unsigned integer");
    }
    return static_cast<std::uint64_t>(x);
}

bool parse_bool(const Loc& at, const std::string& v) {
    std::string low;
    for (char c : v) low += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (low == "true" || low == "yes" || low == "on" || low == "1") return true;
    if (low == "false" || low == "no" || low == "off" || low == "0") return false;
    bad_value(at, v, "a boolean");
}

// Comma- or whitespace-separated numbers; an empty value gives an empty list.
std::vector<double> parse_list(const Loc& at, const std::string& v) {
    std::vector<double> out;
    std::string token;
    auto flush = [&] {
        if (!token.empty()) {
            out.push_back(parse_double(at, token));
            token.clear();
        }
    };
    for (char c : v) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
            flush();
        } else {
            token += c;
        }
    }
    flush();
    return out;
}

enum Section { kParameters, kGrid, kStepper, kScenario, kOutput };

int section_index(const std::string& name) {
    if (name == "parameters") return kParameters;
    if (name == "grid") return kGrid;
    if (name == "stepper") return kStepper;
    if (name == "scenario") return kScenario;
    if (name == "output") return kOutput;
    return -1;
}

struct Entry {
    int line;
    int section;
    std::string key;
    std::string value;
};

struct ParamKey {
    const char* name;
    double DimensionalParams::* member;
};

constexpr ParamKey kParamKeys[] = {
    {"D_u", &DimensionalParams::D_u},
    {"D_m", &DimensionalParams::D_m},
    {"delta", &DimensionalParams::delta},
    {"lambda_decay", &DimensionalParams::lambda_decay},
    {"beta1", &DimensionalParams::beta1},
    {"beta2", &DimensionalParams::beta2},
    {"gamma_n", &DimensionalParams::gamma_n},
    {"alpha_u", &DimensionalParams::alpha_u},
    {"gamma1", &DimensionalParams::gamma1},
    {"gamma2", &DimensionalParams::gamma2},
    {"gamma3", &DimensionalParams::gamma3},
    {"eta0", &DimensionalParams::eta0},
    {"K_U", &DimensionalParams::K_U},
    {"K_M", &DimensionalParams::K_M},
    {"K_V", &DimensionalParams::K_V},
    {"K_N", &DimensionalParams::K_N},
    {"D_jump", &DimensionalParams::D_jump},
    {"K1", &DimensionalParams::K1},
};

void apply_parameters_key(RunConfig& cfg, const Loc& at, const std::string& value) {
    for (const ParamKey& pk : kParamKeys) {
        if (at.key == pk.name) {
            cfg.params.*pk.member = parse_double(at, value);
            if (at.key == "gamma1") cfg.gamma1_set = true;
            if (at.key == "gamma2") cfg.gamma2_set = true;
            if (at.key == "gamma3") cfg.gamma3_set = true;
            return;
        }
    }
    fail(at.origin, at.line, "unknown key '" + at.key + "' in [parameters]");
}

void apply_grid_key(RunConfig& cfg, const Loc& at, const std::string& value) {
    if (at.key == "nx") {
        cfg.grid.nx = parse_int(at, value);
    } else if (at.key == "ny") {
        cfg.grid.ny = parse_int(at, value);
    } else {
        fail(at.origin, at.line, "unknown key '" + at.key + "' in [grid]");
    }
}

void apply_stepper_key(RunConfig& cfg, const Loc& at, const std::string& value) {
    StepperConfig& st = cfg.stepper;
    if (at.key == "dt") {
        st.dt = parse_double(at, value);
    } else if (at.key == "linear_tol") {
        st.linear_tol = parse_double(at, value);
    } else if (at.key == "max_linear_iters") {
        st.max_linear_iters = parse_int(at, value);
    } else if (at.key == "cfl_safety") {
        st.cfl_safety = parse_double(at, value);
    } else if (at.key == "negativity_tol") {
        st.negativity_tol = parse_double(at, value);
    } else if (at.key == "bound_tol") {
        st.bound_tol = parse_double(at, value);
    } else {
        fail(at.origin, at.line, "unknown key '" + at.key + "' in [stepper]");
    }
}

ScenarioId parse_scenario_checked(const Loc& at, const std::string& value) {
    try {
        return parse_scenario(value);
    } catch (const std::exception& e) {
        fail(at.origin, at.line, e.what());
    }
}

void apply_scenario_key(RunConfig& cfg, const Loc& at, const std::string& value) {
    ScenarioSpec& sc = cfg.scenario;
    InitialConditionSpec& ic = sc.ic;
    if (at.key == "id") {
        // preset already applied in the first pass; the value was vetted there
    } else if (at.key == "model") {
        if (value == "linear") {
            sc.model = ModelKind::Linear;
        } else if (value == "nonlinear") {
            sc.model = ModelKind::Nonlinear;
        } else {
            bad_value(at, value, "'linear' or 'nonlinear'");
        }
    } else if (at.key == "horizon") {
        sc.horizon = parse_double(at, value);
    } else if (at.key == "snapshots") {
        sc.snapshots = parse_list(at, value);
    } else if (at.key == "seed") {
        sc.rng_seed = parse_u64(at, value);
    } else if (at.key == "u0_amp") {
        ic.u0_amp = parse_double(at, value);
    } else if (at.key == "m0_amp") {
        ic.m0_amp = parse_double(at, value);
    } else if (at.key == "n0_amp") {
        ic.n0_amp = parse_double(at, value);
    } else if (at.key == "center_x") {
        ic.center_x = parse_double(at, value);
    } else if (at.key == "center_y") {
        ic.center_y = parse_double(at, value);
    } else if (at.key == "gauss_width") {
        ic.gauss_width = parse_double(at, value);
    } else if (at.key == "v0_mode") {
        if (value == "uniform_random") {
            ic.v0_mode = V0Mode::UniformRandom;
        } else if (value == "scaled_uniform_random") {
            ic.v0_mode = V0Mode::ScaledUniformRandom;
        } else if (value == "constant") {
            ic.v0_mode = V0Mode::Constant;
        } else {
            bad_value(at, value, "'uniform_random', 'scaled_uniform_random' or 'constant'");
        }
    } else if (at.key == "v0_scale") {
        ic.v0_scale = parse_double(at, value);
    } else if (at.key == "v0_value") {
        ic.v0_value = parse_double(at, value);
    } else {
        fail(at.origin, at.line, "unknown key '" + at.key + "' in [scenario]");
    }
}

void apply_output_key(RunConfig& cfg, const Loc& at, const std::string& value) {
    if (at.key == "dir") {
        if (value.empty()) bad_value(at, value, "a directory path");
        cfg.output.dir = value;
    } else if (at.key == "csv") {
        cfg.output.csv = parse_bool(at, value);
    } else if (at.key == "pgm") {
        cfg.output.pgm = parse_bool(at, value);
    } else {
        fail(at.origin, at.line, "unknown key '" + at.key + "' in [output]");
    }
}

void finalize_and_validate(RunConfig& cfg, const std::string& origin) {
    try {
        validate(cfg.params);
        validate(cfg.stepper);
        validate(cfg.scenario.ic);
    } catch (const std::exception& e) {
        throw std::runtime_error(origin + ": " + e.what());
    }
    if (cfg.grid.nx < 4 || cfg.grid.ny < 4) {
        throw std::runtime_error(origin + ": grid nx and ny must be at least 4");
    }
    const ScenarioSpec& sc = cfg.scenario;
    if (!(sc.horizon > 0.0) || !std::isfinite(sc.horizon)) {
        throw std::runtime_error(origin + ": horizon must be strictly positive");
    }
    for (std::size_t k = 0; k < sc.snapshots.size(); ++k) {
        double t = sc.snapshots[k];
        if (!std::isfinite(t) || t < 0.0 || t > sc.horizon) {
            throw std::runtime_error(origin + ": snapshot time " + g17(t) +
                                     " outside [0, horizon]");
        }
        if (k > 0 && t < sc.snapshots[k - 1]) {
            throw std::runtime_error(origin + ": snapshot times must be nondecreasing");
        }
    }
}

std::string model_name(ModelKind m) {
    return m == ModelKind::Linear ? "linear" : "nonlinear";
}

std::string v0_mode_name(V0Mode m) {
    switch (m) {
        case V0Mode::UniformRandom: return "uniform_random";
        case V0Mode::ScaledUniformRandom: return "scaled_uniform_random";
        case V0Mode::Constant: return "constant";
    }
    return "uniform_random";
}

void check_stream(const std::ostream& out, const std::string& path) {
    if (!out) throw std::runtime_error("failed while writing " + path);
}

double csv_time(const std::string& path) {
    double t = 0.0;
    // header-only read; validation happens in read_field_csv when the caller
    // actually loads the field
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || trim(line) != "nx,ny,t") {
        throw std::runtime_error(path + ": missing nx,ny,t header");
    }
    if (!std::getline(in, line)) throw std::runtime_error(path + ": truncated header");
    std::vector<std::string> cells = split(trim(line), ',');
    if (cells.size() != 3) throw std::runtime_error(path + ": malformed header row");
    char* end = nullptr;
    t = std::strtod(cells[2].c_str(), &end);
    if (end == cells[2].c_str()) throw std::runtime_error(path + ": malformed time");
    return t;
}

std::string iso_utc_now() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    std::vector<Entry> entries;
    int section = -1;
    int lineno = 0;
    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(origin, lineno, "malformed section header");
            std::string name = trim(line.substr(1, line.size() - 2));
            section = section_index(name);
            if (section < 0) fail(origin, lineno, "unknown section [" + name + "]");
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail(origin, lineno, "expected key = value");
        if (section < 0) fail(origin, lineno, "key outside any section");
        Entry e{lineno, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1))};
        if (e.key.empty()) fail(origin, lineno, "empty key");
        entries.push_back(std::move(e));
    }

    RunConfig cfg;
    // The scenario preset is applied before any explicit key so that explicit
    // keys win regardless of their position relative to `id`.
    for (const Entry& e : entries) {
        if (e.section == kScenario && e.key == "id") {
            Loc at{origin, e.line, e.key};
            cfg.scenario = scenario_spec(parse_scenario_checked(at, e.value));
        }
    }
    for (const Entry& e : entries) {
        Loc at{origin, e.line, e.key};
        switch (e.section) {
            case kParameters: apply_parameters_key(cfg, at, e.value); break;
            case kGrid: apply_grid_key(cfg, at, e.value); break;
            case kStepper: apply_stepper_key(cfg, at, e.value); break;
            case kScenario: apply_scenario_key(cfg, at, e.value); break;
            case kOutput: apply_output_key(cfg, at, e.value); break;
        }
    }
    finalize_and_validate(cfg, origin);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

std::string canonical_config_text(const RunConfig& cfg) {
    std::ostringstream out;
    const DimensionalParams& p = cfg.params;
    out << "[parameters]\n";
    out << "D_u = " << g17(p.D_u) << "\n";
    out << "D_m = " << g17(p.D_m) << "\n";
    out << "delta = " << g17(p.delta) << "\n";
    out << "lambda_decay = " << g17(p.lambda_decay) << "\n";
    out << "beta1 = " << g17(p.beta1) << "\n";
    out << "beta2 = " << g17(p.beta2) << "\n";
    out << "gamma_n = " << g17(p.gamma_n) << "\n";
    out << "alpha_u = " << g17(p.alpha_u) << "\n";
    out << "eta0 = " << g17(p.eta0) << "\n";
    out << "K_U = " << g17(p.K_U) << "\n";
    out << "K_M = " << g17(p.K_M) << "\n";
    out << "K_V = " << g17(p.K_V) << "\n";
    out << "K_N = " << g17(p.K_N) << "\n";
    out << "D_jump = " << g17(p.D_jump) << "\n";
    out << "K1 = " << g17(p.K1) << "\n";
    if (cfg.gamma1_set) out << "gamma1 = " << g17(p.gamma1) << "\n";
    if (cfg.gamma2_set) out << "gamma2 = " << g17(p.gamma2) << "\n";
    if (cfg.gamma3_set) out << "gamma3 = " << g17(p.gamma3) << "\n";
    out << "\n[grid]\n";
    out << "nx = " << cfg.grid.nx << "\n";
    out << "ny = " << cfg.grid.ny << "\n";
    const StepperConfig& st = cfg.stepper;
    out << "\n[stepper]\n";
    out << "dt = " << g17(st.dt) << "\n";
    out << "linear_tol = " << g17(st.linear_tol) << "\n";
    out << "max_linear_iters = " << st.max_linear_iters << "\n";
    out << "cfl_safety = " << g17(st.cfl_safety) << "\n";
    out << "negativity_tol = " << g17(st.negativity_tol) << "\n";
    out << "bound_tol = " << g17(st.bound_tol) << "\n";
    const ScenarioSpec& sc = cfg.scenario;
    out << "\n[scenario]\n";
    out << "id = " << scenario_name(sc.id) << "\n";
    out << "model = " << model_name(sc.model) << "\n";
    out << "horizon = " << g17(sc.horizon) << "\n";
    out << "snapshots = ";
    for (std::size_t k = 0; k < sc.snapshots.size(); ++k) {
        if (k) out << ",";
        out << g17(sc.snapshots[k]);
    }
    out << "\n";
    out << "seed = " << sc.rng_seed << "\n";
    const InitialConditionSpec& ic = sc.ic;
    out << "u0_amp = " << g17(ic.u0_amp) << "\n";
    out << "m0_amp = " << g17(ic.m0_amp) << "\n";
    out << "n0_amp = " << g17(ic.n0_amp) << "\n";
    out << "center_x = " << g17(ic.center_x) << "\n";
    out << "center_y = " << g17(ic.center_y) << "\n";
    out << "gauss_width = " << g17(ic.gauss_width) << "\n";
    out << "v0_mode = " << v0_mode_name(ic.v0_mode) << "\n";
    out << "v0_scale = " << g17(ic.v0_scale) << "\n";
    out << "v0_value = " << g17(ic.v0_value) << "\n";
    out << "\n[output]\n";
    out << "dir = " << cfg.output.dir << "\n";
    out << "csv = " << (cfg.output.csv ? "true" : "false") << "\n";
    out << "pgm = " << (cfg.output.pgm ? "true" : "false") << "\n";
    return out.str();
}

NondimParams resolve_params(const RunConfig& cfg) {
    DimensionalParams p = cfg.params;
    DimensionalParams preset = cfg.params;
    apply_scenario_sensitivities(cfg.scenario.id, preset);
    if (!cfg.gamma1_set) p.gamma1 = preset.gamma1;
    if (!cfg.gamma2_set) p.gamma2 = preset.gamma2;
    NondimParams np = cfg.scenario.model == ModelKind::Nonlinear
                          ? nondimensionalize_nonlinear(p)
                          : nondimensionalize_linear(p);
    const bool chemo = cfg.scenario.id == ScenarioId::S4 || cfg.gamma3_set;
    if (!chemo) np.g3_t = 0.0;
    return np;
}

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

const char* code_version() { return kVersion; }

void write_field_csv(const Field& f, double t, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "nx,ny,t\n" << f.grid.nx << "," << f.grid.ny << "," << g17(t) << "\n";
    for (int j = 0; j < f.grid.ny; ++j) {
        for (int i = 0; i < f.grid.nx; ++i) {
            if (i) out << ",";
            out << g17(f(i, j));
        }
        out << "\n";
    }
    check_stream(out, path);
}

Field read_field_csv(const std::string& path, double* t_out) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || trim(line) != "nx,ny,t") {
        throw std::runtime_error(path + ": missing nx,ny,t header");
    }
    if (!std::getline(in, line)) throw std::runtime_error(path + ": truncated header");
    std::vector<std::string> head = split(trim(line), ',');
    if (head.size() != 3) throw std::runtime_error(path + ": malformed header row");
    auto to_num = [&](const std::string& cell, const char* what) {
        char* end = nullptr;
        double x = std::strtod(cell.c_str(), &end);
        if (cell.empty() || end != cell.c_str() + cell.size()) {
            throw std::runtime_error(path + ": malformed " + what + " '" + cell + "'");
        }
        return x;
    };
    int nx = static_cast<int>(to_num(head[0], "nx"));
    int ny = static_cast<int>(to_num(head[1], "ny"));
    double t = to_num(head[2], "time");
    if (nx < 4 || ny < 4) {
        throw std::runtime_error(path + ": grid " + std::to_string(nx) + "x" +
                                 std::to_string(ny) + " is below the 4-cell minimum");
    }
    Field f(Grid::uniform(nx, ny));
    for (int j = 0; j < ny; ++j) {
        if (!std::getline(in, line)) {
            throw std::runtime_error(path + ": truncated at row " + std::to_string(j));
        }
        std::vector<std::string> cells = split(trim(line), ',');
        if (static_cast<int>(cells.size()) != nx) {
            throw std::runtime_error(path + ": row " + std::to_string(j) + " has " +
                                     std::to_string(cells.size()) + " cells, expected " +
                                     std::to_string(nx));
        }
        for (int i = 0; i < nx; ++i) f(i, j) = to_num(cells[i], "value");
    }
    if (t_out) *t_out = t;
    return f;
}

void write_pgm(const Field& f, const std::string& path) {
    const int nx = f.grid.nx;
    const int ny = f.grid.ny;
    const double lo = min_value(f);
    const double hi = max_value(f);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "P5\n" << nx << " " << ny << "\n255\n";
    std::vector<unsigned char> row(static_cast<std::size_t>(nx));
    for (int j = ny - 1; j >= 0; --j) {
        for (int i = 0; i < nx; ++i) {
            double s = hi > lo ? (f(i, j) - lo) / (hi - lo) : 0.0;
            row[static_cast<std::size_t>(i)] =
                static_cast<unsigned char>(std::lround(255.0 * s));
        }
        out.write(reinterpret_cast<const char*>(row.data()), nx);
    }
    check_stream(out, path);
    std::string side = path + ".scale.txt";
    std::ofstream sc(side);
    if (!sc) throw std::runtime_error("cannot open " + side + " for writing");
    sc << g17(lo) << " " << g17(hi) << "\n";
    check_stream(sc, side);
}

void write_snapshot(const State& s, const std::string& prefix, bool csv, bool pgm) {
    const char* names[4] = {"u", "m", "v", "n"};
    const Field* fields[4] = {&s.u, &s.m, &s.v, &s.n};
    for (int k = 0; k < 4; ++k) {
        std::string base = prefix + "_" + names[k];
        if (csv) write_field_csv(*fields[k], s.t, base + ".csv");
        if (pgm) write_pgm(*fields[k], base + ".pgm");
    }
}

State read_snapshot(const std::string& prefix) {
    double tu = 0.0, tm = 0.0, tv = 0.0, tn = 0.0;
    State s;
    s.u = read_field_csv(prefix + "_u.csv", &tu);
    s.m = read_field_csv(prefix + "_m.csv", &tm);
    s.v = read_field_csv(prefix + "_v.csv", &tv);
    s.n = read_field_csv(prefix + "_n.csv", &tn);
    require_same_grid(s.u, s.m, "read_snapshot");
    require_same_grid(s.u, s.v, "read_snapshot");
    require_same_grid(s.u, s.n, "read_snapshot");
    if (tu != tm || tu != tv || tu != tn) {
        throw std::runtime_error(prefix + ": component files disagree on time");
    }
    s.t = tu;
    return s;
}

std::string snapshot_tag(double t) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", t);
    std::string tag = "snap_t";
    for (const char* c = buf; *c; ++c) {
        if (*c == '.') {
            tag += 'p';
        } else if (*c == '-') {
            tag += 'm';
        } else if (*c != '+') {
            tag += *c;
        }
    }
    return tag;
}

std::vector<std::pair<double, std::string>> discover_snapshots(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) {
        throw std::runtime_error(dir + " is not a directory");
    }
    std::vector<std::pair<double, std::string>> out;
    const std::string suffix = "_u.csv";
    for (const auto& ent : fs::directory_iterator(dir)) {
        if (!ent.is_regular_file()) continue;
        std::string name = ent.path().filename().string();
        if (name.rfind("snap_t", 0) != 0) continue;
        if (name.size() <= suffix.size() ||
            name.compare(name.size() - suffix.size(), suffix.size(), suffix) != 0) {
            continue;
        }
        std::string stem = name.substr(0, name.size() - suffix.size());
        std::string prefix = (ent.path().parent_path() / stem).string();
        out.emplace_back(csv_time(prefix + "_u.csv"), prefix);
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

void write_summary(const std::vector<SummaryRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "t,int_u,int_m,int_v,int_n,sup_u,sup_m,sup_v,sup_n\n";
    for (const SummaryRow& r : rows) {
        out << g17(r.t) << "," << g17(r.int_u) << "," << g17(r.int_m) << ","
            << g17(r.int_v) << "," << g17(r.int_n) << "," << g17(r.sup_u) << ","
            << g17(r.sup_m) << "," << g17(r.sup_v) << "," << g17(r.sup_n) << "\n";
    }
    check_stream(out, path);
}

void write_diff_summary(const std::vector<DiffSummary>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "t";
    for (const char* f : {"du", "dm", "dv", "dn"}) {
        out << ",sup_" << f << ",int_" << f << ",min_" << f << ",max_" << f;
    }
    out << "\n";
    for (const DiffSummary& r : rows) {
        out << g17(r.t);
        for (const FieldDiffStats* st : {&r.u, &r.m, &r.v, &r.n}) {
            out << "," << g17(st->sup) << "," << g17(st->integral) << ","
                << g17(st->min) << "," << g17(st->max);
        }
        out << "\n";
    }
    check_stream(out, path);
}

void write_manifest(const ManifestData& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016" PRIx64, m.config_hash);
    out << "format = buruli-manifest-1\n";
    out << "code_version = " << kVersion << "\n";
    out << "config_hash = " << hash << "\n";
    out << "scenario = " << m.scenario << "\n";
    out << "model = " << m.model << "\n";
    out << "grid = " << m.nx << "x" << m.ny << "\n";
    out << "seed = " << m.seed << "\n";
    out << "dt_config = " << g17(m.dt_config) << "\n";
    out << "dt_first_step = " << g17(m.dt_first_step) << "\n";
    for (const auto& [name, outcome] : m.invariants) {
        out << "invariant." << name << " = " << outcome << "\n";
    }
    if (!m.valid) {
        std::string flat = m.breach;
        std::replace(flat.begin(), flat.end(), '\n', ' ');
        out << "breach = " << flat << "\n";
    }
    out << "status = " << (m.valid ? "valid" : "invalid") << "\n";
    out << "timestamp = " << iso_utc_now() << "\n";
    check_stream(out, path);
}

} // namespace buruli
