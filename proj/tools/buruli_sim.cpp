// Command line driver: scenario runs, run-vs-run comparisons, the 1D lattice
// convergence studies, and a quick self-check of the model invariants.
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "buruli/coefficients.hpp"
#include "buruli/grid.hpp"
#include "buruli/imex.hpp"
#include "buruli/io.hpp"
#include "buruli/lattice.hpp"
#include "buruli/params.hpp"
#include "buruli/scenarios.hpp"

namespace fs = std::filesystem;
using namespace buruli;

namespace {

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

const char* model_label(ModelKind m) {
    return m == ModelKind::Linear ? "linear" : "nonlinear";
}

struct Overrides {
    std::string config;
    std::string scenario;
    std::string grid;
    std::string snapshots;
    std::string out;
    double dt = 0.0;
    std::uint64_t seed = 0;
};

void add_common_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config, "INI run configuration file");
    cmd->add_option("--scenario", o.scenario,
                    "scenario id S1..S5; replaces the [scenario] preset but keeps "
                    "model, horizon, snapshots and seed");
    cmd->add_option("--seed", o.seed, "seed of the random normal-tissue field");
    cmd->add_option("--grid", o.grid, "cells per side, N or NXxNY");
    cmd->add_option("--dt", o.dt, "nominal time step (capped by the stability guard)");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--snapshots", o.snapshots, "comma separated snapshot times");
}

void parse_grid_arg(const std::string& s, GridConfig& g) {
    int nx = 0;
    int ny = 0;
    char extra = 0;
    if (std::sscanf(s.c_str(), "%dx%d%c", &nx, &ny, &extra) == 2) {
        g.nx = nx;
        g.ny = ny;
    } else if (std::sscanf(s.c_str(), "%d%c", &nx, &extra) == 1) {
        g.nx = g.ny = nx;
    } else {
        throw std::runtime_error("--grid expects N or NXxNY, got '" + s + "'");
    }
    if (g.nx < 4 || g.ny < 4) {
        throw std::runtime_error("--grid values must be at least 4");
    }
}

std::vector<double> parse_time_list(const std::string& s) {
    std::string spaced = s;
    std::replace(spaced.begin(), spaced.end(), ',', ' ');
    std::istringstream in(spaced);
    std::vector<double> out;
    double t = 0.0;
    while (in >> t) out.push_back(t);
    if (!in.eof()) throw std::runtime_error("--snapshots: malformed time list '" + s + "'");
    return out;
}

// Replaces the scenario preset while keeping the run-shape settings, the
// semantics of the --scenario flag.
void switch_scenario(RunConfig& cfg, ScenarioId id) {
    ScenarioSpec keep = cfg.scenario;
    cfg.scenario = scenario_spec(id);
    cfg.scenario.model = keep.model;
    cfg.scenario.horizon = keep.horizon;
    cfg.scenario.snapshots = keep.snapshots;
    cfg.scenario.rng_seed = keep.rng_seed;
}

RunConfig make_config(const Overrides& o, CLI::App* cmd) {
    RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
    if (cmd->count("--scenario")) switch_scenario(cfg, parse_scenario(o.scenario));
    if (cmd->count("--seed")) cfg.scenario.rng_seed = o.seed;
    if (cmd->count("--grid")) parse_grid_arg(o.grid, cfg.grid);
    if (cmd->count("--dt")) {
        if (!(o.dt > 0.0)) throw std::runtime_error("--dt must be strictly positive");
        cfg.stepper.dt = o.dt;
    }
    if (cmd->count("--snapshots")) cfg.scenario.snapshots = parse_time_list(o.snapshots);
    if (cmd->count("--out")) cfg.output.dir = o.out;
    return cfg;
}

int cmd_run(const RunConfig& cfg) {
    fs::create_directories(cfg.output.dir);
    const Grid grid = Grid::uniform(cfg.grid.nx, cfg.grid.ny);
    const NondimParams np = resolve_params(cfg);
    const State init = build_initial_state(cfg.scenario.ic, grid, cfg.scenario.rng_seed);

    ManifestData man;
    man.config_hash = fnv1a64(canonical_config_text(cfg));
    man.seed = cfg.scenario.rng_seed;
    man.scenario = scenario_name(cfg.scenario.id);
    man.model = model_label(cfg.scenario.model);
    man.nx = grid.nx;
    man.ny = grid.ny;
    man.dt_config = cfg.stepper.dt;
    man.dt_first_step =
        std::min(cfg.stepper.dt, stable_dt(init, cfg.scenario.model, np, cfg.stepper));
    const std::string manifest_path = cfg.output.dir + "/manifest.txt";

    try {
        std::vector<State> snaps = run(init, cfg.scenario.model, np, cfg.stepper,
                                       cfg.scenario.horizon, cfg.scenario.snapshots);
        std::vector<SummaryRow> rows;
        double floor = 0.0;
        double m_max = 0.0;
        for (const State& s : snaps) {
            write_snapshot(s, cfg.output.dir + "/" + snapshot_tag(s.t),
                           cfg.output.csv, cfg.output.pgm);
            rows.push_back(summarize_state(s));
            for (const Field* f : {&s.u, &s.m, &s.v, &s.n}) {
                floor = std::min(floor, min_value(*f));
            }
            m_max = std::max(m_max, max_value(s.m));
        }
        write_summary(rows, cfg.output.dir + "/summary.csv");
        const double m_cap =
            max_value(init.m) + np.delta_t / np.lam_t + cfg.stepper.bound_tol;
        man.invariants = {
            {"non_negativity", "ok floor=" + num(floor)},
            {"toxin_sup_bound", "ok max=" + num(m_max) + " cap=" + num(m_cap)},
        };
        write_manifest(man, manifest_path);
        std::printf("%s (%s): %zu snapshots -> %s\n", man.scenario.c_str(),
                    man.model.c_str(), snaps.size(), cfg.output.dir.c_str());
        return 0;
    } catch (const std::exception& e) {
        man.valid = false;
        man.breach = e.what();
        write_manifest(man, manifest_path);
        std::fprintf(stderr, "run failed: %s\n", e.what());
        return 1;
    }
}

std::vector<State> load_side(const std::string& token, const RunConfig& base) {
    if (fs::is_directory(token)) {
        auto found = discover_snapshots(token);
        if (found.empty()) throw std::runtime_error("no snapshots found in " + token);
        std::vector<State> states;
        states.reserve(found.size());
        for (const auto& [t, prefix] : found) states.push_back(read_snapshot(prefix));
        return states;
    }
    RunConfig cfg = base;
    switch_scenario(cfg, parse_scenario(token));
    const Grid grid = Grid::uniform(cfg.grid.nx, cfg.grid.ny);
    const NondimParams np = resolve_params(cfg);
    const State init = build_initial_state(cfg.scenario.ic, grid, cfg.scenario.rng_seed);
    std::printf("running %s (%s) ...\n", scenario_name(cfg.scenario.id),
                model_label(cfg.scenario.model));
    return run(init, cfg.scenario.model, np, cfg.stepper, cfg.scenario.horizon,
               cfg.scenario.snapshots);
}

int cmd_compare(const RunConfig& base, const std::vector<std::string>& sides) {
    fs::create_directories(base.output.dir);
    const std::vector<State> a = load_side(sides[0], base);
    const std::vector<State> b = load_side(sides[1], base);
    const std::vector<StateDiff> diffs = compare_runs(a, b);
    std::vector<DiffSummary> table;
    table.reserve(diffs.size());
    for (const StateDiff& d : diffs) {
        table.push_back(summarize(d));
        const std::string tag = "diff" + snapshot_tag(d.t).substr(4);
        write_field_csv(d.du, d.t, base.output.dir + "/" + tag + "_u.csv");
        write_field_csv(d.dm, d.t, base.output.dir + "/" + tag + "_m.csv");
        write_field_csv(d.dv, d.t, base.output.dir + "/" + tag + "_v.csv");
        write_field_csv(d.dn, d.t, base.output.dir + "/" + tag + "_n.csv");
    }
    write_diff_summary(table, base.output.dir + "/diff_summary.csv");
    std::printf("difference of %s minus %s:\n", sides[1].c_str(), sides[0].c_str());
    for (const DiffSummary& r : table) {
        std::printf("  t=%-8g sup|du|=%-12.5g sup|dm|=%-12.5g sup|dv|=%-12.5g sup|dn|=%-12.5g\n",
                    r.t, r.u.sup, r.m.sup, r.v.sup, r.n.sup);
    }
    std::printf("wrote %zu difference snapshots -> %s\n", diffs.size(),
                base.output.dir.c_str());
    return 0;
}

void write_convergence_csv(const std::vector<ConvergenceRow>& rows,
                           const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "h,nodes,steps,l2_error\n";
    for (const ConvergenceRow& r : rows) {
        out << num(r.h) << "," << r.nodes << "," << r.steps << "," << num(r.l2_error)
            << "\n";
    }
    if (!out) throw std::runtime_error("failed while writing " + path);
}

bool print_rows(const char* title, const std::vector<ConvergenceRow>& rows) {
    std::printf("%s\n", title);
    bool decreasing = true;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        double ratio = k ? rows[k - 1].l2_error / rows[k].l2_error : 0.0;
        if (k && !(rows[k].l2_error < rows[k - 1].l2_error)) decreasing = false;
        std::printf("  h=%-10.5g nodes=%-6d steps=%-8d l2_error=%-12.5g%s",
                    rows[k].h, rows[k].nodes, rows[k].steps, rows[k].l2_error,
                    k ? " ratio=" : "");
        if (k) std::printf("%.3g", ratio);
        std::printf("\n");
    }
    return decreasing;
}

int cmd_lattice(const std::string& out_dir) {
    fs::create_directories(out_dir);
    const LatticeStudy study = default_lattice_study();
    const std::vector<ConvergenceRow> rows = convergence_study(study);
    write_convergence_csv(rows, out_dir + "/lattice_convergence.csv");
    bool ok = print_rows("lattice vs continuum limit:", rows);
    const std::vector<ConvergenceRow> heat =
        heat_kernel_study(study.D, study.t_star, study.intervals, study.dt_fraction);
    write_convergence_csv(heat, out_dir + "/heat_kernel.csv");
    ok = print_rows("pure diffusion vs heat kernel:", heat) && ok;
    std::printf(ok ? "errors decrease monotonically under refinement\n"
                   : "refinement did NOT reduce the error monotonically\n");
    return ok ? 0 : 1;
}

int cmd_validate() {
    int failures = 0;
    auto check = [&](const char* name, auto&& fn) {
        try {
            std::string detail = fn();
            std::printf("PASS %-24s %s\n", name, detail.c_str());
        } catch (const std::exception& e) {
            std::printf("FAIL %-24s %s\n", name, e.what());
            ++failures;
        }
    };

    check("receptor_identities", [] {
        double worst = 0.0;
        for (int j = 0; j < 50; ++j) {
            for (int i = 0; i < 50; ++i) {
                double v = 5.0 * i / 49.0;
                double n = 5.0 * j / 49.0;
                double a = coeff::a_sens(v, n);
                worst = std::max(worst, std::abs(coeff::dystar_dn(v, n) - a));
                worst = std::max(worst, std::abs(coeff::dystar_dv(v, n) - a));
            }
        }
        if (worst > 1e-12) {
            throw std::runtime_error("receptor derivative mismatch " + num(worst));
        }
        return "max |dy*/dn - a| = " + num(worst);
    });

    check("taxis_factorization", [] {
        const ReceptorKinetics unit{1.0, 1.0, 1.0};
        double worst = 0.0;
        for (int j = 0; j < 50; ++j) {
            for (int i = 0; i < 50; ++i) {
                double u = 5.0 * i / 49.0;
                double n = 5.0 * j / 49.0;
                double lhs = coeff::chi2_nl(u, n, 0.7);
                double rhs = 0.7 * u * coeff::kappa(u, n) * coeff::dtau_dn(n, unit);
                worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
            }
        }
        if (worst > 1e-12) {
            throw std::runtime_error("factorization residual " + num(worst));
        }
        return "max residual = " + num(worst);
    });

    check("mass_conservation", [] {
        const Grid grid = Grid::uniform(16, 16);
        NondimParams np{};
        np.Du_t = 1.16279e-3;
        np.g1_t = 1e-4;
        np.g2_t = 1e-4;
        InitialConditionSpec ic;
        ic.n0_amp = 0.0; // keeps the proliferation term switched off
        State s = build_initial_state(ic, grid, 12345);
        StepperConfig cfg;
        const double mass_u = integrate(s.u);
        const double mass_m = integrate(s.m);
        for (int k = 0; k < 200; ++k) s = step(s, ModelKind::Linear, np, cfg);
        double drift = std::max(std::abs(integrate(s.u) - mass_u),
                                std::abs(integrate(s.m) - mass_m));
        if (drift > 1e-10) throw std::runtime_error("mass drift " + num(drift));
        return "drift over 200 steps = " + num(drift);
    });

    check("zero_state_fixed_point", [] {
        const Grid grid = Grid::uniform(16, 16);
        const State z = State::zeros(grid);
        const NondimParams np = scenario_params(ScenarioId::S1, DimensionalParams{});
        State s = step(z, ModelKind::Linear, np, StepperConfig{});
        double worst = std::max({sup_norm(s.u), sup_norm(s.m), sup_norm(s.v), sup_norm(s.n)});
        if (worst > 1e-15) throw std::runtime_error("zero state moved by " + num(worst));
        return "residual = " + num(worst);
    });

    check("lattice_mass_conservation", [] {
        const LatticeStudy study = default_lattice_study();
        LatticeConfig cfg;
        cfg.num_nodes = 51;
        cfg.h = 1.0 / 50.0;
        cfg.jump_rate = study.D / (2.0 * cfg.h * cfg.h);
        cfg.target_diffusivity = study.D;
        cfg.dt = 0.4 / (2.0 * cfg.jump_rate);
        cfg.rk = study.rk;
        std::vector<double> u(51);
        cfg.frozen_v.resize(51);
        cfg.frozen_n.resize(51);
        for (int i = 0; i <= 50; ++i) {
            double x = i * cfg.h;
            u[i] = study.u0(x);
            cfg.frozen_v[i] = study.v_env(x);
            cfg.frozen_n[i] = study.n_env(x);
        }
        double before = 0.0;
        for (double a : u) before += a;
        for (int k = 0; k < 40; ++k) u = master_step(u, cfg);
        double after = 0.0;
        for (double a : u) after += a;
        double drift = std::abs(after - before);
        if (drift > 1e-13) throw std::runtime_error("occupancy drift " + num(drift));
        return "occupancy drift over 40 steps = " + num(drift);
    });

    check("config_roundtrip", [] {
        const RunConfig defaults;
        const std::string text = canonical_config_text(defaults);
        const RunConfig parsed = parse_config_text(text, "<canonical>");
        if (canonical_config_text(parsed) != text) {
            throw std::runtime_error("canonical text is not a fixed point");
        }
        return "hash " + std::to_string(fnv1a64(text));
    });

    if (failures) {
        std::printf("%d check(s) failed\n", failures);
    } else {
        std::printf("all checks passed\n");
    }
    return failures;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite difference simulator for a bacteria/toxin/tissue "
                 "reaction-diffusion-taxis model on the unit square"};
    app.require_subcommand(1);

    Overrides run_o, cmp_o, lat_o;
    std::vector<std::string> sides;

    CLI::App* run_cmd = app.add_subcommand("run", "integrate one scenario and write snapshots");
    add_common_flags(run_cmd, run_o);

    CLI::App* cmp_cmd = app.add_subcommand(
        "compare", "difference of two runs (scenario ids or snapshot directories)");
    add_common_flags(cmp_cmd, cmp_o);
    cmp_cmd->add_option("sides", sides, "two scenario ids or run directories")
        ->expected(2)
        ->required();

    CLI::App* lat_cmd = app.add_subcommand(
        "lattice", "hop-process vs continuum-limit convergence study");
    lat_cmd->add_option("--out", lat_o.out, "output directory");

    CLI::App* val_cmd = app.add_subcommand("validate", "quick invariant self-check");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return cmd_run(make_config(run_o, run_cmd));
        if (cmp_cmd->parsed()) return cmd_compare(make_config(cmp_o, cmp_cmd), sides);
        if (lat_cmd->parsed()) return cmd_lattice(lat_o.out.empty() ? "out" : lat_o.out);
        if (val_cmd->parsed()) return cmd_validate();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
