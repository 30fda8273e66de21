#include <cmath>
#include <random>
#include <vector>

#include "buruli/imex.hpp"
#include "buruli/grid.hpp"
#include "buruli/params.hpp"
#include "doctest.h"

using namespace buruli;

namespace {

constexpr double kPi = 3.14159265358979323846;

NondimParams baseline() {
    NondimParams np = nondimensionalize_linear(DimensionalParams{});
    np.g3_t = 0.0;
    return np;
}

State uniform_state(const Grid& g, double u, double m, double v, double n) {
    State s = State::zeros(g);
    for (int k = 0; k < g.cells(); ++k) {
        s.u.data[k] = u;
        s.m.data[k] = m;
        s.v.data[k] = v;
        s.n.data[k] = n;
    }
    return s;
}

Field cos_mode(const Grid& g) {
    Field f(g);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            f(i, j) = 1.0 + 0.5 * std::cos(kPi * g.xc(i)) * std::cos(kPi * g.yc(j));
        }
    }
    return f;
}

double neumann_mu(const Grid& g) {
    double sx = std::sin(kPi * g.hx / 2.0);
    double sy = std::sin(kPi * g.hy / 2.0);
    return 4.0 / (g.hx * g.hx) * sx * sx + 4.0 / (g.hy * g.hy) * sy * sy;
}

} // namespace

TEST_CASE("uniform state follows the reaction system for one step") {
    Grid g = Grid::uniform(8, 8);
    State s = uniform_state(g, 0.2, 0.01, 0.8, 0.05);
    StepperConfig cfg;
    cfg.dt = 0.01;
    State next = step(s, ModelKind::Linear, baseline(), cfg);
    // hand-integrated values of the spatially homogeneous system
    CHECK(next.u(3, 3) == doctest::Approx(0.19999523809523811).epsilon(1e-12));
    CHECK(next.m(3, 3) == doctest::Approx(0.008033333333333333).epsilon(1e-12));
    CHECK(next.v(3, 3) == doctest::Approx(0.7952).epsilon(1e-12));
    CHECK(next.n(3, 3) == doctest::Approx(0.049970480000000005).epsilon(1e-12));
    CHECK(next.t == doctest::Approx(0.01).epsilon(1e-15));
    // homogeneity survives the step
    CHECK(sup_norm(next.u) - std::abs(next.u(0, 0)) < 1e-14);
    CHECK(max_value(next.v) - min_value(next.v) < 1e-14);
}

TEST_CASE("zero state is a fixed point") {
    Grid g = Grid::uniform(8, 8);
    State z = State::zeros(g);
    State next = step(z, ModelKind::Linear, baseline(), StepperConfig{});
    CHECK(sup_norm(next.u) == 0.0);
    CHECK(sup_norm(next.m) == 0.0);
    CHECK(sup_norm(next.v) == 0.0);
    CHECK(sup_norm(next.n) == 0.0);
}

TEST_CASE("implicit solves reproduce the discrete eigenmode decay exactly") {
    Grid g = Grid::uniform(32, 32);
    const double mu = neumann_mu(g);
    StepperConfig cfg;
    cfg.dt = 0.1;

    SUBCASE("constant-coefficient bacterial diffusion") {
        NondimParams np{};
        np.Du_t = 1.0;
        State s = State::zeros(g);
        s.u = cos_mode(g);
        State next = step(s, ModelKind::Linear, np, cfg);
        const double shrink = 1.0 / (1.0 + cfg.dt * np.Du_t * mu);
        double worst = 0.0;
        for (int j = 0; j < g.ny; ++j) {
            for (int i = 0; i < g.nx; ++i) {
                double expected = 1.0 + (s.u(i, j) - 1.0) * shrink;
                worst = std::max(worst, std::abs(next.u(i, j) - expected));
            }
        }
        CHECK(worst < 1e-12);
    }

    SUBCASE("toxin diffusion with unit coefficient") {
        NondimParams np{};
        np.Du_t = 1.0;
        State s = State::zeros(g);
        s.u = Field(g, 0.5); // flat, so only the implicit m solve acts on m
        s.m = cos_mode(g);
        State next = step(s, ModelKind::Linear, np, cfg);
        const double shrink = 1.0 / (1.0 + cfg.dt * mu);
        double worst = 0.0;
        for (int j = 0; j < g.ny; ++j) {
            for (int i = 0; i < g.nx; ++i) {
                double expected = 1.0 + (s.m(i, j) - 1.0) * shrink;
                worst = std::max(worst, std::abs(next.m(i, j) - expected));
            }
        }
        CHECK(worst < 1e-12);
    }

    SUBCASE("density-dependent diffusion through the iterative solve") {
        // v = 0 makes the nonlinear coefficient spatially constant, so the
        // Krylov path must reproduce the same closed form
        NondimParams np{};
        np.D_t = 0.05;
        State s = State::zeros(g);
        s.u = cos_mode(g);
        State next = step(s, ModelKind::Nonlinear, np, cfg);
        const double shrink = 1.0 / (1.0 + cfg.dt * np.D_t * mu);
        double worst = 0.0;
        for (int j = 0; j < g.ny; ++j) {
            for (int i = 0; i < g.nx; ++i) {
                double expected = 1.0 + (s.u(i, j) - 1.0) * shrink;
                worst = std::max(worst, std::abs(next.u(i, j) - expected));
            }
        }
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("explicit tissue updates converge to the closed forms at first order") {
    Grid g = Grid::uniform(8, 8);
    NondimParams np = baseline();
    const double m0 = 0.01;
    auto run_frozen = [&](double dt) {
        State s = uniform_state(g, 0.2, m0, 0.8, 0.05);
        Field frozen = s.m;
        StepperConfig cfg;
        cfg.dt = dt;
        int steps = static_cast<int>(std::lround(1.0 / dt));
        for (int k = 0; k < steps; ++k) {
            s = step(s, ModelKind::Linear, np, cfg);
            s.m = frozen; // hold the toxin level fixed between steps
        }
        return s;
    };
    const double v_exact = 0.43904930887522114;
    const double n_exact = 0.047123155825656016;
    State coarse = run_frozen(0.01);
    State fine = run_frozen(0.0025);
    double ec = std::max(std::abs(coarse.v(3, 3) - v_exact), std::abs(coarse.n(3, 3) - n_exact));
    double ef = std::max(std::abs(fine.v(3, 3) - v_exact), std::abs(fine.n(3, 3) - n_exact));
    CHECK(ec < 2e-3);
    CHECK(ec / ef == doctest::Approx(4.0).epsilon(0.13)); // first order in dt
}

TEST_CASE("no-flux transport conserves bacterial and toxin mass") {
    Grid g = Grid::uniform(16, 16);
    NondimParams np{};
    np.Du_t = 0.0011627906976744188;
    np.g1_t = 1e-4;
    np.g2_t = 1e-4;
    std::mt19937_64 rng(99);
    State s = State::zeros(g);
    for (int k = 0; k < g.cells(); ++k) {
        auto draw = [&] { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; };
        s.u.data[k] = 0.5 + 0.4 * draw();
        s.m.data[k] = 0.001 * draw();
        s.v.data[k] = draw();
        s.n.data[k] = 0.0; // keeps the proliferation term inert
    }
    const double mass_u = integrate(s.u);
    const double mass_m = integrate(s.m);
    StepperConfig cfg;
    for (int k = 0; k < 200; ++k) s = step(s, ModelKind::Linear, np, cfg);
    CHECK(std::abs(integrate(s.u) - mass_u) < 1e-12);
    CHECK(std::abs(integrate(s.m) - mass_m) < 1e-12);
}

TEST_CASE("stable_dt is governed by the reaction bound at baseline settings") {
    Grid g = Grid::uniform(16, 16);
    State s = State::zeros(g);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            double dx = g.xc(i) - 0.5;
            double dy = g.yc(j) - 0.5;
            double bump = std::exp(-(dx * dx + dy * dy) / 0.01);
            s.u(i, j) = 0.95 * bump;
            s.m(i, j) = 0.001 * bump;
            s.n(i, j) = 0.0001 * bump;
            s.v(i, j) = 0.5;
        }
    }
    double dt = stable_dt(s, ModelKind::Linear, baseline(), StepperConfig{});
    CHECK(dt > 0.0237);
    CHECK(dt < 0.0238);
}

TEST_CASE("an unstable explicit step is detected") {
    Grid g = Grid::uniform(8, 8);
    NondimParams np{};
    np.Du_t = 1.0;
    np.g2_t = 10.0; // strong tissue taxis
    State s = State::zeros(g);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            s.u(i, j) = 1.0;
            s.v(i, j) = g.xc(i);
        }
    }
    StepperConfig cfg;
    cfg.dt = 1.0; // far beyond the advective limit
    CHECK_THROWS_AS(step(s, ModelKind::Linear, np, cfg), StabilityError);
    CHECK(stable_dt(s, ModelKind::Linear, np, cfg) < 0.05);
}

TEST_CASE("a starved iterative solve reports failure") {
    Grid g = Grid::uniform(16, 16);
    NondimParams np{};
    np.D_t = 1.0;
    std::mt19937_64 rng(7);
    State s = State::zeros(g);
    for (int k = 0; k < g.cells(); ++k) {
        auto draw = [&] { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; };
        s.u.data[k] = 0.5 + draw();
        s.v.data[k] = draw();
    }
    StepperConfig cfg;
    cfg.dt = 0.001; // small enough that taxis stays stable
    cfg.linear_tol = 1e-15;
    cfg.max_linear_iters = 1;
    CHECK_THROWS_AS(step(s, ModelKind::Nonlinear, np, cfg), SolverError);
}

TEST_CASE("run lands on snapshot times and enforces the toxin bound") {
    Grid g = Grid::uniform(16, 16);
    State s = State::zeros(g);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            double dx = g.xc(i) - 0.5;
            double dy = g.yc(j) - 0.5;
            double bump = std::exp(-(dx * dx + dy * dy) / 0.01);
            s.u(i, j) = 0.95 * bump;
            s.m(i, j) = 0.001 * bump;
            s.n(i, j) = 0.0001 * bump;
            s.v(i, j) = 0.5;
        }
    }
    NondimParams np = baseline();
    StepperConfig cfg;
    std::vector<State> snaps = run(s, ModelKind::Linear, np, cfg, 2.0, {0.0, 0.7, 2.0});
    REQUIRE(snaps.size() == 3);
    CHECK(snaps[0].t == 0.0);
    CHECK(snaps[1].t == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(snaps[2].t == doctest::Approx(2.0).epsilon(1e-12));
    const double cap = max_value(s.m) + np.delta_t / np.lam_t + cfg.bound_tol;
    for (const State& snap : snaps) {
        CHECK(max_value(snap.m) <= cap);
        CHECK(min_value(snap.u) >= -cfg.negativity_tol);
    }
    // empty snapshot list returns the final state only
    std::vector<State> just_end = run(s, ModelKind::Linear, np, cfg, 0.5, {});
    REQUIRE(just_end.size() == 1);
    CHECK(just_end[0].t == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("identical inputs give bit-identical trajectories") {
    Grid g = Grid::uniform(16, 16);
    State s = uniform_state(g, 0.3, 0.001, 0.6, 0.01);
    // break symmetry so the comparison is not trivial
    s.u(3, 7) = 0.9;
    s.v(10, 2) = 0.1;
    NondimParams np = baseline();
    StepperConfig cfg;
    std::vector<State> a = run(s, ModelKind::Linear, np, cfg, 1.0, {1.0});
    std::vector<State> b = run(s, ModelKind::Linear, np, cfg, 1.0, {1.0});
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a[0].u.data.size(); ++k) {
        CHECK(a[0].u.data[k] == b[0].u.data[k]);
        CHECK(a[0].m.data[k] == b[0].m.data[k]);
        CHECK(a[0].v.data[k] == b[0].v.data[k]);
        CHECK(a[0].n.data[k] == b[0].n.data[k]);
    }
}
