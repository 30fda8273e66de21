#include "buruli/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "buruli/discretization.hpp"
#include "buruli/imex.hpp"

namespace buruli {

void validate(const LatticeConfig& cfg) {
    if (cfg.num_nodes < 4) throw std::invalid_argument("LatticeConfig: num_nodes must be at least 4");
    if (!(cfg.h > 0.0)) throw std::invalid_argument("LatticeConfig: h must be positive");
    if (!(cfg.jump_rate > 0.0)) throw std::invalid_argument("LatticeConfig: jump_rate must be positive");
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("LatticeConfig: dt must be positive");
    double d = 2.0 * cfg.jump_rate * cfg.h * cfg.h;
    if (std::fabs(d - cfg.target_diffusivity) >
        1e-12 * std::max(1.0, std::fabs(cfg.target_diffusivity))) {
        throw std::invalid_argument(
            "LatticeConfig: 2*jump_rate*h^2 does not match target_diffusivity");
    }
    cfg.rk.validate();
    auto check_env = [&](const std::vector<double>& e, const char* name) {
        if (e.size() != static_cast<std::size_t>(cfg.num_nodes)) {
            throw std::invalid_argument(std::string("LatticeConfig: ") + name +
                                        " length does not match num_nodes");
        }
        for (double x : e) {
            if (!(x >= 0.0)) {
                throw std::invalid_argument(std::string("LatticeConfig: ") + name +
                                            " must be nonnegative");
            }
        }
    };
    check_env(cfg.frozen_v, "frozen_v");
    check_env(cfg.frozen_n, "frozen_n");
}

JumpRates jump_probabilities(int i, const std::vector<double>& u,
                             const LatticeConfig& cfg) {
    if (u.size() != static_cast<std::size_t>(cfg.num_nodes)) {
        throw std::invalid_argument("jump_probabilities: occupancy length mismatch");
    }
    if (i < 1 || i > cfg.num_nodes - 2) {
        throw std::out_of_range("jump_probabilities: end node has no two-sided rates");
    }
    double ab = coeff::a_bar(u[i], cfg.frozen_v[i]);
    double kp = coeff::kappa(u[i], cfg.frozen_n[i]);
    double ti = coeff::tau(cfg.frozen_n[i], cfg.rk);
    JumpRates r;
    r.plus = cfg.jump_rate * (ab + kp * (coeff::tau(cfg.frozen_n[i + 1], cfg.rk) - ti));
    r.minus = cfg.jump_rate * (ab + kp * (coeff::tau(cfg.frozen_n[i - 1], cfg.rk) - ti));
    return r;
}

std::vector<double> master_step(const std::vector<double>& u,
                                const LatticeConfig& cfg) {
    const int nn = cfg.num_nodes;
    if (u.size() != static_cast<std::size_t>(nn)) {
        throw std::invalid_argument("master_step: occupancy length mismatch");
    }
    std::vector<double> tau_n(nn);
    for (int i = 0; i < nn; ++i) tau_n[i] = coeff::tau(cfg.frozen_n[i], cfg.rk);

    // Active outgoing rates; a missing neighbor keeps its rate at zero, which
    // is the reflecting closure (the hop is redirected to staying put).
    std::vector<double> tp(nn, 0.0), tm(nn, 0.0);
    for (int i = 0; i < nn; ++i) {
        double ab = coeff::a_bar(u[i], cfg.frozen_v[i]);
        double kp = coeff::kappa(u[i], cfg.frozen_n[i]);
        if (i + 1 < nn) tp[i] = cfg.jump_rate * (ab + kp * (tau_n[i + 1] - tau_n[i]));
        if (i > 0) tm[i] = cfg.jump_rate * (ab + kp * (tau_n[i - 1] - tau_n[i]));
        if (tp[i] < 0.0 || tm[i] < 0.0) {
            std::ostringstream msg;
            msg << "master_step: negative hop rate at node " << i
                << " (environment gradient too steep for this h)";
            throw StabilityError(msg.str());
        }
        if (cfg.dt * (tp[i] + tm[i]) >= 1.0) {
            std::ostringstream msg;
            msg << "master_step: dt*(T+ + T-) = " << cfg.dt * (tp[i] + tm[i])
                << " at node " << i << " reaches 1; reduce dt";
            throw StabilityError(msg.str());
        }
    }

    // Each edge transfer is added to one node and subtracted from the other,
    // so the sum over nodes is exactly unchanged.
    std::vector<double> out = u;
    for (int e = 0; e + 1 < nn; ++e) {
        double phi = cfg.dt * (tp[e] * u[e] - tm[e + 1] * u[e + 1]);
        out[e] -= phi;
        out[e + 1] += phi;
    }
    return out;
}

namespace {

// Cell-centered finite-difference solver for the 1D continuum limit, using
// the preconditioned CG template shared with the 2D solver. Taxis and the
// lagged diffusion coefficient are frozen at the step start, diffusion is
// advanced by backward Euler; there are no reaction terms in the limit.
// Drift is carried by the edge-average of the density, the same second-order
// coupling the jump process itself uses, so the reference error stays far
// below the lattice rows being measured (donor-cell transport would add an
// O(grid spacing) bias of about 1e-5 at 3200 cells, large enough to mask the
// finest lattice row).
struct Reference1D {
    int cells;
    double dx;
    double D;
    ReceptorKinetics rk;
    std::vector<double> u, v, n;

    Reference1D(int m, double diffusivity, const ReceptorKinetics& kinetics,
                const std::function<double(double)>& u0,
                const std::function<double(double)>& v_env,
                const std::function<double(double)>& n_env)
        : cells(m), dx(1.0 / m), D(diffusivity), rk(kinetics), u(m), v(m), n(m) {
        for (int k = 0; k < m; ++k) {
            double x = (k + 0.5) * dx;
            u[k] = u0(x);
            v[k] = v_env(x);
            n[k] = n_env(x);
        }
    }

    void step(double dt, double tol) {
        const int m = cells;
        std::vector<double> rhs = u;
        std::vector<double> kface(m - 1);
        for (int f = 0; f + 1 < m; ++f) {
            int l = f, r = f + 1;
            double ubar = std::max(0.0, 0.5 * (u[l] + u[r]));
            double vbar = 0.5 * (v[l] + v[r]);
            double nbar = 0.5 * (n[l] + n[r]);
            double sv = 1.0 + ubar * vbar;
            double drift_v = 0.5 * D * ubar / (sv * sv) * (v[r] - v[l]) / dx;
            double drift_n = D * coeff::kappa(ubar, nbar) * coeff::dtau_dn(nbar, rk) *
                             (n[r] - n[l]) / dx;
            double flux = (drift_v + drift_n) * 0.5 * (u[l] + u[r]);
            rhs[l] -= dt * flux / dx;
            rhs[r] += dt * flux / dx;
            kface[f] = 0.5 * (coeff::D_u_nl(std::max(0.0, u[l]), v[l], 0.5 * D) +
                              coeff::D_u_nl(std::max(0.0, u[r]), v[r], 0.5 * D));
        }
        double ih2 = 1.0 / (dx * dx);
        // (I - dt*A) x with A = d/dx(kface d/dx .), no-flux at the walls.
        auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
            out.resize(m);
            for (int k = 0; k < m; ++k) out[k] = in[k];
            for (int f = 0; f + 1 < m; ++f) {
                double q = dt * kface[f] * (in[f + 1] - in[f]) * ih2;
                out[f] -= q;
                out[f + 1] += q;
            }
        };
        std::vector<double> idiag(m);
        for (int k = 0; k < m; ++k) {
            double acc = 1.0;
            if (k > 0) acc += dt * kface[k - 1] * ih2;
            if (k + 1 < m) acc += dt * kface[k] * ih2;
            idiag[k] = 1.0 / acc;
        }
        auto prec = [&](const std::vector<double>& in, std::vector<double>& out) {
            out.resize(m);
            for (int k = 0; k < m; ++k) out[k] = in[k] * idiag[k];
        };
        double bn = 0.0;
        for (double x : rhs) bn += x * x;
        std::vector<double> sol = rhs;
        if (!conjugate_gradient(apply, prec, rhs, sol, 0.5 * tol * std::sqrt(bn),
                                20 * m)) {
            throw SolverError("reference solver: conjugate gradient did not converge");
        }
        double drift_mass = 0.0;
        for (int k = 0; k < m; ++k) drift_mass += rhs[k] - sol[k];
        double shift = drift_mass / m;
        for (double& x : sol) x += shift;
        u = std::move(sol);
    }

    // Piecewise-linear value at x, constant beyond the outermost centers
    // (the solution has zero slope at the walls).
    double at(double x) const {
        double s = x / dx - 0.5;
        if (s <= 0.0) return u.front();
        if (s >= cells - 1.0) return u.back();
        int k = static_cast<int>(s);
        double w = s - k;
        return (1.0 - w) * u[k] + w * u[k + 1];
    }
};

double trapezoid_l2(const std::vector<double>& diff, double h) {
    double acc = 0.0;
    for (std::size_t i = 0; i < diff.size(); ++i) {
        double w = (i == 0 || i + 1 == diff.size()) ? 0.5 : 1.0;
        acc += w * diff[i] * diff[i];
    }
    return std::sqrt(h * acc);
}

LatticeConfig study_config(int q, double D, double dt_fraction,
                           const ReceptorKinetics& rk,
                           const std::function<double(double)>& v_env,
                           const std::function<double(double)>& n_env,
                           double t_star, int& steps_out) {
    LatticeConfig cfg;
    cfg.num_nodes = q + 1;
    cfg.h = 1.0 / q;
    cfg.target_diffusivity = D;
    cfg.jump_rate = D / (2.0 * cfg.h * cfg.h);
    cfg.rk = rk;
    cfg.frozen_v.resize(cfg.num_nodes);
    cfg.frozen_n.resize(cfg.num_nodes);
    for (int i = 0; i < cfg.num_nodes; ++i) {
        double x = i * cfg.h;
        cfg.frozen_v[i] = v_env(x);
        cfg.frozen_n[i] = n_env(x);
    }
    // dt at a fixed fraction of the stability cap 1/(2*jump_rate), rounded so
    // the steps land exactly on t_star.
    double dt_cap = dt_fraction / (2.0 * cfg.jump_rate);
    steps_out = static_cast<int>(std::ceil(t_star / dt_cap - 1e-12));
    cfg.dt = t_star / steps_out;
    return cfg;
}

} // namespace

LatticeStudy default_lattice_study() {
    LatticeStudy st;
    st.u0 = [](double x) { return 0.5 * std::exp(-(x - 0.5) * (x - 0.5) / 0.02); };
    st.v_env = [](double x) { return 0.4 + 0.3 * std::cos(M_PI * x); };
    st.n_env = [](double x) { return 0.2 + 0.1 * std::cos(2.0 * M_PI * x); };
    return st;
}

std::vector<ConvergenceRow> convergence_study(const LatticeStudy& study) {
    if (!study.u0 || !study.v_env || !study.n_env) {
        throw std::invalid_argument("convergence_study: profiles must be set");
    }
    if (!(study.t_star > 0.0) || !(study.D > 0.0)) {
        throw std::invalid_argument("convergence_study: D and t_star must be positive");
    }

    Reference1D ref(study.ref_cells, study.D, study.rk, study.u0, study.v_env,
                    study.n_env);
    int ref_steps = static_cast<int>(std::ceil(study.t_star / study.ref_dt - 1e-12));
    double ref_dt = study.t_star / ref_steps;
    for (int s = 0; s < ref_steps; ++s) ref.step(ref_dt, study.linear_tol);

    std::vector<ConvergenceRow> rows;
    for (int q : study.intervals) {
        int steps = 0;
        LatticeConfig cfg = study_config(q, study.D, study.dt_fraction, study.rk,
                                         study.v_env, study.n_env, study.t_star, steps);
        validate(cfg);
        std::vector<double> u(cfg.num_nodes);
        for (int i = 0; i < cfg.num_nodes; ++i) u[i] = study.u0(i * cfg.h);
        for (int s = 0; s < steps; ++s) u = master_step(u, cfg);
        std::vector<double> diff(cfg.num_nodes);
        for (int i = 0; i < cfg.num_nodes; ++i) diff[i] = u[i] - ref.at(i * cfg.h);
        rows.push_back({cfg.h, cfg.num_nodes, steps, trapezoid_l2(diff, cfg.h)});
    }
    return rows;
}

std::vector<ConvergenceRow> heat_kernel_study(double D, double t_star,
                                              const std::vector<int>& intervals,
                                              double dt_fraction) {
    if (!(D > 0.0) || !(t_star > 0.0)) {
        throw std::invalid_argument("heat_kernel_study: D and t_star must be positive");
    }
    // Reflecting-wall kernel of u_t = (D/2) u_xx on (0,1) by image charges.
    double var = D * t_star;
    auto kernel = [&](double x, double x0) {
        double acc = 0.0;
        for (int k = -2; k <= 2; ++k) {
            double y1 = x - x0 - 2.0 * k;
            double y2 = x + x0 - 2.0 * k;
            acc += std::exp(-y1 * y1 / (2.0 * var)) + std::exp(-y2 * y2 / (2.0 * var));
        }
        return acc / std::sqrt(2.0 * M_PI * var);
    };

    ReceptorKinetics flat{1.0, 1.0, 0.0}; // b = 0 turns the taxis off entirely
    auto zero = [](double) { return 0.0; };
    std::vector<ConvergenceRow> rows;
    for (int q : intervals) {
        if (q % 2 != 0) {
            throw std::invalid_argument(
                "heat_kernel_study: interval counts must be even so a node sits at 0.5");
        }
        int steps = 0;
        LatticeConfig cfg = study_config(q, D, dt_fraction, flat, zero, zero, t_star, steps);
        validate(cfg);
        std::vector<double> u(cfg.num_nodes, 0.0);
        int center = q / 2;
        u[center] = 1.0; // point mass; occupancy/h plays the density
        for (int s = 0; s < steps; ++s) u = master_step(u, cfg);
        std::vector<double> diff(cfg.num_nodes);
        for (int i = 0; i < cfg.num_nodes; ++i) {
            diff[i] = u[i] / cfg.h - kernel(i * cfg.h, 0.5);
        }
        rows.push_back({cfg.h, cfg.num_nodes, steps, trapezoid_l2(diff, cfg.h)});
    }
    return rows;
}

} // namespace buruli
