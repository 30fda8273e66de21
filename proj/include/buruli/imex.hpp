// IMEX time stepping: backward-Euler implicit diffusion for u and m,
// explicit Euler for taxis, proliferation and the m sources, and explicit
// Euler for the tissue/necrosis ODEs. Nonlinear diffusion coefficients are
// lagged (frozen at the step start).
#ifndef BURULI_IMEX_HPP
#define BURULI_IMEX_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "buruli/discretization.hpp"
#include "buruli/grid.hpp"
#include "buruli/params.hpp"

namespace buruli {

struct StepperConfig {
    double dt = 0.01;            // nominal step, capped by stable_dt in run()
    double linear_tol = 1e-10;   // relative residual bound for implicit solves
    int max_linear_iters = 0;    // 0 selects 10*max(nx,ny)
    double cfl_safety = 0.5;
    double negativity_tol = 1e-8;
    double bound_tol = 1e-6;     // slack on the mycolactone sup bound
};

void validate(const StepperConfig& cfg);

// Implicit solve could not reach the residual tolerance.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Post-step state violated nonnegativity; a smaller dt is required.
struct StabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Largest dt the explicit terms tolerate at this state:
//   cfl_safety * min( min_faces h/|drift| , 1/(lam_t + b1_t*max(m) + 1) ).
double stable_dt(const State& s, ModelKind model, const NondimParams& np,
                 const StepperConfig& cfg);

// One IMEX step of length cfg.dt (applied as given; the CFL guard lives in
// run()). Throws SolverError / StabilityError.
State step(const State& s, ModelKind model, const NondimParams& np,
           const StepperConfig& cfg);

// Advance to `horizon`, capping every step at stable_dt and shortening steps
// to land exactly on the requested snapshot times. Enforces nonnegativity and
// the mycolactone sup bound max(m) <= max(m0) + delta_t/lam_t + bound_tol
// after every step. Returns the state at each snapshot time (the final state
// at the horizon when `snapshot_times` is empty).
std::vector<State> run(const State& initial, ModelKind model, const NondimParams& np,
                       const StepperConfig& cfg, double horizon,
                       const std::vector<double>& snapshot_times);

// Matrix-free preconditioned conjugate gradient on raw vectors, shared with
// the 1D lattice reference solver. Solves M x = b where `apply` computes M x
// and `precondition` applies an SPD approximation of M^-1. Iterates until
// ||r||_2 <= tol_abs; returns false if max_iters is exhausted first.
template <class ApplyFn, class PrecFn>
bool conjugate_gradient(ApplyFn&& apply, PrecFn&& precondition,
                        const std::vector<double>& b, std::vector<double>& x,
                        double tol_abs, int max_iters) {
    const std::size_t n = b.size();
    std::vector<double> r(n), z(n), p(n), q(n);
    apply(x, q);
    for (std::size_t k = 0; k < n; ++k) r[k] = b[k] - q[k];
    auto norm2 = [](const std::vector<double>& w) {
        double s = 0.0;
        for (double a : w) s += a * a;
        return std::sqrt(s);
    };
    if (norm2(r) <= tol_abs) return true;
    precondition(r, z);
    p = z;
    double rz = 0.0;
    for (std::size_t k = 0; k < n; ++k) rz += r[k] * z[k];
    for (int it = 0; it < max_iters; ++it) {
        apply(p, q);
        double pq = 0.0;
        for (std::size_t k = 0; k < n; ++k) pq += p[k] * q[k];
        double alpha = rz / pq;
        for (std::size_t k = 0; k < n; ++k) {
            x[k] += alpha * p[k];
            r[k] -= alpha * q[k];
        }
        if (norm2(r) <= tol_abs) return true;
        precondition(r, z);
        double rz_new = 0.0;
        for (std::size_t k = 0; k < n; ++k) rz_new += r[k] * z[k];
        double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t k = 0; k < n; ++k) p[k] = z[k] + beta * p[k];
    }
    return false;
}

} // namespace buruli

#endif
