#pragma once

#include <functional>
#include <vector>

#include "buruli/coefficients.hpp"

namespace buruli {

// Deterministic hop process on a 1D node lattice over [0,1]. A walker at an
// interior node hops right or left per unit time with rates
//   T_i(+/-) = jump_rate * (a_bar(u_i,v_i) + kappa(u_i,n_i)*(tau(n_{i+/-1}) - tau(n_i)))
// and otherwise stays. Outward hops at the two end nodes are redirected to
// stay, which conserves the occupancy sum exactly. The environments v, n are
// frozen profiles. Refining h with 2*jump_rate*h^2 held equal to
// target_diffusivity makes the occupancies converge to the solution of the
// nonlinear-motility continuum equation; the studies below measure that.
struct LatticeConfig {
    int num_nodes = 0;
    double h = 0.0;
    double jump_rate = 0.0;
    double target_diffusivity = 0.0; // must equal 2*jump_rate*h^2
    double dt = 0.0;
    ReceptorKinetics rk;
    std::vector<double> frozen_v;
    std::vector<double> frozen_n;
};

void validate(const LatticeConfig& cfg);

struct JumpRates {
    double plus = 0.0;  // rate of a right hop
    double minus = 0.0; // rate of a left hop
};

// Hop rates at an interior node (both neighbors exist). End nodes have no
// two-sided rates; master_step handles them via the reflecting closure.
JumpRates jump_probabilities(int i, const std::vector<double>& u,
                             const LatticeConfig& cfg);

// One explicit update of the occupancy vector. Throws StabilityError when a
// rate is negative or dt * (sum of active rates) reaches 1 at some node.
// The update is assembled from per-edge transfers, so the occupancy sum is
// conserved to roundoff.
std::vector<double> master_step(const std::vector<double>& u,
                                const LatticeConfig& cfg);

struct ConvergenceRow {
    double h = 0.0;
    int nodes = 0;
    int steps = 0;
    double l2_error = 0.0;
};

// Lattice-vs-continuum convergence measurement. For each interval count q
// the lattice runs with h=1/q and jump_rate=D/(2 h^2) until t_star, and the
// occupancies are compared in the h-weighted L2 norm against a fine-grid
// finite-difference solution of the limit equation
//   u_t = d/dx( (D/2)/(1+uv)^2 u_x ) - d/dx( (D/2) u^2/(1+uv)^2 v_x )
//         - d/dx( D kappa(u,n) dtau/dn(n) u n_x )
// built from the same flux-form upwind/diffusion kernels as the 2D solver.
struct LatticeStudy {
    double D = 2e-3;
    double t_star = 2.0;
    double dt_fraction = 0.4; // lattice dt as a fraction of the stability cap
    ReceptorKinetics rk{1.0, 1.0, 5.0};
    std::function<double(double)> u0;
    std::function<double(double)> v_env;
    std::function<double(double)> n_env;
    std::vector<int> intervals{50, 100, 200};
    int ref_cells = 3200;
    // The reference advances with backward Euler, so its O(ref_dt) error must
    // sit well below the finest lattice row for the error column to keep
    // shrinking; 5e-5 puts the floor near 4e-7 against a finest-row
    // discretization error of about 1.5e-6.
    double ref_dt = 5e-5;
    double linear_tol = 1e-10;
};

// Smooth default profiles with zero slope at the walls.
LatticeStudy default_lattice_study();

std::vector<ConvergenceRow> convergence_study(const LatticeStudy& study);

// Special case with flat environments and tau = 0: the walk is symmetric
// with rate jump_rate everywhere, and the occupancy started as a point mass
// at the center node, divided by h, converges to the reflecting-wall heat
// kernel of u_t = (D/2) u_xx. The oracle is closed form (method of images),
// so this study needs no reference solve.
std::vector<ConvergenceRow> heat_kernel_study(double D, double t_star,
                                              const std::vector<int>& intervals,
                                              double dt_fraction = 0.4);

} // namespace buruli
