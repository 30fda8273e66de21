// Flux-form spatial operators on the cell-centered grid.
//
// Both operators are assembled face by face and zero the whole normal flux on
// boundary faces, which is the discrete no-flux condition: their output sums
// to zero over the domain (up to roundoff) for any input.
#ifndef BURULI_DISCRETIZATION_HPP
#define BURULI_DISCRETIZATION_HPP

#include <vector>

#include "buruli/grid.hpp"
#include "buruli/params.hpp"

namespace buruli {

// Scalar upwind kernel shared by the 2D operators and the 1D lattice
// reference: flux through a face with signed drift s*dP, donor-cell value.
// A zero drift carries the arithmetic mean (and hence zero flux).
inline double upwind_face_flux(double drift, double left, double right) {
    if (drift > 0.0) return drift * left;
    if (drift < 0.0) return drift * right;
    return drift * 0.5 * (left + right);
}

// Sensitivities attached to interior faces. x faces sit between cells (i,j)
// and (i+1,j), stored as j*(nx-1)+i; y faces between (i,j) and (i,j+1),
// stored as j*nx+i.
struct FaceCoeffs {
    std::vector<double> x;
    std::vector<double> y;

    static FaceCoeffs zeros(const Grid& g);
    static FaceCoeffs constant(const Grid& g, double value);
};

// div(kappa grad .) with central differences and arithmetic face averaging of
// kappa. Symmetric and negative semidefinite with zero row sums.
struct DiffusionOperator {
    Grid grid;
    FaceCoeffs kappa;

    // out = div(kappa grad x)
    void apply(const Field& x, Field& out) const;

    // Diagonal of the operator matrix (used as a Jacobi preconditioner for
    // the implicit solves).
    void diagonal(Field& out) const;
};

DiffusionOperator diffusion_operator(const Grid& g, double kappa);
DiffusionOperator diffusion_operator(const Field& kappa_cells);

// Refills an existing operator from per-cell kappa values, reusing storage.
void update_diffusion_operator(DiffusionOperator& op, const Field& kappa_cells);

// -div(s * carried * grad potential) with first-order donor-cell upwinding:
// the face drift is s_face * (dP across the face) and the carried value is
// taken from the upwind cell. Boundary faces carry no flux.
Field upwind_taxis_div(const Field& carried, const FaceCoeffs& sensitivity,
                       const Field& potential);

// Sum of every taxis term of the chosen model evaluated on `state`:
//   Linear:    -div(a_sens*Du_t*g1_t u grad n) - div(a_sens*Du_t*g2_t u grad v)
//              - div(g3_t u grad m)             (last term only if g3_t > 0)
//   Nonlinear: -div(D_t*u^2/(1+uv)^2 grad v)
//              - div(chin_t u/((1+n)^2(1+un)) grad n)
// Coefficient functions are evaluated at arithmetically face-averaged
// arguments, clamped at zero to tolerate roundoff-negative state values.
Field advect_all_taxis(const State& state, ModelKind model, const NondimParams& np);

// Same evaluation, additionally reporting the largest face drift so the time
// loop gets its CFL bound from the pass it already performs.
Field advect_all_taxis(const State& state, ModelKind model, const NondimParams& np,
                       double* max_drift_out);

// Largest |drift| = sum over active taxis terms of |s_face * dP| over all
// interior faces of both axes; 0 for a gradient-free state. Drives the
// advective CFL bound.
double max_face_drift(const State& state, ModelKind model, const NondimParams& np);

} // namespace buruli

#endif
