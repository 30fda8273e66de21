// Dimensional model parameters and their nondimensional form.
//
// The simulator integrates the nondimensional systems, so every run starts by
// collapsing the dimensional inputs below into the coefficient set
// NondimParams. Time is measured in units of 1/alpha_u and space in units of
// sqrt(D_m/alpha_u); densities are scaled by their carrying capacities.
#ifndef BURULI_PARAMS_HPP
#define BURULI_PARAMS_HPP

namespace buruli {

// Which bacterial motility closure to integrate.
//  Linear:    constant diffusion plus linear-in-gradient taxis terms.
//  Nonlinear: density-dependent diffusion/taxis from the position-jump limit.
enum class ModelKind { Linear, Nonlinear };

struct DimensionalParams {
    double D_u = 1e-4;          // bacterial diffusivity [mm^2/h]
    double D_m = 0.086;         // mycolactone diffusivity [mm^2/h]
    double delta = 1.0;         // mycolactone production rate [1/h]
    double lambda_decay = 0.1;  // mycolactone decay rate [1/h]
    double beta1 = 0.3;         // tissue degradation rate [1/h]
    double beta2 = 0.3;         // necrotisation rate [1/h]
    double gamma_n = 3e-4;      // necrotic matter clearance rate [1/h]
    double alpha_u = 0.005;     // bacterial proliferation rate [1/h]
    double gamma1 = 1e-5;       // necrotaxis sensitivity [h]
    double gamma2 = 1e-5;       // tissue-taxis sensitivity [h]
    double gamma3 = 1e-4;       // mycolactone chemotaxis sensitivity (dimensionless)
    double eta0 = 10.0;         // receptor turnover scale [1/h]
    double K_U = 1e4;           // bacterial carrying capacity [cells/mm^2]
    double K_M = 1e4;           // mycolactone saturation scale [mol/L]
    double K_V = 1e4;           // normal tissue capacity
    double K_N = 1e4;           // necrotic matter capacity
    double D_jump = 1e-4;       // position-jump macroscopic diffusivity [mm^2/h]
    double K1 = 1e-4;           // lumped taxis constant D*b*K*R_T [mm^2/h]
};

// Throws std::invalid_argument naming the offending field. gamma1/gamma2 must
// lie in [0, gamma_max] (sensitivities are small positive times in hours);
// gamma3 is a dimensionless sensitivity and must be nonnegative.
void validate(const DimensionalParams& p, double gamma_max = 1.0);

// Coefficients of the nondimensional systems. Shared reaction coefficients
// are used by both models; Du_t/g1_t/g2_t/g3_t drive the linear model and
// D_t/chin_t the nonlinear one.
struct NondimParams {
    double Du_t = 0.0;   // D_u / D_m
    double g1_t = 0.0;   // gamma1 * eta0
    double g2_t = 0.0;   // gamma2 * eta0
    double g3_t = 0.0;   // gamma3 (already dimensionless)
    double delta_t = 0.0; // delta / (K_M * alpha_u)
    double lam_t = 0.0;  // lambda / alpha_u
    double b1_t = 0.0;   // beta1 / alpha_u
    double b2_t = 0.0;   // beta2 / (K_N * alpha_u)
    double gam_t = 0.0;  // gamma_n / alpha_u
    double D_t = 0.0;    // D_jump / (2 * D_m)
    double chin_t = 0.0; // K1 / D_m
};

// Throws std::invalid_argument: every coefficient nonnegative; Du_t, lam_t
// and b1_t strictly positive.
void validate(const NondimParams& np);

NondimParams nondimensionalize_linear(const DimensionalParams& p);
NondimParams nondimensionalize_nonlinear(const DimensionalParams& p);

} // namespace buruli

#endif
