// Closed-form coefficient functions shared by the PDE models and the lattice
// validator. All functions are total on the closed nonnegative orthant and
// throw std::domain_error on negative arguments; nonnegativity of simulation
// fields is enforced at the state level, callers clamp roundoff-negative
// values before evaluating.
#ifndef BURULI_COEFFICIENTS_HPP
#define BURULI_COEFFICIENTS_HPP

namespace buruli {

// Receptor-binding kinetics behind the necrotaxis response tau(n).
struct ReceptorKinetics {
    double K_ratio = 1.0; // binding/unbinding ratio K
    double R_T = 1.0;     // total receptor density
    double b = 1.0;       // jump-rate bias per bound receptor

    void validate() const; // throws std::invalid_argument
};

namespace coeff {

// Sensitivity factor 1/(1+n+v)^2 multiplying the linear-model taxis terms.
double a_sens(double v, double n);

// Steady receptor occupancy y* = (n+v)/(1+n+v).
double receptor_steady(double v, double n);

// Partial derivatives of y*; both equal a_sens identically.
double dystar_dn(double v, double n);
double dystar_dv(double v, double n);

// Logistic-type proliferation n/(1+n) * u * (1-u-v-n) shared by both models.
double growth(double u, double v, double n);

// Nonlinear-model diffusion coefficient Dt/(1+u v)^2.
double D_u_nl(double u, double v, double Dt);

// Nonlinear-model tissue-taxis coefficient Dt*u^2/(1+u v)^2 (full coefficient
// of grad v, both powers of u included).
double chi1_nl(double u, double v, double Dt);

// Nonlinear-model necrotaxis coefficient chin*u/((1+n)^2 (1+u n)) (full
// coefficient of grad n).
double chi2_nl(double u, double n, double chin);

// Volume-filling factor 1/(1+u n).
double kappa(double u, double n);

// Space-availability factor 1/(1+u v) entering the lattice jump rates.
double a_bar(double u, double v);

// Receptor response tau(n) = b*K*R_T*n/(1+K*n), increasing and saturating at
// b*R_T, and its analytic derivative.
double tau(double n, const ReceptorKinetics& rk);
double dtau_dn(double n, const ReceptorKinetics& rk);

} // namespace coeff
} // namespace buruli

#endif
