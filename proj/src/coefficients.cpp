#include "buruli/coefficients.hpp"

#include <stdexcept>
#include <string>

namespace buruli {

void ReceptorKinetics::validate() const {
    if (!(K_ratio > 0.0)) throw std::invalid_argument("ReceptorKinetics: K_ratio must be positive");
    if (!(R_T > 0.0)) throw std::invalid_argument("ReceptorKinetics: R_T must be positive");
    if (!(b >= 0.0)) throw std::invalid_argument("ReceptorKinetics: b must be nonnegative");
}

namespace coeff {

namespace {

void require_domain(double x, const char* fn, const char* arg) {
    if (!(x >= 0.0)) {
        throw std::domain_error(std::string(fn) + ": argument " + arg + " must be nonnegative");
    }
}

} // namespace

double a_sens(double v, double n) {
    require_domain(v, "a_sens", "v");
    require_domain(n, "a_sens", "n");
    double s = 1.0 + n + v;
    return 1.0 / (s * s);
}

double receptor_steady(double v, double n) {
    require_domain(v, "receptor_steady", "v");
    require_domain(n, "receptor_steady", "n");
    return (n + v) / (1.0 + n + v);
}

double dystar_dn(double v, double n) {
    require_domain(v, "dystar_dn", "v");
    require_domain(n, "dystar_dn", "n");
    double s = 1.0 + n + v;
    return 1.0 / (s * s);
}

double dystar_dv(double v, double n) {
    require_domain(v, "dystar_dv", "v");
    require_domain(n, "dystar_dv", "n");
    double s = 1.0 + n + v;
    return 1.0 / (s * s);
}

double growth(double u, double v, double n) {
    require_domain(u, "growth", "u");
    require_domain(v, "growth", "v");
    require_domain(n, "growth", "n");
    return n / (1.0 + n) * u * (1.0 - u - v - n);
}

double D_u_nl(double u, double v, double Dt) {
    require_domain(u, "D_u_nl", "u");
    require_domain(v, "D_u_nl", "v");
    require_domain(Dt, "D_u_nl", "Dt");
    double s = 1.0 + u * v;
    return Dt / (s * s);
}

double chi1_nl(double u, double v, double Dt) {
    require_domain(u, "chi1_nl", "u");
    require_domain(v, "chi1_nl", "v");
    require_domain(Dt, "chi1_nl", "Dt");
    double s = 1.0 + u * v;
    return Dt * u * u / (s * s);
}

double chi2_nl(double u, double n, double chin) {
    require_domain(u, "chi2_nl", "u");
    require_domain(n, "chi2_nl", "n");
    require_domain(chin, "chi2_nl", "chin");
    double a = 1.0 + n;
    double c = 1.0 + u * n;
    return chin * u / (a * a * c);
}

double kappa(double u, double n) {
    require_domain(u, "kappa", "u");
    require_domain(n, "kappa", "n");
    return 1.0 / (1.0 + u * n);
}

double a_bar(double u, double v) {
    require_domain(u, "a_bar", "u");
    require_domain(v, "a_bar", "v");
    return 1.0 / (1.0 + u * v);
}

double tau(double n, const ReceptorKinetics& rk) {
    require_domain(n, "tau", "n");
    rk.validate();
    return rk.b * rk.K_ratio * rk.R_T * n / (1.0 + rk.K_ratio * n);
}

double dtau_dn(double n, const ReceptorKinetics& rk) {
    require_domain(n, "dtau_dn", "n");
    rk.validate();
    double s = 1.0 + rk.K_ratio * n;
    return rk.b * rk.K_ratio * rk.R_T / (s * s);
}

} // namespace coeff
} // namespace buruli
