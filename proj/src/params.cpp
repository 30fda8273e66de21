#include "buruli/params.hpp"

#include <stdexcept>
#include <string>

namespace buruli {

namespace {

void require_positive(double x, const char* name) {
    if (!(x > 0.0)) {
        throw std::invalid_argument(std::string(name) + " must be strictly positive");
    }
}

void require_nonnegative(double x, const char* name) {
    if (!(x >= 0.0)) {
        throw std::invalid_argument(std::string(name) + " must be nonnegative");
    }
}

} // namespace

void validate(const DimensionalParams& p, double gamma_max) {
    require_positive(p.D_u, "D_u");
    require_positive(p.D_m, "D_m");
    require_positive(p.delta, "delta");
    require_positive(p.lambda_decay, "lambda_decay");
    require_positive(p.beta1, "beta1");
    require_positive(p.beta2, "beta2");
    require_positive(p.gamma_n, "gamma_n");
    require_positive(p.alpha_u, "alpha_u");
    require_positive(p.eta0, "eta0");
    require_positive(p.K_U, "K_U");
    require_positive(p.K_M, "K_M");
    require_positive(p.K_V, "K_V");
    require_positive(p.K_N, "K_N");
    require_positive(p.D_jump, "D_jump");
    require_positive(p.K1, "K1");
    if (!(p.gamma1 >= 0.0 && p.gamma1 <= gamma_max)) {
        throw std::invalid_argument("gamma1 outside admissible range [0, " +
                                    std::to_string(gamma_max) + "]");
    }
    if (!(p.gamma2 >= 0.0 && p.gamma2 <= gamma_max)) {
        throw std::invalid_argument("gamma2 outside admissible range [0, " +
                                    std::to_string(gamma_max) + "]");
    }
    require_nonnegative(p.gamma3, "gamma3");
}

void validate(const NondimParams& np) {
    require_nonnegative(np.Du_t, "Du_t");
    require_nonnegative(np.g1_t, "g1_t");
    require_nonnegative(np.g2_t, "g2_t");
    require_nonnegative(np.g3_t, "g3_t");
    require_nonnegative(np.delta_t, "delta_t");
    require_nonnegative(np.lam_t, "lam_t");
    require_nonnegative(np.b1_t, "b1_t");
    require_nonnegative(np.b2_t, "b2_t");
    require_nonnegative(np.gam_t, "gam_t");
    require_nonnegative(np.D_t, "D_t");
    require_nonnegative(np.chin_t, "chin_t");
    require_positive(np.Du_t, "Du_t");
    require_positive(np.lam_t, "lam_t");
    require_positive(np.b1_t, "b1_t");
}

namespace {

// Both model variants share the same scaling; they differ only in which
// coefficients the equations consume.
NondimParams collapse(const DimensionalParams& p) {
    validate(p);
    NondimParams np;
    np.Du_t = p.D_u / p.D_m;
    np.g1_t = p.gamma1 * p.eta0;
    np.g2_t = p.gamma2 * p.eta0;
    np.g3_t = p.gamma3;
    np.delta_t = p.delta / (p.K_M * p.alpha_u);
    np.lam_t = p.lambda_decay / p.alpha_u;
    np.b1_t = p.beta1 / p.alpha_u;
    np.b2_t = p.beta2 / (p.K_N * p.alpha_u);
    np.gam_t = p.gamma_n / p.alpha_u;
    np.D_t = p.D_jump / (2.0 * p.D_m);
    np.chin_t = p.K1 / p.D_m;
    validate(np);
    return np;
}

} // namespace

NondimParams nondimensionalize_linear(const DimensionalParams& p) {
    return collapse(p);
}

NondimParams nondimensionalize_nonlinear(const DimensionalParams& p) {
    return collapse(p);
}

} // namespace buruli
