#include <cmath>
#include <stdexcept>

#include "buruli/coefficients.hpp"
#include "doctest.h"

using namespace buruli;
using namespace buruli::coeff;

TEST_CASE("closed-form point values") {
    CHECK(a_sens(0.5, 0.25) == doctest::Approx(0.32653061224489793).epsilon(1e-15));
    CHECK(receptor_steady(0.5, 0.25) == doctest::Approx(0.42857142857142855).epsilon(1e-15));
    CHECK(growth(0.5, 0.25, 0.1) == doctest::Approx(0.006818181818181818).epsilon(1e-15));
    CHECK(D_u_nl(0.5, 0.4, 0.2) == doctest::Approx(0.1388888888888889).epsilon(1e-15));
    CHECK(chi1_nl(0.5, 0.4, 0.2) == doctest::Approx(0.034722222222222224).epsilon(1e-15));
    CHECK(chi2_nl(0.5, 0.1, 0.3) == doctest::Approx(0.11806375442739077).epsilon(1e-14));
    CHECK(kappa(0.5, 0.1) == doctest::Approx(0.9523809523809523).epsilon(1e-15));
    CHECK(a_bar(0.5, 0.4) == doctest::Approx(0.8333333333333334).epsilon(1e-15));
    ReceptorKinetics rk{2.0, 1.5, 0.8};
    CHECK(tau(0.3, rk) == doctest::Approx(0.45).epsilon(1e-15));
    CHECK(dtau_dn(0.3, rk) == doctest::Approx(0.9375).epsilon(1e-15));
}

TEST_CASE("occupancy derivatives coincide with the taxis sensitivity") {
    for (double v : {0.0, 0.3, 1.7, 4.0}) {
        for (double n : {0.0, 0.2, 2.5, 5.0}) {
            double a = a_sens(v, n);
            CHECK(dystar_dn(v, n) == doctest::Approx(a).epsilon(1e-13));
            CHECK(dystar_dv(v, n) == doctest::Approx(a).epsilon(1e-13));
            // forward difference of y* itself as an independent cross-check
            double h = 1e-6;
            double fd = (receptor_steady(v, n + h) - receptor_steady(v, n)) / h;
            CHECK(fd == doctest::Approx(a).epsilon(1e-5));
        }
    }
}

TEST_CASE("receptor response saturates and differentiates correctly") {
    ReceptorKinetics rk{3.0, 2.0, 1.5};
    CHECK(tau(0.0, rk) == 0.0);
    CHECK(tau(1e9, rk) == doctest::Approx(1.5 * 2.0).epsilon(1e-8));
    double h = 1e-6;
    double fd = (tau(0.4 + h, rk) - tau(0.4 - h, rk)) / (2.0 * h);
    CHECK(dtau_dn(0.4, rk) == doctest::Approx(fd).epsilon(1e-9));
    // monotone increasing
    CHECK(tau(0.2, rk) < tau(0.5, rk));
    CHECK_THROWS_AS((ReceptorKinetics{-1.0, 1.0, 1.0}.validate()), std::invalid_argument);
}

TEST_CASE("negative arguments are rejected") {
    CHECK_THROWS_AS(a_sens(-0.1, 0.0), std::domain_error);
    CHECK_THROWS_AS(growth(0.1, -0.2, 0.0), std::domain_error);
    CHECK_THROWS_AS(D_u_nl(-0.1, 0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(tau(-1.0, ReceptorKinetics{}), std::domain_error);
}

TEST_CASE("necrotaxis coefficient factors into the hop-rate ingredients") {
    // chi2(u,n) = chin * u * kappa(u,n) * tau'(n) with unit kinetics
    const ReceptorKinetics unit{1.0, 1.0, 1.0};
    for (double u : {0.0, 0.4, 1.3, 5.0}) {
        for (double n : {0.0, 0.6, 2.2, 5.0}) {
            double lhs = chi2_nl(u, n, 0.7);
            double rhs = 0.7 * u * kappa(u, n) * dtau_dn(n, unit);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
        }
    }
    // the tissue-taxis coefficient is u^2 times the diffusion coefficient
    for (double u : {0.2, 0.9, 3.0}) {
        for (double v : {0.0, 0.5, 2.0}) {
            CHECK(chi1_nl(u, v, 0.3) ==
                  doctest::Approx(u * u * D_u_nl(u, v, 0.3)).epsilon(1e-13));
        }
    }
}
