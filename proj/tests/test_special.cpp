#include <doctest.h>

#include <cmath>
#include <numbers>

#include "levx/errors.hpp"
#include "levx/special.hpp"

using namespace levx;
using Cplx = std::complex<double>;

namespace {

// independent oracle: K_l(z) = int_0^inf e^{-z cosh t} cosh(l t) dt, Re z > 0
Cplx bessel_k_quadrature(double order, Cplx z) {
    const double reach = 750.0 / std::max(z.real(), 1e-2);
    const double tmax = std::acosh(std::max(2.0, reach));
    const int n = 40000;  // even
    const double h = tmax / n;
    Cplx acc(0.0);
    for (int k = 0; k <= n; ++k) {
        const double t = k * h;
        double w = (k % 2 == 1) ? 4.0 : 2.0;
        if (k == 0 || k == n) w = 1.0;
        acc += w * std::exp(-z * std::cosh(t)) * std::cosh(order * t);
    }
    return acc * h / 3.0;
}

}  // namespace

TEST_CASE("bessel K half-integer closed form") {
    // K_{1/2}(z) = sqrt(pi/(2z)) e^{-z}
    const Cplx v = bessel_k(0.5, Cplx(1.0, 0.0));
    CHECK(v.real() == doctest::Approx(0.4610685044).epsilon(1e-9));
    CHECK(std::abs(v.imag()) < 1e-15);

    const Cplx z(2.0, 1.0);
    const Cplx expected = std::sqrt(std::numbers::pi / (2.0 * z)) * std::exp(-z);
    const Cplx got = bessel_k(0.5, z);
    CHECK(std::abs(got - expected) < 1e-12 * std::abs(expected));
}

TEST_CASE("bessel K reflection symmetry") {
    const Cplx z(2.0, 1.0);
    const Cplx a = bessel_k(0.7, z);
    const Cplx b = bessel_k(-0.7, z);
    CHECK(std::abs(a - b) < 1e-10 * std::abs(a));
}

TEST_CASE("bessel K recurrence residual") {
    // K_{l+1}(z) = K_{l-1}(z) + (2l/z) K_l(z) at l = 1, z = 3
    const Cplx z(3.0, 0.0);
    const Cplx k0 = bessel_k(0.0, z);
    const Cplx k1 = bessel_k(1.0, z);
    const Cplx k2 = bessel_k(2.0, z);
    const Cplx resid = k2 - k0 - 2.0 / z * k1;
    CHECK(std::abs(resid) < 1e-9 * std::abs(k2));
}

TEST_CASE("bessel K against frozen references") {
    struct Ref {
        double order;
        Cplx z;
        Cplx value;
    };
    const Ref refs[] = {
        {0.0, {1.0, 0.0}, {0.42102443824070834, 0.0}},
        {1.0, {1.0, 0.0}, {0.60190723019723457, 0.0}},
        {0.0, {2.0, 0.0}, {0.11389387274953344, 0.0}},
        {1.0, {2.0, 0.0}, {0.13986588181652243, 0.0}},
        {2.0, {3.0, 0.0}, {0.061510458471742038, 0.0}},
        {0.7, {2.0, 1.0}, {0.037366177475947303, -0.11222697906338507}},
        {1.0, {0.5, 0.3}, {1.0955258713956809, -0.94472266890989855}},
        {-1.0, {9.589, -1.313}, {5.2630886439034546e-6, 2.812759673369933e-5}},
        {2.5, {0.1, 0.0}, {1187.0212236418929, 0.0}},
        {0.25, {8.0, 0.0}, {0.00014701212355227993, 0.0}},
        {1.0, {1.8031, 7.87411}, {-0.049450227386061042, -0.054509520210419874}},
    };
    for (const auto& r : refs) {
        const Cplx got = bessel_k(r.order, r.z);
        CHECK(std::abs(got - r.value) < 1e-9 * std::abs(r.value));
    }
}

TEST_CASE("bessel K against the integral representation") {
    for (const auto& [order, z] : {std::pair<double, Cplx>{0.3, {1.5, 0.0}},
                                   {1.2, {3.0, 1.0}},
                                   {0.0, {2.5, -0.5}}}) {
        const Cplx got = bessel_k(order, z);
        const Cplx oracle = bessel_k_quadrature(order, z);
        CHECK(std::abs(got - oracle) < 1e-8 * std::abs(oracle));
    }
}

TEST_CASE("bessel K rejects the branch cut") {
    CHECK_THROWS_AS(bessel_k(0.5, Cplx(-1.0, 0.0)), DomainError);
    CHECK_THROWS_AS(bessel_k(0.5, Cplx(0.0, 0.0)), DomainError);
}

TEST_CASE("z coth z series and parity") {
    CHECK(z_coth_z(Cplx(0.0, 0.0)).real() == doctest::Approx(1.0));
    const Cplx small(1e-6, 1e-6);
    CHECK(std::abs(z_coth_z(small) - 1.0) < 1e-11);
    const Cplx z(0.7, 0.3);
    CHECK(std::abs(z_coth_z(z) - z_coth_z(-z)) < 1e-14);
    // large-argument regime: z coth z -> z for Re z >> 0
    const Cplx big(500.0, 3.0);
    CHECK(std::abs(z_coth_z(big) - big) < 1e-10);
}
