#include "levx/special.hpp"

#include <cmath>
#include <numbers>

#include "levx/errors.hpp"

namespace levx {

namespace {

using Cplx = std::complex<double>;

constexpr double kEps = 1e-16;
constexpr int kMaxIter = 100000;

// gam1 = [1/Gamma(1-mu) - 1/Gamma(1+mu)]/(2 mu), gam2 = [... + ...]/2,
// with the mu -> 0 limits gam1 -> -euler_gamma, gam2 -> 1.
void gamma_pair(double mu, double& gam1, double& gam2, double& gampl, double& gammi) {
    if (std::abs(mu) < 1e-5) {
        constexpr double euler = 0.57721566490153286;
        // next-order terms keep ~1e-12 accuracy near mu = 0
        constexpr double c3 = -0.04200263503409524;  // gam1 = -euler - c3*mu^2 sign per expansion
        constexpr double c2 = -0.65587807152025388;  // gam2 = 1 + c2*mu^2
        gam1 = -euler + c3 * mu * mu;
        gam2 = 1.0 + c2 * mu * mu;
    } else {
        const double gp = 1.0 / std::tgamma(1.0 + mu);
        const double gm = 1.0 / std::tgamma(1.0 - mu);
        gam1 = (gm - gp) / (2.0 * mu);
        gam2 = (gm + gp) / 2.0;
    }
    gampl = gam2 - mu * gam1;
    gammi = gam2 + mu * gam1;
}

// Temme's series for K_nu and K_{nu+1}, |nu| <= 1/2, |z| <= 2.
void bessel_k_temme(double nu, Cplx z, Cplx& k0, Cplx& k1) {
    const double pimu = std::numbers::pi * nu;
    const double fact = (std::abs(pimu) < kEps) ? 1.0 : pimu / std::sin(pimu);
    const Cplx half_z = 0.5 * z;
    Cplx d = -std::log(half_z);
    Cplx e = nu * d;
    const Cplx fact2 = (std::abs(e) < kEps) ? Cplx(1.0) : std::sinh(e) / e;
    double gam1, gam2, gampl, gammi;
    gamma_pair(nu, gam1, gam2, gampl, gammi);
    Cplx ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
    Cplx sum = ff;
    e = std::exp(e);
    Cplx p = 0.5 * e / gampl;
    Cplx q = 0.5 / (e * gammi);
    Cplx c(1.0);
    const Cplx z2 = half_z * half_z;
    Cplx sum1 = p;
    int i = 1;
    for (; i <= kMaxIter; ++i) {
        ff = (static_cast<double>(i) * ff + p + q) / (static_cast<double>(i) * i - nu * nu);
        c *= z2 / static_cast<double>(i);
        p /= (static_cast<double>(i) - nu);
        q /= (static_cast<double>(i) + nu);
        const Cplx del = c * ff;
        sum += del;
        const Cplx del1 = c * (p - static_cast<double>(i) * ff);
        sum1 += del1;
        if (std::abs(del) < std::abs(sum) * kEps) break;
    }
    if (i > kMaxIter) throw NumericalError("bessel_k: Temme series failed to converge");
    k0 = sum;
    k1 = sum1 * (2.0 / z);
}

// Steed's continued fraction CF2 for K_nu and K_{nu+1}, |nu| <= 1/2, |z| > 2.
void bessel_k_cf2(double nu, Cplx z, Cplx& k0, Cplx& k1) {
    Cplx b = 2.0 * (1.0 + z);
    Cplx d = 1.0 / b;
    Cplx h = d, delh = d;
    Cplx q1(0.0), q2(1.0);
    const double a1 = 0.25 - nu * nu;
    Cplx q(a1), c(a1);
    double a = -a1;
    Cplx s = 1.0 + q * delh;
    int i = 2;
    for (; i <= kMaxIter; ++i) {
        a -= 2.0 * (i - 1);
        c = -a * c / static_cast<double>(i);
        const Cplx qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const Cplx dels = q * delh;
        s += dels;
        if (std::abs(dels) < std::abs(s) * kEps) break;
    }
    if (i > kMaxIter) throw NumericalError("bessel_k: continued fraction failed to converge");
    h = a1 * h;
    k0 = std::sqrt(std::numbers::pi / (2.0 * z)) * std::exp(-z) / s;
    k1 = k0 * (nu + z + 0.5 - h) / z;
}

}  // namespace

std::complex<double> bessel_k(double order, std::complex<double> z) {
    if (z == Cplx(0.0)) throw DomainError("bessel_k: argument must be nonzero");
    if (z.imag() == 0.0 && z.real() < 0.0) {
        throw DomainError("bessel_k: argument on the branch cut (-inf, 0]");
    }
    const double lam = std::abs(order);  // K_{-l} = K_l
    const auto n = static_cast<int>(std::lround(lam));
    const double nu = lam - n;  // in [-1/2, 1/2]

    Cplx kmu, kmu1;
    if (std::abs(z) <= 2.0) {
        bessel_k_temme(nu, z, kmu, kmu1);
    } else {
        bessel_k_cf2(nu, z, kmu, kmu1);
    }
    for (int i = 1; i <= n; ++i) {
        const Cplx knext = kmu + (2.0 * (nu + i)) / z * kmu1;
        kmu = kmu1;
        kmu1 = knext;
    }
    return kmu;
}

std::complex<double> z_coth_z(std::complex<double> z) {
    if (std::abs(z) < 1e-4) {
        const Cplx z2 = z * z;
        return 1.0 + z2 / 3.0 - z2 * z2 / 45.0;
    }
    if (z.real() < 0.0) z = -z;  // even function
    if (z.real() > 19.0) {
        // coth(z) = 1 + 2 e^{-2z}/(1 - e^{-2z}), e^{-2z} negligible beyond this
        const Cplx t = std::exp(-2.0 * z);
        return z * (1.0 + 2.0 * t / (1.0 - t));
    }
    return z * std::cosh(z) / std::sinh(z);
}

}  // namespace levx
