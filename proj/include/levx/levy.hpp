#pragma once

#include <variant>
#include <vector>

#include "levx/grid.hpp"

namespace levx {

// ---------------------------------------------------------------------------
// Process families
// ---------------------------------------------------------------------------

struct BrownianDrift {
    double mu = 0.0;
    double sigma = 1.0;
};

struct MixedGammaTerm {
    double weight;  // > 0
    int shape;      // j >= 1
    double rate;    // > 0
};

// Two-sided mixed gamma jump law:
//   p(x) = sum_pos c rate^j x^{j-1} e^{-rate x}/(j-1)!  on x >= 0
//        + sum_neg c rate^j (-x)^{j-1} e^{rate x}/(j-1)!  on x <= 0.
struct MixedGammaJumps {
    std::vector<MixedGammaTerm> positive;
    std::vector<MixedGammaTerm> negative;
    double total_weight() const;
    void validate() const;
};

struct CompoundPoissonMixedGamma {
    double mu = 0.0;
    double sigma = 0.0;
    double intensity = 1.0;  // jump arrival rate, > 0
    MixedGammaJumps jumps;
};

// Reciprocal-form stable exponent psi = 1/(i mu w - scale^a |w|^a), with |w|^a
// continued as (w^2)^{a/2}.  The form has a pole (not a zero) at w = 0, so it
// is not a standard exponent; the family is experimental and excluded from
// default acceptance runs.
struct SymmetricStable {
    double mu = 0.0;
    double alpha = 1.5;  // index in (0, 2]
    double scale = 1.0;  // > 0
};

// Jump measure exp(tilt*x) cosech^2(x/2) dx, |tilt| < 1.
// psi(w) = -sigma^2 w^2/2 - i rho w - 4 z coth(z) + 4 gamma, z = pi(w - i tilt),
// gamma = pi*tilt*cot(pi*tilt), rho = 4 pi^2 tilt + 4 gamma(gamma-1)/tilt - mu,
// with the tilt -> 0 limits gamma = 1, rho = -mu.
struct CosechSquaredJumps {
    double mu = 0.0;
    double sigma = 0.0;
    double tilt = 0.0;  // alpha in the jump measure
    double gamma_const() const;
    double rho_const() const;
};

// Generalized hyperbolic process with characteristic function
//   phi(w) = e^{i mu w} ((a^2-b^2)/(a^2-(b+iw)^2))^{l/2}
//            K_l(d sqrt(a^2-(b+iw)^2)) / K_l(d sqrt(a^2-b^2)).
// The exponent convention for this family is psi = -ln(phi), the dual sign
// under which the stopped CF has the rich pole structure the factorization
// pipeline consumes; pole equations are evaluated in exponential form so log
// branches never enter.
struct GeneralizedHyperbolic {
    double lambda = -1.0;
    double alpha = 1.0;  // > 0
    double beta = 0.0;   // in (-alpha, alpha)
    double delta = 1.0;  // > 0
    double mu = 0.0;
};

using LevyModel = std::variant<BrownianDrift, CompoundPoissonMixedGamma, SymmetricStable,
                               CosechSquaredJumps, GeneralizedHyperbolic>;

void validate(const LevyModel& model);
const char* family_name(const LevyModel& model);
// true for families whose exponent is a genuine characteristic exponent
// (SymmetricStable uses the reciprocal form; GeneralizedHyperbolic the dual
// sign), i.e. families the CF-law invariants apply to.
bool is_true_cf_family(const LevyModel& model);

// ---------------------------------------------------------------------------
// Stopping times
// ---------------------------------------------------------------------------

struct StoppingTime {
    enum class Kind { Exponential, Geometric };
    Kind kind = Kind::Exponential;
    double q = 1.0;  // exponential: q > 0, geometric: q in (0,1)

    static StoppingTime exponential(double q);
    static StoppingTime geometric(double q);
    void validate() const;
    double mean() const;  // 1/q resp. q/(1-q)
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

// Characteristic exponent psi(w); psi(0) = 0 exactly.
Complex psi(const LevyModel& model, Complex w);

// GH characteristic function phi(w) on principal branches (used directly by
// the pole equations; cut along a^2-(b+iw)^2 in (-inf, 0]).
Complex gh_char_function(const GeneralizedHyperbolic& m, Complex w);

// Stopped characteristic function h(w): q/(q - psi) or (1-q)/(1 - q e^{-psi}).
Complex stopped_cf(const LevyModel& model, const StoppingTime& stop, Complex w);

// Denominator whose zeros are the poles of h, in a branch-free form per family
// (GH uses 1 - e^q phi resp. 1 - q phi).
Complex stopping_denominator(const LevyModel& model, const StoppingTime& stop, Complex w);

// h sampled on a grid; for GH the exponent's log branch is unwrapped
// continuously outward from w = 0, so the samples are those of the continuous
// exponent.
GridFunction sample_stopped_cf(const LevyModel& model, const StoppingTime& stop,
                               const GridFunction& grid_shape);

// Mixed gamma density value at x (nonnegative).
double mixed_gamma_density(const MixedGammaJumps& jumps, double x);

// CF of the mixed gamma law: sum of (rate/(rate -+ i w))^j terms.
Complex mixed_gamma_cf(const MixedGammaJumps& jumps, Complex w);

}  // namespace levx
