#include "levx/rational.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "levx/nnls.hpp"

namespace levx {

namespace {

constexpr Complex kI(0.0, 1.0);

constexpr double kPolishTarget = 1e-9;

Complex numeric_derivative(const DenominatorFn& f, Complex z) {
    const double h = 1e-7 * (1.0 + std::abs(z));
    return (f(z + h) - f(z - h)) / (2.0 * h);
}

// Newton polish; returns nullopt when |f| cannot be brought below target.
std::optional<Complex> newton_polish(const DenominatorFn& f, Complex z0, double target) {
    Complex z = z0;
    for (int it = 0; it < 60; ++it) {
        Complex fv;
        try {
            fv = f(z);
        } catch (const Error&) {
            return std::nullopt;
        }
        if (!std::isfinite(fv.real()) || !std::isfinite(fv.imag())) return std::nullopt;
        if (std::abs(fv) < 1e-13) return z;
        const Complex dv = numeric_derivative(f, z);
        if (std::abs(dv) < 1e-300) return std::nullopt;
        const Complex step = fv / dv;
        z -= step;
        if (std::abs(step) < 1e-15 * (1.0 + std::abs(z))) break;
    }
    try {
        if (std::abs(f(z)) < target) return z;
    } catch (const Error&) {
    }
    return std::nullopt;
}

// Winding number of f along the rectangle boundary, adaptively refined so
// consecutive phase steps stay below pi/2.  Returns nullopt if the boundary
// passes too close to a zero.
std::optional<int> winding_number(const DenominatorFn& f, Complex lo, Complex hi) {
    std::vector<Complex> corners = {lo, Complex(hi.real(), lo.imag()), hi,
                                    Complex(lo.real(), hi.imag()), lo};
    std::vector<Complex> pts;
    const int base = 24;
    for (int e = 0; e < 4; ++e) {
        for (int k = 0; k < base; ++k) {
            const double t = static_cast<double>(k) / base;
            pts.push_back(corners[e] + t * (corners[e + 1] - corners[e]));
        }
    }
    pts.push_back(lo);

    std::vector<Complex> vals(pts.size());
    for (std::size_t k = 0; k < pts.size(); ++k) {
        try {
            vals[k] = f(pts[k]);
        } catch (const Error&) {
            return std::nullopt;
        }
        if (std::abs(vals[k]) < 1e-14) return std::nullopt;
    }

    double total = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        Complex a = pts[k], b = pts[k + 1];
        Complex fa = vals[k], fb = vals[k + 1];
        // refine the segment until the phase increment is small
        std::vector<std::pair<std::pair<Complex, Complex>, std::pair<Complex, Complex>>> stack;
        stack.push_back({{a, b}, {fa, fb}});
        int guard = 0;
        while (!stack.empty()) {
            if (++guard > 4096) return std::nullopt;
            auto [seg, fv] = stack.back();
            stack.pop_back();
            const double dphi = std::arg(fv.second / fv.first);
            if (std::abs(dphi) < 0.5 * std::numbers::pi) {
                total += dphi;
                continue;
            }
            const Complex mid = 0.5 * (seg.first + seg.second);
            Complex fm;
            try {
                fm = f(mid);
            } catch (const Error&) {
                return std::nullopt;
            }
            if (std::abs(fm) < 1e-14) return std::nullopt;
            stack.push_back({{mid, seg.second}, {fm, fv.second}});
            stack.push_back({{seg.first, mid}, {fv.first, fm}});
        }
    }
    return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

void subdivide_search(const DenominatorFn& f, Complex lo, Complex hi, int depth, int max_depth,
                      std::vector<Complex>& roots) {
    const auto w = winding_number(f, lo, hi);
    if (!w.has_value()) {
        // boundary hit a zero or a singular patch: nudge by splitting anyway
        if (depth >= max_depth) return;
        const Complex mid = 0.5 * (lo + hi);
        subdivide_search(f, lo, mid, depth + 1, max_depth, roots);
        subdivide_search(f, Complex(mid.real(), lo.imag()), Complex(hi.real(), mid.imag()),
                         depth + 1, max_depth, roots);
        subdivide_search(f, Complex(lo.real(), mid.imag()), Complex(mid.real(), hi.imag()),
                         depth + 1, max_depth, roots);
        subdivide_search(f, mid, hi, depth + 1, max_depth, roots);
        return;
    }
    if (*w <= 0) return;  // no zeros (or dominated by a pole of the denominator fn)
    const double diag = std::abs(hi - lo);
    if ((*w == 1 && diag < 0.2) || depth >= max_depth) {
        const auto polished = newton_polish(f, 0.5 * (lo + hi), kPolishTarget);
        if (polished) roots.push_back(*polished);
        return;
    }
    const Complex mid = 0.5 * (lo + hi);
    subdivide_search(f, lo, mid, depth + 1, max_depth, roots);
    subdivide_search(f, Complex(mid.real(), lo.imag()), Complex(hi.real(), mid.imag()),
                     depth + 1, max_depth, roots);
    subdivide_search(f, Complex(lo.real(), mid.imag()), Complex(mid.real(), hi.imag()),
                     depth + 1, max_depth, roots);
    subdivide_search(f, mid, hi, depth + 1, max_depth, roots);
}

bool near_duplicate(const std::vector<Complex>& roots, Complex z) {
    for (const auto& r : roots) {
        if (std::abs(r - z) < 1e-6 * (1.0 + std::abs(z))) return true;
    }
    return false;
}

}  // namespace

// ---------------------------------------------------------------------------
// BasisTerm / RationalApproximant
// ---------------------------------------------------------------------------

void BasisTerm::validate() const {
    if (rate <= 0.0) throw DomainError("BasisTerm: rate must be positive");
    if (power < 1) throw DomainError("BasisTerm: power must be >= 1");
    if (form == BasisForm::R3 || form == BasisForm::R4) {
        if (osc <= 0.0) throw DomainError("BasisTerm: oscillation must be positive for r3/r4");
    }
}

bool BasisTerm::dstar_admissible() const {
    return (form == BasisForm::R1 || form == BasisForm::R2) && power == 1;
}

Complex BasisTerm::eval(Complex w) const {
    Complex base;
    switch (form) {
        case BasisForm::R1:
            base = 1.0 / (kI * w + rate);
            break;
        case BasisForm::R2:
            base = 1.0 / (-kI * w + rate);
            break;
        case BasisForm::R3: {
            const Complex u = kI * w + rate;
            base = 1.0 / (u * (u + osc * kI) * (u - osc * kI));
            break;
        }
        case BasisForm::R4: {
            const Complex u = -kI * w + rate;
            base = 1.0 / (u * (u + osc * kI) * (u - osc * kI));
            break;
        }
    }
    Complex out = base;
    for (int j = 1; j < power; ++j) out *= base;
    return out;
}

std::vector<Complex> BasisTerm::form_poles() const {
    switch (form) {
        case BasisForm::R1:
            return {kI * rate};
        case BasisForm::R2:
            return {-kI * rate};
        case BasisForm::R3:
            return {kI * rate, Complex(-osc, rate), Complex(osc, rate)};
        case BasisForm::R4:
            return {-kI * rate, Complex(osc, -rate), Complex(-osc, -rate)};
    }
    return {};
}

void RationalApproximant::validate() const {
    if (a0 < 0.0) throw DomainError("RationalApproximant: A0 must be nonnegative");
    for (const auto& [term, c] : terms) {
        term.validate();
        if (c < 0.0) throw DomainError("RationalApproximant: coefficients must be nonnegative");
        if (cls == RationalClass::DStar && !term.dstar_admissible()) {
            throw DomainError("RationalApproximant: term not admissible in class D*");
        }
    }
}

Complex RationalApproximant::eval(Complex w) const {
    Complex acc(a0);
    for (const auto& [term, c] : terms) acc += c * term.eval(w);
    return acc;
}

// ---------------------------------------------------------------------------
// PoleSet
// ---------------------------------------------------------------------------

void PoleSet::validate() const {
    auto check_side = [](const std::vector<Pole>& side, bool upper_side) {
        for (const auto& p : side) {
            if (p.multiplicity < 1) throw DomainError("PoleSet: multiplicity must be >= 1");
            const double im = p.location.imag();
            if (im == 0.0) throw DomainError("PoleSet: poles on the real axis are not allowed");
            if (upper_side != (im > 0.0)) {
                throw DomainError("PoleSet: pole stored on the wrong side");
            }
        }
    };
    check_side(upper, true);
    check_side(lower, false);
    auto check_mirrors = [](const std::vector<Pole>& side) {
        for (const auto& p : side) {
            if (std::abs(p.location.real()) < 1e-12) continue;
            const Complex mirror(-p.location.real(), p.location.imag());
            bool found = false;
            for (const auto& q : side) {
                if (std::abs(q.location - mirror) < 1e-6 * (1.0 + std::abs(mirror))) {
                    found = true;
                    break;
                }
            }
            if (!found) {
                throw DomainError("PoleSet: off-axis pole lacks its mirrored partner");
            }
        }
    };
    check_mirrors(upper);
    check_mirrors(lower);
}

std::size_t PoleSet::group_count() const {
    std::size_t n = 0;
    for (const auto* side : {&upper, &lower}) {
        for (const auto& p : *side) {
            if (p.location.real() >= -1e-12) ++n;  // pair counted at its +Re member
        }
    }
    return n;
}

std::vector<Pole> PoleSet::all() const {
    std::vector<Pole> out = upper;
    out.insert(out.end(), lower.begin(), lower.end());
    return out;
}

// ---------------------------------------------------------------------------
// find_poles
// ---------------------------------------------------------------------------

PoleSet find_poles(const LevyModel& model, const StoppingTime& stop, const SearchRegion& region,
                   std::size_t count) {
    return find_poles([&](Complex w) { return stopping_denominator(model, stop, w); }, region,
                      count);
}

PoleSet find_poles(const DenominatorFn& denominator, const SearchRegion& region,
                   std::size_t count) {
    if (count < 1) throw DomainError("find_poles: count must be >= 1");
    if (!(region.im_max > region.im_min) || !(region.re_max > region.re_margin)) {
        throw DomainError("find_poles: empty search region");
    }

    std::vector<Complex> roots;

    // --- imaginary-axis scan -------------------------------------------------
    // D(it) is real wherever the moment generating function is finite; scan for
    // sign changes of the real part between finite, genuinely real samples.
    {
        const int n = region.axis_samples;
        std::vector<double> ts(n), re(n);
        std::vector<bool> ok(n);
        for (int k = 0; k < n; ++k) {
            const double t =
                region.im_min + (region.im_max - region.im_min) * (k + 0.5) / n;
            ts[k] = t;
            try {
                const Complex v = denominator(Complex(0.0, t));
                re[k] = v.real();
                ok[k] = std::isfinite(v.real()) && std::isfinite(v.imag()) &&
                        std::abs(v.imag()) <= 1e-8 * (1.0 + std::abs(v.real()));
            } catch (const Error&) {
                ok[k] = false;
            }
        }
        for (int k = 0; k + 1 < n; ++k) {
            if (!ok[k] || !ok[k + 1]) continue;
            if (re[k] == 0.0 || re[k] * re[k + 1] >= 0.0) continue;
            // bisect on the real part, then polish in the plane
            double a = ts[k], b = ts[k + 1], fa = re[k];
            for (int it = 0; it < 80; ++it) {
                const double m = 0.5 * (a + b);
                double fm;
                try {
                    fm = denominator(Complex(0.0, m)).real();
                } catch (const Error&) {
                    break;
                }
                if (!std::isfinite(fm)) break;
                if (fa * fm <= 0.0) {
                    b = m;
                } else {
                    a = m;
                    fa = fm;
                }
            }
            const auto polished =
                newton_polish(denominator, Complex(0.0, 0.5 * (a + b)), kPolishTarget);
            if (polished && std::abs(polished->real()) < 1e-8 &&
                !near_duplicate(roots, Complex(0.0, polished->imag()))) {
                roots.emplace_back(0.0, polished->imag());
            }
        }
    }

    // --- off-axis argument-principle search ----------------------------------
    {
        std::vector<Complex> off;
        subdivide_search(denominator, Complex(region.re_margin, region.im_min),
                         Complex(region.re_max, region.im_max), 0, region.max_depth, off);
        for (const auto& z : off) {
            if (std::abs(z.imag()) < 1e-8) continue;  // refuse real-axis zeros
            if (!near_duplicate(roots, z)) roots.push_back(z);
            // Lemma-style mirror: polish from the reflected seed
            const Complex seed(-z.real(), z.imag());
            const auto mirrored = newton_polish(denominator, seed, kPolishTarget);
            if (mirrored && !near_duplicate(roots, *mirrored)) roots.push_back(*mirrored);
        }
    }

    if (roots.empty()) {
        throw NumericalError("find_poles: no poles found in the search region");
    }

    // group by modulus: an off-axis pair counts as one group
    std::vector<std::vector<Complex>> groups;
    std::vector<bool> used(roots.size(), false);
    std::sort(roots.begin(), roots.end(),
              [](Complex a, Complex b) { return std::abs(a) < std::abs(b); });
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        std::vector<Complex> grp{roots[i]};
        if (std::abs(roots[i].real()) > 1e-8) {
            const Complex mirror(-roots[i].real(), roots[i].imag());
            for (std::size_t j = i + 1; j < roots.size(); ++j) {
                if (!used[j] && std::abs(roots[j] - mirror) < 1e-5 * (1.0 + std::abs(mirror))) {
                    used[j] = true;
                    grp.push_back(roots[j]);
                    break;
                }
            }
            if (grp.size() == 1) grp.push_back(mirror);  // enforce the symmetry
        }
        groups.push_back(std::move(grp));
    }
    if (groups.size() > count) groups.resize(count);

    PoleSet set;
    for (const auto& grp : groups) {
        for (const auto& z : grp) {
            Pole p{z, 1};
            if (z.imag() > 0.0) {
                set.upper.push_back(p);
            } else {
                set.lower.push_back(p);
            }
        }
    }
    set.validate();
    return set;
}

// ---------------------------------------------------------------------------
// basis_from_poles
// ---------------------------------------------------------------------------

std::vector<BasisTerm> basis_from_poles(const PoleSet& poles, RationalClass cls) {
    if (poles.empty()) throw DomainError("basis_from_poles: empty pole set");
    poles.validate();

    std::vector<BasisTerm> basis;
    auto add_axis = [&](const Pole& p, BasisForm form) {
        const double rate = std::abs(p.location.imag());
        const int top_power = (cls == RationalClass::D) ? p.multiplicity : 1;
        for (int j = 1; j <= top_power; ++j) {
            basis.push_back(BasisTerm{form, rate, 0.0, j});
        }
    };

    for (const auto* side : {&poles.upper, &poles.lower}) {
        const bool upper_side = (side == &poles.upper);
        for (const auto& p : *side) {
            const double re = p.location.real();
            if (std::abs(re) < 1e-12) {
                // axis pole reproduces itself: upper ib -> r1, lower -ib -> r2
                add_axis(p, upper_side ? BasisForm::R1 : BasisForm::R2);
            } else if (re > 0.0) {
                // one term per conjugate pair, built where the +Re member sits
                const double b = std::abs(p.location.imag());
                if (cls == RationalClass::D) {
                    for (int j = 1; j <= p.multiplicity; ++j) {
                        basis.push_back(BasisTerm{upper_side ? BasisForm::R3 : BasisForm::R4, b,
                                                  std::abs(re), j});
                    }
                } else {
                    if (b < 1e-12) {
                        throw DomainError("basis_from_poles: class D* requires an imaginary-axis "
                                          "proxy, pole pair is too close to the real axis");
                    }
                    basis.push_back(
                        BasisTerm{upper_side ? BasisForm::R1 : BasisForm::R2, b, 0.0, 1});
                }
            }
        }
    }
    if (basis.empty()) throw DomainError("basis_from_poles: no usable poles");
    for (const auto& t : basis) t.validate();
    return basis;
}

// ---------------------------------------------------------------------------
// fitting
// ---------------------------------------------------------------------------

double estimate_a0(const GridFunction& h_samples) {
    const std::size_t n = h_samples.size();
    auto band_median = [&](double lo_frac, double hi_frac, bool real_part) {
        std::vector<double> vals;
        const auto lo = static_cast<std::size_t>(lo_frac * n);
        const auto hi = static_cast<std::size_t>(hi_frac * n);
        for (std::size_t k = lo; k < hi; ++k) {
            for (const std::size_t idx : {k, n - 1 - k}) {
                vals.push_back(real_part ? h_samples.value(idx).real()
                                         : std::abs(h_samples.value(idx)));
            }
        }
        std::sort(vals.begin(), vals.end());
        return vals.empty() ? 0.0 : vals[vals.size() / 2];
    };
    const double outer = band_median(0.0, 0.05, false);
    const double inner = band_median(0.10, 0.15, false);
    // still decaying toward the grid ends: the tail limit is 0
    if (outer < 0.95 * inner) return 0.0;

    // plateau: Re h is even in w, so it approaches A0 + r2/w^2 + r4/w^4;
    // three-band Richardson removes both correction terms
    const double half = 0.5 * h_samples.spacing() * static_cast<double>(n);
    const double centers[3] = {0.95 * half, 0.75 * half, 0.55 * half};
    const double levels[3] = {band_median(0.00, 0.05, true), band_median(0.10, 0.15, true),
                              band_median(0.20, 0.25, true)};
    double mat[3][4];
    for (int i = 0; i < 3; ++i) {
        const double u = 1.0 / (centers[i] * centers[i]);
        mat[i][0] = 1.0;
        mat[i][1] = u;
        mat[i][2] = u * u;
        mat[i][3] = levels[i];
    }
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int row = col + 1; row < 3; ++row) {
            if (std::abs(mat[row][col]) > std::abs(mat[piv][col])) piv = row;
        }
        std::swap(mat[piv], mat[col]);
        for (int row = col + 1; row < 3; ++row) {
            const double f = mat[row][col] / mat[col][col];
            for (int k = col; k < 4; ++k) mat[row][k] -= f * mat[col][k];
        }
    }
    double sol[3];
    for (int row = 3; row-- > 0;) {
        double acc = mat[row][3];
        for (int k = row + 1; k < 3; ++k) acc -= mat[row][k] * sol[k];
        sol[row] = acc / mat[row][row];
    }
    const double a0 = std::clamp(sol[0], 0.0, std::max(outer, inner));
    return (a0 < 1e-9) ? 0.0 : a0;
}

FitResult fit_coefficients(const GridFunction& h_samples, const std::vector<BasisTerm>& basis,
                           const NormOrder& order, const FitOptions& opts) {
    if (basis.empty()) throw DomainError("fit_coefficients: empty basis");
    for (const auto& t : basis) t.validate();

    FitResult result;
    result.a0 = estimate_a0(h_samples);

    const std::size_t n = h_samples.size();
    const std::size_t m = basis.size();
    const double sqrt_dx = std::sqrt(h_samples.spacing());

    // stacked real system: rows = [Re; Im] of (h - A0) against the basis
    std::vector<double> a(2 * n * m), b(2 * n);
    std::vector<Complex> basis_vals(n * m);
    for (std::size_t k = 0; k < n; ++k) {
        const Complex target = h_samples.value(k) - result.a0;
        b[k] = target.real() * sqrt_dx;
        b[n + k] = target.imag() * sqrt_dx;
        const Complex w(h_samples.node(k), 0.0);
        for (std::size_t t = 0; t < m; ++t) {
            const Complex v = basis[t].eval(w);
            basis_vals[k * m + t] = v;
            a[k * m + t] = v.real() * sqrt_dx;
            a[(n + k) * m + t] = v.imag() * sqrt_dx;
        }
    }

    NnlsResult ls = nnls(a, 2 * n, m, b);
    if (ls.rank_deficient) {
        result.warnings.push_back("rank-deficient basis: minimum-norm solution used");
    }
    std::vector<double> coeffs = ls.x;

    if (order.p() < 2.0) {
        // projected gradient on sum w |res|^p from the p=2 solution
        const double p = order.p();
        const double dx = h_samples.spacing();
        auto objective = [&](const std::vector<double>& c) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                Complex r = h_samples.value(k) - result.a0;
                for (std::size_t t = 0; t < m; ++t) r -= c[t] * basis_vals[k * m + t];
                acc += std::pow(std::abs(r), p);
            }
            return acc * dx;
        };
        double fx = objective(coeffs);
        double step = 1.0;
        for (int iter = 0; iter < opts.max_iterations; ++iter) {
            std::vector<double> grad(m, 0.0);
            for (std::size_t k = 0; k < n; ++k) {
                Complex r = h_samples.value(k) - result.a0;
                for (std::size_t t = 0; t < m; ++t) r -= coeffs[t] * basis_vals[k * m + t];
                const double mag = std::abs(r);
                if (mag < 1e-300) continue;
                const double w = p * std::pow(mag, p - 2.0) * dx;
                for (std::size_t t = 0; t < m; ++t) {
                    grad[t] -= w * (r.real() * basis_vals[k * m + t].real() +
                                    r.imag() * basis_vals[k * m + t].imag());
                }
            }
            bool improved = false;
            for (int ls_it = 0; ls_it < 40; ++ls_it) {
                std::vector<double> trial(m);
                for (std::size_t t = 0; t < m; ++t) {
                    trial[t] = std::max(0.0, coeffs[t] - step * grad[t]);
                }
                const double ft = objective(trial);
                if (ft < fx - 1e-16) {
                    const double delta = fx - ft;
                    coeffs = std::move(trial);
                    fx = ft;
                    improved = true;
                    if (delta < opts.tolerance * (1.0 + fx)) iter = opts.max_iterations;
                    break;
                }
                step *= 0.5;
            }
            if (!improved) break;
            step *= 2.0;
        }
    }

    RationalApproximant r;
    r.a0 = result.a0;
    r.cls = RationalClass::D;
    bool dstar_ok = true;
    for (std::size_t t = 0; t < m; ++t) {
        if (coeffs[t] > opts.coefficient_prune) {
            r.terms.emplace_back(basis[t], coeffs[t]);
        }
        if (!basis[t].dstar_admissible()) dstar_ok = false;
    }
    if (dstar_ok) r.cls = RationalClass::DStar;
    r.validate();
    result.approximant = std::move(r);
    return result;
}

double fit_error(const GridFunction& h_samples, const RationalApproximant& r,
                 const NormOrder& order) {
    std::vector<Complex> diff(h_samples.size());
    for (std::size_t k = 0; k < h_samples.size(); ++k) {
        diff[k] = h_samples.value(k) - r.eval(Complex(h_samples.node(k), 0.0));
    }
    GridFunction d(h_samples.x0(), h_samples.spacing(), std::move(diff));
    return lp_norm(d, order);
}

}  // namespace levx
