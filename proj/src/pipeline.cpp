#include "levx/pipeline.hpp"

namespace levx {

PipelineResult run_pipeline(const LevyModel& model, const StoppingTime& stop,
                            const PipelineOptions& options) {
    validate(model);
    stop.validate();
    if (options.pole_count < 1) throw DomainError("run_pipeline: pole_count must be >= 1");

    PipelineResult result;
    result.poles = find_poles(model, stop, options.region, options.pole_count);

    const auto basis = basis_from_poles(result.poles, options.cls);

    GridFunction grid = GridFunction::uniform(-options.grid_halfwidth, options.grid_halfwidth,
                                              options.grid_points);
    const GridFunction h = sample_stopped_cf(model, stop, grid);
    const NormOrder order(options.norm_order);

    if (options.coefficient_override) {
        const auto& c = *options.coefficient_override;
        if (c.size() != basis.size()) {
            throw DomainError("run_pipeline: coefficient override size does not match basis");
        }
        RationalApproximant r;
        r.a0 = 0.0;
        r.cls = options.cls;
        for (std::size_t k = 0; k < basis.size(); ++k) r.terms.emplace_back(basis[k], c[k]);
        r.validate();
        result.approximant = std::move(r);
        result.a0 = 0.0;
    } else {
        FitResult fit = fit_coefficients(h, basis, order);
        result.approximant = std::move(fit.approximant);
        result.a0 = fit.a0;
        result.warnings = std::move(fit.warnings);
    }

    result.fit_err = fit_error(h, result.approximant, order);
    result.bound_value = error_bound_factorization(result.fit_err, order);

    auto [sup_raw, inf_raw] = carlemann_split(result.approximant);
    NormalizedFactors normalized = normalize_factors(sup_raw, inf_raw);
    result.factor_plus = normalized.plus;
    result.factor_minus = normalized.minus;
    result.rescale_plus = normalized.rescale_plus;
    result.rescale_minus = normalized.rescale_minus;

    result.supremum = density_from_factor(result.factor_plus);
    result.infimum = density_from_factor(result.factor_minus);
    return result;
}

}  // namespace levx
