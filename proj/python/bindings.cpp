#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "levx/mc.hpp"
#include "levx/pipeline.hpp"
#include "levx/special.hpp"
#include "levx/transforms.hpp"

namespace py = pybind11;
using namespace levx;

namespace {

py::dict density_to_dict(const ExtremaDensity& d) {
    py::list terms;
    for (const auto& t : d.terms) {
        py::dict entry;
        entry["coef"] = t.coef;
        entry["rate"] = t.rate;
        entry["degree"] = t.degree;
        entry["freq"] = t.freq;
        entry["phase"] = t.phase;
        terms.append(entry);
    }
    py::dict out;
    out["side"] = (d.side == ExtremumSide::Supremum) ? "supremum" : "infimum";
    out["atom"] = d.atom;
    out["terms"] = terms;
    return out;
}

}  // namespace

PYBIND11_MODULE(_levy_extrema, m) {
    m.doc() = "Wiener-Hopf extrema distributions for one-dimensional Levy processes";

    // translators run newest-first: register the base before the subclass
    py::register_exception<Error>(m, "LevxError", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

    py::class_<BrownianDrift>(m, "BrownianDrift")
        .def(py::init<double, double>(), py::arg("mu") = 0.0, py::arg("sigma") = 1.0)
        .def_readwrite("mu", &BrownianDrift::mu)
        .def_readwrite("sigma", &BrownianDrift::sigma);

    py::class_<MixedGammaTerm>(m, "MixedGammaTerm")
        .def(py::init<double, int, double>(), py::arg("weight"), py::arg("shape"),
             py::arg("rate"));

    py::class_<MixedGammaJumps>(m, "MixedGammaJumps")
        .def(py::init<>())
        .def_readwrite("positive", &MixedGammaJumps::positive)
        .def_readwrite("negative", &MixedGammaJumps::negative)
        .def("total_weight", &MixedGammaJumps::total_weight);

    py::class_<CompoundPoissonMixedGamma>(m, "CompoundPoissonMixedGamma")
        .def(py::init<double, double, double, MixedGammaJumps>(), py::arg("mu") = 0.0,
             py::arg("sigma") = 0.0, py::arg("intensity") = 1.0,
             py::arg("jumps") = MixedGammaJumps{})
        .def_readwrite("mu", &CompoundPoissonMixedGamma::mu)
        .def_readwrite("sigma", &CompoundPoissonMixedGamma::sigma)
        .def_readwrite("intensity", &CompoundPoissonMixedGamma::intensity)
        .def_readwrite("jumps", &CompoundPoissonMixedGamma::jumps);

    py::class_<SymmetricStable>(m, "SymmetricStable")
        .def(py::init<double, double, double>(), py::arg("mu") = 0.0, py::arg("alpha") = 1.5,
             py::arg("scale") = 1.0);

    py::class_<CosechSquaredJumps>(m, "CosechSquaredJumps")
        .def(py::init<double, double, double>(), py::arg("mu") = 0.0, py::arg("sigma") = 0.0,
             py::arg("tilt") = 0.0)
        .def_readwrite("mu", &CosechSquaredJumps::mu)
        .def_readwrite("sigma", &CosechSquaredJumps::sigma)
        .def_readwrite("tilt", &CosechSquaredJumps::tilt);

    py::class_<GeneralizedHyperbolic>(m, "GeneralizedHyperbolic")
        .def(py::init<double, double, double, double, double>(), py::arg("lambda_") = -1.0,
             py::arg("alpha") = 1.0, py::arg("beta") = 0.0, py::arg("delta") = 1.0,
             py::arg("mu") = 0.0);

    py::class_<StoppingTime>(m, "StoppingTime")
        .def_static("exponential", &StoppingTime::exponential, py::arg("q"))
        .def_static("geometric", &StoppingTime::geometric, py::arg("q"))
        .def("mean", &StoppingTime::mean);

    py::class_<SearchRegion>(m, "SearchRegion")
        .def(py::init<>())
        .def_readwrite("im_min", &SearchRegion::im_min)
        .def_readwrite("im_max", &SearchRegion::im_max)
        .def_readwrite("re_max", &SearchRegion::re_max)
        .def_readwrite("re_margin", &SearchRegion::re_margin)
        .def_readwrite("axis_samples", &SearchRegion::axis_samples)
        .def_readwrite("max_depth", &SearchRegion::max_depth);

    py::class_<PipelineOptions>(m, "PipelineOptions")
        .def(py::init<>())
        .def_readwrite("pole_count", &PipelineOptions::pole_count)
        .def_readwrite("grid_halfwidth", &PipelineOptions::grid_halfwidth)
        .def_readwrite("grid_points", &PipelineOptions::grid_points)
        .def_readwrite("norm_order", &PipelineOptions::norm_order)
        .def_readwrite("region", &PipelineOptions::region)
        .def_readwrite("coefficient_override", &PipelineOptions::coefficient_override)
        .def_property(
            "rational_class",
            [](const PipelineOptions& o) {
                return o.cls == RationalClass::D ? "D" : "Dstar";
            },
            [](PipelineOptions& o, const std::string& v) {
                if (v == "D") {
                    o.cls = RationalClass::D;
                } else if (v == "Dstar") {
                    o.cls = RationalClass::DStar;
                } else {
                    throw DomainError("rational_class must be 'D' or 'Dstar'");
                }
            });

    py::class_<ExtremaDensity>(m, "ExtremaDensity")
        .def_readonly("atom", &ExtremaDensity::atom)
        .def("__call__", &ExtremaDensity::eval, py::arg("x"))
        .def("eval", &ExtremaDensity::eval, py::arg("x"))
        .def("cdf", &ExtremaDensity::cdf, py::arg("x"))
        .def("total_mass", &ExtremaDensity::total_mass)
        .def("tail_mass", &ExtremaDensity::tail_mass, py::arg("a"))
        .def("min_rate", &ExtremaDensity::min_rate)
        .def("to_dict", &density_to_dict);

    py::class_<HalfPlaneFactor>(m, "HalfPlaneFactor")
        .def("eval", &HalfPlaneFactor::eval, py::arg("omega"))
        .def("zeros", &HalfPlaneFactor::zeros_omega)
        .def("poles", &HalfPlaneFactor::poles_omega)
        .def_readonly("scale", &HalfPlaneFactor::scale);

    py::class_<PipelineResult>(m, "PipelineResult")
        .def_readonly("a0", &PipelineResult::a0)
        .def_readonly("fit_error", &PipelineResult::fit_err)
        .def_readonly("bound_value", &PipelineResult::bound_value)
        .def_readonly("factor_plus", &PipelineResult::factor_plus)
        .def_readonly("factor_minus", &PipelineResult::factor_minus)
        .def_readonly("rescale_plus", &PipelineResult::rescale_plus)
        .def_readonly("rescale_minus", &PipelineResult::rescale_minus)
        .def_readonly("supremum", &PipelineResult::supremum)
        .def_readonly("infimum", &PipelineResult::infimum)
        .def_readonly("warnings", &PipelineResult::warnings)
        .def_property_readonly("poles", [](const PipelineResult& r) {
            py::list out;
            for (const auto& p : r.poles.all()) out.append(p.location);
            return out;
        })
        .def_property_readonly("coefficients", [](const PipelineResult& r) {
            py::list out;
            for (const auto& [term, c] : r.approximant.terms) out.append(c);
            return out;
        });

    py::class_<RuinCurve>(m, "RuinCurve")
        .def_readonly("reserves", &RuinCurve::reserves)
        .def_readonly("probabilities", &RuinCurve::probabilities);

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("paths", &SimConfig::paths)
        .def_readwrite("dt", &SimConfig::dt)
        .def_readwrite("seed", &SimConfig::seed)
        .def_readwrite("bridge_correction", &SimConfig::bridge_correction)
        .def_readwrite("threads", &SimConfig::threads);

    // model-generic entry points (LevyModel is a std::variant; pybind resolves it)
    m.def("psi", [](const LevyModel& model, Complex w) { return psi(model, w); },
          py::arg("model"), py::arg("omega"), "Characteristic exponent psi(omega)");
    m.def("stopped_cf",
          [](const LevyModel& model, const StoppingTime& stop, Complex w) {
              return stopped_cf(model, stop, w);
          },
          py::arg("model"), py::arg("stopping"), py::arg("omega"));
    m.def("bessel_k", &bessel_k, py::arg("order"), py::arg("z"),
          "Modified Bessel function of the third kind, complex argument");
    m.def("mixed_gamma_density", &mixed_gamma_density, py::arg("jumps"), py::arg("x"));
    m.def("run_pipeline",
          [](const LevyModel& model, const StoppingTime& stop, const PipelineOptions& opts) {
              return run_pipeline(model, stop, opts);
          },
          py::arg("model"), py::arg("stopping"), py::arg("options") = PipelineOptions{});
    m.def("find_poles",
          [](const LevyModel& model, const StoppingTime& stop, const SearchRegion& region,
             std::size_t count) {
              const PoleSet set = find_poles(model, stop, region, count);
              py::list out;
              for (const auto& p : set.all()) out.append(p.location);
              return out;
          },
          py::arg("model"), py::arg("stopping"), py::arg("region") = SearchRegion{},
          py::arg("count") = 4);
    m.def("finite_time_ruin", &finite_time_ruin, py::arg("infimum_density"), py::arg("u"));
    m.def("ruin_curve",
          [](const ExtremaDensity& d, const std::vector<double>& us, const StoppingTime& stop) {
              return ruin_curve(d, us, stop, "");
          },
          py::arg("infimum_density"), py::arg("reserves"), py::arg("stopping"));
    m.def("error_bound_factorization",
          [](double delta, double p) { return error_bound_factorization(delta, NormOrder(p)); },
          py::arg("delta"), py::arg("p") = 2.0);
    m.def("error_bound_compound_poisson", &error_bound_compound_poisson, py::arg("nu_delta"),
          py::arg("stopping"));
    m.def("simulate_extrema",
          [](const LevyModel& model, const StoppingTime& stop, const SimConfig& cfg) {
              const auto samples = simulate_extrema(model, stop, cfg);
              py::list sup, inf;
              for (const auto& s : samples) {
                  sup.append(s.supremum);
                  inf.append(s.infimum);
              }
              return py::make_tuple(sup, inf);
          },
          py::arg("model"), py::arg("stopping"), py::arg("config") = SimConfig{});
    m.def("ks_distance", &ks_distance, py::arg("samples"), py::arg("density"));
    m.def("hilbert_transform",
          [](const std::vector<double>& nodes, const std::vector<Complex>& values) {
              GridFunction f = GridFunction::from_samples(nodes, values);
              const GridFunction h = hilbert_transform(f);
              return h.values();
          },
          py::arg("nodes"), py::arg("values"));
}
