#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "levysym/calibration.hpp"
#include "levysym/errors.hpp"
#include "levysym/fourier.hpp"
#include "levysym/levy.hpp"
#include "levysym/mc.hpp"
#include "levysym/nig.hpp"
#include "levysym/power.hpp"
#include "levysym/shortcut.hpp"
#include "levysym/types.hpp"

namespace py = pybind11;
using namespace levysym;

namespace {

py::array_t<double> as_array(std::vector<double>&& v) {
    auto* holder = new std::vector<double>(std::move(v));
    py::capsule free_when_done(holder, [](void* p) {
        delete reinterpret_cast<std::vector<double>*>(p);
    });
    return py::array_t<double>({static_cast<py::ssize_t>(holder->size())},
                               {static_cast<py::ssize_t>(sizeof(double))},
                               holder->data(), free_when_done);
}

py::dict extras_dict(const PriceResult& r) {
    py::dict d;
    for (const auto& [k, v] : r.extras) d[py::str(k)] = v;
    return d;
}

} // namespace

PYBIND11_MODULE(_levysym, m) {
    m.doc() = "exponential Levy pricing with the market-symmetry shortcut";

    // exceptions map onto Python's built-ins where a natural one exists
    py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
    py::register_exception<StripViolation>(m, "StripViolation", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainErrorCpp", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseErrorCpp", PyExc_ValueError);
    py::register_exception<InsufficientData>(m, "InsufficientDataError", PyExc_ValueError);
    py::register_exception<OptimizationFailure>(m, "OptimizationFailureError",
                                                PyExc_RuntimeError);
    py::register_exception<NoRootInBracket>(m, "NoRootInBracketError", PyExc_RuntimeError);
    py::register_exception<ConsistencyFailure>(m, "ConsistencyFailureError",
                                               PyExc_RuntimeError);
    py::register_exception<MomentDivergence>(m, "MomentDivergenceError", PyExc_ValueError);

    py::class_<NIGParams>(m, "NIGParams")
        .def(py::init([](double mu, double alpha, double delta, double beta) {
                 NIGParams p{mu, alpha, delta, beta};
                 validate(p);
                 return p;
             }),
             py::arg("mu"), py::arg("alpha"), py::arg("delta"), py::arg("beta"))
        .def_readwrite("mu", &NIGParams::mu)
        .def_readwrite("alpha", &NIGParams::alpha_tail)
        .def_readwrite("delta", &NIGParams::delta_scale)
        .def_readwrite("beta", &NIGParams::beta_skew)
        .def("gamma", &NIGParams::gamma)
        .def("__repr__", [](const NIGParams& p) {
            std::ostringstream os;
            os.precision(17);
            os << "NIGParams(mu=" << p.mu << ", alpha=" << p.alpha_tail
               << ", delta=" << p.delta_scale << ", beta=" << p.beta_skew << ")";
            return os.str();
        });

    m.def("nig_density", &nig_density, py::arg("params"), py::arg("x"), py::arg("t") = 1.0);
    m.def("nig_log_density", &nig_log_density, py::arg("params"), py::arg("x"),
          py::arg("t") = 1.0);
    m.def("nig_mean_variance", &nig_mean_variance, py::arg("params"), py::arg("t") = 1.0);
    m.def("esscher_shift", &esscher_shift, py::arg("params"), py::arg("theta"));
    m.def("scale_time", &scale_time, py::arg("params"), py::arg("factor"));
    m.def("bessel_k1", &bessel_k1);
    m.def("log_bessel_k1", &log_bessel_k1);

    py::class_<Strip>(m, "Strip")
        .def_readonly("im_lo", &Strip::im_lo)
        .def_readonly("im_hi", &Strip::im_hi)
        .def("contains_im", &Strip::contains_im)
        .def("contains_exponent", &Strip::contains_exponent);

    py::class_<LevyModel>(m, "LevyModel")
        .def_static("black_scholes", &LevyModel::black_scholes, py::arg("sigma"),
                    py::arg("r"), py::arg("q") = 0.0)
        .def_static("nig_risk_neutral", &LevyModel::nig_risk_neutral, py::arg("params"),
                    py::arg("r"), py::arg("q") = 0.0)
        .def_static("nig_as_given", &LevyModel::nig_as_given, py::arg("params"),
                    py::arg("r"), py::arg("q") = 0.0)
        .def("symmetrized", &LevyModel::symmetrized)
        .def("cumulant", &LevyModel::cumulant, py::arg("z"))
        .def("cumulant_centered", &LevyModel::cumulant_centered, py::arg("z"))
        .def("kappa", &LevyModel::kappa, py::arg("u"))
        .def("martingale_gap", &LevyModel::martingale_gap)
        .def("symmetry_beta", &LevyModel::symmetry_beta)
        .def("is_symmetric", &LevyModel::is_symmetric, py::arg("tol") = 1e-12)
        .def("levy_density", &LevyModel::levy_density, py::arg("y"))
        .def("mean", &LevyModel::mean, py::arg("t"))
        .def("variance", &LevyModel::variance, py::arg("t"))
        .def("rate", &LevyModel::rate)
        .def("dividend", &LevyModel::dividend)
        .def("strip", &LevyModel::strip)
        .def("nig", &LevyModel::nig, py::return_value_policy::copy);

    py::class_<MarketSpec>(m, "MarketSpec")
        .def(py::init([](double spot, double rate, double dividend, double maturity,
                         double sigma_atm) {
                 MarketSpec ms{spot, rate, dividend, maturity, sigma_atm};
                 ms.validate();
                 return ms;
             }),
             py::arg("spot") = 1.0, py::arg("rate") = 0.0, py::arg("dividend") = 0.0,
             py::arg("maturity") = 1.0, py::arg("sigma_atm") = 0.0)
        .def_readwrite("spot", &MarketSpec::spot)
        .def_readwrite("rate", &MarketSpec::rate)
        .def_readwrite("dividend", &MarketSpec::dividend)
        .def_readwrite("maturity", &MarketSpec::maturity)
        .def_readwrite("sigma_atm", &MarketSpec::sigma_atm)
        .def("forward", &MarketSpec::forward)
        .def("discount", &MarketSpec::discount);

    py::class_<ContourSpec>(m, "ContourSpec")
        .def(py::init<>())
        .def_readwrite("v", &ContourSpec::v)
        .def_readwrite("half_width", &ContourSpec::half_width)
        .def_readwrite("max_nodes", &ContourSpec::max_nodes)
        .def_readwrite("rel_tol", &ContourSpec::rel_tol);

    py::class_<QuadDiagnostics>(m, "QuadDiagnostics")
        .def_readonly("nodes", &QuadDiagnostics::nodes)
        .def_readonly("truncation", &QuadDiagnostics::truncation)
        .def_readonly("contour_v", &QuadDiagnostics::contour_v)
        .def_readonly("imag_residue", &QuadDiagnostics::imag_residue)
        .def_readonly("converged", &QuadDiagnostics::converged);

    py::class_<PriceResult>(m, "PriceResult")
        .def_readonly("value", &PriceResult::value)
        .def_readonly("abs_err_estimate", &PriceResult::abs_err_estimate)
        .def_property_readonly("method",
                               [](const PriceResult& r) { return method_name(r.method); })
        .def_readonly("flags", &PriceResult::flags)
        .def_property_readonly("extras", &extras_dict)
        .def_readonly("diagnostics", &PriceResult::diagnostics)
        .def("extra", &PriceResult::extra, py::arg("key"))
        .def("__repr__", [](const PriceResult& r) {
            std::ostringstream os;
            os.precision(17);
            os << "PriceResult(value=" << r.value << ", abs_err=" << r.abs_err_estimate
               << ", method=" << method_name(r.method) << ")";
            return os.str();
        });

    py::class_<TailResult>(m, "TailResult")
        .def_readonly("probability", &TailResult::probability)
        .def_readonly("abs_err", &TailResult::abs_err)
        .def_readonly("diagnostics", &TailResult::diagnostics);

    m.def("tail_probability", &tail_probability, py::arg("model"), py::arg("t"),
          py::arg("y"), py::arg("contour") = ContourSpec{}, py::arg("shift") = 0.0);
    m.def("price_digital_call_fourier", &price_digital_call_fourier, py::arg("model"),
          py::arg("market"), py::arg("x") = 0.0, py::arg("contour") = ContourSpec{});
    m.def("price_digital_put_fourier", &price_digital_put_fourier, py::arg("model"),
          py::arg("market"), py::arg("x") = 0.0, py::arg("contour") = ContourSpec{});
    m.def("price_asset_digital_fourier", &price_asset_digital_fourier, py::arg("model"),
          py::arg("market"), py::arg("x") = 0.0, py::arg("contour") = ContourSpec{});
    m.def("price_call_lewis", &price_call_lewis, py::arg("model"), py::arg("market"),
          py::arg("strike"), py::arg("contour") = ContourSpec{});
    m.def("atm_implied_vol", &atm_implied_vol, py::arg("model"), py::arg("market"));
    m.def("bs_call_price", &bs_call_price, py::arg("sigma"), py::arg("market"),
          py::arg("strike"));
    m.def("bs_digital_call_price", &bs_digital_call_price, py::arg("sigma"),
          py::arg("market"), py::arg("x"));
    m.def("normal_cdf", &normal_cdf);

    py::enum_<OptionSide>(m, "OptionSide")
        .value("call", OptionSide::call)
        .value("put", OptionSide::put);

    m.def("digital_symmetric", &digital_symmetric, py::arg("market"), py::arg("side"));
    m.def("asset_or_nothing_symmetric", &asset_or_nothing_symmetric, py::arg("market"));

    py::class_<SensitivityPair>(m, "SensitivityPair")
        .def_readonly("i_beta", &SensitivityPair::i_beta)
        .def_readonly("i_x", &SensitivityPair::i_x)
        .def_readonly("fd_rel_err_beta", &SensitivityPair::fd_rel_err_beta)
        .def_readonly("fd_rel_err_x", &SensitivityPair::fd_rel_err_x)
        .def_readonly("diag_beta", &SensitivityPair::diag_beta)
        .def_readonly("diag_x", &SensitivityPair::diag_x);

    py::class_<ApproxConfig>(m, "ApproxConfig")
        .def(py::init<>())
        .def_readwrite("eps_beta", &ApproxConfig::eps_beta)
        .def_readwrite("eps_x", &ApproxConfig::eps_x);

    m.def("sensitivities", &sensitivities, py::arg("model"), py::arg("market"),
          py::arg("contour") = ContourSpec{});
    m.def("approx_digital", &approx_digital, py::arg("base"), py::arg("sens"),
          py::arg("beta"), py::arg("x"), py::arg("market"),
          py::arg("config") = ApproxConfig{});

    m.def(
        "grid_to_csv",
        [](const std::string& path, const LevyModel& model, const MarketSpec& market,
           double beta0, double x0, double eps_beta, double eps_x, std::size_t n_beta,
           std::size_t n_x) {
            std::ofstream os(path);
            if (!os) throw DomainError("cannot open '" + path + "' for writing");
            write_price_grid(os, model, market, beta0, x0, eps_beta, eps_x, n_beta, n_x);
        },
        py::arg("path"), py::arg("model"), py::arg("market"), py::arg("beta0") = -0.5,
        py::arg("x0") = 0.0, py::arg("eps_beta") = 0.01, py::arg("eps_x") = 0.01,
        py::arg("n_beta") = 21, py::arg("n_x") = 21);

    py::enum_<PayoffKind>(m, "PayoffKind")
        .value("digital_call", PayoffKind::digital_call)
        .value("digital_put", PayoffKind::digital_put)
        .value("asset_or_nothing", PayoffKind::asset_or_nothing)
        .value("constant_one", PayoffKind::constant_one);

    py::class_<PayoffSpec>(m, "PayoffSpec")
        .def(py::init([](PayoffKind kind, double level) {
                 return PayoffSpec{kind, level};
             }),
             py::arg("kind"), py::arg("level") = 1.0)
        .def_readwrite("kind", &PayoffSpec::kind)
        .def_readwrite("level", &PayoffSpec::level)
        .def("evaluate", &PayoffSpec::evaluate, py::arg("terminal_spot"));

    py::class_<ConjugationSpec>(m, "ConjugationSpec")
        .def_readonly("beta", &ConjugationSpec::beta)
        .def_readonly("power_drift", &ConjugationSpec::power_drift)
        .def_readonly("exponent", &ConjugationSpec::exponent);

    py::enum_<ConjugationRoute>(m, "ConjugationRoute")
        .value("automatic", ConjugationRoute::automatic)
        .value("fourier", ConjugationRoute::fourier)
        .value("mc", ConjugationRoute::mc);

    py::enum_<PowerPriceMode>(m, "PowerPriceMode")
        .value("reproduction", PowerPriceMode::reproduction)
        .value("rigorous", PowerPriceMode::rigorous);

    m.def("power_drift", &power_drift, py::arg("model"));
    m.def("make_conjugation", &make_conjugation, py::arg("model"));
    m.def("symmetric_surrogate", &symmetric_surrogate, py::arg("model"));
    m.def("conjugate_price", &conjugate_price, py::arg("model"), py::arg("market"),
          py::arg("payoff"), py::arg("route") = ConjugationRoute::automatic,
          py::arg("n_paths") = 200'000, py::arg("seed") = 2011);
    m.def("price_down_and_in_power", &price_down_and_in_power, py::arg("model"),
          py::arg("market"), py::arg("mode") = PowerPriceMode::reproduction);

    py::enum_<SpotMapping>(m, "SpotMapping")
        .value("direct", SpotMapping::direct)
        .value("forward_centered", SpotMapping::forward_centered);

    m.def(
        "sample_nig_terminal",
        [](const NIGParams& p, double t, std::size_t n, std::uint64_t seed, int threads) {
            return as_array(sample_nig_terminal(p, t, n, seed, threads));
        },
        py::arg("params"), py::arg("t"), py::arg("n"), py::arg("seed"),
        py::arg("threads") = 1);
    m.def(
        "sample_terminal",
        [](const LevyModel& model, double t, std::size_t n, std::uint64_t seed,
           int threads) { return as_array(sample_terminal(model, t, n, seed, threads)); },
        py::arg("model"), py::arg("t"), py::arg("n"), py::arg("seed"),
        py::arg("threads") = 1);

    py::class_<McResult>(m, "McResult")
        .def_readonly("value", &McResult::value)
        .def_readonly("std_error", &McResult::std_error)
        .def_readonly("n", &McResult::n);

    m.def("mc_price", &mc_price, py::arg("model"), py::arg("market"), py::arg("payoff"),
          py::arg("n"), py::arg("seed"), py::arg("mapping") = SpotMapping::direct,
          py::arg("threads") = 1);

    py::class_<ConjugationCheck>(m, "ConjugationCheck")
        .def_readonly("lhs", &ConjugationCheck::lhs)
        .def_readonly("rhs", &ConjugationCheck::rhs)
        .def_readonly("se_lhs", &ConjugationCheck::se_lhs)
        .def_readonly("se_rhs", &ConjugationCheck::se_rhs)
        .def_readonly("combined_se", &ConjugationCheck::combined_se)
        .def_readonly("pass_", &ConjugationCheck::pass)
        .def_property_readonly("ok", [](const ConjugationCheck& c) { return c.pass; });

    m.def("verify_conjugation", &verify_conjugation, py::arg("model"), py::arg("market"),
          py::arg("payoff"), py::arg("n") = 1'000'000, py::arg("seed") = 777,
          py::arg("threads") = 1);

    py::enum_<ReturnsMode>(m, "ReturnsMode")
        .value("prices", ReturnsMode::prices)
        .value("logreturns", ReturnsMode::logreturns);

    py::class_<ReturnsSeries>(m, "ReturnsSeries")
        .def_readonly("dates", &ReturnsSeries::dates)
        .def_readonly("log_returns", &ReturnsSeries::log_returns)
        .def("__len__", &ReturnsSeries::size);

    m.def("load_returns", &load_returns, py::arg("path"), py::arg("mode"),
          py::arg("min_returns") = 30);

    py::class_<FitOptions>(m, "FitOptions")
        .def(py::init<>())
        .def_readwrite("max_iterations", &FitOptions::max_iterations)
        .def_readwrite("gradient_tol", &FitOptions::gradient_tol)
        .def_readwrite("annualize", &FitOptions::annualize)
        .def_readwrite("use_init", &FitOptions::use_init)
        .def_readwrite("init", &FitOptions::init);

    py::class_<FitResult>(m, "FitResult")
        .def_readonly("params", &FitResult::params)
        .def_readonly("std_errors", &FitResult::std_errors)
        .def_readonly("log_likelihood", &FitResult::log_likelihood)
        .def_readonly("gradient_norm", &FitResult::gradient_norm)
        .def_readonly("iterations", &FitResult::iterations)
        .def_readonly("warnings", &FitResult::warnings);

    m.def("fit_nig_mle", &fit_nig_mle, py::arg("log_returns"),
          py::arg("options") = FitOptions{});

    py::class_<EsscherResult>(m, "EsscherResult")
        .def_readonly("params", &EsscherResult::params)
        .def_readonly("theta_star", &EsscherResult::theta_star)
        .def_readonly("gap", &EsscherResult::gap)
        .def_readonly("bracket_lo", &EsscherResult::bracket_lo)
        .def_readonly("bracket_hi", &EsscherResult::bracket_hi)
        .def_readonly("iterations", &EsscherResult::iterations);

    m.def("esscher_transform", &esscher_transform, py::arg("params"), py::arg("r"),
          py::arg("q") = 0.0);
}
