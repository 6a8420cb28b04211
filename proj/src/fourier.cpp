#include "levysym/fourier.hpp"

#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <complex>
#include <functional>
#include <sstream>

#include "levysym/errors.hpp"
#include "levysym/quadrature.hpp"

namespace levysym {

namespace {

using Complex = std::complex<double>;
constexpr Complex kI{0.0, 1.0};

void require_martingale(const LevyModel& model) {
    const double gap = model.martingale_gap();
    if (std::abs(gap) > 1e-8) {
        std::ostringstream os;
        os << "pricing requires a martingale-drifted model; kappa(1) - (r - q) = "
           << gap << " (construct with the risk-neutral factory or apply the "
              "Esscher transform first)";
        throw DomainError(os.str());
    }
}

} // namespace

namespace detail {

double resolve_contour_v(const ContourSpec& spec, double preferred, double lo, double hi) {
    if (!(hi > lo)) {
        std::ostringstream os;
        os << "no admissible contour: window (" << lo << ", " << hi << ") is empty";
        throw StripViolation(os.str());
    }
    if (!std::isnan(spec.v)) {
        if (!(spec.v > lo && spec.v < hi)) {
            std::ostringstream os;
            os << "contour v=" << spec.v << " outside the admissible window ("
               << lo << ", " << hi << ")";
            throw StripViolation(os.str());
        }
        return spec.v;
    }
    if (std::isinf(hi)) {
        return preferred > lo + 0.1 ? preferred : lo + 0.5;
    }
    const double margin = 0.05 * (hi - lo);
    if (preferred >= lo + margin && preferred <= hi - margin) return preferred;
    return 0.5 * (lo + hi);
}

FoldedLine contour_fold(const std::function<Complex(Complex)>& num,
                        const std::function<Complex(Complex)>& expo,
                        const std::function<Complex(Complex)>& den,
                        double y, double v, const ContourSpec& spec) {
    FoldedLine out;
    out.diag.contour_v = v;

    // truncation: double L until the exponent envelope decays under 1e-14
    double L = spec.half_width > 0.0 ? spec.half_width : 50.0;
    bool trunc_ok = false;
    for (int k = 0; k <= 20; ++k) {
        const Complex z{L, v};
        if (std::abs(std::exp(expo(z))) / L < 1e-14) {
            trunc_ok = true;
            break;
        }
        if (k < 20) L *= 2.0;
    }
    out.diag.truncation = L;

    auto h = [&](Complex z) { return num(z) * std::exp(kI * z * y + expo(z)) / den(z); };
    auto f = [&](double xi) { return h(Complex{xi, v}).real(); };

    QuadResult qr = integrate_adaptive(f, 0.0, L, spec.rel_tol, 1e-15, spec.max_nodes);
    out.value = 2.0 * qr.value;
    out.abs_err = 2.0 * qr.abs_err;
    out.diag.nodes = qr.nodes;
    out.diag.converged = qr.converged && trunc_ok;

    // conjugate-asymmetry probes; roundoff-level for a real characteristic triplet
    double resid = 0.0;
    for (double xi : {0.5, 5.0, 0.25 * L}) {
        const Complex hp = h(Complex{xi, v});
        const Complex hm = h(Complex{-xi, v});
        resid = std::max(resid, std::abs(hm - std::conj(hp)));
        out.diag.nodes += 2;
    }
    out.diag.imag_residue = resid;
    return out;
}

} // namespace detail

TailResult tail_probability(const LevyModel& model, double t, double y,
                            const ContourSpec& contour, double shift) {
    contour.validate();
    if (!(t > 0.0)) throw DomainError("tail_probability requires t > 0");

    double ks = 0.0;
    if (shift != 0.0) {
        if (!model.strip().contains_exponent(shift)) {
            std::ostringstream os;
            os << "tilt exponent " << shift << " has no finite moment for this model";
            throw StripViolation(os.str());
        }
        ks = model.kappa(shift);
    }

    // P_shift(X_t > y) = -(1/2pi) Int e^{izy} e^{t(psi(-z - i shift) - kappa(shift))} / (iz) dz
    // admissible v: Im(-z - i shift) = -v - shift inside the model strip, and v > 0
    const Strip st = model.strip();
    const double lo = std::max(0.0, -st.im_hi - shift);
    const double hi = -st.im_lo - shift;
    const double v = detail::resolve_contour_v(contour, 0.5, lo, hi);

    auto one = [](Complex) { return Complex{1.0, 0.0}; };
    auto expo = [&](Complex z) { return t * (model.cumulant(-z - kI * shift) - ks); };
    auto den = [](Complex z) { return kI * z; };
    detail::FoldedLine fl = detail::contour_fold(one, expo, den, y, v, contour);

    TailResult out;
    out.probability = -fl.value / (2.0 * M_PI);
    out.abs_err = fl.abs_err / (2.0 * M_PI);
    out.diagnostics = fl.diag;
    return out;
}

PriceResult price_digital_call_fourier(const LevyModel& model, const MarketSpec& market,
                                       double x, const ContourSpec& contour) {
    market.validate();
    require_martingale(model);
    // log(S_T / F) = X_T - T kappa(1); shift the level instead of the exponent
    const double y = x + market.maturity * model.kappa(1.0);
    TailResult tr = tail_probability(model, market.maturity, y, contour, 0.0);

    PriceResult out;
    out.value = market.discount() * tr.probability;
    out.abs_err_estimate = market.discount() * tr.abs_err;
    out.method = Method::fourier;
    out.diagnostics = tr.diagnostics;
    if (!tr.diagnostics.converged) out.flags.push_back("quadrature_not_converged");
    return out;
}

PriceResult price_digital_put_fourier(const LevyModel& model, const MarketSpec& market,
                                      double x, const ContourSpec& contour) {
    PriceResult call = price_digital_call_fourier(model, market, x, contour);
    call.value = market.discount() - call.value; // g = e^{-rT} - f, exact parity
    return call;
}

PriceResult price_asset_digital_fourier(const LevyModel& model, const MarketSpec& market,
                                        double x, const ContourSpec& contour) {
    market.validate();
    require_martingale(model);
    const double y = x + market.maturity * model.kappa(1.0);
    // share-measure tail: exponent argument shifted by one
    TailResult tr = tail_probability(model, market.maturity, y, contour, 1.0);

    const double carry = market.spot * std::exp(-market.dividend * market.maturity);
    PriceResult out;
    out.value = carry * tr.probability;
    out.abs_err_estimate = carry * tr.abs_err;
    out.method = Method::fourier;
    out.diagnostics = tr.diagnostics;
    if (!tr.diagnostics.converged) out.flags.push_back("quadrature_not_converged");
    return out;
}

PriceResult price_call_lewis(const LevyModel& model, const MarketSpec& market,
                             double strike, const ContourSpec& contour) {
    market.validate();
    contour.validate();
    if (!(strike > 0.0)) throw DomainError("strike must be > 0");
    require_martingale(model);

    const double T = market.maturity;
    const double x = std::log(strike / market.forward());

    // V = -(K e^{-rT} / 2pi) Int_{Im z = v} e^{izx} e^{T psi_c(-z)} / (z(z-i)) dz, v > 1
    const Strip st = model.strip();
    const double lo = 1.0;
    const double hi = -st.im_lo; // Im(-z) = -v must stay above strip.im_lo
    const double v = detail::resolve_contour_v(contour, 1.5, lo, hi);

    auto one = [](Complex) { return Complex{1.0, 0.0}; };
    auto expo = [&](Complex z) { return T * model.cumulant_centered(-z); };
    auto den = [](Complex z) { return z * (z - kI); };
    detail::FoldedLine fl = detail::contour_fold(one, expo, den, x, v, contour);

    PriceResult out;
    out.value = -strike * market.discount() * fl.value / (2.0 * M_PI);
    out.abs_err_estimate = strike * market.discount() * fl.abs_err / (2.0 * M_PI);
    out.method = Method::fourier;
    out.diagnostics = fl.diag;
    if (!fl.diag.converged) out.flags.push_back("quadrature_not_converged");
    return out;
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double bs_call_price(double sigma, const MarketSpec& market, double strike) {
    market.validate();
    if (!(strike > 0.0)) throw DomainError("strike must be > 0");
    if (sigma < 0.0) throw DomainError("sigma must be >= 0");
    const double T = market.maturity;
    const double df = market.discount();
    const double fwd = market.forward();
    const double stdev = sigma * std::sqrt(T);
    if (stdev == 0.0) return df * std::max(0.0, fwd - strike);
    const double d1 = (std::log(fwd / strike) + 0.5 * stdev * stdev) / stdev;
    const double d2 = d1 - stdev;
    return df * (fwd * normal_cdf(d1) - strike * normal_cdf(d2));
}

double bs_digital_call_price(double sigma, const MarketSpec& market, double x) {
    market.validate();
    if (sigma < 0.0) throw DomainError("sigma must be >= 0");
    const double T = market.maturity;
    const double stdev = sigma * std::sqrt(T);
    if (stdev == 0.0) {
        return market.discount() * (x < 0.0 ? 1.0 : (x == 0.0 ? 0.5 : 0.0));
    }
    const double d2 = (-x - 0.5 * stdev * stdev) / stdev;
    return market.discount() * normal_cdf(d2);
}

double atm_implied_vol(const LevyModel& model, const MarketSpec& market) {
    market.validate();
    const double fwd = market.forward();
    PriceResult call = price_call_lewis(model, market, fwd);
    if (!call.diagnostics.converged) {
        throw QuadratureFailure("ATM call quadrature did not converge; cannot invert");
    }
    const double cap = market.spot * std::exp(-market.dividend * market.maturity);
    const double m = call.value / cap; // ATM-forward: price/cap = 2 N(sigma sqrt(T)/2) - 1
    if (!(m > 0.0) || !(m < 1.0)) {
        std::ostringstream os;
        os << "ATM call price " << call.value << " outside the no-arbitrage band (0, "
           << cap << ")";
        throw InversionFailure(os.str());
    }
    boost::math::normal_distribution<double> n01;
    const double h = boost::math::quantile(n01, 0.5 * (1.0 + m));
    return 2.0 * h / std::sqrt(market.maturity);
}

} // namespace levysym
