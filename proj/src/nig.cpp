#include "levysym/nig.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "levysym/errors.hpp"

namespace levysym {

double NIGParams::gamma() const {
    return std::sqrt(alpha_tail * alpha_tail - beta_skew * beta_skew);
}

void validate(const NIGParams& p) {
    const bool finite = std::isfinite(p.mu) && std::isfinite(p.alpha_tail) &&
                        std::isfinite(p.delta_scale) && std::isfinite(p.beta_skew);
    if (!finite) throw ParameterError("NIG parameters must be finite");
    if (!(p.alpha_tail > 0.0)) throw ParameterError("NIG alpha must be > 0");
    if (!(p.delta_scale > 0.0)) throw ParameterError("NIG delta must be > 0");
    if (!(std::abs(p.beta_skew) < p.alpha_tail)) {
        std::ostringstream os;
        os << "NIG requires |beta| < alpha, got beta=" << p.beta_skew
           << ", alpha=" << p.alpha_tail;
        throw ParameterError(os.str());
    }
}

std::complex<double> nig_psi(const NIGParams& p, std::complex<double> z) {
    const std::complex<double> i(0.0, 1.0);
    const std::complex<double> w = p.beta_skew + i * z;
    const std::complex<double> root =
        std::sqrt(p.alpha_tail * p.alpha_tail - w * w);
    return i * z * p.mu + p.delta_scale * (p.gamma() - root);
}

std::complex<double> nig_psi_dbeta(const NIGParams& p, std::complex<double> z) {
    const std::complex<double> i(0.0, 1.0);
    const std::complex<double> w = p.beta_skew + i * z;
    const std::complex<double> root =
        std::sqrt(p.alpha_tail * p.alpha_tail - w * w);
    return p.delta_scale * (w / root - p.beta_skew / p.gamma());
}

namespace {

// asymptotic tail of log K1; relative error < 1e-13 for x > 500
double log_k1_asymptotic(double x) {
    // K1(x) ~ sqrt(pi/(2x)) e^{-x} [1 + 3/(8x) - 15/(128 x^2) + 105/(1024 x^3)]
    const double inv = 1.0 / x;
    const double series =
        1.0 + inv * (0.375 + inv * (-0.1171875 + inv * 0.1025390625));
    return 0.5 * std::log(M_PI / (2.0 * x)) - x + std::log(series);
}

} // namespace

double bessel_k1(double x) {
    if (!(x > 0.0)) throw DomainError("bessel_k1 requires x > 0");
    if (x > 690.0) return std::exp(log_k1_asymptotic(x)); // underflows to ~0
    return boost::math::cyl_bessel_k(1, x);
}

double log_bessel_k1(double x) {
    if (!(x > 0.0)) throw DomainError("log_bessel_k1 requires x > 0");
    if (x > 600.0) return log_k1_asymptotic(x);
    return std::log(boost::math::cyl_bessel_k(1, x));
}

double bessel_k0_over_k1(double x) {
    if (!(x > 0.0)) throw DomainError("bessel_k0_over_k1 requires x > 0");
    if (x > 600.0) {
        // ratio of the large-argument series of K0 and K1
        const double inv = 1.0 / x;
        const double num =
            1.0 + inv * (-0.125 + inv * (0.0703125 - inv * 0.0732421875));
        const double den =
            1.0 + inv * (0.375 + inv * (-0.1171875 + inv * 0.1025390625));
        return num / den;
    }
    return boost::math::cyl_bessel_k(0, x) / boost::math::cyl_bessel_k(1, x);
}

double nig_log_density(const NIGParams& p, double x, double t) {
    validate(p);
    if (!(t > 0.0)) throw DomainError("nig_log_density requires t > 0");
    const double td = t * p.delta_scale;
    const double dx = x - t * p.mu;
    const double s = std::hypot(td, dx);
    return std::log(td * p.alpha_tail / M_PI) + td * p.gamma() +
           p.beta_skew * dx + log_bessel_k1(p.alpha_tail * s) - std::log(s);
}

double nig_density(const NIGParams& p, double x, double t) {
    return std::exp(nig_log_density(p, x, t));
}

std::pair<double, double> nig_mean_variance(const NIGParams& p, double t) {
    validate(p);
    const double g = p.gamma();
    const double mean = t * (p.mu + p.delta_scale * p.beta_skew / g);
    const double var =
        t * p.delta_scale * p.alpha_tail * p.alpha_tail / (g * g * g);
    return {mean, var};
}

NIGParams esscher_shift(const NIGParams& p, double theta) {
    validate(p);
    if (!std::isfinite(theta)) throw ParameterError("Esscher theta must be finite");
    NIGParams out = p;
    out.beta_skew += theta;
    validate(out); // tilted skew must stay inside (-alpha, alpha)
    return out;
}

NIGParams scale_time(const NIGParams& p, double factor) {
    validate(p);
    if (!(factor > 0.0) || !std::isfinite(factor)) {
        throw ParameterError("time scale factor must be positive and finite");
    }
    NIGParams out = p;
    out.mu *= factor;
    out.delta_scale *= factor;
    return out;
}

} // namespace levysym
