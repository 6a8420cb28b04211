#pragma once

#include <complex>
#include <utility>

namespace levysym {

// Normal Inverse Gaussian parameter set. All four are per unit of the model's
// time variable; the library never assumes a particular calendar convention,
// see scale_time below for switching between e.g. daily and annual units.
struct NIGParams {
    double mu = 0.0;          // drift
    double alpha_tail = 1.0;  // tail heaviness, > 0
    double delta_scale = 1.0; // scale, > 0
    double beta_skew = 0.0;   // asymmetry, |beta_skew| < alpha_tail

    // sqrt(alpha^2 - beta^2), the recurring pseudo-volatility term
    double gamma() const;
};

// Throws ParameterError unless alpha > 0, delta > 0, |beta| < alpha and all
// four entries are finite.
void validate(const NIGParams& p);

// Characteristic exponent in the Fourier-argument convention,
//   psi(z) = i z mu + delta (sqrt(alpha^2 - beta^2) - sqrt(alpha^2 - (beta + i z)^2)),
// evaluated without strip checks (callers own admissibility).
std::complex<double> nig_psi(const NIGParams& p, std::complex<double> z);

// d psi / d beta at fixed mu:
//   delta [ (beta + i z) / sqrt(alpha^2 - (beta + i z)^2) - beta / gamma ]
std::complex<double> nig_psi_dbeta(const NIGParams& p, std::complex<double> z);

// Transition density of X_t and its log (the log form stays finite far into
// the tails where K1 underflows; it is what the MLE maximizes).
double nig_density(const NIGParams& p, double x, double t);
double nig_log_density(const NIGParams& p, double x, double t);

// mean = t (mu + delta beta / gamma), variance = t delta alpha^2 / gamma^3
std::pair<double, double> nig_mean_variance(const NIGParams& p, double t);

// Exponential tilt by e^{theta x}: shifts beta_skew to beta_skew + theta and
// leaves everything else unchanged. Throws ParameterError when the tilted
// skew leaves (-alpha, alpha).
NIGParams esscher_shift(const NIGParams& p, double theta);

// Reinterpret the parameters under a rescaled time unit: X_{factor * t} has
// NIG law with mu and delta multiplied by factor (alpha, beta unchanged).
// factor = 252 maps per-trading-day parameters to per-year ones.
NIGParams scale_time(const NIGParams& p, double factor);

// Modified Bessel function of the second kind, order one, and a log form
// that switches to the asymptotic expansion once K1 itself would underflow.
double bessel_k1(double x);
double log_bessel_k1(double x);
// K0(x)/K1(x), needed by the MLE gradient; asymptotic branch for large x.
double bessel_k0_over_k1(double x);

} // namespace levysym
