#pragma once

#include <complex>

#include "levysym/nig.hpp"

namespace levysym {

enum class ModelVariant { BlackScholes, NormalInverseGaussian };

// Open interval of admissible imaginary parts for the cumulant argument z.
// Evaluating psi at Im(z) = v is the same as requiring the real exponential
// moment E e^{-v X} to exist, so the strip doubles as the moment bookkeeping:
// kappa(u) is finite iff -u lies in (im_lo, im_hi).
struct Strip {
    double im_lo;
    double im_hi;

    bool contains_im(double v) const { return v > im_lo && v < im_hi; }
    bool contains_exponent(double u) const { return contains_im(-u); }
};

// Two-convention contract used throughout:
//   psi(z) is the Fourier-argument exponent,  E e^{i z X_t} = e^{t psi(z)};
//   kappa(u) := psi(-i u) is the real-exponent cumulant,  E e^{u X_t} = e^{t kappa(u)};
//   the martingale condition on S_t = S_0 e^{X_t} reads kappa(1) = r - q.
//
// Instances are immutable after construction; every method is a pure function
// and safe for concurrent shared use.
class LevyModel {
  public:
    // Diffusion with drift set internally so that kappa(1) = r - q.
    static LevyModel black_scholes(double sigma, double r, double q);

    // NIG with mu overridden by the martingale drift
    //   mu = (r - q) - delta (gamma - sqrt(alpha^2 - (beta+1)^2));
    // requires |beta + 1| < alpha so that E e^{X} exists.
    static LevyModel nig_risk_neutral(NIGParams base, double r, double q);

    // NIG with mu taken exactly as given. The martingale condition is NOT
    // imposed; this is the calibration pipeline's entry point (physical
    // measure before the Esscher step) and the carrier for externally
    // supplied parameter sets. martingale_gap() reports the mismatch.
    static LevyModel nig_as_given(NIGParams p, double r, double q);

    // Same alpha and delta, beta = -1/2, drift re-solved to martingale.
    LevyModel symmetrized() const;

    ModelVariant variant() const { return variant_; }
    double rate() const { return r_; }
    double dividend() const { return q_; }
    Strip strip() const { return strip_; }

    const NIGParams& nig() const; // UnsupportedVariant unless NIG
    double sigma_diff() const;    // UnsupportedVariant unless BlackScholes

    // psi(z); StripViolation when Im(z) leaves the admissible strip.
    std::complex<double> cumulant(std::complex<double> z) const;

    // psi(z) - i z kappa(1): the exponent of X_t - t kappa(1), i.e. the log
    // price recentered at the forward. Pricing integrands use this form so
    // the drift never enters the digital integrals.
    std::complex<double> cumulant_centered(std::complex<double> z) const;

    // d psi_beta / d beta at fixed mu (NIG only).
    std::complex<double> cumulant_beta_derivative(std::complex<double> z) const;

    // real-exponent cumulant kappa(u) = psi(-i u)
    double kappa(double u) const;

    // kappa(1) - (r - q); zero (to tolerance) for risk-neutral constructions
    double martingale_gap() const;

    // Tilt parameter of the jump measure e^{beta y} Pi_0(dy). BlackScholes
    // has an empty jump measure and is reported at the symmetric point.
    double symmetry_beta() const;
    bool is_symmetric(double tol = 1e-12) const;

    // Levy density nu(y) = e^{beta y} (delta alpha / pi) K1(alpha |y|) / |y|
    // (NIG only; DomainError at y = 0).
    double levy_density(double y) const;

    // terminal-law moments of X_t, used by the MC oracle
    double mean(double t) const;
    double variance(double t) const;

  private:
    LevyModel() = default;

    ModelVariant variant_ = ModelVariant::BlackScholes;
    NIGParams nig_{};
    double sigma_ = 0.0;
    double drift_ = 0.0; // BlackScholes drift a in psi(z) = i z a - sigma^2 z^2 / 2
    double r_ = 0.0;
    double q_ = 0.0;
    Strip strip_{0.0, 0.0};
};

} // namespace levysym
