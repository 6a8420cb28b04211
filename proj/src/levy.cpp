#include "levysym/levy.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "levysym/errors.hpp"

namespace levysym {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_rates(double r, double q) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw ParameterError("rate must be finite and >= 0");
    if (!(q >= 0.0) || !std::isfinite(q)) throw ParameterError("dividend must be finite and >= 0");
}

// NIG martingale drift from kappa(1) = r - q:
//   mu = (r - q) - delta (gamma - sqrt(alpha^2 - (beta+1)^2))
double nig_martingale_drift(const NIGParams& p, double r, double q) {
    const double b1 = p.beta_skew + 1.0;
    if (!(std::abs(b1) < p.alpha_tail)) {
        std::ostringstream os;
        os << "martingale drift needs |beta+1| < alpha (E e^X finite); beta="
           << p.beta_skew << ", alpha=" << p.alpha_tail;
        throw StripViolation(os.str());
    }
    const double root = std::sqrt(p.alpha_tail * p.alpha_tail - b1 * b1);
    return (r - q) - p.delta_scale * (p.gamma() - root);
}

} // namespace

LevyModel LevyModel::black_scholes(double sigma, double r, double q) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw ParameterError("BlackScholes sigma must be finite and >= 0");
    }
    check_rates(r, q);
    LevyModel m;
    m.variant_ = ModelVariant::BlackScholes;
    m.sigma_ = sigma;
    m.drift_ = r - q - 0.5 * sigma * sigma;
    m.r_ = r;
    m.q_ = q;
    m.strip_ = Strip{-kInf, kInf};
    return m;
}

LevyModel LevyModel::nig_risk_neutral(NIGParams base, double r, double q) {
    validate(base);
    check_rates(r, q);
    base.mu = nig_martingale_drift(base, r, q);
    LevyModel m;
    m.variant_ = ModelVariant::NormalInverseGaussian;
    m.nig_ = base;
    m.r_ = r;
    m.q_ = q;
    // psi(z) finite iff Im(z) in (beta - alpha, beta + alpha)
    m.strip_ = Strip{base.beta_skew - base.alpha_tail, base.beta_skew + base.alpha_tail};
    return m;
}

LevyModel LevyModel::nig_as_given(NIGParams p, double r, double q) {
    validate(p);
    check_rates(r, q);
    LevyModel m;
    m.variant_ = ModelVariant::NormalInverseGaussian;
    m.nig_ = p;
    m.r_ = r;
    m.q_ = q;
    m.strip_ = Strip{p.beta_skew - p.alpha_tail, p.beta_skew + p.alpha_tail};
    return m;
}

LevyModel LevyModel::symmetrized() const {
    if (variant_ == ModelVariant::BlackScholes) return *this;
    NIGParams p = nig_;
    p.beta_skew = -0.5;
    return nig_risk_neutral(p, r_, q_);
}

const NIGParams& LevyModel::nig() const {
    if (variant_ != ModelVariant::NormalInverseGaussian) {
        throw UnsupportedVariant("operation requires the NIG variant");
    }
    return nig_;
}

double LevyModel::sigma_diff() const {
    if (variant_ != ModelVariant::BlackScholes) {
        throw UnsupportedVariant("operation requires the BlackScholes variant");
    }
    return sigma_;
}

std::complex<double> LevyModel::cumulant(std::complex<double> z) const {
    if (variant_ == ModelVariant::BlackScholes) {
        const std::complex<double> i(0.0, 1.0);
        return i * z * drift_ - 0.5 * sigma_ * sigma_ * z * z;
    }
    if (!strip_.contains_im(z.imag())) {
        std::ostringstream os;
        os << "Im(z)=" << z.imag() << " outside the admissible strip ("
           << strip_.im_lo << ", " << strip_.im_hi << ")";
        throw StripViolation(os.str());
    }
    return nig_psi(nig_, z);
}

std::complex<double> LevyModel::cumulant_centered(std::complex<double> z) const {
    const std::complex<double> i(0.0, 1.0);
    return cumulant(z) - i * z * kappa(1.0);
}

std::complex<double> LevyModel::cumulant_beta_derivative(std::complex<double> z) const {
    if (variant_ != ModelVariant::NormalInverseGaussian) {
        throw UnsupportedVariant("beta derivative requires a jump tilt (NIG variant)");
    }
    if (!strip_.contains_im(z.imag())) {
        std::ostringstream os;
        os << "Im(z)=" << z.imag() << " outside the admissible strip ("
           << strip_.im_lo << ", " << strip_.im_hi << ")";
        throw StripViolation(os.str());
    }
    return nig_psi_dbeta(nig_, z);
}

double LevyModel::kappa(double u) const {
    if (variant_ == ModelVariant::BlackScholes) {
        return u * drift_ + 0.5 * sigma_ * sigma_ * u * u;
    }
    if (!strip_.contains_exponent(u)) {
        std::ostringstream os;
        os << "exponent u=" << u << " outside the admissible range ("
           << -strip_.im_hi << ", " << -strip_.im_lo << "): E e^{uX} diverges";
        throw StripViolation(os.str());
    }
    // real arithmetic: kappa(u) = mu u + delta (gamma - sqrt(alpha^2 - (beta+u)^2))
    const NIGParams& p = nig_;
    const double bu = p.beta_skew + u;
    const double root = std::sqrt(p.alpha_tail * p.alpha_tail - bu * bu);
    return p.mu * u + p.delta_scale * (p.gamma() - root);
}

double LevyModel::martingale_gap() const {
    return kappa(1.0) - (r_ - q_);
}

double LevyModel::symmetry_beta() const {
    if (variant_ == ModelVariant::BlackScholes) return -0.5;
    return nig_.beta_skew;
}

bool LevyModel::is_symmetric(double tol) const {
    if (variant_ == ModelVariant::BlackScholes) return true; // empty jump measure
    return std::abs(nig_.beta_skew + 0.5) <= tol;
}

double LevyModel::levy_density(double y) const {
    if (variant_ != ModelVariant::NormalInverseGaussian) {
        throw UnsupportedVariant("Levy density exposed for the NIG variant only");
    }
    if (y == 0.0) throw DomainError("Levy density undefined at y = 0");
    const NIGParams& p = nig_;
    const double ay = std::abs(y);
    const double nu0 = p.delta_scale * p.alpha_tail / M_PI * bessel_k1(p.alpha_tail * ay) / ay;
    return std::exp(p.beta_skew * y) * nu0;
}

double LevyModel::mean(double t) const {
    if (variant_ == ModelVariant::BlackScholes) return t * drift_;
    return nig_mean_variance(nig_, t).first;
}

double LevyModel::variance(double t) const {
    if (variant_ == ModelVariant::BlackScholes) return t * sigma_ * sigma_;
    return nig_mean_variance(nig_, t).second;
}

} // namespace levysym
