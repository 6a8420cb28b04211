#include "levysym/shortcut.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "levysym/errors.hpp"

namespace levysym {

namespace {

using Complex = std::complex<double>;
constexpr Complex kI{0.0, 1.0};

void check_shortcut_domain(const MarketSpec& market) {
    if (market.sigma_atm < 0.0) throw DomainError("sigma_atm must be >= 0");
    if (!(market.maturity > 0.0)) throw DomainError("maturity must be > 0");
    market.validate();
}

// the symmetric, martingale-drifted NIG instance the sensitivity formulas assume
void check_sensitivity_model(const LevyModel& model) {
    if (model.variant() != ModelVariant::NormalInverseGaussian) {
        throw UnsupportedVariant("sensitivities require the NIG variant");
    }
    if (!model.is_symmetric(1e-9)) {
        std::ostringstream os;
        os << "sensitivities are defined at the symmetric point; got beta = "
           << model.symmetry_beta() << " (call symmetrized() first)";
        throw DomainError(os.str());
    }
    if (std::abs(model.martingale_gap()) > 1e-8) {
        throw DomainError("sensitivities require a martingale-drifted model");
    }
}

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

PriceResult digital_symmetric(const MarketSpec& market, OptionSide side) {
    check_shortcut_domain(market);
    const double half = -0.5 * market.sigma_atm * std::sqrt(market.maturity);
    const double df = market.discount();
    const double call = df * normal_cdf(half);

    PriceResult out;
    out.value = side == OptionSide::call ? call : df - call;
    out.abs_err_estimate = 0.0; // closed form
    out.method = Method::shortcut;
    return out;
}

PriceResult asset_or_nothing_symmetric(const MarketSpec& market) {
    check_shortcut_domain(market);
    const double half = -0.5 * market.sigma_atm * std::sqrt(market.maturity);
    PriceResult out;
    out.value = market.spot * market.discount() * (1.0 - normal_cdf(half));
    out.abs_err_estimate = 0.0;
    out.method = Method::shortcut;
    return out;
}

SensitivityPair sensitivities(const LevyModel& model, const MarketSpec& market,
                              const ContourSpec& contour) {
    market.validate();
    contour.validate();
    check_sensitivity_model(model);

    const double T = market.maturity;
    const double df = market.discount();
    const Strip st = model.strip();
    const double v =
        detail::resolve_contour_v(contour, 0.5, std::max(0.0, -st.im_hi), -st.im_lo);

    auto one = [](Complex) { return Complex{1.0, 0.0}; };
    auto expo = [&](Complex z) { return T * model.cumulant_centered(-z); };

    // i_x = d/dx digital(x)|_{x=0}
    //     = -(e^{-rT} / 2pi) Int_{Im z = v} e^{T psi_c(-z)} dz
    auto den_one = [](Complex) { return Complex{1.0, 0.0}; };
    detail::FoldedLine fx = detail::contour_fold(one, expo, den_one, 0.0, v, contour);
    const double i_x = -df * fx.value / (2.0 * M_PI);

    // i_beta uses the exponent's beta derivative moved along the martingale
    // manifold: D(z) = dpsi/dbeta(z) - i z dpsi/dbeta(-i), so that the drift
    // correction that keeps kappa(1) = r - q after a beta bump is included.
    const Complex dpsi_at_minus_i = model.cumulant_beta_derivative(-kI);
    auto num_beta = [&](Complex z) {
        return model.cumulant_beta_derivative(-z) + kI * z * dpsi_at_minus_i;
    };
    auto den_iz = [](Complex z) { return kI * z; };
    detail::FoldedLine fb = detail::contour_fold(num_beta, expo, den_iz, 0.0, v, contour);
    const double i_beta = -T * df * fb.value / (2.0 * M_PI);

    // finite-difference validation on the Fourier digital; the differenced
    // prices are divided by 2e-4, which amplifies quadrature noise 5000x, so
    // the probe evaluations run near machine accuracy or flat directions
    // (annualized parameters push i_beta to ~1e-4) drown in it
    ContourSpec fd_contour = contour;
    fd_contour.rel_tol = std::min(contour.rel_tol, 1e-13);

    const double hx = 1e-4;
    const double fp = price_digital_call_fourier(model, market, hx, fd_contour).value;
    const double fm = price_digital_call_fourier(model, market, -hx, fd_contour).value;
    const double fd_x = (fp - fm) / (2.0 * hx);

    const double hb = 1e-4;
    const NIGParams& p = model.nig();
    NIGParams up = p, dn = p;
    up.beta_skew += hb;
    dn.beta_skew -= hb;
    const LevyModel m_up = LevyModel::nig_risk_neutral(up, model.rate(), model.dividend());
    const LevyModel m_dn = LevyModel::nig_risk_neutral(dn, model.rate(), model.dividend());
    const double gp = price_digital_call_fourier(m_up, market, 0.0, fd_contour).value;
    const double gm = price_digital_call_fourier(m_dn, market, 0.0, fd_contour).value;
    const double fd_beta = (gp - gm) / (2.0 * hb);

    SensitivityPair out;
    out.i_beta = i_beta;
    out.i_x = i_x;
    out.diag_beta = fb.diag;
    out.diag_x = fx.diag;
    out.fd_rel_err_x = std::abs(i_x - fd_x) / std::max(std::abs(i_x), 1e-300);
    out.fd_rel_err_beta = std::abs(i_beta - fd_beta) / std::max(std::abs(i_beta), 1e-300);

    const double tol = 1e-3;
    if (out.fd_rel_err_x > tol || out.fd_rel_err_beta > tol) {
        std::ostringstream os;
        os << "analytic and finite-difference sensitivities disagree: "
           << "i_x=" << i_x << " vs fd " << fd_x << " (rel " << out.fd_rel_err_x
           << "), i_beta=" << i_beta << " vs fd " << fd_beta << " (rel "
           << out.fd_rel_err_beta << "); this signals a convention error";
        throw ConsistencyFailure(os.str());
    }
    return out;
}

PriceResult approx_digital(const PriceResult& base, const SensitivityPair& sens,
                           double beta, double x, const MarketSpec& market,
                           const ApproxConfig& cfg) {
    market.validate();
    const double db = beta + 0.5;

    PriceResult out;
    out.value = base.value + db * sens.i_beta + x * sens.i_x;
    out.abs_err_estimate = base.abs_err_estimate;
    out.method = Method::approx;
    out.diagnostics = base.diagnostics;
    out.extras = {{"base", base.value}, {"i_beta", sens.i_beta}, {"i_x", sens.i_x}};

    if (std::abs(db) > cfg.eps_beta) out.flags.push_back("outside_taylor_radius_beta");
    if (std::abs(x) > cfg.eps_x) out.flags.push_back("outside_taylor_radius_x");
    const double df = market.discount();
    if (out.value < 0.0 || out.value > df) out.flags.push_back("outside_price_range");
    return out;
}

void write_price_grid(std::ostream& os, const LevyModel& model, const MarketSpec& market,
                      double beta0, double x0, double eps_beta, double eps_x,
                      std::size_t n_beta, std::size_t n_x, const ContourSpec& contour) {
    market.validate();
    if (n_beta < 2 || n_x < 2) throw DomainError("grid needs at least 2 points per axis");
    if (!(eps_beta >= 0.0) || !(eps_x >= 0.0)) throw DomainError("grid radii must be >= 0");
    const NIGParams& p = model.nig();

    os << "beta,x,price\n";
    for (std::size_t j = 0; j < n_beta; ++j) {
        const double beta =
            beta0 + eps_beta * (2.0 * static_cast<double>(j) / (n_beta - 1) - 1.0);
        NIGParams pj = p;
        pj.beta_skew = beta;
        const LevyModel mj = LevyModel::nig_risk_neutral(pj, model.rate(), model.dividend());
        for (std::size_t i = 0; i < n_x; ++i) {
            const double x =
                x0 + eps_x * (2.0 * static_cast<double>(i) / (n_x - 1) - 1.0);
            const PriceResult pr = price_digital_call_fourier(mj, market, x, contour);
            os << g17(beta) << ',' << g17(x) << ',' << g17(pr.value) << '\n';
        }
    }
}

} // namespace levysym
