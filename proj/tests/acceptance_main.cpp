// Acceptance gate: nine numbered criteria, one verdict line each, tolerances
// pinned in this file. Usage: levysym_acceptance [k] with k in 1..9; no
// argument runs the full set. Exit status is the number of failed criteria.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "levysym/calibration.hpp"
#include "levysym/errors.hpp"
#include "levysym/fourier.hpp"
#include "levysym/mc.hpp"
#include "levysym/power.hpp"
#include "levysym/shortcut.hpp"

using namespace levysym;

namespace {

const NIGParams kPhysical{0.0018, 49.99, 0.0085, -9.22};
const NIGParams kQuotedRn{0.0018, 49.99, 0.0085, -4.18};
const NIGParams kSymmetric{0.0, 49.99, 0.0085, -0.5};

MarketSpec sp500_market() {
    MarketSpec m;
    m.spot = 1.0;
    m.rate = 0.0012;
    m.dividend = 0.0;
    m.maturity = 1.0;
    m.sigma_atm = 0.2741;
    return m;
}

const char* verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

// 1. closed-form ATM digitals against the published 4-decimal values
bool criterion_1() {
    const MarketSpec mkt = sp500_market();
    const double call = digital_symmetric(mkt, OptionSide::call).value;
    const double put = digital_symmetric(mkt, OptionSide::put).value;
    const double tol = 5e-5;
    const double dc = std::abs(call - 0.4449);
    const double dp = std::abs(put - 0.5539);
    const bool ok = dc <= tol && dp <= tol;
    std::printf("CRITERION 1: %s - atm digital call %.10g vs 0.4449 (|diff| %.3g), "
                "put %.10g vs 0.5539 (|diff| %.3g), tolerance %.0e\n",
                verdict(ok), call, dc, put, dp, tol);
    return ok;
}

// 2. Esscher step from the physical parameters
bool criterion_2() {
    const EsscherResult e = esscher_transform(kPhysical, 0.0012, 0.0);
    const double db = std::abs(e.params.beta_skew - (-4.18));
    const bool ok_beta = db <= 0.01;
    const bool ok_gap = std::abs(e.gap) < 1e-10;
    const bool ok = ok_beta && ok_gap;
    std::printf("CRITERION 2: %s - risk-neutral beta %.10g vs -4.18 +- 0.01 "
                "(|diff| %.4g, %s), martingale gap %.3g vs 1e-10 (%s)\n",
                verdict(ok), e.params.beta_skew, db, verdict(ok_beta), e.gap,
                verdict(ok_gap));
    return ok;
}

// 3. down-and-in power contract, reproduction mode
bool criterion_3() {
    const MarketSpec mkt = sp500_market();
    const LevyModel m = LevyModel::nig_as_given(kQuotedRn, 0.0012, 0.0);
    const ConjugationSpec spec = make_conjugation(m);
    const bool ok_drift = spec.power_drift == 0.0018;
    const double value = price_down_and_in_power(m, mkt, PowerPriceMode::reproduction).value;
    const double ref = 0.4449 * std::exp(0.015);
    const double dv = std::abs(value - ref);
    const bool ok = ok_drift && dv <= 1e-4;
    std::printf("CRITERION 3: %s - reproduction price %.10g vs 0.4449*e^0.015 = %.10g "
                "(|diff| %.3g, tolerance 1e-04), power drift %.10g == 0.0018 exactly (%s)\n",
                verdict(ok), value, ref, dv, spec.power_drift, verdict(ok_drift));
    return ok;
}

// 4. transform engine against the diffusion closed forms, 10 combinations
bool criterion_4() {
    struct Combo {
        double strike, sigma, maturity;
    };
    const Combo combos[10] = {{0.80, 0.10, 0.25}, {0.90, 0.15, 0.50}, {1.00, 0.20, 1.00},
                              {1.10, 0.25, 2.00}, {1.25, 0.30, 1.00}, {0.85, 0.35, 0.50},
                              {0.95, 0.40, 0.25}, {1.05, 0.10, 2.00}, {1.15, 0.20, 0.50},
                              {1.00, 0.30, 0.25}};
    double worst_call = 0.0, worst_digital = 0.0;
    for (const Combo& c : combos) {
        MarketSpec mkt;
        mkt.spot = 1.0;
        mkt.rate = 0.0012;
        mkt.maturity = c.maturity;
        const LevyModel bs = LevyModel::black_scholes(c.sigma, mkt.rate, 0.0);

        const double lewis = price_call_lewis(bs, mkt, c.strike).value;
        const double bs_ref = bs_call_price(c.sigma, mkt, c.strike);
        worst_call = std::max(worst_call, std::abs(lewis - bs_ref) / bs_ref);

        const double x = std::log(c.strike / mkt.forward());
        const double dig = price_digital_call_fourier(bs, mkt, x).value;
        const double sd = c.sigma * std::sqrt(c.maturity);
        const double d2 = (-x - 0.5 * sd * sd) / sd;
        const double dig_ref = mkt.discount() * normal_cdf(d2);
        worst_digital = std::max(worst_digital, std::abs(dig - dig_ref));
    }
    const bool ok = worst_call <= 1e-6 && worst_digital <= 1e-8;
    std::printf("CRITERION 4: %s - 10 (K, sigma, T) combinations: worst call error "
                "%.3g relative (gate 1e-06), worst digital error %.3g absolute (gate 1e-08)\n",
                verdict(ok), worst_call, worst_digital);
    return ok;
}

// 5. symmetric-model consistency loop through the implied vol
bool criterion_5() {
    const MarketSpec mkt = sp500_market();
    const LevyModel sym = LevyModel::nig_risk_neutral(kSymmetric, 0.0012, 0.0);
    const double digital = price_digital_call_fourier(sym, mkt, 0.0).value;
    const double sigma_imp = atm_implied_vol(sym, mkt);
    const double ref =
        mkt.discount() * normal_cdf(-0.5 * sigma_imp * std::sqrt(mkt.maturity));
    const double dv = std::abs(digital - ref);
    const bool ok = dv <= 1e-3;
    std::printf("CRITERION 5: %s - fourier atm digital %.10g vs shortcut at implied vol "
                "%.10g -> %.10g (|diff| %.3g, tolerance 1e-03)\n",
                verdict(ok), digital, sigma_imp, ref, dv);
    return ok;
}

// 6. sensitivity cross-validation; reference-pair reproduction attempt
bool criterion_6() {
    const MarketSpec mkt = sp500_market();
    bool ok_fd = true;
    SensitivityPair daily{}, annual{};
    std::string fd_note;
    try {
        daily = sensitivities(LevyModel::nig_risk_neutral(kSymmetric, 0.0012, 0.0), mkt);
        annual = sensitivities(
            LevyModel::nig_risk_neutral(scale_time(kSymmetric, 252.0), 0.0012, 0.0), mkt);
        ok_fd = daily.fd_rel_err_beta <= 1e-3 && daily.fd_rel_err_x <= 1e-3 &&
                annual.fd_rel_err_beta <= 1e-3 && annual.fd_rel_err_x <= 1e-3;
    } catch (const Error& e) {
        ok_fd = false;
        fd_note = std::string("; ") + e.what();
    }
    std::printf("CRITERION 6: %s - analytic vs finite-difference agreement: daily units "
                "(%.3g, %.3g), annualized (%.3g, %.3g), gate 1e-03 on each%s\n",
                verdict(ok_fd), daily.fd_rel_err_beta, daily.fd_rel_err_x,
                annual.fd_rel_err_beta, annual.fd_rel_err_x, fd_note.c_str());

    // reproduction attempt, 5% relative after sign reconciliation
    auto matches = [](double got, double ref) {
        return std::abs(std::abs(got) - ref) <= 0.05 * ref;
    };
    const bool daily_match = matches(daily.i_beta, 0.2621) && matches(daily.i_x, 7.3212);
    const bool annual_match = matches(annual.i_beta, 0.2621) && matches(annual.i_x, 7.3212);
    if (daily_match || annual_match) {
        std::printf("  note: reference pair (0.2621, 7.3212) reproduced under the %s "
                    "convention\n",
                    daily_match ? "daily" : "annualized");
    } else {
        std::printf("  note: reference pair (0.2621, 7.3212) matched by neither unit "
                    "convention: daily |i_beta|, |i_x| = %.4g, %.4g; annualized %.4g, "
                    "%.4g (5%% tolerance, sign-reconciled). Discrepancy documented; the "
                    "finite-difference agreement above is the binding check.\n",
                    std::abs(daily.i_beta), std::abs(daily.i_x), std::abs(annual.i_beta),
                    std::abs(annual.i_x));
    }
    return ok_fd;
}

// 7. Monte Carlo verification of the conjugation identity
bool criterion_7() {
    const MarketSpec mkt = sp500_market();
    PayoffSpec pay;
    pay.kind = PayoffKind::digital_call;
    pay.level = 1.0;

    bool ok = true;
    std::string detail;
    char buf[160];
    for (double beta : {-4.18, -0.5, 0.0}) {
        NIGParams p = kSymmetric;
        p.beta_skew = beta;
        const LevyModel m = LevyModel::nig_risk_neutral(p, 0.0012, 0.0);
        const ConjugationCheck c = verify_conjugation(m, mkt, pay, 1'000'000, 777);
        ok = ok && c.pass;
        std::snprintf(buf, sizeof buf, "%sbeta %.4g: |lhs-rhs| %.3g vs 3se %.3g (%s)",
                      detail.empty() ? "" : "; ", beta, std::abs(c.lhs - c.rhs),
                      3.0 * c.combined_se, verdict(c.pass));
        detail += buf;
    }
    std::printf("CRITERION 7: %s - weighted-reflection identity, n=1e6 per side: %s\n",
                verdict(ok), detail.c_str());
    return ok;
}

// 8. property suite
bool criterion_8() {
    const MarketSpec mkt = sp500_market();
    const LevyModel rn = LevyModel::nig_risk_neutral(kQuotedRn, 0.0012, 0.0);

    // (a) digital parity, exact
    bool ok_parity = true;
    for (double x : {-0.1, -0.005, 0.0, 0.02, 0.15}) {
        const double f = price_digital_call_fourier(rn, mkt, x).value;
        const double g = price_digital_put_fourier(rn, mkt, x).value;
        ok_parity = ok_parity && (f + g == mkt.discount());
    }

    // (b) contour invariance across 5 admissible offsets
    const double base = price_digital_call_fourier(rn, mkt, 0.01).value;
    double worst_shift = 0.0;
    for (double v : {0.3, 0.5, 2.0, 10.0, 25.0}) {
        ContourSpec c;
        c.v = v;
        const double moved = price_digital_call_fourier(rn, mkt, 0.01, c).value;
        worst_shift = std::max(worst_shift, std::abs(moved - base) / base);
    }
    const bool ok_contour = worst_shift <= std::max(ContourSpec{}.rel_tol, 1e-8);

    // (c) digital monotonicity on a 21-point level grid
    bool ok_mono = true;
    double prev = 2.0;
    for (int i = 0; i < 21; ++i) {
        const double x = -0.05 + 0.005 * i;
        const double f = price_digital_call_fourier(rn, mkt, x).value;
        ok_mono = ok_mono && f < prev;
        prev = f;
    }

    // (d) jump-density mirror condition holds at beta = -1/2, fails at -0.4
    const LevyModel sym = LevyModel::nig_risk_neutral(kSymmetric, 0.0012, 0.0);
    NIGParams p04 = kSymmetric;
    p04.beta_skew = -0.4;
    const LevyModel m04 = LevyModel::nig_as_given(p04, 0.0012, 0.0);
    double dev_sym = 0.0, dev_04 = 0.0;
    for (double y : {0.05, 0.2, 0.5, 1.0}) {
        dev_sym = std::max(dev_sym, std::abs(sym.levy_density(y) /
                                                 (std::exp(-y) * sym.levy_density(-y)) -
                                             1.0));
        dev_04 = std::max(dev_04, std::abs(m04.levy_density(y) /
                                               (std::exp(-y) * m04.levy_density(-y)) -
                                           1.0));
    }
    const bool ok_mirror = dev_sym <= 1e-12 && dev_04 > 1e-3;

    // (e) Esscher idempotence
    const EsscherResult once = esscher_transform(kPhysical, 0.0012, 0.0);
    const EsscherResult twice = esscher_transform(once.params, 0.0012, 0.0);
    const bool ok_fixed = twice.theta_star == 0.0 &&
                          twice.params.beta_skew == once.params.beta_skew &&
                          twice.params.mu == once.params.mu;

    // (f) Monte Carlo determinism across thread counts
    const auto s1 = sample_nig_terminal(kPhysical, 1.0, 150'000, 7, 1);
    const auto s4 = sample_nig_terminal(kPhysical, 1.0, 150'000, 7, 4);
    const bool ok_det = s1 == s4;

    const bool ok = ok_parity && ok_contour && ok_mono && ok_mirror && ok_fixed && ok_det;
    std::printf("CRITERION 8: %s - parity exact (%s), contour invariance %.3g vs 1e-08 "
                "(%s), digital monotonicity (%s), mirror condition holds at -1/2 / fails "
                "at -0.4: %.3g / %.3g (%s), esscher idempotent (%s), mc thread-count "
                "determinism (%s)\n",
                verdict(ok), verdict(ok_parity), worst_shift, verdict(ok_contour),
                verdict(ok_mono), dev_sym, dev_04, verdict(ok_mirror), verdict(ok_fixed),
                verdict(ok_det));
    return ok;
}

// 9. calibration round trip on synthetic data
bool criterion_9() {
    const std::size_t n = 50'000;
    const NIGParams gen{0.001, 40.0, 0.01, -8.0};
    const std::vector<double> x = sample_nig_terminal(gen, 1.0, n, 90210);
    const FitResult fit = fit_nig_mle(x);

    const double truth[4] = {gen.mu, gen.alpha_tail, gen.delta_scale, gen.beta_skew};
    const double got[4] = {fit.params.mu, fit.params.alpha_tail, fit.params.delta_scale,
                           fit.params.beta_skew};
    bool ok = fit.warnings.empty();
    double z[4];
    for (int i = 0; i < 4; ++i) {
        z[i] = (got[i] - truth[i]) / fit.std_errors[i];
        ok = ok && std::isfinite(z[i]) && std::abs(z[i]) <= 3.0;
    }
    std::printf("CRITERION 9: %s - mle on %zu synthetic draws, z-scores (mu %.2f, alpha "
                "%.2f, delta %.2f, beta %.2f) all within 3 standard errors, %zu "
                "iterations\n",
                verdict(ok), n, z[0], z[1], z[2], z[3], fit.iterations);
    return ok;
}

using Criterion = bool (*)();
const Criterion kCriteria[9] = {criterion_1, criterion_2, criterion_3,
                                criterion_4, criterion_5, criterion_6,
                                criterion_7, criterion_8, criterion_9};

} // namespace

int main(int argc, char** argv) {
    int lo = 0, hi = 9;
    if (argc > 1) {
        const int k = std::atoi(argv[1]);
        if (argc > 2 || k < 1 || k > 9) {
            std::fprintf(stderr, "usage: %s [criterion 1..9]\n", argv[0]);
            return 64;
        }
        lo = k - 1;
        hi = k;
    }
    int failures = 0;
    for (int i = lo; i < hi; ++i) {
        try {
            if (!kCriteria[i]()) ++failures;
        } catch (const std::exception& e) {
            std::printf("CRITERION %d: FAIL - unexpected exception: %s\n", i + 1, e.what());
            ++failures;
        }
    }
    return failures;
}
