#include "doctest.h"

#include <cmath>

#include "levysym/errors.hpp"
#include "levysym/fourier.hpp"

using namespace levysym;

namespace {

const NIGParams kPhysical{0.0018, 49.99, 0.0085, -9.22};
const NIGParams kRiskNeutral{0.0, 49.99, 0.0085, -4.18}; // mu re-solved by the factory

MarketSpec unit_market(double rate = 0.0012, double maturity = 1.0) {
    MarketSpec m;
    m.spot = 1.0;
    m.rate = rate;
    m.maturity = maturity;
    return m;
}

bool rel_close(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

} // namespace

TEST_CASE("fourier: digital call reproduces the diffusion closed form") {
    for (double sigma : {0.15, 0.2741}) {
        for (double T : {0.5, 1.0, 2.0}) {
            const LevyModel bs = LevyModel::black_scholes(sigma, 0.0012, 0.0);
            const MarketSpec mkt = unit_market(0.0012, T);
            for (double x : {-0.2, 0.0, 0.1}) {
                const double got = price_digital_call_fourier(bs, mkt, x).value;
                const double want = bs_digital_call_price(sigma, mkt, x);
                CHECK(rel_close(got, want, 1e-10));
            }
        }
    }
}

TEST_CASE("fourier: digital parity is exact by construction") {
    const LevyModel m = LevyModel::nig_risk_neutral(kRiskNeutral, 0.0012, 0.0);
    const MarketSpec mkt = unit_market();
    for (double x : {-0.1, -0.005, 0.0, 0.02, 0.15}) {
        const double f = price_digital_call_fourier(m, mkt, x).value;
        const double g = price_digital_put_fourier(m, mkt, x).value;
        CHECK(f + g == mkt.discount());
    }
}

TEST_CASE("fourier: digital values against density-route references") {
    // mpmath at 40 digits integrates the Bessel-form density directly; the
    // library prices through a folded contour integral, so agreement here is
    // a genuine dual-route check
    const MarketSpec mkt = unit_market();
    const double f_rn =
        price_digital_call_fourier(LevyModel::nig_risk_neutral(kRiskNeutral, 0.0012, 0.0),
                                   mkt, 0.0)
            .value;
    CHECK(rel_close(f_rn, 0.511937721622466781, 1e-9));

    NIGParams sym = kRiskNeutral;
    sym.beta_skew = -0.5;
    const double f_sym =
        price_digital_call_fourier(LevyModel::nig_risk_neutral(sym, 0.0012, 0.0), mkt, 0.0)
            .value;
    CHECK(rel_close(f_sym, 0.49720548029698951911, 1e-9));
}

TEST_CASE("fourier: tail probability without the martingale constraint") {
    const LevyModel m = LevyModel::nig_as_given(kPhysical, 0.0012, 0.0);
    TailResult tr = tail_probability(m, 1.0, 0.005);
    CHECK(rel_close(tr.probability, 0.31216987392752019617, 1e-9));
    CHECK(tr.diagnostics.converged);
    CHECK(tr.abs_err < 1e-8);

    // complements sum to one across the distribution
    const double lo_tail = tail_probability(m, 1.0, -0.12).probability;
    CHECK(lo_tail > 0.9995);
    CHECK(lo_tail < 1.0 + 1e-10);

    CHECK_THROWS_AS(tail_probability(m, 0.0, 0.0), DomainError);
    CHECK_THROWS_AS(tail_probability(m, -1.0, 0.0), DomainError);
}

TEST_CASE("fourier: share-measure tilt matches the diffusion closed form") {
    const double sigma = 0.25, r = 0.01, T = 1.5;
    const LevyModel bs = LevyModel::black_scholes(sigma, r, 0.0);
    const MarketSpec mkt = unit_market(r, T);
    for (double x : {-0.15, 0.0, 0.2}) {
        const double got = price_asset_digital_fourier(bs, mkt, x).value;
        const double d1 = (-x + 0.5 * sigma * sigma * T) / (sigma * std::sqrt(T));
        CHECK(rel_close(got, normal_cdf(d1), 1e-10)); // spot = 1, q = 0
    }

    // tilting by one needs E e^X; this model has no such moment
    const LevyModel narrow = LevyModel::nig_as_given(NIGParams{0.0, 0.6, 0.01, 0.3}, 0.0, 0.0);
    CHECK_THROWS_AS(tail_probability(narrow, 1.0, 0.0, ContourSpec{}, 1.0), StripViolation);
}

TEST_CASE("fourier: lewis call agrees with the diffusion closed form") {
    for (double sigma : {0.1, 0.2741, 0.4}) {
        for (double T : {0.25, 1.0, 2.0}) {
            const LevyModel bs = LevyModel::black_scholes(sigma, 0.0012, 0.0);
            const MarketSpec mkt = unit_market(0.0012, T);
            for (double K : {0.8, 1.0, 1.25}) {
                const double got = price_call_lewis(bs, mkt, K).value;
                const double want = bs_call_price(sigma, mkt, K);
                CHECK(rel_close(got, want, 1e-9));
            }
        }
    }
}

TEST_CASE("fourier: pricing rejects a drift off the martingale manifold") {
    const LevyModel m = LevyModel::nig_as_given(kPhysical, 0.0012, 0.0); // gap ~ -9e-4
    const MarketSpec mkt = unit_market();
    CHECK_THROWS_AS(price_digital_call_fourier(m, mkt, 0.0), DomainError);
    CHECK_THROWS_AS(price_asset_digital_fourier(m, mkt, 0.0), DomainError);
    CHECK_THROWS_AS(price_call_lewis(m, mkt, 1.0), DomainError);
}

TEST_CASE("fourier: contour placement") {
    const LevyModel m = LevyModel::nig_risk_neutral(kRiskNeutral, 0.0012, 0.0);
    const MarketSpec mkt = unit_market();

    SUBCASE("an explicit admissible offset is honored and does not move the value") {
        const double base = price_digital_call_fourier(m, mkt, 0.01).value;
        for (double v : {0.3, 2.0, 10.0, 25.0}) {
            ContourSpec c;
            c.v = v;
            const PriceResult p = price_digital_call_fourier(m, mkt, 0.01, c);
            CHECK(p.diagnostics.contour_v == v);
            CHECK(rel_close(p.value, base, 1e-9));
        }
    }
    SUBCASE("offsets outside the window are rejected") {
        ContourSpec c;
        c.v = 60.0; // above alpha - beta = 54.17
        CHECK_THROWS_AS(price_digital_call_fourier(m, mkt, 0.0, c), StripViolation);
        c.v = -1.0; // the fold requires v > 0
        CHECK_THROWS_AS(price_digital_call_fourier(m, mkt, 0.0, c), StripViolation);
    }
    SUBCASE("a starved node budget is reported, not hidden") {
        ContourSpec c;
        c.max_nodes = 45;
        const PriceResult p = price_digital_call_fourier(m, mkt, 0.0, c);
        CHECK(!p.diagnostics.converged);
        CHECK(p.has_flag("quadrature_not_converged"));
    }
    SUBCASE("conjugate symmetry of the integrand holds on the contour") {
        const PriceResult p = price_digital_call_fourier(m, mkt, 0.0);
        CHECK(p.diagnostics.imag_residue < 1e-13);
        CHECK(p.diagnostics.converged);
        CHECK(p.diagnostics.nodes > 0);
    }
}

TEST_CASE("fourier: atm implied vol round trip") {
    const MarketSpec mkt = unit_market();
    // diffusion: the inversion must give back sigma
    const LevyModel bs = LevyModel::black_scholes(0.2741, 0.0012, 0.0);
    CHECK(rel_close(atm_implied_vol(bs, mkt), 0.2741, 1e-9));

    // symmetric NIG: reference from the density-route ATM call value
    NIGParams sym = kRiskNeutral;
    sym.beta_skew = -0.5;
    const LevyModel m = LevyModel::nig_risk_neutral(sym, 0.0012, 0.0);
    CHECK(rel_close(atm_implied_vol(m, mkt), 0.011016762155135992999, 1e-9));
}

TEST_CASE("fourier: input validation") {
    const LevyModel bs = LevyModel::black_scholes(0.2, 0.0012, 0.0);
    const MarketSpec mkt = unit_market();
    CHECK_THROWS_AS(price_call_lewis(bs, mkt, 0.0), DomainError);
    CHECK_THROWS_AS(price_call_lewis(bs, mkt, -1.0), DomainError);
    CHECK_THROWS_AS(bs_call_price(-0.1, mkt, 1.0), DomainError);
    CHECK_THROWS_AS(bs_digital_call_price(-0.1, mkt, 0.0), DomainError);

    MarketSpec bad = mkt;
    bad.maturity = 0.0;
    CHECK_THROWS_AS(price_digital_call_fourier(bs, bad, 0.0), ParameterError);
    bad = mkt;
    bad.spot = -1.0;
    CHECK_THROWS_AS(price_call_lewis(bs, bad, 1.0), ParameterError);
}
