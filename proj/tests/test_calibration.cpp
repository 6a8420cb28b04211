#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "levysym/calibration.hpp"
#include "levysym/errors.hpp"
#include "levysym/mc.hpp"
#include "levysym/nig.hpp"
#include "levysym/quadrature.hpp"

using namespace levysym;

namespace {

const NIGParams kPhysical{0.0018, 49.99, 0.0085, -9.22};

std::string write_csv(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
    return path.string();
}

bool rel_close(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

} // namespace

TEST_CASE("calibration: csv loader") {
    SUBCASE("prices become log increments, first date is consumed") {
        const std::string p = write_csv("lvt_prices.csv",
                                        "date,close\n"
                                        "2024-01-02,100.0\n"
                                        "2024-01-03,101.0\n"
                                        "2024-01-04,99.5\n"
                                        "2024-01-05,99.5\n");
        const ReturnsSeries s = load_returns(p, ReturnsMode::prices, 3);
        REQUIRE(s.size() == 3);
        REQUIRE(s.dates.size() == 3);
        CHECK(s.dates[0] == "2024-01-03");
        CHECK(s.log_returns[0] == std::log(101.0 / 100.0));
        CHECK(s.log_returns[1] == std::log(99.5 / 101.0));
        CHECK(s.log_returns[2] == 0.0);
    }
    SUBCASE("log returns are taken verbatim, header optional") {
        const std::string p = write_csv("lvt_rets.csv",
                                        "2024-01-03,0.00995\n"
                                        "2024-01-04,-0.0149\n"
                                        "2024-01-05,0.0\n");
        const ReturnsSeries s = load_returns(p, ReturnsMode::logreturns, 3);
        REQUIRE(s.size() == 3);
        CHECK(s.dates.size() == 3);
        CHECK(s.dates[0] == "2024-01-03");
        CHECK(s.log_returns[1] == -0.0149);
    }
    SUBCASE("blank lines and surrounding whitespace are tolerated") {
        const std::string p = write_csv("lvt_ws.csv",
                                        "date,logret\n\n"
                                        " 2024-01-03 , 0.01 \n"
                                        "2024-01-04,0.02\n\n");
        const ReturnsSeries s = load_returns(p, ReturnsMode::logreturns, 2);
        REQUIRE(s.size() == 2);
        CHECK(s.log_returns[0] == 0.01);
    }
    SUBCASE("malformed rows carry their line number") {
        const std::string three = write_csv("lvt_three.csv", "date,close\n2024-01-02,1,2\n");
        CHECK_THROWS_AS(load_returns(three, ReturnsMode::prices, 1), ParseError);
        try {
            load_returns(three, ReturnsMode::prices, 1);
        } catch (const ParseError& e) {
            CHECK(e.line_number == 2);
        }

        const std::string bad = write_csv("lvt_bad.csv", "2024-01-02,1.0\n2024-01-03,oops\n");
        CHECK_THROWS_AS(load_returns(bad, ReturnsMode::logreturns, 1), ParseError);

        const std::string neg =
            write_csv("lvt_neg.csv", "2024-01-02,1.0\n2024-01-03,-2.0\n2024-01-04,1.0\n");
        try {
            load_returns(neg, ReturnsMode::prices, 1);
            CHECK(false);
        } catch (const ParseError& e) {
            CHECK(e.line_number == 2);
        }
        // the same file is fine as raw log returns
        CHECK_NOTHROW(load_returns(neg, ReturnsMode::logreturns, 1));

        const std::string unordered =
            write_csv("lvt_ord.csv", "2024-01-03,1.0\n2024-01-02,1.1\n");
        CHECK_THROWS_AS(load_returns(unordered, ReturnsMode::logreturns, 1), ParseError);

        CHECK_THROWS_AS(load_returns("/nonexistent/levysym.csv", ReturnsMode::prices, 1),
                        ParseError);
    }
    SUBCASE("observation floor") {
        const std::string p =
            write_csv("lvt_floor.csv", "2024-01-02,1.0\n2024-01-03,1.1\n2024-01-04,1.2\n");
        // three prices make two returns; the default floor is 30
        CHECK_THROWS_AS(load_returns(p, ReturnsMode::prices), InsufficientData);
        CHECK_THROWS_AS(load_returns(p, ReturnsMode::prices, 3), InsufficientData);
        CHECK_NOTHROW(load_returns(p, ReturnsMode::prices, 2));
        try {
            load_returns(p, ReturnsMode::prices, 3);
        } catch (const InsufficientData& e) {
            CHECK(std::string(e.what()).find("need at least 4 prices, got 3") !=
                  std::string::npos);
        }
    }

    SUBCASE("up-and-back prices give opposite returns under a relaxed floor") {
        const std::string p = write_csv(
            "lvt_updown.csv", "2010-01-04,100\n2010-01-05,101\n2010-01-06,100\n");
        const ReturnsSeries rs = load_returns(p, ReturnsMode::prices, 2);
        REQUIRE(rs.size() == 2);
        CHECK(rs.log_returns[0] == doctest::Approx(std::log(1.01)).epsilon(1e-15));
        CHECK(rs.log_returns[1] == -rs.log_returns[0]);
    }

    SUBCASE("constant price series maps to all-zero returns") {
        std::string body;
        for (int i = 0; i < 40; ++i) {
            body += "2010-01-" + std::to_string(10 + i) + ",42.5\n";
        }
        const ReturnsSeries rs = load_returns(write_csv("lvt_const.csv", body),
                                              ReturnsMode::prices);
        REQUIRE(rs.size() == 39);
        for (double v : rs.log_returns) CHECK(v == 0.0);
    }
}

TEST_CASE("calibration: maximum likelihood recovers the generator") {
    const std::size_t n = 3000;
    const std::vector<double> x = sample_nig_terminal(kPhysical, 1.0, n, 20260815);
    const FitResult fit = fit_nig_mle(x);

    CHECK(fit.warnings.empty());
    CHECK(fit.iterations > 0);

    REQUIRE(std::isfinite(fit.std_errors[0]));
    REQUIRE(std::isfinite(fit.std_errors[1]));
    REQUIRE(std::isfinite(fit.std_errors[2]));
    REQUIRE(std::isfinite(fit.std_errors[3]));
    CHECK(std::abs(fit.params.mu - kPhysical.mu) <= 4.0 * fit.std_errors[0]);
    CHECK(std::abs(fit.params.alpha_tail - kPhysical.alpha_tail) <= 4.0 * fit.std_errors[1]);
    CHECK(std::abs(fit.params.delta_scale - kPhysical.delta_scale) <= 4.0 * fit.std_errors[2]);
    CHECK(std::abs(fit.params.beta_skew - kPhysical.beta_skew) <= 4.0 * fit.std_errors[3]);

    // the reported likelihood is the total over observations at the optimum
    double ll = 0.0;
    for (double v : x) ll += nig_log_density(fit.params, v, 1.0);
    CHECK(rel_close(fit.log_likelihood, ll, 1e-10));

    // restarting at the optimum terminates immediately on the gradient test
    FitOptions warm;
    warm.use_init = true;
    warm.init = fit.params;
    const FitResult again = fit_nig_mle(x, warm);
    CHECK(again.iterations <= 2);
    CHECK(std::abs(again.params.beta_skew - fit.params.beta_skew) <=
          1e-3 * std::abs(fit.params.beta_skew));
}

TEST_CASE("calibration: near-gaussian data stays near the gaussian limit") {
    // alpha large with delta = alpha sigma^2 approaches N(mu, sigma^2); the
    // likelihood is nearly flat along that ridge, so the fit may wander in
    // alpha. What must hold: it terminates, and the fitted density stays
    // within KL 1e-3 of the plain gaussian fit of the same sample.
    const double sigma = 0.01;
    const NIGParams gen{0.0, 500.0, 500.0 * sigma * sigma, 0.0};
    const std::vector<double> x = sample_nig_terminal(gen, 1.0, 20'000, 7);
    const FitResult fit = fit_nig_mle(x);

    CHECK(fit.iterations > 0);
    CHECK((fit.params.alpha_tail > 100.0 || fit.has_warning("beta_near_boundary")));

    double m = 0.0;
    for (double v : x) m += v;
    m /= static_cast<double>(x.size());
    double s2 = 0.0;
    for (double v : x) s2 += (v - m) * (v - m);
    s2 /= static_cast<double>(x.size());
    const double sd = std::sqrt(s2);

    const auto kl = integrate_adaptive(
        [&](double y) {
            const double phi =
                std::exp(-0.5 * (y - m) * (y - m) / s2) / (sd * std::sqrt(2.0 * M_PI));
            return phi * std::log(phi / nig_density(fit.params, y, 1.0));
        },
        m - 8.0 * sd, m + 8.0 * sd, 1e-10);
    REQUIRE(kl.converged);
    CHECK(kl.value < 1e-3);
}

TEST_CASE("calibration: annualization rescales the time axis only") {
    const std::vector<double> x = sample_nig_terminal(kPhysical, 1.0, 2000, 77);
    const FitResult daily = fit_nig_mle(x);
    FitOptions opt;
    opt.annualize = true;
    const FitResult annual = fit_nig_mle(x, opt);

    CHECK(annual.params.mu == doctest::Approx(252.0 * daily.params.mu).epsilon(1e-12));
    CHECK(annual.params.delta_scale ==
          doctest::Approx(252.0 * daily.params.delta_scale).epsilon(1e-12));
    CHECK(annual.params.alpha_tail == daily.params.alpha_tail);
    CHECK(annual.params.beta_skew == daily.params.beta_skew);
    CHECK(annual.std_errors[0] == doctest::Approx(252.0 * daily.std_errors[0]).epsilon(1e-12));
    CHECK(annual.std_errors[2] == doctest::Approx(252.0 * daily.std_errors[2]).epsilon(1e-12));
    CHECK(annual.std_errors[1] == daily.std_errors[1]);
    CHECK(annual.std_errors[3] == daily.std_errors[3]);
    CHECK(annual.log_likelihood == daily.log_likelihood);
}

TEST_CASE("calibration: fit guard rails") {
    const std::vector<double> x = sample_nig_terminal(kPhysical, 1.0, 500, 3);

    CHECK_THROWS_AS(fit_nig_mle(std::vector<double>(29, 0.001)), InsufficientData);

    std::vector<double> poisoned = x;
    poisoned[100] = std::nan("");
    CHECK_THROWS_AS(fit_nig_mle(poisoned), ParameterError);

    FitOptions starved;
    starved.use_init = true;
    starved.init = NIGParams{0.05, 1.0, 1.0, 0.0}; // far from any optimum here
    starved.max_iterations = 1;
    starved.gradient_tol = 1e-10;
    CHECK_THROWS_AS(fit_nig_mle(x, starved), OptimizationFailure);
}

TEST_CASE("calibration: esscher transform hits the martingale manifold") {
    const double r = 0.0012;
    const EsscherResult e = esscher_transform(kPhysical, r, 0.0);

    // 40-digit reference root: beta* = -4.0197704105090619532. The gap is flat
    // to roundoff near the root, so double bisection resolves it only to a few
    // e-12; the tolerance reflects that noise band, not the solver quality.
    CHECK(std::abs(e.params.beta_skew - (-4.0197704105090619532)) <= 5e-12);
    CHECK(std::abs(e.gap) <= 1e-12);
    CHECK(e.params.beta_skew == doctest::Approx(kPhysical.beta_skew + e.theta_star)
                                    .epsilon(1e-15));
    CHECK(e.params.mu == kPhysical.mu);
    CHECK(e.params.alpha_tail == kPhysical.alpha_tail);
    CHECK(e.params.delta_scale == kPhysical.delta_scale);
    CHECK(e.bracket_lo == doctest::Approx(-40.77).epsilon(1e-13));
    CHECK(e.bracket_hi == doctest::Approx(58.21).epsilon(1e-13));
    CHECK(e.iterations > 0);
    CHECK(e.iterations <= 200);

    // the shifted model really is a martingale under (r, q)
    const LevyModel m = LevyModel::nig_as_given(e.params, r, 0.0);
    CHECK(std::abs(m.martingale_gap()) <= 1e-12);
}

TEST_CASE("calibration: esscher transform is idempotent") {
    const EsscherResult first = esscher_transform(kPhysical, 0.0012, 0.0);
    const EsscherResult second = esscher_transform(first.params, 0.0012, 0.0);
    CHECK(second.theta_star == 0.0);
    CHECK(second.params.mu == first.params.mu);
    CHECK(second.params.alpha_tail == first.params.alpha_tail);
    CHECK(second.params.delta_scale == first.params.delta_scale);
    CHECK(second.params.beta_skew == first.params.beta_skew);
}

TEST_CASE("calibration: esscher rejects unreachable targets") {
    // alpha <= 1/2: the bracket (-alpha-beta, alpha-beta-1) is empty
    CHECK_THROWS_AS(esscher_transform(NIGParams{0.0, 0.4, 0.1, 0.1}, 0.0, 0.0),
                    NoRootInBracket);
    // attainable range is mu +- delta sqrt(2 alpha - 1) = +-0.0447 here
    CHECK_THROWS_AS(esscher_transform(NIGParams{0.0, 0.6, 0.1, 0.0}, 0.1, 0.0),
                    NoRootInBracket);
    CHECK_NOTHROW(esscher_transform(NIGParams{0.0, 0.6, 0.1, 0.0}, 0.01, 0.0));
}
