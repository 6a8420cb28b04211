#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "levysym/nig.hpp"

namespace levysym {

enum class ReturnsMode { prices, logreturns };

// Ordered daily log-returns. Dates are carried verbatim; they are validated
// for strict ordering at load time and never interpreted as calendar dates.
struct ReturnsSeries {
    std::vector<std::string> dates;
    std::vector<double> log_returns;

    std::size_t size() const { return log_returns.size(); }
};

// CSV loader. Columns are `date,close` (prices mode, emits log(P_{t+1}/P_t),
// so n rows yield n-1 returns) or `date,logret` (taken as-is). A header row
// is detected by a non-numeric second field and skipped. min_returns is the
// usual 30-observation calibration floor; tests relax it.
//
// Throws ParseError (with 1-based line number) on malformed rows, nonpositive
// prices, or out-of-order dates; InsufficientData below the floor.
ReturnsSeries load_returns(const std::string& path, ReturnsMode mode,
                           std::size_t min_returns = 30);

struct FitOptions {
    std::size_t max_iterations = 300;
    double gradient_tol = 1e-6;  // on the max-norm, scaled by max(1, |nll|)
    bool annualize = false;      // rescale fitted (mu, delta) by 252 on output
    bool use_init = false;       // take `init` instead of method-of-moments
    NIGParams init{};
};

struct FitResult {
    NIGParams params;
    std::array<double, 4> std_errors{};  // asymptotic, order (mu, alpha, delta, beta)
    double log_likelihood = 0.0;
    double gradient_norm = 0.0;  // scaled max-norm at the optimum
    std::size_t iterations = 0;
    std::vector<std::string> warnings;

    bool has_warning(const std::string& w) const;
};

// Maximum likelihood fit of the per-observation NIG density, each return one
// unit of model time. Quasi-Newton (BFGS) on the unconstrained coordinates
//   (mu, log alpha, log delta, w)  with  beta = alpha * tanh(w),
// which keeps |beta| < alpha strictly and stays smooth through beta = 0;
// analytic gradient, Armijo backtracking line search. Standard errors are the
// diagonal of the inverse numeric Hessian in the original coordinates.
//
// Warnings: "beta_near_boundary" when |beta| >= 0.99 alpha at the optimum,
// "std_errors_unavailable" when the Hessian is not positive definite.
// Throws OptimizationFailure when the gradient test is not met within the
// iteration budget, InsufficientData below 30 observations.
FitResult fit_nig_mle(const std::vector<double>& log_returns, const FitOptions& options = {});

struct EsscherResult {
    NIGParams params;       // input with beta shifted by theta_star
    double theta_star = 0.0;
    double gap = 0.0;       // kappa(1) - (r - q) of the shifted model
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    std::size_t iterations = 0;
};

// Exponential tilt to the risk-neutral measure: finds the root theta* of
//   kappa_{beta+theta}(1) = r - q
// on the admissible bracket theta in (-alpha - beta, alpha - beta - 1), which
// keeps both the tilted parameters valid and E[S] finite. The map is monotone
// increasing in theta; that is re-verified on a grid before bisecting, so a
// root found is the root. Resulting martingale gap is below 1e-10 in |.|
// relative to max(1, |r - q|).
//
// Throws NoRootInBracket when r - q lies outside the attainable range
// (mu - delta*sqrt(2 alpha - 1), mu + delta*sqrt(2 alpha - 1)); the message
// carries both endpoint values. Requires alpha > 1/2 for a nonempty bracket.
EsscherResult esscher_transform(const NIGParams& params, double r, double q);

} // namespace levysym
