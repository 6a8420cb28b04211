#pragma once

#include <iosfwd>

#include "levysym/fourier.hpp"
#include "levysym/levy.hpp"
#include "levysym/types.hpp"

namespace levysym {

enum class OptionSide { call, put };

// ATM digital prices in a symmetric market, exact given the ATM implied vol:
//   call: e^{-rT} N(-sigma sqrt(T)/2),  put: e^{-rT} [1 - N(-sigma sqrt(T)/2)].
// sigma is market.sigma_atm (callers may instead feed atm_implied_vol output
// through the market spec).
PriceResult digital_symmetric(const MarketSpec& market, OptionSide side);

// Asset-or-nothing option with barrier S0^2 under symmetry:
//   p = S0 e^{-rT} [1 - N(-sigma sqrt(T)/2)]; linear in S0.
PriceResult asset_or_nothing_symmetric(const MarketSpec& market);

// First-order sensitivities of the ATM digital call at the symmetric point
// (beta, x) = (-1/2, 0):
//   i_x    = d price / d x     = -e^{-rT} * (density of the centered log price at 0)
//   i_beta = d price / d beta, the tilt moved along the martingale manifold
//            (the drift is re-solved after each beta bump, so the derivative
//            uses the compensated exponent derivative
//            D(z) = dpsi/dbeta(z) - i z dpsi/dbeta(-i)).
// Each value is validated against a central finite difference of the Fourier
// digital; disagreement beyond 1e-3 relative throws ConsistencyFailure.
struct SensitivityPair {
    double i_beta = 0.0;
    double i_x = 0.0;
    QuadDiagnostics diag_beta{};
    QuadDiagnostics diag_x{};
    double fd_rel_err_beta = 0.0; // achieved analytic-vs-FD agreement
    double fd_rel_err_x = 0.0;
};
SensitivityPair sensitivities(const LevyModel& model, const MarketSpec& market,
                              const ContourSpec& contour = {});

// Taylor radii for the near-symmetric approximation; exceeding a radius flags
// the result, it never refuses.
struct ApproxConfig {
    double eps_beta = 0.01;
    double eps_x = 0.01;
};

// First-order digital price around the symmetric ATM point:
//   base + (beta + 1/2) * i_beta + x * i_x.
// Out-of-band queries and values outside [0, e^{-rT}] are flagged, not
// altered ("clamped-reported").
PriceResult approx_digital(const PriceResult& base, const SensitivityPair& sens,
                           double beta, double x, const MarketSpec& market,
                           const ApproxConfig& cfg = {});

// Digital price surface I(beta, x) over [beta0 +- eps_beta] x [x0 +- eps_x],
// written as CSV with header "beta,x,price", row-major over beta then x, 17
// significant digits. Every grid beta gets its own martingale-drifted model
// (same alpha and delta); prices are exact Fourier values.
void write_price_grid(std::ostream& os, const LevyModel& model, const MarketSpec& market,
                      double beta0, double x0, double eps_beta, double eps_x,
                      std::size_t n_beta = 21, std::size_t n_x = 21,
                      const ContourSpec& contour = {});

} // namespace levysym
