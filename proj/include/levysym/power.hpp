#pragma once

#include <cstdint>

#include "levysym/levy.hpp"
#include "levysym/types.hpp"

namespace levysym {

// Conjugation data for a tilted model: the reflection drift
//   power_drift = -psi(2 beta i) / (2 beta)   (beta != 0;  mu when beta = 0),
// which for NIG always collapses to mu, and the conjugate power -2 beta.
// Finiteness of power_drift is exactly finiteness of kappa(-2 beta).
struct ConjugationSpec {
    double beta = 0.0;
    double power_drift = 0.0;
    double exponent = 0.0; // -2 beta
};

double power_drift(const LevyModel& model);
ConjugationSpec make_conjugation(const LevyModel& model);

// The martingale surrogate S~_t = (S_t / (S_0 e^{power_drift t}))^{-2 beta}:
// for NIG(mu, alpha, delta, beta) with c = -2 beta != 0 this is again
// exponential-NIG with parameters (0, alpha/|c|, |c| delta, -1/2 sign(c));
// symmetric and driftless, kappa~(1) = 0 by construction (zero-carry market).
LevyModel symmetric_surrogate(const LevyModel& model);

enum class ConjugationRoute { automatic, fourier, mc };

// Discounted right-hand side of the conjugation identity
//   E f(S_T) = E[ (S_T / (S_0 e^{aT}))^{-2 beta} f(S_0^2 e^{2aT} / S_T) ],
// a = power_drift: the expectation of the reflected payoff under the power
// weight. Fourier route rewrites the weight as an exponential tilt of the
// terminal law; MC route averages the weighted reflected payoff directly.
// Diagnostics name the route taken.
PriceResult conjugate_price(const LevyModel& model, const MarketSpec& market,
                            const PayoffSpec& payoff,
                            ConjugationRoute route = ConjugationRoute::automatic,
                            std::size_t n_paths = 200'000, std::uint64_t seed = 2011);

// Down-and-in power contract on S* = S/S0 (normalized spot): pays
// (S*_T)^{-2 beta} on the event that the reflected level exceeds S*_T, i.e.
// {S*_T < e^{power_drift T}}, which is at-the-money for the surrogate. The
// price is the surrogate shortcut times the weight:
//   e^{-2 beta power_drift T} * e^{-rT} N(-sigma sqrt(T)/2).
//
// reproduction mode takes sigma = market.sigma_atm (the headline number of a
// volatility-index proxy workflow); rigorous mode computes the surrogate's
// own ATM implied vol, which makes the formula exact for this contract. Both
// values are reported in extras either way, alongside an independent
// tilted-measure evaluation of the same expectation ("tilt_value").
enum class PowerPriceMode { reproduction, rigorous };
PriceResult price_down_and_in_power(const LevyModel& model, const MarketSpec& market,
                                    PowerPriceMode mode = PowerPriceMode::reproduction);

} // namespace levysym
