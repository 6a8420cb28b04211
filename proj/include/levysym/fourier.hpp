#pragma once

#include <complex>
#include <functional>

#include "levysym/levy.hpp"
#include "levysym/types.hpp"

namespace levysym {

namespace detail {

// Folded contour integral on the line z = xi + i v:
//   value = 2 * Int_{0}^{L} Re[ num(z) e^{i z y + expo(z)} / den(z) ] dxi,
// which equals the full-line integral of the same integrand whenever it is
// conjugate-symmetric (num, expo, den from a real characteristic triplet).
// L starts at spec.half_width (50 when unset) and doubles until the envelope
// |e^{expo(L + iv)}| / L drops below 1e-14, at most 20 times; the probe
// points feeding diag.imag_residue measure actual conjugate asymmetry.
struct FoldedLine {
    double value = 0.0;
    double abs_err = 0.0;
    QuadDiagnostics diag{};
};
FoldedLine contour_fold(const std::function<std::complex<double>(std::complex<double>)>& num,
                        const std::function<std::complex<double>(std::complex<double>)>& expo,
                        const std::function<std::complex<double>(std::complex<double>)>& den,
                        double y, double v, const ContourSpec& spec);

// Contour offset selection: an explicit request must lie strictly inside
// (lo, hi); automatic choice prefers `preferred`, else the window middle.
double resolve_contour_v(const ContourSpec& spec, double preferred, double lo, double hi);

} // namespace detail

// Upper tail probability P(X_t > y) by contour integration,
//   P(X_t > y) = -(1/2pi) Int_{Im z = v} e^{i z y} e^{t psi(-z)} / (i z) dz,  v > 0,
// folded onto the half line xi >= 0 through conjugate symmetry. Works for any
// model the strip admits, martingale or not (used directly by the tilted
// diagnostics of the conjugation module). `shift` tilts the exponent argument:
// psi is evaluated at (-z - i*shift), which prices share-measure tails such as
// E[e^X 1{X>y}] with shift = 1 without materializing a tilted model.
struct TailResult {
    double probability = 0.0;
    double abs_err = 0.0;
    QuadDiagnostics diagnostics{};
};
TailResult tail_probability(const LevyModel& model, double t, double y,
                            const ContourSpec& contour = {}, double shift = 0.0);

// Digital call e^{-rT} P(log(S_T / F) > x) at log-forward-moneyness x; the
// drift cancels in the centered coordinates, so only the martingale-centered
// exponent enters. Digital put is e^{-rT} - call by construction.
PriceResult price_digital_call_fourier(const LevyModel& model, const MarketSpec& market,
                                       double x, const ContourSpec& contour = {});
PriceResult price_digital_put_fourier(const LevyModel& model, const MarketSpec& market,
                                      double x, const ContourSpec& contour = {});

// Asset-or-nothing call S0 e^{-qT} Pshare(log(S_T/F) > x) where Pshare is the
// share-measure tail (exponent shifted by one).
PriceResult price_asset_digital_fourier(const LevyModel& model, const MarketSpec& market,
                                        double x, const ContourSpec& contour = {});

// European call by the contour-integral representation
//   V = -(K_x e^{-rT} / 2pi) Int_{Im z = v} e^{i z x} e^{T psi_c(-z)} / (z (z - i)) dz,
// v > 1, x = log(K / F), K_x = K. Requires a martingale-drifted model.
PriceResult price_call_lewis(const LevyModel& model, const MarketSpec& market,
                             double strike, const ContourSpec& contour = {});

// Black-Scholes volatility that reprices the model's ATM-forward call; the
// inversion is monotone, solved to 1e-12. InversionFailure when the call
// price leaves the no-arbitrage band.
double atm_implied_vol(const LevyModel& model, const MarketSpec& market);

// Closed forms used as oracles and by the shortcut module.
double bs_call_price(double sigma, const MarketSpec& market, double strike);
double bs_digital_call_price(double sigma, const MarketSpec& market, double x);
double normal_cdf(double x);

} // namespace levysym
