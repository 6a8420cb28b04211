#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace levysym {

// Pricing environment. Rates are per time-unit, maturity in time-units;
// sigma_atm is the ATM volatility proxy consumed by the shortcut formulas
// (an implied-vol style number, per sqrt(time-unit)).
struct MarketSpec {
    double spot = 1.0;
    double rate = 0.0;
    double dividend = 0.0;
    double maturity = 1.0;
    double sigma_atm = 0.0;

    double forward() const;
    double discount() const; // e^{-rate * maturity}
    void validate() const;   // ParameterError on invariant violation
};

// Controls for the contour quadrature. v = NaN requests the per-operation
// default (0.5 for tail/digital integrals, 1.5 for the call), clipped to the
// middle of the admissible range when the default is not admissible.
// half_width = 0 requests automatic truncation (doubling until the integrand
// envelope at the endpoint is below 1e-14, at most 20 doublings).
struct ContourSpec {
    double v = std::numeric_limits<double>::quiet_NaN();
    double half_width = 0.0;
    std::size_t max_nodes = 2'000'000;
    double rel_tol = 1e-10;

    void validate() const; // rel_tol in (0, 1e-2], half_width >= 0
};

enum class Method { fourier, shortcut, approx, mc, conjugation };

const char* method_name(Method m);

struct QuadDiagnostics {
    std::size_t nodes = 0;      // integrand evaluations
    double truncation = 0.0;    // half-width actually used
    double contour_v = 0.0;     // imaginary offset actually used
    double imag_residue = 0.0;  // |integral of the discarded odd part|
    bool converged = true;
};

// Payoffs closed under the reflection algebra of the conjugation identity;
// the transform-side pricing route handles exactly this set (free-form
// functions go through the MC oracle instead).
enum class PayoffKind { digital_call, digital_put, asset_or_nothing, constant_one };

struct PayoffSpec {
    PayoffKind kind = PayoffKind::digital_call;
    double level = 1.0; // barrier in spot units

    double evaluate(double terminal_spot) const;
};

// Uniform output of every pricer. `flags` carries quality warnings
// ("quadrature_not_converged", "outside_taylor_radius", ...); `extras`
// carries named companion numbers (alternate-mode values, implied vols).
struct PriceResult {
    double value = 0.0;
    double abs_err_estimate = 0.0;
    Method method = Method::fourier;
    QuadDiagnostics diagnostics{};
    std::vector<std::string> flags{};
    std::vector<std::pair<std::string, double>> extras{};

    bool has_flag(const std::string& f) const;
    double extra(const std::string& key) const; // DomainError when absent
};

} // namespace levysym
