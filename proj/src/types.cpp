#include "levysym/types.hpp"

#include <algorithm>
#include <cmath>

#include "levysym/errors.hpp"

namespace levysym {

double MarketSpec::forward() const {
    return spot * std::exp((rate - dividend) * maturity);
}

double MarketSpec::discount() const {
    return std::exp(-rate * maturity);
}

void MarketSpec::validate() const {
    const bool finite = std::isfinite(spot) && std::isfinite(rate) &&
                        std::isfinite(dividend) && std::isfinite(maturity) &&
                        std::isfinite(sigma_atm);
    if (!finite) throw ParameterError("market fields must be finite");
    if (!(spot > 0.0)) throw ParameterError("spot must be > 0");
    if (!(maturity > 0.0)) throw ParameterError("maturity must be > 0");
    if (rate < 0.0) throw ParameterError("rate must be >= 0");
    if (dividend < 0.0) throw ParameterError("dividend must be >= 0");
    if (sigma_atm < 0.0) throw ParameterError("sigma_atm must be >= 0");
}

void ContourSpec::validate() const {
    if (!(rel_tol > 0.0) || rel_tol > 1e-2) {
        throw ParameterError("contour rel_tol must lie in (0, 1e-2]");
    }
    if (half_width < 0.0 || !std::isfinite(half_width)) {
        throw ParameterError("contour half_width must be finite and >= 0");
    }
    if (max_nodes < 15) throw ParameterError("contour max_nodes too small");
}

double PayoffSpec::evaluate(double terminal_spot) const {
    switch (kind) {
        case PayoffKind::digital_call: return terminal_spot > level ? 1.0 : 0.0;
        case PayoffKind::digital_put: return terminal_spot < level ? 1.0 : 0.0;
        case PayoffKind::asset_or_nothing:
            return terminal_spot > level ? terminal_spot : 0.0;
        case PayoffKind::constant_one: return 1.0;
    }
    return 0.0;
}

const char* method_name(Method m) {
    switch (m) {
        case Method::fourier: return "fourier";
        case Method::shortcut: return "shortcut";
        case Method::approx: return "approx";
        case Method::mc: return "mc";
        case Method::conjugation: return "conjugation";
    }
    return "unknown";
}

bool PriceResult::has_flag(const std::string& f) const {
    return std::find(flags.begin(), flags.end(), f) != flags.end();
}

double PriceResult::extra(const std::string& key) const {
    for (const auto& [k, v] : extras) {
        if (k == key) return v;
    }
    throw DomainError("no extra named '" + key + "' on this result");
}

} // namespace levysym
