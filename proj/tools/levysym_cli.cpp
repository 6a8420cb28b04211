// levysym command line: calibration, pricing, sensitivities, grid emission,
// verification, and the bundled reproduction pipeline. All JSON output goes
// through the deterministic writer below so identical invocations produce
// byte-identical bytes (fixed field order, %.17g numbers).

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "levysym/calibration.hpp"
#include "levysym/errors.hpp"
#include "levysym/fourier.hpp"
#include "levysym/levy.hpp"
#include "levysym/mc.hpp"
#include "levysym/power.hpp"
#include "levysym/shortcut.hpp"
#include "levysym/types.hpp"

namespace {

using namespace levysym;

// bad input detected by the CLI itself (exit 2)
struct CliInputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// bad flag combination (exit 1)
struct CliUsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- deterministic JSON output ---------------------------------------------

std::string format_g17(double v) {
    if (!std::isfinite(v)) return "null";
    char b[40];
    std::snprintf(b, sizeof b, "%.17g", v);
    return b;
}

class JsonWriter {
  public:
    void open_object() { sep(); buf_ += '{'; first_.push_back(true); }
    void close_object() { buf_ += '}'; finish(); }
    void open_array() { sep(); buf_ += '['; first_.push_back(true); }
    void close_array() { buf_ += ']'; finish(); }

    void key(const std::string& k) {
        sep();
        buf_ += quote(k);
        buf_ += ':';
        pending_ = true;
    }

    void value(double v) { sep(); buf_ += format_g17(v); }
    void value(const std::string& s) { sep(); buf_ += quote(s); }
    void value(const char* s) { value(std::string(s)); }
    void value(bool b) { sep(); buf_ += (b ? "true" : "false"); }
    void value_count(std::size_t n) { sep(); buf_ += std::to_string(n); }

    void kv(const std::string& k, double v) { key(k); value(v); }
    void kv(const std::string& k, const std::string& v) { key(k); value(v); }
    void kv(const std::string& k, const char* v) { key(k); value(v); }
    void kv(const std::string& k, bool v) { key(k); value(v); }
    void kv_count(const std::string& k, std::size_t v) { key(k); value_count(v); }

    const std::string& str() const { return buf_; }

  private:
    void sep() {
        if (pending_) {
            pending_ = false;
            return;
        }
        if (!first_.empty()) {
            if (first_.back()) {
                first_.back() = false;
            } else {
                buf_ += ',';
            }
        }
    }
    void finish() {
        if (!first_.empty()) first_.pop_back();
    }
    static std::string quote(const std::string& s) {
        std::string out = "\"";
        for (char c : s) {
            switch (c) {
                case '"': out += "\\\""; break;
                case '\\': out += "\\\\"; break;
                case '\n': out += "\\n"; break;
                case '\t': out += "\\t"; break;
                case '\r': out += "\\r"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char b[8];
                        std::snprintf(b, sizeof b, "\\u%04x", c);
                        out += b;
                    } else {
                        out += c;
                    }
            }
        }
        out += '"';
        return out;
    }

    std::string buf_;
    std::vector<bool> first_;
    bool pending_ = false;
};

void print_json(const JsonWriter& w) {
    std::fputs(w.str().c_str(), stdout);
    std::fputc('\n', stdout);
}

void write_diagnostics(JsonWriter& w, const std::string& key, const QuadDiagnostics& d) {
    w.key(key);
    w.open_object();
    w.kv_count("nodes", d.nodes);
    w.kv("truncation", d.truncation);
    w.kv("contour_v", d.contour_v);
    w.kv("imag_residue", d.imag_residue);
    w.kv("converged", d.converged);
    w.close_object();
}

// Emits the result and maps a non-converged quadrature to exit 3 with the
// diagnostics mirrored on stderr; callers still get the best estimate.
int emit_price(const PriceResult& r, const std::string& units) {
    JsonWriter w;
    w.open_object();
    w.kv("value", r.value);
    w.kv("abs_err_estimate", r.abs_err_estimate);
    w.kv("method", method_name(r.method));
    w.kv("units", units);
    w.key("flags");
    w.open_array();
    for (const auto& f : r.flags) w.value(f);
    w.close_array();
    w.key("extras");
    w.open_object();
    for (const auto& [k, v] : r.extras) w.kv(k, v);
    w.close_object();
    write_diagnostics(w, "diagnostics", r.diagnostics);
    w.close_object();
    print_json(w);
    if (r.has_flag("quadrature_not_converged")) {
        std::fprintf(stderr,
                     "error: quadrature did not converge (nodes=%zu, abs_err=%s)\n",
                     r.diagnostics.nodes, format_g17(r.abs_err_estimate).c_str());
        return 3;
    }
    return 0;
}

// ---- input files -------------------------------------------------------------

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CliInputError("cannot open '" + path + "'");
    return nlohmann::json::parse(in);
}

double need_num(const nlohmann::json& j, const char* key, const std::string& ctx) {
    if (!j.contains(key) || !j[key].is_number()) {
        throw CliInputError(ctx + ": missing numeric field '" + key + "'");
    }
    return j[key].get<double>();
}

std::string need_str(const nlohmann::json& j, const char* key, const std::string& ctx) {
    if (!j.contains(key) || !j[key].is_string()) {
        throw CliInputError(ctx + ": missing string field '" + key + "'");
    }
    return j[key].get<std::string>();
}

struct MarketFile {
    MarketSpec market;
    std::string units;
};

MarketFile load_market_file(const std::string& path) {
    const nlohmann::json j = read_json_file(path);
    MarketFile mf;
    mf.units = need_str(j, "units", path);
    mf.market.spot = need_num(j, "spot", path);
    mf.market.rate = need_num(j, "rate", path);
    mf.market.dividend = j.contains("dividend") ? need_num(j, "dividend", path) : 0.0;
    mf.market.maturity = need_num(j, "maturity", path);
    mf.market.sigma_atm = need_num(j, "sigma_atm", path);
    mf.market.validate();
    return mf;
}

struct ModelFile {
    LevyModel model;
    std::string units;
};

ModelFile load_model_file(const std::string& path) {
    const nlohmann::json j = read_json_file(path);
    const std::string family = need_str(j, "family", path);
    const std::string units = need_str(j, "units", path);
    const std::string drift = j.contains("drift") ? need_str(j, "drift", path) : "martingale";
    const double r = need_num(j, "rate", path);
    const double q = j.contains("dividend") ? need_num(j, "dividend", path) : 0.0;
    if (!j.contains("params") || !j["params"].is_object()) {
        throw CliInputError(path + ": missing object field 'params'");
    }
    const nlohmann::json& p = j["params"];

    if (family == "black_scholes") {
        if (drift != "martingale") {
            throw CliInputError(path + ": black_scholes models are always martingale-drifted");
        }
        return {LevyModel::black_scholes(need_num(p, "sigma", path), r, q), units};
    }
    if (family != "nig") {
        throw CliInputError(path + ": unknown family '" + family +
                            "' (expected 'nig' or 'black_scholes')");
    }
    NIGParams np;
    np.alpha_tail = need_num(p, "alpha", path);
    np.delta_scale = need_num(p, "delta", path);
    np.beta_skew = need_num(p, "beta", path);
    if (drift == "as_given") {
        np.mu = need_num(p, "mu", path);
        return {LevyModel::nig_as_given(np, r, q), units};
    }
    if (drift != "martingale") {
        throw CliInputError(path + ": drift must be 'martingale' or 'as_given'");
    }
    np.mu = p.contains("mu") ? need_num(p, "mu", path) : 0.0; // replaced by the solve
    return {LevyModel::nig_risk_neutral(np, r, q), units};
}

// Model and market files describe the same environment; silently diverging
// rate/dividend/unit fields would price against an inconsistent world.
void check_compat(const ModelFile& mo, const MarketFile& ma) {
    if (mo.units != ma.units) {
        throw CliInputError("units mismatch: model '" + mo.units + "' vs market '" +
                            ma.units + "'");
    }
    const auto close = [](double a, double b) {
        return std::abs(a - b) <= 1e-12 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
    };
    if (!close(mo.model.rate(), ma.market.rate)) {
        throw CliInputError("rate mismatch between model and market files");
    }
    if (!close(mo.model.dividend(), ma.market.dividend)) {
        throw CliInputError("dividend mismatch between model and market files");
    }
}

// ---- subcommand bodies ---------------------------------------------------------

int do_calibrate(const std::string& returns_path, const std::string& mode_str, double rate,
                 double dividend, bool annualize) {
    const ReturnsMode mode =
        mode_str == "prices" ? ReturnsMode::prices : ReturnsMode::logreturns;
    const ReturnsSeries rs = load_returns(returns_path, mode);
    FitOptions fo;
    fo.annualize = annualize;
    const FitResult fit = fit_nig_mle(rs.log_returns, fo);
    const EsscherResult es = esscher_transform(fit.params, rate, dividend);

    JsonWriter w;
    w.open_object();
    w.kv_count("n_returns", rs.size());
    w.kv("rate", rate);
    w.kv("dividend", dividend);
    w.kv("annualized", annualize);
    w.key("physical");
    w.open_object();
    w.kv("mu", fit.params.mu);
    w.kv("alpha", fit.params.alpha_tail);
    w.kv("delta", fit.params.delta_scale);
    w.kv("beta", fit.params.beta_skew);
    w.close_object();
    w.key("std_errors");
    w.open_object();
    w.kv("mu", fit.std_errors[0]);
    w.kv("alpha", fit.std_errors[1]);
    w.kv("delta", fit.std_errors[2]);
    w.kv("beta", fit.std_errors[3]);
    w.close_object();
    w.kv("log_likelihood", fit.log_likelihood);
    w.kv("gradient_norm", fit.gradient_norm);
    w.kv_count("iterations", fit.iterations);
    w.key("warnings");
    w.open_array();
    for (const auto& s : fit.warnings) w.value(s);
    w.close_array();
    w.key("esscher");
    w.open_object();
    w.kv("theta_star", es.theta_star);
    w.kv("martingale_gap", es.gap);
    w.key("params");
    w.open_object();
    w.kv("mu", es.params.mu);
    w.kv("alpha", es.params.alpha_tail);
    w.kv("delta", es.params.delta_scale);
    w.kv("beta", es.params.beta_skew);
    w.close_object();
    w.close_object();
    w.close_object();
    print_json(w);
    return 0;
}

enum class PriceMode { exact, shortcut, approx };

int do_price_digital(const std::string& side_str, PriceMode mode,
                     const std::string& model_path, const std::string& market_path,
                     double x) {
    const OptionSide side = side_str == "call" ? OptionSide::call : OptionSide::put;
    const MarketFile ma = load_market_file(market_path);

    if (mode == PriceMode::shortcut) {
        if (x != 0.0) {
            throw CliUsageError("--shortcut prices the at-the-money digital; --x must be 0");
        }
        return emit_price(digital_symmetric(ma.market, side), ma.units);
    }

    if (model_path.empty()) {
        throw CliUsageError("--model is required with --exact/--approx");
    }
    const ModelFile mo = load_model_file(model_path);
    check_compat(mo, ma);

    if (mode == PriceMode::exact) {
        const PriceResult r = side == OptionSide::call
                                  ? price_digital_call_fourier(mo.model, ma.market, x)
                                  : price_digital_put_fourier(mo.model, ma.market, x);
        return emit_price(r, ma.units);
    }

    // approx: first-order Taylor step from the symmetric ATM point out to the
    // model's beta and the requested x
    const double beta = mo.model.symmetry_beta();
    const LevyModel sym = mo.model.symmetrized();
    const SensitivityPair sens = sensitivities(sym, ma.market);
    const PriceResult base = digital_symmetric(ma.market, OptionSide::call);
    PriceResult r = approx_digital(base, sens, beta, x, ma.market);
    if (side == OptionSide::put) {
        const double df = ma.market.discount();
        r.value = df - r.value;
        for (auto& [k, v] : r.extras) {
            if (k == "base") v = df - v;
            if (k == "i_beta" || k == "i_x") v = -v;
        }
    }
    return emit_price(r, ma.units);
}

int do_price_asset_or_nothing(const std::string& market_path) {
    const MarketFile ma = load_market_file(market_path);
    return emit_price(asset_or_nothing_symmetric(ma.market), ma.units);
}

int do_price_power(const std::string& model_path, const std::string& market_path,
                   const std::string& mode_str) {
    const ModelFile mo = load_model_file(model_path);
    const MarketFile ma = load_market_file(market_path);
    check_compat(mo, ma);
    const PowerPriceMode mode =
        mode_str == "rigorous" ? PowerPriceMode::rigorous : PowerPriceMode::reproduction;
    return emit_price(price_down_and_in_power(mo.model, ma.market, mode), ma.units);
}

int do_sensitivities(const std::string& model_path, const std::string& market_path) {
    const ModelFile mo = load_model_file(model_path);
    const MarketFile ma = load_market_file(market_path);
    check_compat(mo, ma);
    const SensitivityPair s = sensitivities(mo.model, ma.market);
    JsonWriter w;
    w.open_object();
    w.kv("i_beta", s.i_beta);
    w.kv("i_x", s.i_x);
    w.kv("fd_rel_err_beta", s.fd_rel_err_beta);
    w.kv("fd_rel_err_x", s.fd_rel_err_x);
    w.kv("units", ma.units);
    write_diagnostics(w, "diagnostics_beta", s.diag_beta);
    write_diagnostics(w, "diagnostics_x", s.diag_x);
    w.close_object();
    print_json(w);
    return 0;
}

int do_grid(const std::string& model_path, const std::string& market_path, double eps_beta,
            double eps_x, const std::string& out_path, std::size_t n_beta, std::size_t n_x) {
    const ModelFile mo = load_model_file(model_path);
    const MarketFile ma = load_market_file(market_path);
    check_compat(mo, ma);
    std::ofstream os(out_path);
    if (!os) throw CliInputError("cannot open '" + out_path + "' for writing");
    const double beta0 = mo.model.symmetry_beta();
    write_price_grid(os, mo.model, ma.market, beta0, 0.0, eps_beta, eps_x, n_beta, n_x);
    os.close();
    if (!os) throw CliInputError("write to '" + out_path + "' failed");

    JsonWriter w;
    w.open_object();
    w.kv("written", out_path);
    w.kv_count("n_beta", n_beta);
    w.kv_count("n_x", n_x);
    w.kv("beta0", beta0);
    w.kv("x0", 0.0);
    w.kv("eps_beta", eps_beta);
    w.kv("eps_x", eps_x);
    w.close_object();
    print_json(w);
    return 0;
}

int do_verify_martingale(const std::string& model_path) {
    const ModelFile mo = load_model_file(model_path);
    const double gap = mo.model.martingale_gap();
    const double tol = 1e-10;
    const bool pass = std::abs(gap) <= tol;
    JsonWriter w;
    w.open_object();
    w.kv("check", "martingale");
    w.kv("gap", gap);
    w.kv("tolerance", tol);
    w.kv("pass", pass);
    w.close_object();
    print_json(w);
    return pass ? 0 : 3;
}

int do_verify_symmetry(const std::string& model_path) {
    const ModelFile mo = load_model_file(model_path);
    const double beta = mo.model.symmetry_beta();
    const double tol = 1e-12;
    const bool pass = mo.model.is_symmetric(tol);
    JsonWriter w;
    w.open_object();
    w.kv("check", "symmetry");
    w.kv("beta", beta);
    w.kv("distance", std::abs(beta + 0.5));
    w.kv("tolerance", tol);
    w.kv("pass", pass);
    w.close_object();
    print_json(w);
    return pass ? 0 : 3;
}

int do_verify_conjugation(const std::string& model_path, const std::string& market_path,
                          std::size_t n, std::uint64_t seed) {
    const ModelFile mo = load_model_file(model_path);
    MarketSpec market;
    if (!market_path.empty()) {
        const MarketFile ma = load_market_file(market_path);
        check_compat(mo, ma);
        market = ma.market;
    } else {
        market.spot = 1.0;
        market.rate = mo.model.rate();
        market.dividend = mo.model.dividend();
        market.maturity = 1.0;
        market.sigma_atm = 0.0;
    }
    const PayoffSpec payoff{PayoffKind::digital_call, 1.0};
    const ConjugationCheck c = verify_conjugation(mo.model, market, payoff, n, seed);
    JsonWriter w;
    w.open_object();
    w.kv("check", "conjugation");
    w.kv_count("n", n);
    w.kv_count("seed", static_cast<std::size_t>(seed));
    w.kv("lhs", c.lhs);
    w.kv("rhs", c.rhs);
    w.kv("se_lhs", c.se_lhs);
    w.kv("se_rhs", c.se_rhs);
    w.kv("combined_se", c.combined_se);
    w.kv("pass", c.pass);
    w.close_object();
    print_json(w);
    return c.pass ? 0 : 3;
}

// ---- reproduction pipeline -----------------------------------------------------

// Published reference values the reproduction pipeline compares against.
namespace ref {
constexpr double kDigitalCall = 0.4449;
constexpr double kDigitalPut = 0.5539;
constexpr double kDigitalTol = 5e-5;
constexpr double kBetaStar = -4.18;
constexpr double kBetaStarTol = 0.01;
constexpr double kIBeta = 0.2621;
constexpr double kIx = 7.3212;
constexpr double kSensRelTol = 0.05; // after sign reconciliation
const double kPower = 0.4449 * std::exp(0.015);
constexpr double kPowerTol = 1e-4;
} // namespace ref

void print_row(const char* name, double computed, double reference, double tol,
               const char* status, const char* note) {
    std::printf("%-12s %24.17g %24.17g %10.3g  %-12s %s\n", name, computed, reference, tol,
                status, note);
}

int do_reproduce() {
    const NIGParams physical{0.0018, 49.99, 0.0085, -9.22};
    const NIGParams risk_neutral{0.0018, 49.99, 0.0085, -4.18};
    const double r = 0.0012, q = 0.0;
    MarketSpec market;
    market.spot = 1.0;
    market.rate = r;
    market.dividend = q;
    market.maturity = 1.0;
    market.sigma_atm = 0.2741;

    std::printf("%-12s %24s %24s %10s  %-12s %s\n", "quantity", "computed", "reference",
                "tol", "status", "note");

    int pass_count = 0;
    const auto status_abs = [&](double got, double want, double tol) {
        if (std::abs(got - want) <= tol) {
            ++pass_count;
            return "PASS";
        }
        return "FAIL";
    };

    // ATM digitals from the symmetry shortcut
    const double f0 = digital_symmetric(market, OptionSide::call).value;
    const double g0 = digital_symmetric(market, OptionSide::put).value;
    print_row("f0", f0, ref::kDigitalCall, ref::kDigitalTol,
              status_abs(f0, ref::kDigitalCall, ref::kDigitalTol),
              "ATM digital call, shortcut");
    print_row("g0", g0, ref::kDigitalPut, ref::kDigitalTol,
              status_abs(g0, ref::kDigitalPut, ref::kDigitalTol),
              "ATM digital put, shortcut");

    // Esscher step from the physical parameters
    const EsscherResult es = esscher_transform(physical, r, q);
    const double gap = LevyModel::nig_as_given(es.params, r, q).martingale_gap();
    {
        char note[128];
        std::snprintf(note, sizeof note, "martingale gap %.3g (tol 1e-10: %s)", gap,
                      std::abs(gap) < 1e-10 ? "ok" : "violated");
        print_row("beta_star", es.params.beta_skew, ref::kBetaStar, ref::kBetaStarTol,
                  status_abs(es.params.beta_skew, ref::kBetaStar, ref::kBetaStarTol), note);
    }

    // Sensitivities at the symmetric point, attempted under both unit
    // readings. An attempt rejected by the internal finite-difference check
    // counts as non-matching (NaN); the report keeps going either way.
    NIGParams sym_base{0.0, 49.99, 0.0085, -0.5};
    SensitivityPair s_daily, s_annual;
    s_daily.i_beta = s_daily.i_x = std::numeric_limits<double>::quiet_NaN();
    s_annual = s_daily;
    try {
        s_daily = sensitivities(LevyModel::nig_risk_neutral(sym_base, r, q), market);
    } catch (const Error& e) {
        std::fprintf(stderr, "note: as-given sensitivity attempt rejected: %s\n", e.what());
    }
    try {
        s_annual = sensitivities(
            LevyModel::nig_risk_neutral(scale_time(sym_base, 252.0), r, q), market);
    } catch (const Error& e) {
        std::fprintf(stderr, "note: x252 sensitivity attempt rejected: %s\n", e.what());
    }

    const auto sens_row = [&](const char* name, double daily, double annual, double want) {
        const bool ok_daily = std::abs(std::abs(daily) - want) <= ref::kSensRelTol * want;
        const bool ok_annual = std::abs(std::abs(annual) - want) <= ref::kSensRelTol * want;
        if (ok_daily || ok_annual) {
            ++pass_count;
            print_row(name, ok_daily ? daily : annual, want, ref::kSensRelTol, "PASS",
                      "sign-reconciled");
            return;
        }
        // documented discrepancy: the finite-difference property is the
        // binding check and is enforced inside sensitivities() itself
        char note[160];
        std::snprintf(note, sizeof note,
                      "|as-given| %.6g, |x252 rescale| %.6g; neither matches within 5%%",
                      std::abs(daily), std::abs(annual));
        print_row(name, daily, want, ref::kSensRelTol, "DISCREPANCY", note);
    };
    sens_row("i_beta", s_daily.i_beta, s_annual.i_beta, ref::kIBeta);
    sens_row("i_x", s_daily.i_x, s_annual.i_x, ref::kIx);

    // Down-and-in power contract, reproduction mode
    const LevyModel rn = LevyModel::nig_as_given(risk_neutral, r, q);
    const PriceResult power = price_down_and_in_power(rn, market, PowerPriceMode::reproduction);
    {
        char note[128];
        std::snprintf(note, sizeof note, "0.4449*e^0.015; power_drift = %.17g",
                      power.extra("power_drift"));
        print_row("power", power.value, ref::kPower, ref::kPowerTol,
                  status_abs(power.value, ref::kPower, ref::kPowerTol), note);
    }

    std::printf("\n%d of 6 rows match the published values; mismatching rows are "
                "reported above with the computed value.\n",
                pass_count);
    return 0; // a comparison report, not a gate
}

int run_guarded(const std::function<int()>& fn) {
    try {
        return fn();
    } catch (const CliUsageError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 1;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const InsufficientData& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const ParameterError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const UnsupportedVariant& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const EmptySample& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const CliInputError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        // StripViolation, QuadratureFailure, InversionFailure,
        // OptimizationFailure, NoRootInBracket, ConsistencyFailure,
        // MomentDivergence: numerical failures
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"digital, asset-or-nothing and power option pricing under "
                 "exponential Levy models with the market-symmetry shortcut"};
    app.require_subcommand(1);

    std::function<int()> action;

    // calibrate
    {
        auto* cal = app.add_subcommand("calibrate",
                                       "fit NIG by MLE and risk-neutralize via Esscher");
        auto returns_path = std::make_shared<std::string>();
        auto mode = std::make_shared<std::string>();
        auto rate = std::make_shared<double>(0.0);
        auto dividend = std::make_shared<double>(0.0);
        auto annualize = std::make_shared<bool>(false);
        cal->add_option("--returns", *returns_path, "CSV input")->required();
        cal->add_option("--mode", *mode, "input format")
            ->required()
            ->check(CLI::IsMember({"prices", "logreturns"}));
        cal->add_option("--rate", *rate, "short rate r")->required();
        cal->add_option("--dividend", *dividend, "dividend yield q")->capture_default_str();
        cal->add_flag("--annualize", *annualize, "rescale fitted mu, delta by 252");
        cal->callback([=, &action]() {
            action = [=]() {
                return do_calibrate(*returns_path, *mode, *rate, *dividend, *annualize);
            };
        });
    }

    // price digital | asset-or-nothing | power-down-in
    {
        auto* price = app.add_subcommand("price", "price a payoff");
        price->require_subcommand(1);

        auto* dig = price->add_subcommand("digital", "cash-or-nothing digital");
        auto side = std::make_shared<std::string>();
        auto exact = std::make_shared<bool>(false);
        auto shortcut = std::make_shared<bool>(false);
        auto approx = std::make_shared<bool>(false);
        auto dmodel = std::make_shared<std::string>();
        auto dmarket = std::make_shared<std::string>();
        auto x = std::make_shared<double>(0.0);
        dig->add_option("--side", *side, "call or put")
            ->required()
            ->check(CLI::IsMember({"call", "put"}));
        dig->add_flag("--exact", *exact, "Fourier contour price (default)");
        dig->add_flag("--shortcut", *shortcut, "symmetry closed form (ATM)");
        dig->add_flag("--approx", *approx, "first-order Taylor around symmetry");
        dig->add_option("--model", *dmodel, "model JSON");
        dig->add_option("--market", *dmarket, "market JSON")->required();
        dig->add_option("--x", *x, "log-forward-moneyness")->capture_default_str();
        dig->callback([=, &action]() {
            action = [=]() {
                const int chosen = int(*exact) + int(*shortcut) + int(*approx);
                if (chosen > 1) {
                    throw CliUsageError("--exact, --shortcut, --approx are exclusive");
                }
                PriceMode mode = PriceMode::exact;
                if (*shortcut) mode = PriceMode::shortcut;
                if (*approx) mode = PriceMode::approx;
                return do_price_digital(*side, mode, *dmodel, *dmarket, *x);
            };
        });

        auto* aon = price->add_subcommand("asset-or-nothing",
                                          "asset-or-nothing with barrier spot^2");
        auto amarket = std::make_shared<std::string>();
        aon->add_option("--market", *amarket, "market JSON")->required();
        aon->callback([=, &action]() {
            action = [=]() { return do_price_asset_or_nothing(*amarket); };
        });

        auto* pow = price->add_subcommand("power-down-in", "down-and-in power contract");
        auto pmodel = std::make_shared<std::string>();
        auto pmarket = std::make_shared<std::string>();
        auto pmode = std::make_shared<std::string>("reproduction");
        pow->add_option("--model", *pmodel, "model JSON")->required();
        pow->add_option("--market", *pmarket, "market JSON")->required();
        pow->add_option("--mode", *pmode, "sigma source: market quote or surrogate vol")
            ->capture_default_str()
            ->check(CLI::IsMember({"reproduction", "rigorous"}));
        pow->callback([=, &action]() {
            action = [=]() { return do_price_power(*pmodel, *pmarket, *pmode); };
        });
    }

    // sensitivities
    {
        auto* sens = app.add_subcommand("sensitivities",
                                        "tilt and moneyness derivatives at the symmetric point");
        auto model = std::make_shared<std::string>();
        auto market = std::make_shared<std::string>();
        sens->add_option("--model", *model, "model JSON")->required();
        sens->add_option("--market", *market, "market JSON")->required();
        sens->callback([=, &action]() {
            action = [=]() { return do_sensitivities(*model, *market); };
        });
    }

    // grid
    {
        auto* grid = app.add_subcommand("grid", "digital price surface CSV around symmetry");
        auto model = std::make_shared<std::string>();
        auto market = std::make_shared<std::string>();
        auto eps_beta = std::make_shared<double>(0.0);
        auto eps_x = std::make_shared<double>(0.0);
        auto out = std::make_shared<std::string>();
        auto n_beta = std::make_shared<std::size_t>(21);
        auto n_x = std::make_shared<std::size_t>(21);
        grid->add_option("--model", *model, "model JSON")->required();
        grid->add_option("--market", *market, "market JSON")->required();
        grid->add_option("--eps-beta", *eps_beta, "half-width in beta")->required();
        grid->add_option("--eps-x", *eps_x, "half-width in x")->required();
        grid->add_option("--out", *out, "output CSV path")->required();
        grid->add_option("--n-beta", *n_beta, "grid points in beta")->capture_default_str();
        grid->add_option("--n-x", *n_x, "grid points in x")->capture_default_str();
        grid->callback([=, &action]() {
            action = [=]() {
                return do_grid(*model, *market, *eps_beta, *eps_x, *out, *n_beta, *n_x);
            };
        });
    }

    // verify
    {
        auto* verify = app.add_subcommand("verify", "pass/fail model checks");
        verify->require_subcommand(1);

        auto* conj = verify->add_subcommand("conjugation",
                                            "Monte Carlo check of the reflection identity");
        auto cmodel = std::make_shared<std::string>();
        auto cmarket = std::make_shared<std::string>();
        auto n = std::make_shared<std::size_t>(1'000'000);
        auto seed = std::make_shared<std::uint64_t>(777);
        conj->add_option("--model", *cmodel, "model JSON")->required();
        conj->add_option("--market", *cmarket, "market JSON (default: spot 1, T 1)");
        conj->add_option("--n", *n, "paths per side")->capture_default_str();
        conj->add_option("--seed", *seed, "RNG seed")->capture_default_str();
        conj->callback([=, &action]() {
            action = [=]() { return do_verify_conjugation(*cmodel, *cmarket, *n, *seed); };
        });

        auto* mart = verify->add_subcommand("martingale", "kappa(1) = r - q check");
        auto mmodel = std::make_shared<std::string>();
        mart->add_option("--model", *mmodel, "model JSON")->required();
        mart->callback([=, &action]() {
            action = [=]() { return do_verify_martingale(*mmodel); };
        });

        auto* sym = verify->add_subcommand("symmetry", "beta = -1/2 check");
        auto smodel = std::make_shared<std::string>();
        sym->add_option("--model", *smodel, "model JSON")->required();
        sym->callback([=, &action]() {
            action = [=]() { return do_verify_symmetry(*smodel); };
        });
    }

    // reproduce-paper
    {
        auto* rep = app.add_subcommand(
            "reproduce-paper", "run the bundled reproduction pipeline and compare");
        rep->callback([&action]() {
            action = []() { return do_reproduce(); };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (!action) {
        std::fprintf(stderr, "usage error: no subcommand selected\n");
        return 1;
    }
    return run_guarded(action);
}
