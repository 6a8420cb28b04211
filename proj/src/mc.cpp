#include "levysym/mc.hpp"

#include <cmath>
#include <cstring>
#include <sstream>
#include <thread>

#include "levysym/errors.hpp"
#include "levysym/power.hpp"

namespace levysym {

namespace {

constexpr std::size_t kChunk = 65536;

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

// xoshiro256++ (Blackman-Vigna); state filled by a splitmix64 chain
class Xoshiro256pp {
  public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1; // never all-zero
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform on (0, 1): top 53 bits, then nudged away from 0
    double uniform() {
        const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
        return u > 0.0 ? u : 0x1.0p-53;
    }

  private:
    std::uint64_t s_[4];
};

inline std::uint64_t chunk_seed(std::uint64_t seed, std::uint64_t chunk_index) {
    // one splitmix64 step mixes (seed, chunk) into decorrelated chunk seeds
    std::uint64_t st = seed ^ (0xD1B54A32D192ED03ULL * (chunk_index + 1));
    return splitmix64(st);
}

struct NormalPair {
    double z1, z2;
};

inline NormalPair box_muller(Xoshiro256pp& rng) {
    const double u1 = rng.uniform();
    const double u2 = rng.uniform();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * M_PI * u2;
    return {rad * std::cos(ang), rad * std::sin(ang)};
}

// inverse Gaussian IG(mean m, shape lambda), Michael-Schucany-Haas
inline double inverse_gaussian(Xoshiro256pp& rng, double m, double lambda, double z) {
    const double y = z * z;
    const double x = m + m * m * y / (2.0 * lambda) -
                     (m / (2.0 * lambda)) * std::sqrt(4.0 * m * lambda * y + m * m * y * y);
    const double u = rng.uniform();
    return u <= m / (m + x) ? x : m * m / x;
}

template <class ChunkFill>
void run_chunks(std::size_t n, int threads, ChunkFill&& fill) {
    const std::size_t n_chunks = (n + kChunk - 1) / kChunk;
    if (threads <= 1 || n_chunks <= 1) {
        for (std::size_t c = 0; c < n_chunks; ++c) fill(c);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(threads, n_chunks);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (std::size_t c = w; c < n_chunks; c += workers) fill(c);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace

std::vector<double> sample_nig_terminal(const NIGParams& params, double t, std::size_t n,
                                        std::uint64_t seed, int threads) {
    validate(params);
    if (!(t > 0.0)) throw DomainError("sample_nig_terminal requires t > 0");
    if (n == 0) throw ParameterError("sample_nig_terminal requires n >= 1");
    std::vector<double> out(n);
    const double m = params.delta_scale * t / params.gamma();
    const double lambda = (params.delta_scale * t) * (params.delta_scale * t);
    const double mu_t = params.mu * t;
    const double beta = params.beta_skew;

    run_chunks(n, threads, [&](std::size_t c) {
        Xoshiro256pp rng(chunk_seed(seed, c));
        const std::size_t lo = c * kChunk;
        const std::size_t hi = std::min(lo + kChunk, n);
        for (std::size_t i = lo; i < hi; ++i) {
            const NormalPair z = box_muller(rng);
            const double v = inverse_gaussian(rng, m, lambda, z.z1);
            out[i] = mu_t + beta * v + std::sqrt(v) * z.z2;
        }
    });
    return out;
}

std::vector<double> sample_terminal(const LevyModel& model, double t, std::size_t n,
                                    std::uint64_t seed, int threads) {
    if (model.variant() == ModelVariant::NormalInverseGaussian) {
        return sample_nig_terminal(model.nig(), t, n, seed, threads);
    }
    if (!(t > 0.0)) throw DomainError("sample_terminal requires t > 0");
    std::vector<double> out(n);
    const double sig = model.sigma_diff();
    const double drift_t = t * model.mean(1.0); // BS: t (r - q - sigma^2/2)
    const double vol_t = sig * std::sqrt(t);
    run_chunks(n, threads, [&](std::size_t c) {
        Xoshiro256pp rng(chunk_seed(seed, c));
        const std::size_t lo = c * kChunk;
        const std::size_t hi = std::min(lo + kChunk, n);
        for (std::size_t i = lo; i < hi; ++i) {
            const NormalPair z = box_muller(rng);
            out[i] = drift_t + vol_t * z.z1;
        }
    });
    return out;
}

namespace {

// chunk-wise mean/variance accumulation in deterministic chunk order
struct MeanVar {
    double mean = 0.0;
    double variance = 0.0; // population variance of the sample
};

MeanVar weighted_stats(const std::vector<double>& values) {
    const std::size_t n = values.size();
    double sum = 0.0, comp = 0.0;
    for (double v : values) {
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double v : values) {
        const double d = v - mean;
        ss += d * d;
    }
    return {mean, ss / static_cast<double>(n)};
}

} // namespace

McResult mc_price(const LevyModel& model, const MarketSpec& market,
                  const std::function<double(double)>& payoff, std::size_t n,
                  std::uint64_t seed, SpotMapping mapping, int threads) {
    market.validate();
    if (n == 0) throw EmptySample("mc_price requires n > 0");
    const double T = market.maturity;
    std::vector<double> x = sample_terminal(model, T, n, seed, threads);

    double shift = 0.0; // additive recentering of X before exponentiation
    double base = market.spot;
    if (mapping == SpotMapping::forward_centered) {
        shift = -T * model.kappa(1.0);
        base = market.spot * std::exp((market.rate - market.dividend) * T);
    }
    for (double& xi : x) xi = payoff(base * std::exp(xi + shift));

    const MeanVar mv = weighted_stats(x);
    const double df = market.discount();
    McResult out;
    out.value = df * mv.mean;
    out.std_error = df * std::sqrt(mv.variance / static_cast<double>(n));
    out.n = n;
    return out;
}

ConjugationCheck verify_conjugation(const LevyModel& model, const MarketSpec& market,
                                    const PayoffSpec& payoff, std::size_t n,
                                    std::uint64_t seed, int threads) {
    market.validate();
    if (n == 0) throw EmptySample("verify_conjugation requires n > 0");
    const double T = market.maturity;
    const double S0 = market.spot;
    const double a = power_drift(model);
    const double c = -2.0 * model.symmetry_beta(); // conjugate power
    const double level = S0 * std::exp(a * T);

    // left side: straight payoff
    std::vector<double> xl = sample_terminal(model, T, n, seed, threads);
    for (double& v : xl) v = payoff.evaluate(S0 * std::exp(v));
    const MeanVar l = weighted_stats(xl);
    xl.clear();
    xl.shrink_to_fit();

    // right side: power-weighted reflected payoff, independent stream
    std::uint64_t tweak = seed ^ 0xA3EC4E9F01C88D5BULL;
    const std::uint64_t seed_rhs = splitmix64(tweak);
    std::vector<double> xr = sample_terminal(model, T, n, seed_rhs, threads);
    for (double& v : xr) {
        const double spot = S0 * std::exp(v);
        const double weight = std::pow(spot / level, c);
        const double reflected = level * level / spot; // S0^2 e^{2aT} / S_T
        v = weight * payoff.evaluate(reflected);
    }
    const MeanVar r = weighted_stats(xr);

    ConjugationCheck out;
    out.lhs = l.mean;
    out.rhs = r.mean;
    out.se_lhs = std::sqrt(l.variance / static_cast<double>(n));
    out.se_rhs = std::sqrt(r.variance / static_cast<double>(n));
    out.combined_se = std::hypot(out.se_lhs, out.se_rhs);
    out.pass = std::abs(out.lhs - out.rhs) <= 3.0 * out.combined_se;
    return out;
}

} // namespace levysym
