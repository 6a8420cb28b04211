#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <vector>

namespace levysym {

struct QuadResult {
    double value = 0.0;
    double abs_err = 0.0;       // summed panel error estimates
    std::size_t nodes = 0;      // integrand evaluations
    bool converged = true;
};

namespace detail {

// Gauss 7 / Kronrod 15 pair on [-1, 1], positive abscissae.
// Even indices of the Kronrod set are the Gauss nodes.
inline constexpr double kK15Nodes[8] = {
    0.0,
    0.2077849550078985,
    0.4058451513773972,
    0.5860872354676911,
    0.7415311855993944,
    0.8648644233597691,
    0.9491079123427585,
    0.9914553711208126,
};
inline constexpr double kK15Weights[8] = {
    0.2094821410847278,
    0.2044329400752989,
    0.1903505780647854,
    0.1690047266392679,
    0.1406532597155259,
    0.1047900103222502,
    0.06309209262997855,
    0.02293532201052922,
};
inline constexpr double kG7Weights[4] = {
    0.4179591836734694,
    0.3818300505051189,
    0.2797053914892767,
    0.1294849661688697,
};

struct Panel {
    double a, b;
    double integral;
    double err;
};

// worst error first; ties resolved by position so refinement order is
// deterministic regardless of how equal errors arise
struct PanelOrder {
    bool operator()(const Panel& l, const Panel& r) const {
        if (l.err != r.err) return l.err > r.err;
        if (l.a != r.a) return l.a < r.a;
        return l.b < r.b;
    }
};

template <class F>
Panel gauss_kronrod_15(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double k15 = kK15Weights[0] * fc;
    double g7 = kG7Weights[0] * fc;
    for (int j = 1; j < 8; ++j) {
        const double x = h * kK15Nodes[j];
        const double fsum = f(c - x) + f(c + x);
        k15 += kK15Weights[j] * fsum;
        if (j % 2 == 0) g7 += kG7Weights[j / 2] * fsum;
    }
    k15 *= h;
    g7 *= h;
    // QUADPACK-style sharpening of the raw |K-G| gap
    const double gap = std::abs(k15 - g7);
    const double sharpened = std::pow(200.0 * gap, 1.5);
    return Panel{a, b, k15, std::min(gap, sharpened)};
}

} // namespace detail

// Globally adaptive Gauss-Kronrod integration of f over [a, b]: the panel
// with the largest error estimate is bisected until
//   sum(err) <= max(abs_floor, rel_tol * |sum(integral)|)
// or the node budget runs out. Panel sums are accumulated left to right, so
// the result is bit-stable for a given (f, a, b, tolerances).
template <class F>
QuadResult integrate_adaptive(F&& f, double a, double b,
                              double rel_tol = 1e-10,
                              double abs_floor = 1e-15,
                              std::size_t max_nodes = 2'000'000) {
    QuadResult out;
    if (!(b > a)) return out;

    std::multiset<detail::Panel, detail::PanelOrder> panels;
    {
        auto whole = detail::gauss_kronrod_15(f, a, b);
        panels.insert(whole);
    }
    out.nodes = 15;

    const double min_width = 1e-14 * (b - a);
    double value_total = panels.begin()->integral;
    double err_total = panels.begin()->err;

    while (err_total > std::max(abs_floor, rel_tol * std::abs(value_total))) {
        auto worst = panels.begin();
        if (out.nodes + 30 > max_nodes || worst->b - worst->a < min_width) {
            out.converged = false;
            break;
        }
        const double mid = 0.5 * (worst->a + worst->b);
        const double pa = worst->a, pb = worst->b;
        value_total -= worst->integral;
        err_total -= worst->err;
        panels.erase(worst);
        auto left = detail::gauss_kronrod_15(f, pa, mid);
        auto right = detail::gauss_kronrod_15(f, mid, pb);
        value_total += left.integral + right.integral;
        err_total += left.err + right.err;
        panels.insert(left);
        panels.insert(right);
        out.nodes += 30;
    }

    // ordered accumulation: sort panels by left endpoint, Kahan-sum
    std::vector<detail::Panel> ordered(panels.begin(), panels.end());
    std::sort(ordered.begin(), ordered.end(),
              [](const detail::Panel& l, const detail::Panel& r) { return l.a < r.a; });
    double sum = 0.0, comp = 0.0, errsum = 0.0;
    for (const auto& p : ordered) {
        const double y = p.integral - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        errsum += p.err;
    }
    out.value = sum;
    out.abs_err = errsum;
    return out;
}

} // namespace levysym
