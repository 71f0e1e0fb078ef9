#pragma once

// Slow, independent reference computations used only by the tests.

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <vector>

#include "mixlab/grid.hpp"

namespace oracle {

using mixlab::CellRange;
using mixlab::Grid;
using mixlab::SampledFunction;

template <class F>
double over_all_ranges(const SampledFunction& f, F&& value) {
    double best = 0.0;
    const std::size_t n = f.size();
    for (std::size_t b = 0; b < n; ++b)
        for (std::size_t e = b + 1; e <= n; ++e) best = std::max(best, value(CellRange{b, e}));
    return best;
}

inline double avg(const SampledFunction& f, CellRange r) {
    double s = 0.0;
    for (std::size_t i = r.begin; i < r.end; ++i) s += f[i];
    return s / static_cast<double>(r.size());
}

inline double ap(const SampledFunction& w, double p) {
    return over_all_ranges(w, [&](CellRange r) {
        double a = 0.0, b = 0.0, lo = std::numeric_limits<double>::infinity();
        for (std::size_t i = r.begin; i < r.end; ++i) {
            a += w[i];
            if (p > 1.0) b += std::pow(w[i], -1.0 / (p - 1.0));
            lo = std::min(lo, w[i]);
        }
        const double n = static_cast<double>(r.size());
        return p == 1.0 ? (a / n) / lo : (a / n) * std::pow(b / n, p - 1.0);
    });
}

inline double rh(const SampledFunction& w, double s) {
    return over_all_ranges(w, [&](CellRange r) {
        double a = 0.0, b = 0.0;
        for (std::size_t i = r.begin; i < r.end; ++i) {
            a += w[i];
            b += std::pow(w[i], s);
        }
        const double n = static_cast<double>(r.size());
        return std::pow(b / n, 1.0 / s) / (a / n);
    });
}

inline double ap_u(const SampledFunction& v, const SampledFunction& u, double p) {
    return over_all_ranges(v, [&](CellRange r) {
        double mu = 0.0, a = 0.0, b = 0.0;
        for (std::size_t i = r.begin; i < r.end; ++i) {
            mu += u[i];
            a += v[i] * u[i];
            b += std::pow(v[i], -1.0 / (p - 1.0)) * u[i];
        }
        return (a / mu) * std::pow(b / mu, p - 1.0);
    });
}

inline double bmo(const SampledFunction& b, double p = 1.0) {
    return over_all_ranges(b, [&](CellRange r) {
        const double m = avg(b, r);
        double s = 0.0;
        for (std::size_t i = r.begin; i < r.end; ++i) s += std::pow(std::abs(b[i] - m), p);
        return std::pow(s / static_cast<double>(r.size()), 1.0 / p);
    });
}

inline double fundamental(const SampledFunction& u, const SampledFunction& v) {
    return over_all_ranges(u, [&](CellRange r) {
        double uv = 0.0, vs = 0.0, lo = std::numeric_limits<double>::infinity();
        for (std::size_t i = r.begin; i < r.end; ++i) {
            uv += u[i] * v[i];
            vs += v[i];
            lo = std::min(lo, u[i]);
        }
        return uv / vs / lo;
    });
}

// Uncentred maximal over all contiguous ranges, one average per (range, cell).
inline std::vector<double> maximal(const SampledFunction& f) {
    const std::size_t n = f.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t b = 0; b < n; ++b)
        for (std::size_t e = b + 1; e <= n; ++e) {
            double s = 0.0;
            for (std::size_t i = b; i < e; ++i) s += std::abs(f[i]);
            const double a = s / static_cast<double>(e - b);
            for (std::size_t i = b; i < e; ++i) out[i] = std::max(out[i], a);
        }
    return out;
}

// Breadth-first unweighted stopping on halving cell ranges.
inline std::vector<CellRange> cz_reference(const SampledFunction& f, double t) {
    std::vector<CellRange> selected;
    std::deque<CellRange> queue{{0, f.size()}};
    while (!queue.empty()) {
        const CellRange r = queue.front();
        queue.pop_front();
        if (r.size() < 2) continue;
        const std::size_t mid = r.begin + r.size() / 2;
        for (const CellRange c : {CellRange{r.begin, mid}, CellRange{mid, r.end}}) {
            if (avg(f, c) > t)
                selected.push_back(c);
            else
                queue.push_back(c);
        }
    }
    std::sort(selected.begin(), selected.end(), [](CellRange a, CellRange b) { return a.begin < b.begin; });
    return selected;
}

// Nonnegative step data with a few random plateaus and zeros.
inline SampledFunction random_nonneg(const Grid& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> v(g.N(), 0.0);
    const int pieces = 1 + static_cast<int>(unit(rng) * 6);
    for (int p = 0; p < pieces; ++p) {
        const std::size_t a = static_cast<std::size_t>(unit(rng) * g.N());
        const std::size_t len = 1 + static_cast<std::size_t>(unit(rng) * g.N() / 4);
        const double height = std::exp(4.0 * unit(rng) - 2.0);
        for (std::size_t i = a; i < std::min(g.N(), a + len); ++i) v[i] += height;
    }
    return SampledFunction(g, std::move(v));
}

}  // namespace oracle
