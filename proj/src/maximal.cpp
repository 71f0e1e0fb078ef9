#include "mixlab/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace mixlab {

namespace {

double abs_average(const SampledFunction& f, CellRange r, const SampledFunction* w) {
    long double s = 0.0L, ws = 0.0L;
    if (w) {
        for (std::size_t i = r.begin; i < r.end; ++i) {
            s += std::abs(f[i]) * (*w)[i];
            ws += (*w)[i];
        }
    } else {
        for (std::size_t i = r.begin; i < r.end; ++i) s += std::abs(f[i]);
        ws = static_cast<long double>(r.size());
    }
    return static_cast<double>(s / ws);
}

SampledFunction scan_sup(const SampledFunction& f, const Scan& scan,
                         const std::function<double(const DyadicInterval&, CellRange)>& value) {
    std::vector<double> out(f.size(), 0.0);
    for_each_interval(f.grid(), scan, [&](const DyadicInterval& q, CellRange r) {
        const double v = value(q, r);
        for (std::size_t i = r.begin; i < r.end; ++i) out[i] = std::max(out[i], v);
    });
    return SampledFunction(f.grid(), std::move(out));
}

}  // namespace

SampledFunction hl_maximal(const SampledFunction& f, const Scan& scan) {
    return scan_sup(f, scan, [&](const DyadicInterval&, CellRange r) { return abs_average(f, r, nullptr); });
}

SampledFunction iterated_maximal(const SampledFunction& f, int m, const Scan& scan) {
    if (m < 1) throw DomainError("iterated_maximal needs m >= 1");
    SampledFunction g = hl_maximal(f, scan);
    for (int i = 1; i < m; ++i) g = hl_maximal(g, scan);
    return g;
}

SampledFunction orlicz_maximal(const SampledFunction& f, const young::YoungFunction& phi, const Scan& scan,
                               const SampledFunction* w) {
    if (w) require_same_grid(f, *w);
    // The Luxemburg norm for t is the plain average; share the helper so the
    // two maximal functions agree bit for bit.
    if (std::holds_alternative<young::Identity>(phi.family()))
        return scan_sup(f, scan, [&](const DyadicInterval&, CellRange r) { return abs_average(f, r, w); });
    return scan_sup(f, scan,
                    [&](const DyadicInterval&, CellRange r) { return young::luxemburg_norm(f, r, phi, w); });
}

SampledFunction brute_force_maximal(const SampledFunction& f) {
    std::vector<double> out(f.size(), 0.0);
    const std::size_t n = f.size();
    if (n > kBruteForceMaxCells)
        throw DomainError("brute_force_maximal refused for N = " + std::to_string(n) + " (limit " +
                          std::to_string(kBruteForceMaxCells) + ")");
    for (std::size_t b = 0; b < n; ++b) {
        long double s = 0.0L;
        for (std::size_t e = b + 1; e <= n; ++e) {
            s += std::abs(f[e - 1]);
            const double avg = static_cast<double>(s / static_cast<long double>(e - b));
            for (std::size_t i = b; i < e; ++i) out[i] = std::max(out[i], avg);
        }
    }
    return SampledFunction(f.grid(), std::move(out));
}

RatioBounds compare_llogl_iterated(const SampledFunction& f, int m, const Scan& scan, double margin) {
    if (m < 1) throw DomainError("compare_llogl_iterated needs m >= 1");
    const SampledFunction a = orlicz_maximal(f, young::YoungFunction::phi_m(m), scan);
    const SampledFunction b = iterated_maximal(f, m + 1, scan);
    const CellRange inner = interior_cells(f.grid(), margin);
    RatioBounds out{std::numeric_limits<double>::infinity(), 0.0, 0};
    for (std::size_t i = inner.begin; i < inner.end; ++i) {
        if (a[i] == 0.0 && b[i] == 0.0) continue;
        const double r = a[i] / b[i];
        out.low = std::min(out.low, r);
        out.high = std::max(out.high, r);
        ++out.points;
    }
    if (out.points == 0) throw DomainError("compare_llogl_iterated: f vanishes on the interior");
    return out;
}

std::vector<WeakModularRow> weak_modular_check(const SampledFunction& g, const young::YoungFunction& phi,
                                               const SampledFunction& u, const std::vector<double>& t_values,
                                               const Scan& scan) {
    require_same_grid(g, u);
    const SampledFunction mg = orlicz_maximal(g, phi, scan);
    const SampledFunction mu = hl_maximal(u, scan);
    const double h = g.grid().h();
    std::vector<WeakModularRow> rows;
    for (double t : t_values) {
        if (!(t > 0.0)) throw DomainError("weak_modular_check needs t > 0");
        long double lhs = 0.0L, rhs = 0.0L;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (mg[i] > t) lhs += u[i];
            if (g[i] != 0.0) rhs += phi(std::abs(g[i]) / t) * mu[i];
        }
        WeakModularRow row{t, static_cast<double>(lhs) * h, static_cast<double>(rhs) * h, 0.0};
        row.ratio = row.rhs > 0.0 ? row.lhs / row.rhs : (row.lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        rows.push_back(row);
    }
    return rows;
}

double weak11_ratio(const SampledFunction& f, const Scan& scan) {
    const double norm = integrate(map(f, [](double x) { return std::abs(x); }));
    if (norm == 0.0) return 0.0;
    std::vector<double> m = hl_maximal(f, scan).data();
    std::sort(m.begin(), m.end(), std::greater<>());
    const double h = f.grid().h();
    double best = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) best = std::max(best, m[k] * static_cast<double>(k + 1) * h);
    return best / norm;
}

}  // namespace mixlab
