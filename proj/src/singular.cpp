#include "mixlab/singular.hpp"

#include <cmath>
#include <numbers>

#include "mixlab/maximal.hpp"

namespace mixlab {

namespace {

// table[d + N - 1] = 1 / (pi d), zero at d = 0.
std::vector<double> kernel_table(std::size_t n) {
    std::vector<double> t(2 * n - 1, 0.0);
    for (std::size_t d = 1; d < n; ++d) {
        const double k = 1.0 / (std::numbers::pi * static_cast<double>(d));
        t[n - 1 + d] = k;
        t[n - 1 - d] = -k;
    }
    return t;
}

SampledFunction kernel_sum(const SampledFunction* b, const SampledFunction& f, int m) {
    if (m < 0) throw DomainError("commutator order must be >= 0");
    if (b) require_same_grid(*b, f);
    const std::size_t n = f.size();
    const std::vector<double> table = kernel_table(n);
    const double* fv = f.data().data();
    const double* bv = b ? b->data().data() : nullptr;
    std::vector<double> out(n, 0.0);
    const std::int64_t sn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < sn; ++i) {
        const double* row = table.data() + (n - 1) + i;  // row[-j] = K(i - j)
        double acc = 0.0;
        if (m == 0) {
            for (std::int64_t j = 0; j < sn; ++j) acc += row[-j] * fv[j];
        } else {
            const double bi = bv[i];
            for (std::int64_t j = 0; j < sn; ++j) {
                const double d = bi - bv[j];
                double factor = d;
                for (int e = 1; e < m; ++e) factor *= d;
                acc += factor * row[-j] * fv[j];
            }
        }
        out[i] = acc;
    }
    return SampledFunction(f.grid(), std::move(out));
}

}  // namespace

SampledFunction hilbert(const SampledFunction& f) { return kernel_sum(nullptr, f, 0); }

SampledFunction commutator(const SampledFunction& b, const SampledFunction& f, int m) {
    return kernel_sum(&b, f, m);
}

double hilbert_at(const SampledFunction& f, double x) {
    const Grid& g = f.grid();
    double acc = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double d = x - g.center(j);
        if (d == 0.0) continue;
        acc += f[j] / (std::numbers::pi * d);
    }
    return acc * g.h();
}

ConvolutionKernel hilbert_kernel() {
    return {[](double x) { return 1.0 / (std::numbers::pi * x); }, 1.0 / std::numbers::pi};
}

TripleSampler admissible_triple_sampler(double scale) {
    return [scale](std::mt19937_64& rng) {
        std::uniform_real_distribution<double> pos(-scale, scale);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const double y = pos(rng);
        const double sep = scale * std::pow(10.0, -3.0 * unit(rng));  // |x - y|
        const double x = y + (unit(rng) < 0.5 ? -sep : sep);
        // |y - z| up to 0.6 |x - y| so a few draws land outside the admissible region.
        const double off = 0.6 * sep * unit(rng);
        const double z = y + (unit(rng) < 0.5 ? -off : off);
        return Triple{x, y, z};
    };
}

SmoothnessFit kernel_smoothness_check(const ConvolutionKernel& k, const TripleSampler& sampler, std::size_t count,
                                      std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    SmoothnessFit fit;
    for (std::size_t n = 0; n < count; ++n) {
        const auto [x, y, z] = sampler(rng);
        const double xy = std::abs(x - y), yz = std::abs(y - z);
        if (!(xy > 2.0 * yz)) {
            ++fit.skipped;
            continue;
        }
        ++fit.evaluated;
        if (yz == 0.0) continue;
        const double c = std::abs(k.K(x - y) - k.K(x - z)) * xy * xy / yz;
        fit.constant = std::max(fit.constant, c);
    }
    return fit;
}

double coifman_ratio(const SampledFunction& b, const SampledFunction& f, int m, const SampledFunction& w, double p,
                     const Scan& scan, double margin) {
    require_same_grid(b, f);
    require_same_grid(f, w);
    const SampledFunction t = commutator(b, f, m);
    const SampledFunction mf = iterated_maximal(f, m + 1, scan);
    const CellRange inner = interior_cells(f.grid(), margin);
    long double num = 0.0L, den = 0.0L;
    for (std::size_t i = inner.begin; i < inner.end; ++i) {
        num += std::pow(std::abs(t[i]), p) * w[i];
        den += std::pow(mf[i], p) * w[i];
    }
    if (den == 0.0L) throw DomainError("coifman_ratio: M^{m+1} f vanishes on the interior");
    return static_cast<double>(num / den);
}

}  // namespace mixlab
