#pragma once

#include <vector>

#include "mixlab/grid.hpp"
#include "mixlab/young.hpp"

namespace mixlab {

// Uncentred maximal function over the scanned intervals containing each cell.
SampledFunction hl_maximal(const SampledFunction& f, const Scan& scan = {});

// M^m f, reusing the scan on every pass.
SampledFunction iterated_maximal(const SampledFunction& f, int m, const Scan& scan = {});

// sup over scanned Q containing x of ||f||_{phi,Q,w}.
SampledFunction orlicz_maximal(const SampledFunction& f, const young::YoungFunction& phi, const Scan& scan = {},
                               const SampledFunction* w = nullptr);

// Exact uncentred maximal over every contiguous cell range. N <= 256 only.
SampledFunction brute_force_maximal(const SampledFunction& f);

struct RatioBounds {
    double low = 0.0;
    double high = 0.0;
    std::size_t points = 0;
};

// min / max over interior cells of M_{L(log L)^m} f / M^{m+1} f.
RatioBounds compare_llogl_iterated(const SampledFunction& f, int m, const Scan& scan = {}, double margin = 0.05);

struct WeakModularRow {
    double t = 0.0;
    double lhs = 0.0;  // u({M_phi g > t})
    double rhs = 0.0;  // int phi(g / t) Mu
    double ratio = 0.0;
};

std::vector<WeakModularRow> weak_modular_check(const SampledFunction& g, const young::YoungFunction& phi,
                                               const SampledFunction& u, const std::vector<double>& t_values,
                                               const Scan& scan = {});

// sup_t t |{Mf > t}| / ||f||_1, read off the sorted values of Mf.
double weak11_ratio(const SampledFunction& f, const Scan& scan = {});

}  // namespace mixlab
