#pragma once

#include <string>
#include <vector>

#include "mixlab/grid.hpp"

namespace mixlab {

// h_j stored on its own cells only.
struct BadPart {
    DyadicInterval cube;
    CellRange cells;
    std::vector<double> values;  // f - f^v_Q on the cells of Q
};

struct DecompositionResult {
    Grid grid;
    double t = 0.0;
    std::vector<DyadicInterval> cubes;  // sorted by (j, k)
    std::vector<CellRange> cells;
    std::vector<double> averages;       // v-averages of f over each cube
    SampledFunction g;
    std::vector<BadPart> h;
    double doubling_bound = 1.0;        // max mu(parent) / mu(Q_j)
    double root_average = 0.0;

    SampledFunction h_function(std::size_t j) const;
    double omega_measure(const SampledFunction* v = nullptr) const;
};

// Depth-first stopping on the unshifted dyadic lattice: a cube is selected the
// first time its v-average exceeds t. Single cells may be selected but are
// never split further. Throws HeightError when the root average exceeds t.
DecompositionResult cz_decompose(const SampledFunction& f, double t, const SampledFunction* v = nullptr);
DecompositionResult cz_decompose(const SampledFunction& f, double t, const SampledFunction& v);

struct Check {
    std::string name;
    bool pass = false;
    double slack = 0.0;  // worst violation (<= 0 when passing) or worst margin
};

struct ValidationReport {
    std::vector<Check> checks;
    double measured_doubling = 1.0;
    std::size_t floor_exceptions = 0;  // cells off Omega with f > t
    bool all_pass() const;
    const Check* find(const std::string& name) const;
};

inline constexpr double kCancellationTolerance = 1e-12;

ValidationReport validate_decomposition(const DecompositionResult& r, const SampledFunction& f,
                                        const SampledFunction* v = nullptr);

}  // namespace mixlab
