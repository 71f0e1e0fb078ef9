#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mixlab/error.hpp"

namespace mixlab {

inline constexpr int kMinResolution = 3;
inline constexpr int kMaxResolution = 24;

// Uniform cell-centred grid on [-L, L] with N = 2^J cells. Centres sit at
// -L + (i + 1/2) h, so x = 0 is never a sample point.
class Grid {
public:
    static Grid make(double L, int J);

    double L() const { return L_; }
    int J() const { return J_; }
    std::size_t N() const { return N_; }
    double h() const { return h_; }
    double center(std::size_t i) const { return -L_ + (static_cast<double>(i) + 0.5) * h_; }
    std::vector<double> centers() const;

    // Index of the cell whose closed-open extent [x_i - h/2, x_i + h/2) holds x,
    // clamped to the domain.
    std::size_t cell_of(double x) const;

    friend bool operator==(const Grid& a, const Grid& b) { return a.L_ == b.L_ && a.J_ == b.J_; }

private:
    Grid(double L, int J);
    double L_;
    int J_;
    std::size_t N_;
    double h_;
};

inline Grid make_grid(double L, int J) { return Grid::make(L, J); }

// Values of a real function at the cell centres of a grid. All entries finite.
class SampledFunction {
public:
    SampledFunction(Grid grid, std::vector<double> values);
    static SampledFunction constant(const Grid& grid, double c);
    static SampledFunction zeros(const Grid& grid) { return constant(grid, 0.0); }

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    std::span<const double> values() const { return values_; }
    const std::vector<double>& data() const { return values_; }

private:
    Grid grid_;
    std::vector<double> values_;
};

using PointFunction = std::function<double(double)>;

// values[i] = expr(x_i); throws SamplingError naming the first non-finite x_i.
SampledFunction sample(const PointFunction& expr, const Grid& grid);

// Elementwise helpers; all of them require a shared grid.
void require_same_grid(const SampledFunction& a, const SampledFunction& b);
SampledFunction multiply(const SampledFunction& a, const SampledFunction& b);
SampledFunction divide(const SampledFunction& a, const SampledFunction& b);
SampledFunction map(const SampledFunction& f, const std::function<double(double)>& op);

// Half-open range of cell indices [begin, end).
struct CellRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const { return end > begin ? end - begin : 0; }
    bool empty() const { return end <= begin; }
    bool contains(std::size_t i) const { return i >= begin && i < end; }
    friend bool operator==(const CellRange&, const CellRange&) = default;
};

// A shift t in {0, 1/3, 2/3} offsets scale j by (-1)^j t lengths (mod 1), so
// each shifted family is itself a nested dyadic system.
enum class Shift : int { None = 0, Third = 1, TwoThirds = 2 };

// [a, b) with a = -L + (k + offset_thirds/3) 2L 2^-j, b = a + 2L 2^-j, clipped to [-L, L].
struct DyadicInterval {
    int j = 0;
    std::int64_t k = 0;
    Shift shift = Shift::None;

    // s on even scales, 3 - s on odd ones (0 when unshifted).
    int offset_thirds() const;
    std::pair<double, double> endpoints(const Grid& grid) const;
    DyadicInterval parent() const;
    DyadicInterval left_child() const;
    DyadicInterval right_child() const;
    friend bool operator==(const DyadicInterval&, const DyadicInterval&) = default;
};

// Cells whose centres lie in the interval.
CellRange cells_of(const Grid& grid, const DyadicInterval& q);
inline DyadicInterval whole_domain() { return {0, 0, Shift::None}; }

// Which intervals a sup-over-cubes scan visits.
struct Scan {
    int j_min = 0;
    int j_max = -1;  // -1 means "down to single cells" (J)
    std::vector<Shift> shifts{Shift::None, Shift::Third, Shift::TwoThirds};

    int resolved_j_max(const Grid& grid) const;
    static Scan unshifted() { return Scan{0, -1, {Shift::None}}; }
};

// For any cell-aligned interval I there is a scanned interval Q with I in Q and
// |Q| < kShiftComparability |I| (full scale range, all three shifts).
inline constexpr double kShiftComparability = 4.0;

std::vector<DyadicInterval> dyadic_intervals(const Grid& grid, int j_max, const std::vector<Shift>& shifts);

// Calls fn(interval, cells) for every non-empty interval of the scan.
template <class Fn>
void for_each_interval(const Grid& grid, const Scan& scan, Fn&& fn) {
    const int j_max = scan.resolved_j_max(grid);
    for (Shift s : scan.shifts) {
        for (int j = scan.j_min; j <= j_max; ++j) {
            const std::int64_t count = std::int64_t{1} << j;
            for (std::int64_t k = 0; k < count; ++k) {
                DyadicInterval q{j, k, s};
                CellRange r = cells_of(grid, q);
                if (!r.empty()) fn(q, r);
            }
        }
    }
}

// Every contiguous cell range of a grid: the O(N^2) oracle family.
inline constexpr std::size_t kBruteForceMaxCells = 256;

template <class Fn>
void for_each_cell_range(const Grid& grid, Fn&& fn) {
    if (grid.N() > kBruteForceMaxCells)
        throw DomainError("brute-force interval enumeration refused for N = " + std::to_string(grid.N()) +
                          " (limit " + std::to_string(kBruteForceMaxCells) + ")");
    for (std::size_t b = 0; b < grid.N(); ++b)
        for (std::size_t e = b + 1; e <= grid.N(); ++e) fn(CellRange{b, e});
}

// Midpoint rule: sum of f(x_i) w(x_i) h over cells with centres in Q.
double integrate(const SampledFunction& f, const DyadicInterval& q, const SampledFunction* w = nullptr);
double integrate(const SampledFunction& f, CellRange r, const SampledFunction* w = nullptr);
double integrate(const SampledFunction& f, const SampledFunction* w = nullptr);

// Concentric dilate of a cell range by an integer power of two, clipped to the grid.
CellRange dilate(const Grid& grid, CellRange r, int k);

// Cells of a real interval [a, b) by centre membership.
CellRange cells_between(const Grid& grid, double a, double b);

// Cells with |x| <= (1 - margin) L; margin is a fraction of L per side.
CellRange interior_cells(const Grid& grid, double margin);

// Block averages onto the grid with the same L and resolution J (J <= f's).
SampledFunction coarsen(const SampledFunction& f, int J);

}  // namespace mixlab
