#include "mixlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mixlab {

namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
    // b > 0
    std::int64_t q = a / b;
    if (a % b != 0 && a > 0) ++q;
    return q;
}

}  // namespace

Grid::Grid(double L, int J)
    : L_(L), J_(J), N_(std::size_t{1} << J), h_(2.0 * L / static_cast<double>(std::size_t{1} << J)) {}

Grid Grid::make(double L, int J) {
    if (!(L > 0.0) || !std::isfinite(L)) {
        std::ostringstream os;
        os << "grid half-width L must be positive and finite, got " << L;
        throw ConfigError(os.str());
    }
    if (J < kMinResolution || J > kMaxResolution) {
        std::ostringstream os;
        os << "grid resolution J must lie in [" << kMinResolution << ", " << kMaxResolution << "], got " << J;
        throw ConfigError(os.str());
    }
    return Grid(L, J);
}

std::vector<double> Grid::centers() const {
    std::vector<double> xs(N_);
    for (std::size_t i = 0; i < N_; ++i) xs[i] = center(i);
    return xs;
}

std::size_t Grid::cell_of(double x) const {
    double pos = std::floor((x + L_) / h_);
    if (pos < 0.0) return 0;
    if (pos >= static_cast<double>(N_)) return N_ - 1;
    return static_cast<std::size_t>(pos);
}

SampledFunction::SampledFunction(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.N()) {
        std::ostringstream os;
        os << "sampled function has " << values_.size() << " values, grid has " << grid_.N() << " cells";
        throw ShapeError(os.str());
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            std::ostringstream os;
            os << "non-finite value " << values_[i] << " at x = " << grid_.center(i) << " (cell " << i << ")";
            throw SamplingError(os.str());
        }
    }
}

SampledFunction SampledFunction::constant(const Grid& grid, double c) {
    return SampledFunction(grid, std::vector<double>(grid.N(), c));
}

SampledFunction sample(const PointFunction& expr, const Grid& grid) {
    std::vector<double> v(grid.N());
    for (std::size_t i = 0; i < grid.N(); ++i) {
        const double x = grid.center(i);
        v[i] = expr(x);
        if (!std::isfinite(v[i])) {
            std::ostringstream os;
            os.precision(17);
            os << "expression is not finite at x = " << x << " (cell " << i << "): " << v[i];
            throw SamplingError(os.str());
        }
    }
    return SampledFunction(grid, std::move(v));
}

void require_same_grid(const SampledFunction& a, const SampledFunction& b) {
    if (!(a.grid() == b.grid())) {
        std::ostringstream os;
        os << "grid mismatch: (L=" << a.grid().L() << ", J=" << a.grid().J() << ") vs (L=" << b.grid().L()
           << ", J=" << b.grid().J() << ")";
        throw ShapeError(os.str());
    }
}

SampledFunction multiply(const SampledFunction& a, const SampledFunction& b) {
    require_same_grid(a, b);
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] * b[i];
    return SampledFunction(a.grid(), std::move(v));
}

SampledFunction divide(const SampledFunction& a, const SampledFunction& b) {
    require_same_grid(a, b);
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] / b[i];
    return SampledFunction(a.grid(), std::move(v));
}

SampledFunction map(const SampledFunction& f, const std::function<double(double)>& op) {
    std::vector<double> v(f.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = op(f[i]);
    return SampledFunction(f.grid(), std::move(v));
}

int DyadicInterval::offset_thirds() const {
    const int s = static_cast<int>(shift);
    return s == 0 || j % 2 == 0 ? s : 3 - s;
}

namespace {

// Child index of the left child minus 2k: 1 when the child lattice starts one
// child length further left relative to the parent's.
std::int64_t child_lag(const DyadicInterval& parent) {
    const DyadicInterval child{parent.j + 1, 0, parent.shift};
    return child.offset_thirds() - 2 * parent.offset_thirds() < 0 ? 1 : 0;
}

std::int64_t floor_div2(std::int64_t a) { return a >= 0 ? a / 2 : -((1 - a) / 2); }

}  // namespace

DyadicInterval DyadicInterval::parent() const {
    DyadicInterval p{j - 1, 0, shift};
    p.k = floor_div2(k - child_lag(p));
    return p;
}

DyadicInterval DyadicInterval::left_child() const { return {j + 1, 2 * k + child_lag(*this), shift}; }

DyadicInterval DyadicInterval::right_child() const { return {j + 1, 2 * k + 1 + child_lag(*this), shift}; }

std::pair<double, double> DyadicInterval::endpoints(const Grid& grid) const {
    const double len = 2.0 * grid.L() / static_cast<double>(std::int64_t{1} << j);
    const double a = -grid.L() + (static_cast<double>(k) + offset_thirds() / 3.0) * len;
    return {std::max(a, -grid.L()), std::min(a + len, grid.L())};
}

CellRange cells_of(const Grid& grid, const DyadicInterval& q) {
    if (q.j < 0 || q.j > grid.J()) return {};
    // Work in sixths of a cell so the one-third shifts stay exact.
    const std::int64_t m = std::int64_t{1} << (grid.J() - q.j);
    const std::int64_t a6 = 6 * q.k * m + 2 * static_cast<std::int64_t>(q.offset_thirds()) * m;
    const std::int64_t lo = std::max<std::int64_t>(0, ceil_div(a6 - 3, 6));
    const std::int64_t hi = std::min<std::int64_t>(static_cast<std::int64_t>(grid.N()), ceil_div(a6 + 6 * m - 3, 6));
    if (hi <= lo) return {};
    return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
}

int Scan::resolved_j_max(const Grid& grid) const {
    if (j_max < 0) return grid.J();
    return std::min(j_max, grid.J());
}

std::vector<DyadicInterval> dyadic_intervals(const Grid& grid, int j_max, const std::vector<Shift>& shifts) {
    Scan scan{0, std::min(j_max, grid.J()), shifts};
    std::vector<DyadicInterval> out;
    for_each_interval(grid, scan, [&](const DyadicInterval& q, CellRange) { out.push_back(q); });
    return out;
}

double integrate(const SampledFunction& f, CellRange r, const SampledFunction* w) {
    if (w) require_same_grid(f, *w);
    const double h = f.grid().h();
    double s = 0.0;
    if (w) {
        for (std::size_t i = r.begin; i < r.end; ++i) s += f[i] * (*w)[i];
    } else {
        for (std::size_t i = r.begin; i < r.end; ++i) s += f[i];
    }
    return s * h;
}

double integrate(const SampledFunction& f, const DyadicInterval& q, const SampledFunction* w) {
    return integrate(f, cells_of(f.grid(), q), w);
}

double integrate(const SampledFunction& f, const SampledFunction* w) {
    return integrate(f, CellRange{0, f.size()}, w);
}

CellRange dilate(const Grid& grid, CellRange r, int k) {
    if (k <= 0 || r.empty()) return r;
    const std::int64_t n = static_cast<std::int64_t>(r.size());
    const std::int64_t extra = n * ((std::int64_t{1} << k) - 1);
    const std::int64_t left = extra / 2;
    const std::int64_t right = extra - left;
    const std::int64_t b = std::max<std::int64_t>(0, static_cast<std::int64_t>(r.begin) - left);
    const std::int64_t e = std::min<std::int64_t>(static_cast<std::int64_t>(grid.N()), static_cast<std::int64_t>(r.end) + right);
    return {static_cast<std::size_t>(b), static_cast<std::size_t>(e)};
}

CellRange cells_between(const Grid& grid, double a, double b) {
    // centre x_i in [a, b)  <=>  i + 1/2 in [(a + L)/h, (b + L)/h)
    const double lo = std::ceil((a + grid.L()) / grid.h() - 0.5);
    const double hi = std::ceil((b + grid.L()) / grid.h() - 0.5);
    const double n = static_cast<double>(grid.N());
    const double clo = std::clamp(lo, 0.0, n);
    const double chi = std::clamp(hi, 0.0, n);
    if (chi <= clo) return {};
    return {static_cast<std::size_t>(clo), static_cast<std::size_t>(chi)};
}

CellRange interior_cells(const Grid& grid, double margin) {
    if (!(margin >= 0.0) || margin >= 1.0) throw ConfigError("margin must lie in [0, 1)");
    const double edge = (1.0 - margin) * grid.L();
    CellRange r = cells_between(grid, -edge, edge);
    // Include a centre sitting exactly on the right edge.
    if (r.end < grid.N() && grid.center(r.end) <= edge) ++r.end;
    return r;
}

SampledFunction coarsen(const SampledFunction& f, int J) {
    const Grid& g = f.grid();
    if (J > g.J()) throw ShapeError("coarsen: target resolution is finer than the source");
    const Grid target = Grid::make(g.L(), J);
    const std::size_t block = std::size_t{1} << (g.J() - J);
    std::vector<double> v(target.N());
    for (std::size_t i = 0; i < v.size(); ++i) {
        long double s = 0.0L;
        for (std::size_t k = 0; k < block; ++k) s += f[i * block + k];
        v[i] = static_cast<double>(s / static_cast<long double>(block));
    }
    return SampledFunction(target, std::move(v));
}

}  // namespace mixlab
