#include "mixlab/czd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mixlab {

namespace {

struct Moments {
    long double mass = 0.0L;  // sum of v over cells
    long double fv = 0.0L;    // sum of f v over cells
    long double average() const { return fv / mass; }
};

Moments moments(const SampledFunction& f, const SampledFunction* v, CellRange r) {
    Moments m;
    for (std::size_t i = r.begin; i < r.end; ++i) {
        const long double w = v ? (*v)[i] : 1.0L;
        m.mass += w;
        m.fv += static_cast<long double>(f[i]) * w;
    }
    return m;
}

void check_inputs(const SampledFunction& f, double t, const SampledFunction* v) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("decomposition height must be positive and finite");
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f[i] < 0.0) throw DomainError("decomposition needs f >= 0; f < 0 at cell " + std::to_string(i));
    if (v) {
        require_same_grid(f, *v);
        for (std::size_t i = 0; i < v->size(); ++i)
            if (!((*v)[i] > 0.0)) throw DomainError("decomposition weight must be positive");
    }
}

}  // namespace

SampledFunction DecompositionResult::h_function(std::size_t j) const {
    std::vector<double> out(grid.N(), 0.0);
    const BadPart& b = h.at(j);
    std::copy(b.values.begin(), b.values.end(), out.begin() + static_cast<std::ptrdiff_t>(b.cells.begin));
    return SampledFunction(grid, std::move(out));
}

double DecompositionResult::omega_measure(const SampledFunction* v) const {
    long double s = 0.0L;
    for (const CellRange& r : cells)
        for (std::size_t i = r.begin; i < r.end; ++i) s += v ? (*v)[i] : 1.0;
    return static_cast<double>(s) * grid.h();
}

DecompositionResult cz_decompose(const SampledFunction& f, double t, const SampledFunction* v) {
    check_inputs(f, t, v);
    const Grid& grid = f.grid();
    const DyadicInterval root = whole_domain();
    const Moments rm = moments(f, v, cells_of(grid, root));
    const double root_avg = static_cast<double>(rm.average());
    if (root_avg > t) {
        std::ostringstream os;
        os.precision(17);
        os << "root average " << root_avg << " exceeds the height t = " << t << "; enlarge L or t";
        throw HeightError(os.str());
    }

    DecompositionResult out{grid, t, {}, {}, {}, f, {}, 1.0, root_avg};
    std::vector<double> g = f.data();

    struct Node {
        DyadicInterval q;
        long double mass;
    };
    std::vector<Node> stack{{root, rm.mass}};
    while (!stack.empty()) {
        const Node node = stack.back();
        stack.pop_back();
        if (node.q.j >= grid.J()) continue;
        // Push the right child first so the left subtree is walked first.
        for (const DyadicInterval& c : {node.q.right_child(), node.q.left_child()}) {
            const CellRange r = cells_of(grid, c);
            const Moments m = moments(f, v, r);
            const long double avg = m.average();
            if (avg > static_cast<long double>(t)) {
                out.cubes.push_back(c);
                out.cells.push_back(r);
                out.averages.push_back(static_cast<double>(avg));
                out.doubling_bound = std::max(out.doubling_bound, static_cast<double>(node.mass / m.mass));
            } else if (r.size() > 1) {
                stack.push_back({c, m.mass});
            }
        }
    }

    std::vector<std::size_t> order(out.cubes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& qa = out.cubes[a];
        const auto& qb = out.cubes[b];
        return qa.j != qb.j ? qa.j < qb.j : qa.k < qb.k;
    });
    DecompositionResult sorted{grid, t, {}, {}, {}, f, {}, out.doubling_bound, root_avg};
    for (std::size_t idx : order) {
        const CellRange r = out.cells[idx];
        const double a = out.averages[idx];
        sorted.cubes.push_back(out.cubes[idx]);
        sorted.cells.push_back(r);
        sorted.averages.push_back(a);
        BadPart b{out.cubes[idx], r, {}};
        b.values.reserve(r.size());
        for (std::size_t i = r.begin; i < r.end; ++i) {
            b.values.push_back(f[i] - a);
            g[i] = a;
        }
        sorted.h.push_back(std::move(b));
    }
    sorted.g = SampledFunction(grid, std::move(g));
    return sorted;
}

DecompositionResult cz_decompose(const SampledFunction& f, double t, const SampledFunction& v) {
    return cz_decompose(f, t, &v);
}

bool ValidationReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const Check* ValidationReport::find(const std::string& name) const {
    for (const Check& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

ValidationReport validate_decomposition(const DecompositionResult& r, const SampledFunction& f,
                                        const SampledFunction* v) {
    require_same_grid(f, r.g);
    if (v) require_same_grid(f, *v);
    const Grid& grid = f.grid();
    const double t = r.t;
    ValidationReport rep;

    // Structure: cube cells match, bad parts sit on their cubes.
    {
        bool ok = r.cubes.size() == r.cells.size() && r.cubes.size() == r.averages.size() &&
                  r.cubes.size() == r.h.size();
        for (std::size_t j = 0; ok && j < r.cubes.size(); ++j)
            ok = cells_of(grid, r.cubes[j]) == r.cells[j] && r.h[j].cells == r.cells[j] &&
                 r.h[j].values.size() == r.cells[j].size();
        rep.checks.push_back({"support", ok, 0.0});
        if (!ok) return rep;
    }

    // Disjointness.
    std::vector<int> owner(grid.N(), -1);
    {
        std::size_t overlaps = 0;
        for (std::size_t j = 0; j < r.cells.size(); ++j)
            for (std::size_t i = r.cells[j].begin; i < r.cells[j].end; ++i) {
                if (owner[i] >= 0) ++overlaps;
                owner[i] = static_cast<int>(j);
            }
        rep.checks.push_back({"disjoint", overlaps == 0, static_cast<double>(overlaps)});
    }

    // Two-sided average bound with the measured parent ratio.
    {
        double d = 1.0;
        bool ok = true;
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < r.cubes.size(); ++j) {
            const Moments m = moments(f, v, r.cells[j]);
            const Moments p = moments(f, v, cells_of(grid, r.cubes[j].parent()));
            d = std::max(d, static_cast<double>(p.mass / m.mass));
        }
        for (std::size_t j = 0; j < r.cubes.size(); ++j) {
            const double avg = static_cast<double>(moments(f, v, r.cells[j]).average());
            ok = ok && avg > t && avg <= d * t;
            worst = std::max(worst, std::max(t - avg, avg - d * t) / t);
        }
        rep.measured_doubling = d;
        rep.checks.push_back({"average_bounds", ok, r.cubes.empty() ? 0.0 : worst});
    }

    // Maximality: every ancestor of a selected cube stays at or below t.
    {
        bool ok = true;
        for (const DyadicInterval& q : r.cubes)
            for (DyadicInterval a = q.parent(); a.j >= 0 && ok; a = a.parent())
                ok = moments(f, v, cells_of(grid, a)).average() <= static_cast<long double>(t);
        rep.checks.push_back({"maximality", ok, 0.0});
    }

    // Reconstruction g + sum h_j = f, cellwise.
    {
        std::vector<double> sum = r.g.data();
        for (const BadPart& b : r.h)
            for (std::size_t i = 0; i < b.values.size(); ++i) sum[b.cells.begin + i] += b.values[i];
        double worst = 0.0;
        bool ok = true;
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double err = std::abs(sum[i] - f[i]);
            const double tol = owner[i] < 0 ? 0.0 : 4.0 * std::numeric_limits<double>::epsilon() *
                                                         std::max(std::abs(f[i]), std::abs(r.g[i]));
            ok = ok && err <= tol;
            worst = std::max(worst, err);
        }
        rep.checks.push_back({"reconstruction", ok, worst});
    }

    // Cancellation of each h_j against v.
    {
        bool ok = true;
        double worst = 0.0;
        for (const BadPart& b : r.h) {
            long double s = 0.0L, ref = 0.0L;
            for (std::size_t i = 0; i < b.values.size(); ++i) {
                const std::size_t c = b.cells.begin + i;
                const long double w = v ? (*v)[c] : 1.0L;
                s += static_cast<long double>(b.values[i]) * w;
                ref += static_cast<long double>(f[c]) * w;
            }
            const double rel = ref > 0.0L ? static_cast<double>(std::abs(s) / ref) : static_cast<double>(std::abs(s));
            worst = std::max(worst, rel);
            ok = ok && rel <= kCancellationTolerance;
        }
        rep.checks.push_back({"cancellation", ok, worst});
    }

    // Good part bounded on Omega, f <= t off Omega (floor exceptions only next to cubes).
    {
        bool ok = true;
        for (std::size_t i = 0; i < f.size(); ++i)
            if (owner[i] >= 0) ok = ok && r.g[i] <= rep.measured_doubling * t;
        rep.checks.push_back({"good_bound", ok, 0.0});

        bool off_ok = true;
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (owner[i] >= 0 || f[i] <= t) continue;
            ++rep.floor_exceptions;
            const bool adjacent = (i > 0 && owner[i - 1] >= 0) || (i + 1 < f.size() && owner[i + 1] >= 0);
            off_ok = off_ok && adjacent;
        }
        rep.checks.push_back({"off_omega", off_ok, static_cast<double>(rep.floor_exceptions)});
    }

    // Chebyshev bound on mu(Omega).
    {
        const double mu = r.omega_measure(v);
        const double bound = static_cast<double>(moments(f, v, CellRange{0, f.size()}).fv) * grid.h() / t;
        rep.checks.push_back({"measure_bound", mu <= bound * (1.0 + 1e-12), mu - bound});
    }
    return rep;
}

}  // namespace mixlab
