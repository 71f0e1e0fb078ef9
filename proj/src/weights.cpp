#include "mixlab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mixlab/young.hpp"

namespace mixlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_positive(const SampledFunction& w, const char* what) {
    for (std::size_t i = 0; i < w.size(); ++i)
        if (!(w[i] > 0.0))
            throw DomainError(std::string(what) + " must be strictly positive; value " + std::to_string(w[i]) +
                              " at x = " + std::to_string(w.grid().center(i)));
}

struct Sums {
    long double s = 0.0L;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
};

Sums sums(const SampledFunction& w, CellRange r) {
    Sums out;
    for (std::size_t i = r.begin; i < r.end; ++i) {
        out.s += w[i];
        out.lo = std::min(out.lo, w[i]);
        out.hi = std::max(out.hi, w[i]);
    }
    return out;
}

template <class F>
double scan_max(const Grid& grid, const Scan& scan, F&& per_interval) {
    double best = 0.0;
    for_each_interval(grid, scan, [&](const DyadicInterval&, CellRange r) { best = std::max(best, per_interval(r)); });
    return best;
}

bool has_coarse(const Grid& grid) { return grid.J() - 2 >= kMinResolution; }

template <class F>
ConstantEstimate refine(const Grid& grid, const Scan& scan, F&& at) {
    ConstantEstimate e;
    e.scan = scan;
    e.value = at(grid);
    if (has_coarse(grid)) {
        e.coarse = at(Grid::make(grid.L(), grid.J() - 2));
        e.stable = refinement_stable(e.value, e.coarse);
    } else {
        e.coarse = kNaN;
    }
    return e;
}

}  // namespace

Weight::Weight(SampledFunction values, std::string family, PointFunction expr)
    : values_(std::move(values)), family_(std::move(family)), expr_(std::move(expr)) {
    require_positive(values_, "weight");
}

Weight Weight::from_expr(const Grid& grid, PointFunction expr, std::string family) {
    SampledFunction v = sample(expr, grid);
    return Weight(std::move(v), std::move(family), std::move(expr));
}

Weight Weight::at(const Grid& grid) const {
    if (grid == this->grid()) return *this;
    if (expr_) return Weight(sample(expr_, grid), family_, expr_);
    if (grid.L() != this->grid().L()) throw ShapeError("weight without an expression cannot change L");
    return Weight(coarsen(values_, grid.J()), family_);
}

Weight Weight::times(const Weight& other) const {
    PointFunction e;
    if (expr_ && other.expr_) e = [a = expr_, b = other.expr_](double x) { return a(x) * b(x); };
    return Weight(multiply(values_, other.values_), family_ + "*" + other.family_, std::move(e));
}

Weight Weight::pow(double p) const {
    PointFunction e;
    if (expr_) e = [a = expr_, p](double x) { return std::pow(a(x), p); };
    return Weight(map(values_, [p](double x) { return std::pow(x, p); }), family_ + "^" + std::to_string(p),
                  std::move(e));
}

Weight power_weight(const Grid& grid, double beta) {
    return Weight::from_expr(grid, [beta](double x) { return std::pow(std::abs(x), beta); },
                             "power(beta=" + std::to_string(beta) + ")");
}

Weight constant_weight(const Grid& grid, double c) {
    return Weight::from_expr(grid, [c](double) { return c; }, "const");
}

Weight bump_weight(const Grid& grid, double a, double b, double floor, double height) {
    return Weight::from_expr(
        grid, [=](double x) { return floor + (x >= a && x <= b ? height : 0.0); }, "bump");
}

bool refinement_stable(double fine, double coarse, double gap) {
    if (!std::isfinite(fine) || !std::isfinite(coarse)) return false;
    if (coarse == 0.0) return fine == 0.0;
    return std::abs(fine - coarse) / std::abs(coarse) < gap;
}

double ap_constant(const SampledFunction& w, double p, const Scan& scan) {
    if (!(p >= 1.0)) throw DomainError("A_p needs p >= 1");
    require_positive(w, "weight");
    if (p == 1.0) {
        return scan_max(w.grid(), scan, [&](CellRange r) {
            const Sums s = sums(w, r);
            return static_cast<double>(s.s / r.size()) / s.lo;
        });
    }
    const double e = -1.0 / (p - 1.0);
    return scan_max(w.grid(), scan, [&](CellRange r) {
        long double a = 0.0L, b = 0.0L;
        for (std::size_t i = r.begin; i < r.end; ++i) {
            a += w[i];
            b += std::pow(w[i], e);
        }
        const double n = static_cast<double>(r.size());
        return static_cast<double>(a / n) * std::pow(static_cast<double>(b / n), p - 1.0);
    });
}

double rh_constant(const SampledFunction& w, double s, const Scan& scan) {
    if (!(s > 1.0)) throw DomainError("RH_s needs s > 1");
    require_positive(w, "weight");
    return scan_max(w.grid(), scan, [&](CellRange r) {
        long double a = 0.0L, b = 0.0L;
        for (std::size_t i = r.begin; i < r.end; ++i) {
            a += w[i];
            b += std::pow(w[i], s);
        }
        const double n = static_cast<double>(r.size());
        return std::pow(static_cast<double>(b / n), 1.0 / s) / static_cast<double>(a / n);
    });
}

double rh_inf_proxy(const SampledFunction& w, const Scan& scan) {
    require_positive(w, "weight");
    return scan_max(w.grid(), scan, [&](CellRange r) {
        const Sums s = sums(w, r);
        return s.hi / static_cast<double>(s.s / r.size());
    });
}

double ap_u_constant(const SampledFunction& v, const SampledFunction& u, double p, const Scan& scan) {
    if (!(p >= 1.0)) throw DomainError("A_p(u) needs p >= 1");
    require_same_grid(v, u);
    require_positive(v, "weight v");
    require_positive(u, "weight u");
    const double e = p > 1.0 ? -1.0 / (p - 1.0) : 0.0;
    return scan_max(v.grid(), scan, [&](CellRange r) {
        long double mu = 0.0L, a = 0.0L, b = 0.0L;
        double lo = std::numeric_limits<double>::infinity();
        for (std::size_t i = r.begin; i < r.end; ++i) {
            mu += u[i];
            a += v[i] * u[i];
            if (p > 1.0)
                b += std::pow(v[i], e) * u[i];
            else
                lo = std::min(lo, v[i]);
        }
        const double avg = static_cast<double>(a / mu);
        if (p == 1.0) return avg / lo;
        return avg * std::pow(static_cast<double>(b / mu), p - 1.0);
    });
}

double fundamental_constant(const SampledFunction& u, const SampledFunction& v, const Scan& scan) {
    require_same_grid(u, v);
    require_positive(u, "weight u");
    require_positive(v, "weight v");
    return scan_max(u.grid(), scan, [&](CellRange r) {
        long double uv = 0.0L, vs = 0.0L;
        double lo = std::numeric_limits<double>::infinity();
        for (std::size_t i = r.begin; i < r.end; ++i) {
            uv += u[i] * v[i];
            vs += v[i];
            lo = std::min(lo, u[i]);
        }
        return static_cast<double>(uv / vs) / lo;
    });
}

ConstantEstimate estimate_Ap(const Weight& w, double p, const Scan& scan) {
    return refine(w.grid(), scan, [&](const Grid& g) { return ap_constant(w.at(g).values(), p, scan); });
}

ConstantEstimate estimate_RH(const Weight& w, double s, const Scan& scan) {
    return refine(w.grid(), scan, [&](const Grid& g) { return rh_constant(w.at(g).values(), s, scan); });
}

ConstantEstimate estimate_RH_inf(const Weight& w, const Scan& scan) {
    return refine(w.grid(), scan, [&](const Grid& g) { return rh_inf_proxy(w.at(g).values(), scan); });
}

ConstantEstimate estimate_Ap_u(const Weight& v, const Weight& u, double p, const Scan& scan) {
    return refine(v.grid(), scan,
                  [&](const Grid& g) { return ap_u_constant(v.at(g).values(), u.at(g).values(), p, scan); });
}

ConstantEstimate fundamental_ratio(const Weight& u, const Weight& v, const Scan& scan) {
    return refine(u.grid(), scan,
                  [&](const Grid& g) { return fundamental_constant(u.at(g).values(), v.at(g).values(), scan); });
}

double mean(const SampledFunction& b, CellRange q) {
    if (q.empty()) throw GeometryError("mean over an interval with no cell centres");
    long double s = 0.0L;
    for (std::size_t i = q.begin; i < q.end; ++i) s += b[i];
    return static_cast<double>(s / q.size());
}

double bmo_norm(const SampledFunction& b, const Scan& scan, double p) {
    if (!(p >= 1.0)) throw DomainError("BMO_p needs p >= 1");
    return scan_max(b.grid(), scan, [&](CellRange r) {
        const double m = mean(b, r);
        long double s = 0.0L;
        for (std::size_t i = r.begin; i < r.end; ++i) {
            const double d = std::abs(b[i] - m);
            s += p == 1.0 ? d : std::pow(d, p);
        }
        const double avg = static_cast<double>(s / r.size());
        return p == 1.0 ? avg : std::pow(avg, 1.0 / p);
    });
}

double bmo_w_norm(const SampledFunction& b, const SampledFunction& w, const Scan& scan) {
    require_same_grid(b, w);
    require_positive(w, "weight");
    return scan_max(b.grid(), scan, [&](CellRange r) {
        const double m = mean(b, r);
        long double s = 0.0L, ws = 0.0L;
        for (std::size_t i = r.begin; i < r.end; ++i) {
            s += std::abs(b[i] - m) * w[i];
            ws += w[i];
        }
        return static_cast<double>(s / ws);
    });
}

std::vector<TailPoint> jn_tail(const SampledFunction& b, CellRange q, const std::vector<double>& lambdas) {
    const double m = mean(b, q);
    std::vector<TailPoint> out;
    out.reserve(lambdas.size());
    for (double lambda : lambdas) {
        if (!(lambda >= 0.0)) throw DomainError("jn_tail needs lambda >= 0");
        std::size_t count = 0;
        for (std::size_t i = q.begin; i < q.end; ++i)
            if (std::abs(b[i] - m) > lambda) ++count;
        out.push_back({lambda, static_cast<double>(count) / static_cast<double>(q.size())});
    }
    return out;
}

std::vector<TailPoint> jn_tail(const SampledFunction& b, const DyadicInterval& q, const std::vector<double>& lambdas) {
    return jn_tail(b, cells_of(b.grid(), q), lambdas);
}

ExponentialFit fit_exponential(const std::vector<TailPoint>& tail) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    std::size_t n = 0;
    for (const TailPoint& p : tail) {
        if (!(p.fraction > 0.0)) continue;
        const double x = p.lambda, y = std::log(p.fraction);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
        ++n;
    }
    ExponentialFit fit;
    fit.points = n;
    if (n < 2) return fit;
    const double dn = static_cast<double>(n);
    const double vx = sxx - sx * sx / dn, vy = syy - sy * sy / dn, cxy = sxy - sx * sy / dn;
    if (vx <= 0.0) return fit;
    fit.slope = cxy / vx;
    fit.intercept = (sy - fit.slope * sx) / dn;
    fit.r2 = vy > 0.0 ? cxy * cxy / (vx * vy) : 1.0;
    return fit;
}

double dilated_average_gap(const SampledFunction& b, CellRange q, int k) {
    if (k < 0) throw DomainError("dilation exponent must be >= 0");
    if (q.empty()) throw GeometryError("dilated_average_gap on an interval with no cell centres");
    if (k == 0) return 0.0;
    const CellRange d = dilate(b.grid(), q, k);
    if (d == q)
        throw GeometryError("dilate collapsed onto the interval itself");
    return std::abs(mean(b, q) - mean(b, d));
}

double dilated_average_gap(const SampledFunction& b, const DyadicInterval& q, int k) {
    return dilated_average_gap(b, cells_of(b.grid(), q), k);
}

ExpLPair weighted_expL_vs_plain(const SampledFunction& b, CellRange q, const SampledFunction& w) {
    require_same_grid(b, w);
    const double m = mean(b, q);
    std::vector<double> d(b.size(), 0.0);
    for (std::size_t i = q.begin; i < q.end; ++i) d[i] = b[i] - m;
    const SampledFunction f(b.grid(), std::move(d));
    const young::YoungFunction phi = young::YoungFunction::expl(1.0);
    return {young::luxemburg_norm(f, q, phi, &w), young::luxemburg_norm(f, q, phi)};
}

}  // namespace mixlab
