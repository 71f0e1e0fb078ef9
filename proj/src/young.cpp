#include "mixlab/young.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace mixlab::young {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kExpOverflow = 709.0;
constexpr double kNormRelTol = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double log_plus(double t) { return t > 1.0 ? std::log(t) : 0.0; }

double guarded_expm1(double x) { return x > kExpOverflow ? kInf : std::expm1(x); }

// sup{t >= 0 : phi(t) <= y} for a non-decreasing phi with phi(0) = 0.
template <class F>
double monotone_inverse(F&& phi, double y) {
    if (y == 0.0 && phi(std::numeric_limits<double>::min()) > 0.0) return 0.0;
    double hi = std::max(1.0, y);
    while (phi(hi) <= y) {
        hi *= 2.0;
        if (hi > 1e300) throw RangeError("inverse: value not attained below 1e300");
    }
    double lo = hi * 0.5;
    while (phi(lo) > y) {
        lo *= 0.5;
        if (lo < 1e-300) return 0.0;
    }
    for (int it = 0; it < 400 && hi - lo > 1e-16 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (phi(mid) <= y)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

struct QueryView {
    std::span<const double> f;
    const double* w = nullptr;  // nullptr: Lebesgue
    double wsum = 0.0;
    double maxabs = 0.0;
};

QueryView make_view(const SampledFunction& f, CellRange q, const SampledFunction* w) {
    if (q.empty()) throw GeometryError("interval contains no cell centres");
    if (q.end > f.size()) throw GeometryError("interval exceeds the grid");
    if (w) require_same_grid(f, *w);
    QueryView v;
    v.f = f.values().subspan(q.begin, q.size());
    if (w) {
        v.w = w->data().data() + q.begin;
        for (std::size_t i = 0; i < q.size(); ++i) v.wsum += v.w[i];
        if (!(v.wsum > 0.0)) throw GeometryError("weight has zero mass on the interval");
    } else {
        v.wsum = static_cast<double>(q.size());
    }
    for (std::size_t i = 0; i < v.f.size(); ++i) {
        if (v.w && v.w[i] <= 0.0) continue;
        v.maxabs = std::max(v.maxabs, std::abs(v.f[i]));
    }
    return v;
}

double view_modular(const QueryView& v, const YoungFunction& phi, double lambda) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.f.size(); ++i) {
        const double x = std::abs(v.f[i]);
        if (x == 0.0) continue;
        const double p = phi(x / lambda);
        if (v.w) {
            if (v.w[i] == 0.0) continue;
            s += p * v.w[i];
        } else {
            s += p;
        }
        if (s == kInf) return kInf;
    }
    return s / v.wsum;
}

double weighted_mean_abs_pow(const QueryView& v, double r) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.f.size(); ++i) {
        const double x = r == 1.0 ? std::abs(v.f[i]) : std::pow(std::abs(v.f[i]), r);
        s += v.w ? x * v.w[i] : x;
    }
    return s / v.wsum;
}

double nudge_up(const QueryView& v, const YoungFunction& phi, double lambda) {
    for (int it = 0; it < 64 && view_modular(v, phi, lambda) > 1.0; ++it)
        lambda = it < 8 ? std::nextafter(lambda, kInf) : lambda * (1.0 + 1e-15 * (1 << std::min(it - 8, 30)));
    return lambda;
}

double view_norm(const QueryView& v, const YoungFunction& phi) {
    if (v.maxabs == 0.0) return 0.0;
    const Family& fam = phi.family();
    if (std::holds_alternative<Identity>(fam)) return nudge_up(v, phi, weighted_mean_abs_pow(v, 1.0));
    if (const auto* p = std::get_if<Power>(&fam))
        return nudge_up(v, phi, std::pow(p->coef * weighted_mean_abs_pow(v, p->r), 1.0 / p->r));
    if (const auto* st = std::get_if<StepConjugate>(&fam)) return v.maxabs / st->threshold;

    auto mod = [&](double lambda) { return view_modular(v, phi, lambda); };
    const double start = weighted_mean_abs_pow(v, 1.0);
    double lo, hi;
    if (mod(start) <= 1.0) {
        hi = start;
        lo = start * 0.5;
        while (mod(lo) <= 1.0) {
            hi = lo;
            lo *= 0.5;
            if (lo < 1e-300) return hi;
        }
    } else {
        lo = start;
        hi = start * 2.0;
        while (mod(hi) > 1.0) {
            lo = hi;
            hi *= 2.0;
            if (hi > 1e300) throw RangeError("luxemburg_norm: no admissible lambda below 1e300");
        }
    }
    while (hi - lo > kNormRelTol * hi) {
        const double mid = 0.5 * (lo + hi);
        if (mod(mid) <= 1.0)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

}  // namespace

double LegendreTable::operator()(double t) const {
    if (!(t > 0.0)) return 0.0;
    const auto it = std::upper_bound(slope_.begin(), slope_.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - slope_.begin());
    return std::max(0.0, t * s_[i] - phi_[i]);
}

YoungFunction::YoungFunction(Family family) : family_(std::move(family)) {
    std::visit(overloaded{
                   [](const Power& p) {
                       if (!(p.r >= 1.0) || !(p.coef > 0.0) || !std::isfinite(p.r) || !std::isfinite(p.coef))
                           throw DomainError("power Young function needs r >= 1 and coef > 0");
                   },
                   [](const LLogL& p) {
                       if (!(p.r >= 1.0) || !(p.delta >= 0.0))
                           throw DomainError("llogl Young function needs r >= 1 and delta >= 0");
                   },
                   [](const ExpL& p) {
                       if (!(p.alpha > 0.0)) throw DomainError("expl Young function needs alpha > 0");
                   },
                   [](const ExpAlphaL& p) {
                       if (!(p.alpha > 0.0) || !(p.a > 0.0))
                           throw DomainError("exp_alpha Young function needs alpha > 0 and a > 0");
                   },
                   [](const Identity&) {},
                   [](const StepConjugate& s) {
                       if (!(s.threshold > 0.0)) throw DomainError("step conjugate needs a positive threshold");
                   },
                   [](const Legendre& l) {
                       if (!l.table) throw DomainError("legendre Young function without a table");
                   },
               },
               family_);
}

double YoungFunction::operator()(double t) const {
    return std::visit(overloaded{
                          [t](const Power& p) { return p.coef * (p.r == 1.0 ? t : std::pow(t, p.r)); },
                          [t](const LLogL& p) {
                              const double base = p.r == 1.0 ? t : std::pow(t, p.r);
                              if (p.delta == 0.0 || t <= 1.0) return base;
                              return base * std::pow(1.0 + std::log(t), p.delta);
                          },
                          [t](const ExpL& p) { return guarded_expm1(p.alpha == 1.0 ? t : std::pow(t, 1.0 / p.alpha)); },
                          [t](const ExpAlphaL& p) { return guarded_expm1(p.a * std::pow(t, 1.0 / p.alpha)); },
                          [t](const Identity&) { return t; },
                          [t](const StepConjugate& s) { return t <= s.threshold ? 0.0 : kInf; },
                          [t](const Legendre& l) { return (*l.table)(t); },
                      },
                      family_);
}

bool YoungFunction::submultiplicative() const {
    return std::holds_alternative<Power>(family_) || std::holds_alternative<LLogL>(family_) ||
           std::holds_alternative<Identity>(family_);
}

bool YoungFunction::convex() const {
    if (const auto* e = std::get_if<ExpL>(&family_)) return e->alpha <= 1.0;
    if (const auto* e = std::get_if<ExpAlphaL>(&family_)) return e->alpha <= 1.0;
    return true;
}

bool YoungFunction::finite_valued() const { return !std::holds_alternative<StepConjugate>(family_); }

std::string YoungFunction::name() const {
    return std::visit(overloaded{
                          [](const Power& p) { return "power(r=" + fmt(p.r) + ",coef=" + fmt(p.coef) + ")"; },
                          [](const LLogL& p) { return "llogl(r=" + fmt(p.r) + ",delta=" + fmt(p.delta) + ")"; },
                          [](const ExpL& p) { return "expl(alpha=" + fmt(p.alpha) + ")"; },
                          [](const ExpAlphaL& p) { return "exp_alpha(alpha=" + fmt(p.alpha) + ",a=" + fmt(p.a) + ")"; },
                          [](const Identity&) { return std::string("identity"); },
                          [](const StepConjugate& s) { return "step(threshold=" + fmt(s.threshold) + ")"; },
                          [](const Legendre& l) { return "legendre(" + l.table->source() + ")"; },
                      },
                      family_);
}

YoungFunction YoungFunction::with_equivalence(double constant) const {
    YoungFunction out = *this;
    out.equivalent_form_ = true;
    out.equivalence_constant_ = constant;
    return out;
}

double eval(const YoungFunction& phi, double t) {
    if (!(t >= 0.0)) throw DomainError("Young function evaluated at negative or NaN t = " + fmt(t));
    return phi(t);
}

double inverse(const YoungFunction& phi, double y) {
    if (!(y >= 0.0) || !std::isfinite(y)) throw RangeError("inverse: y = " + fmt(y) + " is outside [0, inf)");
    return std::visit(overloaded{
                          [y](const Power& p) { return std::pow(y / p.coef, 1.0 / p.r); },
                          [y](const ExpL& p) { return std::pow(std::log1p(y), p.alpha); },
                          [y](const ExpAlphaL& p) { return std::pow(std::log1p(y) / p.a, p.alpha); },
                          [y](const Identity&) { return y; },
                          [y](const StepConjugate& s) { return y > 0.0 ? s.threshold : 0.0; },
                          [y, &phi](const auto&) { return monotone_inverse(phi, y); },
                      },
                      phi.family());
}

YoungFunction legendre_transform(const YoungFunction& phi) {
    return YoungFunction(Legendre{LegendreTable::build(phi, "conj " + phi.name())});
}

YoungFunction complementary(const YoungFunction& phi) {
    const Family& fam = phi.family();
    if (std::holds_alternative<Identity>(fam)) return YoungFunction(StepConjugate{1.0});
    if (const auto* s = std::get_if<StepConjugate>(&fam))
        return s->threshold == 1.0 ? YoungFunction::identity() : YoungFunction::power(1.0, s->threshold);
    if (const auto* p = std::get_if<Power>(&fam)) {
        if (p->r == 1.0) return YoungFunction(StepConjugate{p->coef});
        const double rc = p->r / (p->r - 1.0);
        const double coef = (1.0 - 1.0 / p->r) * std::pow(p->coef * p->r, -1.0 / (p->r - 1.0));
        return YoungFunction::power(rc, coef);
    }
    if (const auto* l = std::get_if<LLogL>(&fam)) {
        if (l->delta == 0.0) return complementary(YoungFunction::power(l->r));
        if (l->r == 1.0) {
            // The exp form stands in for the true conjugate; record how far apart
            // their inverses drift on y in [1, 1e6].
            const YoungFunction exact = legendre_transform(phi);
            const YoungFunction form = YoungFunction::expl(l->delta);
            double k = 1.0;
            for (int i = 0; i <= 120; ++i) {
                const double y = std::pow(10.0, i / 20.0);
                const double a = inverse(form, y), b = inverse(exact, y);
                k = std::max({k, a / b, b / a});
            }
            return form.with_equivalence(k);
        }
    }
    return legendre_transform(phi);
}

double modular(const SampledFunction& f, CellRange q, const YoungFunction& phi, const SampledFunction* w,
               double lambda) {
    if (!(lambda > 0.0)) throw DomainError("modular needs lambda > 0");
    return view_modular(make_view(f, q, w), phi, lambda);
}

double luxemburg_norm(const SampledFunction& f, CellRange q, const YoungFunction& phi, const SampledFunction* w) {
    return view_norm(make_view(f, q, w), phi);
}

double luxemburg_norm(const SampledFunction& f, const DyadicInterval& q, const YoungFunction& phi,
                      const SampledFunction* w) {
    return luxemburg_norm(f, cells_of(f.grid(), q), phi, w);
}

double modular_inf(const SampledFunction& f, CellRange q, const YoungFunction& phi, const SampledFunction* w) {
    const QueryView v = make_view(f, q, w);
    const double norm = view_norm(v, phi);
    if (norm == 0.0) return 0.0;
    auto objective = [&](double tau) { return tau + tau * view_modular(v, phi, tau); };

    const double ratio = 1.01;
    const double lo = norm * 1e-3;
    const int steps = static_cast<int>(std::ceil(std::log(1e6) / std::log(ratio)));
    double best_tau = norm;
    double best = objective(norm);
    int best_i = -1;
    for (int i = 0; i <= steps; ++i) {
        const double tau = lo * std::pow(ratio, i);
        const double val = objective(tau);
        if (val < best) {
            best = val;
            best_tau = tau;
            best_i = i;
        }
    }
    double a = best_i >= 0 ? best_tau / ratio : norm / ratio;
    double b = best_i >= 0 ? best_tau * ratio : norm * ratio;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = objective(c), fd = objective(d);
    while (b - a > 1e-6 * b) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = objective(d);
        }
    }
    return std::min({best, fc, fd});
}

HolderPair holder_pair(const SampledFunction& f, const SampledFunction& g, CellRange q, const YoungFunction& phi,
                       const YoungFunction& conjugate, const SampledFunction* w) {
    require_same_grid(f, g);
    const QueryView vf = make_view(f, q, w);
    const QueryView vg = make_view(g, q, w);
    double s = 0.0;
    for (std::size_t i = 0; i < vf.f.size(); ++i) {
        const double p = std::abs(vf.f[i] * vg.f[i]);
        s += vf.w ? p * vf.w[i] : p;
    }
    return {s / vf.wsum, 2.0 * view_norm(vf, phi) * view_norm(vg, conjugate)};
}

HolderPair holder_pair(const SampledFunction& f, const SampledFunction& g, CellRange q, const YoungFunction& phi,
                       const SampledFunction* w) {
    return holder_pair(f, g, q, phi, complementary(phi), w);
}

DualityGap duality_gap(const YoungFunction& phi, const YoungFunction& conjugate, double t) {
    if (!(t > 0.0)) throw DomainError("duality_gap needs t > 0");
    const double ratio = inverse(phi, t) * inverse(conjugate, t) / t;
    return {ratio, ratio >= 1.0 - kDualitySlack && ratio <= 2.0 + kDualitySlack};
}

DualityGap duality_gap(const YoungFunction& phi, double t) {
    // The two-sided bound needs the true conjugate, not an equivalent form.
    const YoungFunction c = complementary(phi);
    return duality_gap(phi, c.equivalent_form() ? legendre_transform(phi) : c, t);
}

TripleCheck triple_composition_check(const YoungFunction& A, const YoungFunction& B, const YoungFunction& C,
                                     int samples, double lo, double hi) {
    if (samples < 2) throw DomainError("triple_composition_check needs at least 2 samples per axis");
    TripleCheck out;
    const double step = std::log(hi / lo) / (samples - 1);
    for (int i = 0; i < samples; ++i) {
        const double s = lo * std::exp(step * i);
        for (int j = 0; j < samples; ++j) {
            const double t = lo * std::exp(step * j);
            const double num = C(s * t);
            const double den = A(s) + B(t);
            if (!std::isfinite(num) || std::isnan(den) || (den == 0.0 && num != 0.0)) {
                ++out.skipped;
                continue;
            }
            ++out.evaluated;
            if (den == kInf || num == 0.0) continue;
            out.constant = std::max(out.constant, num / den);
        }
    }
    const double total = static_cast<double>(out.evaluated + out.skipped);
    out.warning = static_cast<double>(out.skipped) > 0.01 * total;
    return out;
}

double submultiplicativity_constant(const YoungFunction& phi, int samples, double lo, double hi) {
    if (samples < 2) throw DomainError("submultiplicativity_constant needs at least 2 samples");
    const double step = std::log(hi / lo) / (samples - 1);
    double k = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double a = lo * std::exp(step * i);
        for (int j = 0; j < samples; ++j) {
            const double b = lo * std::exp(step * j);
            const double num = phi(a * b), den = phi(a) * phi(b);
            if (!std::isfinite(num) || !std::isfinite(den) || den == 0.0) continue;
            k = std::max(k, num / den);
        }
    }
    return k;
}

double log_power(double z, double alpha, double delta) {
    const double base = std::pow(z, alpha);
    return delta == 0.0 ? base : base * std::pow(1.0 + log_plus(z), delta);
}

double log_power_inverse(double y, double alpha, double delta) {
    if (!(alpha > 0.0) || !(delta >= 0.0)) throw DomainError("log_power_inverse needs alpha > 0, delta >= 0");
    if (!(y >= 0.0) || !std::isfinite(y)) throw RangeError("log_power_inverse: y outside [0, inf)");
    return monotone_inverse([&](double z) { return log_power(z, alpha, delta); }, y);
}

double log_power_inverse_constant(double alpha, double delta, int samples, double lo, double hi) {
    const double step = std::log(hi / lo) / (samples - 1);
    double d = 1.0;
    for (int i = 0; i < samples; ++i) {
        const double z = lo * std::exp(step * i);
        const double approx = std::pow(z, 1.0 / alpha) * std::pow(1.0 + log_plus(z), -delta / alpha);
        const double exact = log_power_inverse(z, alpha, delta);
        d = std::max({d, exact / approx, approx / exact});
    }
    return d;
}

}  // namespace mixlab::young
