#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "mixlab/grid.hpp"

namespace mixlab::young {

// c t^r, r >= 1
struct Power {
    double r = 2.0;
    double coef = 1.0;
};
// t^r (1 + log+ t)^delta; Phi_m is {1, m}
struct LLogL {
    double r = 1.0;
    double delta = 1.0;
};
// exp(t^(1/alpha)) - 1
struct ExpL {
    double alpha = 1.0;
};
// exp(a t^(1/alpha)) - 1
struct ExpAlphaL {
    double alpha = 1.0;
    double a = 1.0;
};
struct Identity {};
// 0 on [0, threshold], +inf beyond: the conjugate of threshold * t.
struct StepConjugate {
    double threshold = 1.0;
};

// Lattice Legendre transform sup_s {t s - Phi(s)} over the lower convex hull
// of (s_i, Phi(s_i)), s_i log-spaced. Past the last hull slope the transform
// continues linearly with slope s_last.
class LegendreTable {
public:
    static constexpr int kPointsPerDecade = 10000;
    static constexpr double kLowestS = 1e-6;
    static constexpr int kDecades = 12;

    template <class F>
    static std::shared_ptr<const LegendreTable> build(F&& phi, std::string source);

    double operator()(double t) const;
    const std::string& source() const { return source_; }
    std::size_t hull_size() const { return s_.size(); }

private:
    std::vector<double> s_;
    std::vector<double> phi_;
    std::vector<double> slope_;  // slope_[i] between hull points i and i+1
    std::string source_;
};

struct Legendre {
    std::shared_ptr<const LegendreTable> table;
};

using Family = std::variant<Power, LLogL, ExpL, ExpAlphaL, Identity, StepConjugate, Legendre>;

class YoungFunction {
public:
    explicit YoungFunction(Family family);

    static YoungFunction power(double r, double coef = 1.0) { return YoungFunction(Power{r, coef}); }
    static YoungFunction llogl(double r, double delta) { return YoungFunction(LLogL{r, delta}); }
    static YoungFunction phi_m(int m) { return llogl(1.0, m); }
    static YoungFunction expl(double alpha) { return YoungFunction(ExpL{alpha}); }
    static YoungFunction exp_alpha(double alpha, double a) { return YoungFunction(ExpAlphaL{alpha, a}); }
    static YoungFunction identity() { return YoungFunction(Identity{}); }

    // Phi(t), possibly +inf; t must be >= 0.
    double operator()(double t) const;

    const Family& family() const { return family_; }
    bool submultiplicative() const;
    bool convex() const;
    bool finite_valued() const;
    std::string name() const;

    // Set by complementary() when the result is an equivalent closed form rather
    // than the exact conjugate; the constant is the fitted inverse-ratio bound.
    bool equivalent_form() const { return equivalent_form_; }
    double equivalence_constant() const { return equivalence_constant_; }
    YoungFunction with_equivalence(double constant) const;

private:
    Family family_;
    bool equivalent_form_ = false;
    double equivalence_constant_ = 1.0;
};

double eval(const YoungFunction& phi, double t);

// sup{t : Phi(t) <= y}. Closed forms where available, otherwise bisection.
double inverse(const YoungFunction& phi, double y);

// Exact conjugates for Power / Identity / step; the exp form for L log^a L
// (tagged as equivalent); numeric Legendre transform otherwise.
YoungFunction complementary(const YoungFunction& phi);

// Always the numeric lattice transform.
YoungFunction legendre_transform(const YoungFunction& phi);

// (1/w(Q)) int_Q Phi(|f|/lambda) w
double modular(const SampledFunction& f, CellRange q, const YoungFunction& phi, const SampledFunction* w,
               double lambda);

// Luxemburg norm ||f||_{Phi,Q,w}; 0 when f vanishes on Q.
double luxemburg_norm(const SampledFunction& f, CellRange q, const YoungFunction& phi,
                      const SampledFunction* w = nullptr);
double luxemburg_norm(const SampledFunction& f, const DyadicInterval& q, const YoungFunction& phi,
                      const SampledFunction* w = nullptr);

// inf_tau {tau + tau (1/w(Q)) int_Q Phi(|f|/tau) w}
double modular_inf(const SampledFunction& f, CellRange q, const YoungFunction& phi,
                   const SampledFunction* w = nullptr);

struct HolderPair {
    double lhs = 0.0;
    double rhs = 0.0;
};

// lhs = (1/w(Q)) int |fg| w,  rhs = 2 ||f||_{Phi,Q,w} ||g||_{conj,Q,w}
HolderPair holder_pair(const SampledFunction& f, const SampledFunction& g, CellRange q, const YoungFunction& phi,
                       const YoungFunction& conjugate, const SampledFunction* w = nullptr);
HolderPair holder_pair(const SampledFunction& f, const SampledFunction& g, CellRange q, const YoungFunction& phi,
                       const SampledFunction* w = nullptr);

struct DualityGap {
    double ratio = 0.0;  // Phi^-1(t) conj^-1(t) / t
    bool pass = false;   // ratio in [1 - eps, 2 + eps]
};
inline constexpr double kDualitySlack = 0.05;

DualityGap duality_gap(const YoungFunction& phi, double t);
DualityGap duality_gap(const YoungFunction& phi, const YoungFunction& conjugate, double t);

struct TripleCheck {
    double constant = 0.0;  // sup C(st) / (A(s) + B(t))
    std::size_t evaluated = 0;
    std::size_t skipped = 0;
    bool warning = false;  // more than 1% of the lattice skipped
};

// (s, t) over a samples x samples log lattice on [lo, hi]^2.
TripleCheck triple_composition_check(const YoungFunction& A, const YoungFunction& B, const YoungFunction& C,
                                     int samples, double lo = 1e-3, double hi = 1e3);

// sup Phi(ab) / (Phi(a) Phi(b)) over a log lattice.
double submultiplicativity_constant(const YoungFunction& phi, int samples, double lo = 1e-3, double hi = 1e3);

// z^alpha (1 + log+ z)^delta; alpha may be below 1 (not a Young function).
double log_power(double z, double alpha, double delta);
double log_power_inverse(double y, double alpha, double delta);

// Smallest D >= 1 with z^(1/a)(1+log+ z)^(-d/a) / D <= phi^-1(z) <= D (same) on the lattice.
double log_power_inverse_constant(double alpha, double delta, int samples, double lo = 1e-6, double hi = 1e6);

// ---------------------------------------------------------------------------

template <class F>
std::shared_ptr<const LegendreTable> LegendreTable::build(F&& phi, std::string source) {
    auto table = std::make_shared<LegendreTable>();
    table->source_ = std::move(source);
    std::vector<double> s{0.0};
    std::vector<double> v{0.0};
    const int total = kPointsPerDecade * kDecades;
    for (int i = 0; i <= total; ++i) {
        const double x = kLowestS * std::pow(10.0, static_cast<double>(i) / kPointsPerDecade);
        const double y = phi(x);
        if (!std::isfinite(y) || y > 1e150) break;
        s.push_back(x);
        v.push_back(y);
    }
    // Lower convex hull (monotone chain); x is already sorted.
    std::vector<std::size_t> hull;
    for (std::size_t i = 0; i < s.size(); ++i) {
        while (hull.size() >= 2) {
            const std::size_t a = hull[hull.size() - 2], b = hull.back();
            const double cross = (s[b] - s[a]) * (v[i] - v[a]) - (v[b] - v[a]) * (s[i] - s[a]);
            if (cross <= 0.0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(i);
    }
    for (std::size_t idx : hull) {
        table->s_.push_back(s[idx]);
        table->phi_.push_back(v[idx]);
    }
    for (std::size_t i = 0; i + 1 < table->s_.size(); ++i)
        table->slope_.push_back((table->phi_[i + 1] - table->phi_[i]) / (table->s_[i + 1] - table->s_[i]));
    return table;
}

}  // namespace mixlab::young
