#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mixlab/grid.hpp"

namespace mixlab {

// A strictly positive sampled density. When built from an expression the
// weight can be resampled on another grid; otherwise it is block-averaged.
class Weight {
public:
    explicit Weight(SampledFunction values, std::string family = "custom", PointFunction expr = {});

    static Weight from_expr(const Grid& grid, PointFunction expr, std::string family);

    const SampledFunction& values() const { return values_; }
    const Grid& grid() const { return values_.grid(); }
    const std::string& family() const { return family_; }
    bool has_expr() const { return static_cast<bool>(expr_); }
    double operator[](std::size_t i) const { return values_[i]; }

    // Same weight on another grid of the same L.
    Weight at(const Grid& grid) const;
    Weight times(const Weight& other) const;
    Weight pow(double e) const;

private:
    SampledFunction values_;
    std::string family_;
    PointFunction expr_;
};

Weight power_weight(const Grid& grid, double beta);
Weight constant_weight(const Grid& grid, double c = 1.0);
// floor + height on [a, b]
Weight bump_weight(const Grid& grid, double a, double b, double floor, double height = 1.0);

// Relative change between J and J-2 below this counts as stable.
inline constexpr double kStableGap = 0.2;

struct ConstantEstimate {
    double value = 0.0;        // at the finest resolution J
    double coarse = 0.0;       // at J - 2
    bool stable = false;
    Scan scan;
};

bool refinement_stable(double fine, double coarse, double gap = kStableGap);

// Single-grid scans. Each is a max over the intervals of the scan.
double ap_constant(const SampledFunction& w, double p, const Scan& scan = {});
double rh_constant(const SampledFunction& w, double s, const Scan& scan = {});
double rh_inf_proxy(const SampledFunction& w, const Scan& scan = {});
double ap_u_constant(const SampledFunction& v, const SampledFunction& u, double p, const Scan& scan = {});
double fundamental_constant(const SampledFunction& u, const SampledFunction& v, const Scan& scan = {});

// Estimates carrying the J / J-2 refinement pair.
ConstantEstimate estimate_Ap(const Weight& w, double p, const Scan& scan = {});
ConstantEstimate estimate_RH(const Weight& w, double s, const Scan& scan = {});
ConstantEstimate estimate_RH_inf(const Weight& w, const Scan& scan = {});
ConstantEstimate estimate_Ap_u(const Weight& v, const Weight& u, double p, const Scan& scan = {});
ConstantEstimate fundamental_ratio(const Weight& u, const Weight& v, const Scan& scan = {});

// sup_Q (avg_Q |b - b_Q|^p)^(1/p)
double bmo_norm(const SampledFunction& b, const Scan& scan = {}, double p = 1.0);
// sup_Q (1/w(Q)) int_Q |b - b_Q| w, with b_Q the unweighted mean
double bmo_w_norm(const SampledFunction& b, const SampledFunction& w, const Scan& scan = {});

// Unweighted mean of b over the cells.
double mean(const SampledFunction& b, CellRange q);

struct TailPoint {
    double lambda = 0.0;
    double fraction = 0.0;
};
// |{x in Q : |b - b_Q| > lambda}| / |Q| by cell count.
std::vector<TailPoint> jn_tail(const SampledFunction& b, CellRange q, const std::vector<double>& lambdas);
std::vector<TailPoint> jn_tail(const SampledFunction& b, const DyadicInterval& q, const std::vector<double>& lambdas);

struct ExponentialFit {
    double slope = 0.0;      // of log(fraction) against lambda
    double intercept = 0.0;
    double r2 = 0.0;
    std::size_t points = 0;  // nonzero fractions used
};
ExponentialFit fit_exponential(const std::vector<TailPoint>& tail);

// |b_Q - b_{2^k Q}|, the dilate clipped to the domain.
double dilated_average_gap(const SampledFunction& b, CellRange q, int k);
double dilated_average_gap(const SampledFunction& b, const DyadicInterval& q, int k);

struct ExpLPair {
    double weighted = 0.0;
    double plain = 0.0;
};
// expL Luxemburg norms of b - b_Q on Q, with and without w.
ExpLPair weighted_expL_vs_plain(const SampledFunction& b, CellRange q, const SampledFunction& w);

}  // namespace mixlab
