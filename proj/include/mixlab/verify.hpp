#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mixlab/grid.hpp"
#include "mixlab/weights.hpp"
#include "mixlab/young.hpp"

namespace mixlab::verify {

// A family token plus numeric parameters, e.g. "indicator a=0 b=1" or "file data.txt".
struct FamilySpec {
    std::string family;
    std::map<std::string, double> params;
    std::string path;

    double get(const std::string& key, double fallback) const;
    std::string describe() const;
};

enum class Theorem { Base, One, Two, Three };
std::string theorem_name(Theorem t);

struct ExperimentConfig {
    double L = 8.0;
    int J = 12;
    FamilySpec f{"indicator", {{"a", 0.0}, {"b", 1.0}}, {}};
    FamilySpec b{"log", {}, {}};
    bool b_normalize = true;
    FamilySpec u{"power", {{"beta", -0.5}}, {}};
    FamilySpec v{"power", {{"beta", 0.0}}, {}};
    double t_min = 0.0;  // 0: derived from the median of |f|
    double t_max = 0.0;
    int t_steps = 33;
    int jmax = -1;
    int shifts = 3;
    int m = 1;
    double r = 1.0;
    double delta = 1.0;
    double beta = -2.0;
    double margin = 0.05;
    std::uint64_t seed = 1;
    bool force = false;

    Scan scan() const;
    // Throws ConfigError / HypothesisError naming the violated constraint.
    void validate(Theorem theorem) const;
};

// f and b families: indicator, twobump, powerchi, spike (height= or mass=), zero,
// constant, log, sawtooth-log, file.
SampledFunction build_function(const FamilySpec& spec, const Grid& grid);
// Weight families: power, bump, const, file.
Weight build_weight(const FamilySpec& spec, const Grid& grid);

// Log-spaced t values; defaults to [1e-2, 1e2] times the median nonzero |f|.
std::vector<double> t_sweep(const ExperimentConfig& cfg, const SampledFunction& f);

// sum over interior cells with |Tout / v| > t of u v h
double weak_lhs(const SampledFunction& tout, const SampledFunction& u, const SampledFunction& v, double t,
                double margin);
// int phi(scale |f| / t) u v
double modular_rhs(const SampledFunction& f, const young::YoungFunction& phi, const SampledFunction& u,
                   const SampledFunction& v, double t, double scale = 1.0);

double ratio_of(double lhs, double rhs);

struct Row {
    double t = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    std::optional<double> alt_rhs;      // split form for m >= 1
    std::optional<double> weak_orlicz;  // Psi(t) * lhs for the Orlicz maximal check
};

struct PreflightEntry {
    std::string name;
    ConstantEstimate estimate;
    bool pass = false;
};

struct Pass {
    int J = 0;
    std::vector<Row> rows;
    double sup_ratio = 0.0;
    double argmax_t = 0.0;
    double b_bmo = 0.0;
};

struct InequalityReport {
    Theorem theorem = Theorem::One;
    int m = 0;
    ExperimentConfig config;
    Pass fine;
    std::optional<Pass> coarse;  // J - 2
    bool stable = false;
    bool monotone = false;
    bool degenerate_symbol = false;
    bool forced = false;
    std::vector<PreflightEntry> preflight;
    double sup_weak_orlicz = 0.0;
    double runtime_seconds = 0.0;

    const std::vector<Row>& rows() const { return fine.rows; }
    double sup_ratio() const { return fine.sup_ratio; }
    bool passed() const;
};

// Weight-class checks: u in A_1 and v in A_1 or A_2(u). Throws PreflightError
// unless cfg.force is set.
std::vector<PreflightEntry> preflight(const ExperimentConfig& cfg);

InequalityReport run_base_sawyer(const ExperimentConfig& cfg);
InequalityReport run_theorem1(const ExperimentConfig& cfg);
InequalityReport run_theorem2(const ExperimentConfig& cfg, int m);
InequalityReport run_theorem3(const ExperimentConfig& cfg, double r, double delta, double beta);
InequalityReport run(const ExperimentConfig& cfg, Theorem theorem);

// w = 1 / phi(1 / v); exactly v when phi is the identity.
SampledFunction theorem3_weight(const SampledFunction& v, double r, double delta);

// a with a * int_{|y| <= a^gamma} F = lambda, F integrated as a step function.
double solve_scale_a(const SampledFunction& F, double gamma, double lambda);

struct SetPartition {
    bool G = false;  // 2^k < |x| <= 2^(k+1)
    bool I = false;  // 2^(k-1) < |x| <= 2^(k+2)
    bool L = false;  // |x| > 2^(k+2)
    bool C = false;  // |x| <= 2^(k-1)
    bool A = false;  // |x| <= a^gamma
    bool B = false;  // |x| > a^gamma
};
SetPartition theorem3_set_partition(double x, int k, double a, double gamma);

}  // namespace mixlab::verify
