#include "mixlab/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "mixlab/maximal.hpp"
#include "mixlab/singular.hpp"

namespace mixlab::verify {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> read_values(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open data file '" + path + "'");
    std::vector<double> v;
    std::string token;
    while (in >> token) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(token, &used));
            if (used != token.size()) throw std::invalid_argument(token);
        } catch (const std::exception&) {
            throw ParseError("data file '" + path + "': not a number: '" + token + "'");
        }
    }
    return v;
}

// File data at the grid's resolution, block-averaged down when the file is finer.
SampledFunction load_on(const std::string& path, const Grid& grid) {
    std::vector<double> v = read_values(path);
    if (v.size() == grid.N()) return SampledFunction(grid, std::move(v));
    for (int j = grid.J() + 1; j <= kMaxResolution; ++j)
        if (v.size() == (std::size_t{1} << j)) return coarsen(SampledFunction(Grid::make(grid.L(), j), std::move(v)), grid.J());
    throw ShapeError("data file '" + path + "' has " + std::to_string(v.size()) + " values; grid needs " +
                     std::to_string(grid.N()) + " (or a finer power of two)");
}

bool in_closed(double x, double a, double b) { return x >= a && x <= b; }

bool non_increasing(const std::vector<Row>& rows) {
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].lhs > rows[i - 1].lhs || rows[i].rhs > rows[i - 1].rhs) return false;
    return true;
}

void finish_pass(Pass& p) {
    p.sup_ratio = 0.0;
    p.argmax_t = p.rows.empty() ? 0.0 : p.rows.front().t;
    for (const Row& r : p.rows)
        if (r.ratio > p.sup_ratio || std::isnan(r.ratio)) {
            p.sup_ratio = r.ratio;
            p.argmax_t = r.t;
        }
}

Pass commutator_pass(const ExperimentConfig& cfg, const Grid& grid, Theorem theorem, int m,
                     const std::vector<double>& sweep, bool& degenerate) {
    Pass p;
    p.J = grid.J();
    const SampledFunction f = build_function(cfg.f, grid);
    const SampledFunction u = build_weight(cfg.u, grid).values();
    const SampledFunction v = build_weight(cfg.v, grid).values();
    const SampledFunction fv = multiply(f, v);

    young::YoungFunction phi = young::YoungFunction::identity();
    double scale = 1.0, norm_used = 1.0;
    SampledFunction out = SampledFunction::zeros(grid);
    if (theorem == Theorem::Base) {
        out = hilbert(fv);
    } else {
        phi = young::YoungFunction::phi_m(m);
        SampledFunction b = build_function(cfg.b, grid);
        const double bn = bmo_norm(b, cfg.scan());
        p.b_bmo = bn;
        degenerate = degenerate || bn == 0.0;
        if (cfg.b_normalize && bn > 0.0) {
            b = map(b, [bn](double x) { return x / bn; });
        } else {
            norm_used = bn;
            scale = std::pow(bn, m);
        }
        out = commutator(b, fv, m);
    }

    for (double t : sweep) {
        Row r;
        r.t = t;
        r.lhs = weak_lhs(out, u, v, t, cfg.margin);
        r.rhs = modular_rhs(f, phi, u, v, t, scale);
        r.ratio = ratio_of(r.lhs, r.rhs);
        if (theorem == Theorem::Two) r.alt_rhs = phi(std::pow(norm_used, m)) * modular_rhs(f, phi, u, v, t, 1.0);
        p.rows.push_back(r);
    }
    finish_pass(p);
    return p;
}

Pass theorem3_pass(const ExperimentConfig& cfg, const Grid& grid, const std::vector<double>& sweep) {
    Pass p;
    p.J = grid.J();
    const SampledFunction f = build_function(cfg.f, grid);
    const SampledFunction u = build_weight(cfg.u, grid).values();
    const SampledFunction v = power_weight(grid, cfg.beta).values();
    const SampledFunction w = theorem3_weight(v, cfg.r, cfg.delta);
    const young::YoungFunction phi = young::YoungFunction::llogl(cfg.r, cfg.delta);
    const SampledFunction fv = multiply(f, v);
    const SampledFunction mphi = orlicz_maximal(fv, phi, cfg.scan());
    const SampledFunction mu = hl_maximal(u, cfg.scan());
    const CellRange inner = interior_cells(grid, cfg.margin);
    const double h = grid.h();

    for (double t : sweep) {
        long double lhs = 0.0L, rhs = 0.0L;
        for (std::size_t i = inner.begin; i < inner.end; ++i)
            if (mphi[i] / v[i] > t) lhs += static_cast<long double>(u[i]) * w[i];
        for (std::size_t i = 0; i < grid.N(); ++i)
            if (fv[i] != 0.0) rhs += phi(std::abs(fv[i]) / t) * mu[i];
        Row r;
        r.t = t;
        r.lhs = static_cast<double>(lhs) * h;
        r.rhs = static_cast<double>(rhs) * h;
        r.ratio = ratio_of(r.lhs, r.rhs);
        r.weak_orlicz = r.lhs / phi(1.0 / t);
        p.rows.push_back(r);
    }
    finish_pass(p);
    return p;
}

template <class F>
InequalityReport assemble(const ExperimentConfig& cfg, Theorem theorem, int m, F&& pass_at) {
    const auto start = std::chrono::steady_clock::now();
    InequalityReport rep;
    rep.theorem = theorem;
    rep.m = m;
    rep.config = cfg;
    const Grid grid = Grid::make(cfg.L, cfg.J);
    const std::vector<double> sweep = t_sweep(cfg, build_function(cfg.f, grid));
    rep.fine = pass_at(grid, sweep, rep);
    rep.monotone = non_increasing(rep.fine.rows);
    if (cfg.J - 2 >= kMinResolution) {
        rep.coarse = pass_at(Grid::make(cfg.L, cfg.J - 2), sweep, rep);
        rep.monotone = rep.monotone && non_increasing(rep.coarse->rows);
        rep.stable = refinement_stable(rep.fine.sup_ratio, rep.coarse->sup_ratio);
    }
    for (const Row& r : rep.fine.rows)
        if (r.weak_orlicz) rep.sup_weak_orlicz = std::max(rep.sup_weak_orlicz, *r.weak_orlicz);
    rep.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

InequalityReport run_commutator(const ExperimentConfig& cfg, Theorem theorem, int m) {
    cfg.validate(theorem);
    std::vector<PreflightEntry> pre = preflight(cfg);
    InequalityReport rep = assemble(cfg, theorem, m, [&](const Grid& g, const std::vector<double>& sweep,
                                                         InequalityReport& r) {
        return commutator_pass(cfg, g, theorem, m, sweep, r.degenerate_symbol);
    });
    rep.preflight = std::move(pre);
    rep.forced = cfg.force && !std::all_of(rep.preflight.begin(), rep.preflight.end(),
                                           [](const PreflightEntry& e) { return e.pass; });
    return rep;
}

std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

}  // namespace

double FamilySpec::get(const std::string& key, double fallback) const {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

std::string FamilySpec::describe() const {
    std::string s = family;
    if (!path.empty()) s += " " + path;
    for (const auto& [k, v] : params) s += " " + k + "=" + fmt(v);
    return s;
}

std::string theorem_name(Theorem t) {
    switch (t) {
        case Theorem::Base: return "base";
        case Theorem::One: return "thm1";
        case Theorem::Two: return "thm2";
        case Theorem::Three: return "thm3";
    }
    return "?";
}

Scan ExperimentConfig::scan() const {
    Scan s;
    s.j_max = jmax;
    if (shifts == 1) s.shifts = {Shift::None};
    return s;
}

void ExperimentConfig::validate(Theorem theorem) const {
    Grid::make(L, J);
    if (t_min < 0.0 || t_max < 0.0) throw ConfigError("t_min and t_max must be positive");
    if (t_min > 0.0 && t_max > 0.0 && t_max < t_min) throw ConfigError("t_max must be >= t_min");
    if (t_steps < 1) throw ConfigError("t_steps must be >= 1");
    if (shifts != 1 && shifts != 3) throw ConfigError("shifts must be 1 or 3");
    if (!(margin >= 0.0 && margin < 1.0)) throw ConfigError("margin must lie in [0, 1)");
    if (theorem == Theorem::Two && (m < 1 || m > 3)) throw ConfigError("m must be in {1, 2, 3}");
    if (theorem == Theorem::Three) {
        if (!(beta < -1.0)) throw HypothesisError("beta must be < -1 (got " + fmt(beta) + ")");
        if (!(r >= 1.0)) throw HypothesisError("r must be >= 1 (got " + fmt(r) + ")");
        if (!(delta >= 0.0)) throw HypothesisError("delta must be >= 0 (got " + fmt(delta) + ")");
    }
}

SampledFunction build_function(const FamilySpec& s, const Grid& grid) {
    const std::string& fam = s.family;
    if (fam == "file") return load_on(s.path, grid);
    if (fam == "zero") return SampledFunction::zeros(grid);
    if (fam == "constant") return SampledFunction::constant(grid, s.get("c", 1.0));
    if (fam == "spike") {
        std::vector<double> v(grid.N(), 0.0);
        // With mass=, the height scales as mass / h: an approximate point mass.
        const auto mass = s.params.find("mass");
        v[grid.cell_of(s.get("x0", 0.0))] = mass != s.params.end() ? mass->second / grid.h() : s.get("height", 1.0);
        return SampledFunction(grid, std::move(v));
    }
    PointFunction e;
    if (fam == "indicator") {
        const double a = s.get("a", 0.0), b = s.get("b", 1.0), c = s.get("height", 1.0);
        e = [=](double x) { return in_closed(x, a, b) ? c : 0.0; };
    } else if (fam == "twobump") {
        const double a1 = s.get("a1", -3.0), b1 = s.get("b1", -2.0), a2 = s.get("a2", 1.0), b2 = s.get("b2", 2.0);
        e = [=](double x) { return (in_closed(x, a1, b1) ? 1.0 : 0.0) + (in_closed(x, a2, b2) ? 1.0 : 0.0); };
    } else if (fam == "powerchi") {
        const double g = s.get("gamma", 0.25), a = s.get("a", -1.0), b = s.get("b", 1.0);
        e = [=](double x) { return in_closed(x, a, b) ? std::pow(std::abs(x), -g) : 0.0; };
    } else if (fam == "log") {
        e = [](double x) { return std::log(std::abs(x)); };
    } else if (fam == "sawtooth-log") {
        e = [](double x) { return std::log(std::abs(x - std::round(x))); };
    } else {
        throw ConfigError("unknown function family '" + fam + "'");
    }
    return sample(e, grid);
}

Weight build_weight(const FamilySpec& s, const Grid& grid) {
    const std::string& fam = s.family;
    if (fam == "power") return power_weight(grid, s.get("beta", 0.0));
    if (fam == "const") return constant_weight(grid, s.get("c", 1.0));
    if (fam == "bump")
        return bump_weight(grid, s.get("a", -1.0), s.get("b", 1.0), s.get("floor", 0.1), s.get("height", 1.0));
    if (fam == "file") return Weight(load_on(s.path, grid), "file");
    throw ConfigError("unknown weight family '" + fam + "'");
}

std::vector<double> t_sweep(const ExperimentConfig& cfg, const SampledFunction& f) {
    std::vector<double> nz;
    for (double x : f.values())
        if (x != 0.0) nz.push_back(std::abs(x));
    double med = 1.0;
    if (!nz.empty()) {
        std::sort(nz.begin(), nz.end());
        const std::size_t n = nz.size();
        med = n % 2 ? nz[n / 2] : 0.5 * (nz[n / 2 - 1] + nz[n / 2]);
    }
    const double lo = cfg.t_min > 0.0 ? cfg.t_min : 1e-2 * med;
    const double hi = cfg.t_max > 0.0 ? cfg.t_max : 1e2 * med;
    if (hi < lo) throw ConfigError("t sweep is empty: t_max < t_min");
    std::vector<double> t;
    if (cfg.t_steps == 1) return {lo};
    const double step = std::log(hi / lo) / (cfg.t_steps - 1);
    for (int k = 0; k < cfg.t_steps; ++k) t.push_back(k + 1 == cfg.t_steps ? hi : lo * std::exp(step * k));
    return t;
}

double weak_lhs(const SampledFunction& tout, const SampledFunction& u, const SampledFunction& v, double t,
                double margin) {
    require_same_grid(tout, u);
    require_same_grid(tout, v);
    if (!(t > 0.0)) throw DomainError("weak_lhs needs t > 0");
    const CellRange inner = interior_cells(tout.grid(), margin);
    long double s = 0.0L;
    for (std::size_t i = inner.begin; i < inner.end; ++i)
        if (std::abs(tout[i] / v[i]) > t) s += static_cast<long double>(u[i]) * v[i];
    return static_cast<double>(s) * tout.grid().h();
}

double modular_rhs(const SampledFunction& f, const young::YoungFunction& phi, const SampledFunction& u,
                   const SampledFunction& v, double t, double scale) {
    require_same_grid(f, u);
    require_same_grid(f, v);
    if (!(t > 0.0)) throw DomainError("modular_rhs needs t > 0");
    long double s = 0.0L;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] == 0.0) continue;
        s += static_cast<long double>(phi(scale * std::abs(f[i]) / t)) * u[i] * v[i];
    }
    return static_cast<double>(s) * f.grid().h();
}

double ratio_of(double lhs, double rhs) {
    if (rhs > 0.0) return lhs / rhs;
    return lhs > 0.0 ? kInf : 0.0;
}

bool InequalityReport::passed() const {
    if (!std::isfinite(fine.sup_ratio) || !stable || !monotone) return false;
    if (theorem == Theorem::Three && !std::isfinite(sup_weak_orlicz)) return false;
    return true;
}

std::vector<PreflightEntry> preflight(const ExperimentConfig& cfg) {
    const Grid grid = Grid::make(cfg.L, cfg.J);
    const Weight u = build_weight(cfg.u, grid);
    const Weight v = build_weight(cfg.v, grid);
    const Scan scan = cfg.scan();
    std::vector<PreflightEntry> out;
    auto add = [&](std::string name, ConstantEstimate e) {
        const bool ok = e.stable;
        out.push_back({std::move(name), e, ok});
    };
    add("u in A1", estimate_Ap(u, 1.0, scan));
    add("v in A1", estimate_Ap(v, 1.0, scan));
    add("v in A2(u)", estimate_Ap_u(v, u, 2.0, scan));
    const bool u_ok = out[0].pass;
    const bool v_ok = out[1].pass || out[2].pass;
    if ((!u_ok || !v_ok) && !cfg.force) {
        std::ostringstream os;
        os.precision(6);
        os << "weight preflight failed:";
        for (const PreflightEntry& e : out)
            os << " [" << e.name << ": J=" << e.estimate.value << ", J-2=" << e.estimate.coarse
               << (e.pass ? ", stable]" : ", unstable]");
        os << " (use --force to run anyway)";
        throw PreflightError(os.str());
    }
    return out;
}

InequalityReport run_base_sawyer(const ExperimentConfig& cfg) { return run_commutator(cfg, Theorem::Base, 0); }

InequalityReport run_theorem1(const ExperimentConfig& cfg) { return run_commutator(cfg, Theorem::One, 1); }

InequalityReport run_theorem2(const ExperimentConfig& cfg, int m) {
    ExperimentConfig c = cfg;
    c.m = m;
    return run_commutator(c, Theorem::Two, m);
}

InequalityReport run_theorem3(const ExperimentConfig& cfg, double r, double delta, double beta) {
    ExperimentConfig c = cfg;
    c.r = r;
    c.delta = delta;
    c.beta = beta;
    c.validate(Theorem::Three);
    return assemble(c, Theorem::Three, 0, [&](const Grid& g, const std::vector<double>& sweep, InequalityReport&) {
        return theorem3_pass(c, g, sweep);
    });
}

InequalityReport run(const ExperimentConfig& cfg, Theorem theorem) {
    switch (theorem) {
        case Theorem::Base: return run_base_sawyer(cfg);
        case Theorem::One: return run_theorem1(cfg);
        case Theorem::Two: return run_theorem2(cfg, cfg.m);
        case Theorem::Three: return run_theorem3(cfg, cfg.r, cfg.delta, cfg.beta);
    }
    throw ConfigError("unknown theorem");
}

SampledFunction theorem3_weight(const SampledFunction& v, double r, double delta) {
    if (r == 1.0 && delta == 0.0) return v;
    const young::YoungFunction phi = young::YoungFunction::llogl(r, delta);
    return map(v, [&](double x) { return 1.0 / phi(1.0 / x); });
}

double solve_scale_a(const SampledFunction& F, double gamma, double lambda) {
    if (!(gamma > 0.0) || !(lambda > 0.0)) throw DomainError("solve_scale_a needs gamma > 0 and lambda > 0");
    const Grid& grid = F.grid();
    bool nonzero = false;
    for (double x : F.values()) {
        if (x < 0.0) throw DomainError("solve_scale_a needs F >= 0");
        nonzero = nonzero || x > 0.0;
    }
    if (!nonzero) throw DomainError("solve_scale_a needs F not identically zero");
    const double h = grid.h();
    // Exact integral of the cellwise-constant F over [-R, R].
    auto mass = [&](double R) {
        long double s = 0.0L;
        for (std::size_t i = 0; i < F.size(); ++i) {
            if (F[i] == 0.0) continue;
            const double lo = std::max(grid.center(i) - 0.5 * h, -R);
            const double hi = std::min(grid.center(i) + 0.5 * h, R);
            if (hi > lo) s += static_cast<long double>(F[i]) * (hi - lo);
        }
        return static_cast<double>(s);
    };
    auto G = [&](double a) { return a * mass(std::pow(a, gamma)); };
    const double a_max = std::pow(grid.L(), 1.0 / gamma);
    if (G(a_max) < lambda)
        throw RangeError("lambda = " + fmt(lambda) + " is not attained for a <= " + fmt(a_max) +
                         " (maximum " + fmt(G(a_max)) + ")");
    double lo = 0.0, hi = a_max;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (G(mid) < lambda)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

SetPartition theorem3_set_partition(double x, int k, double a, double gamma) {
    const double ax = std::abs(x);
    const double root = std::pow(a, gamma);
    SetPartition p;
    p.G = ax > std::ldexp(1.0, k) && ax <= std::ldexp(1.0, k + 1);
    p.I = ax > std::ldexp(1.0, k - 1) && ax <= std::ldexp(1.0, k + 2);
    p.L = ax > std::ldexp(1.0, k + 2);
    p.C = ax <= std::ldexp(1.0, k - 1);
    p.A = ax <= root;
    p.B = ax > root;
    return p;
}

}  // namespace mixlab::verify
