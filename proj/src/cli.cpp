#include "mixlab/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <optional>

#include "mixlab/config.hpp"
#include "mixlab/czd.hpp"
#include "mixlab/maximal.hpp"
#include "mixlab/report_io.hpp"
#include "mixlab/verify.hpp"

namespace mixlab {

namespace {

struct Flags {
    std::string config;
    std::string out_dir = ".";
    std::string format = "both";
    std::optional<int> J, m, t_steps, jmax, shifts;
    std::optional<double> L, r, delta, beta, t_min, t_max, margin, height;
    std::optional<std::uint64_t> seed;
    bool force = false;
    bool dump = false;
};

verify::ExperimentConfig resolve(const Flags& fl) {
    verify::ExperimentConfig c;
    if (!fl.config.empty()) c = parse_config_file(fl.config);
    if (fl.J) c.J = *fl.J;
    if (fl.L) c.L = *fl.L;
    if (fl.m) c.m = *fl.m;
    if (fl.r) c.r = *fl.r;
    if (fl.delta) c.delta = *fl.delta;
    if (fl.beta) c.beta = *fl.beta;
    if (fl.t_min) c.t_min = *fl.t_min;
    if (fl.t_max) c.t_max = *fl.t_max;
    if (fl.t_steps) c.t_steps = *fl.t_steps;
    if (fl.jmax) c.jmax = *fl.jmax;
    if (fl.shifts) c.shifts = *fl.shifts;
    if (fl.margin) c.margin = *fl.margin;
    if (fl.seed) c.seed = *fl.seed;
    if (fl.force) c.force = true;
    return c;
}

std::string path_in(const Flags& fl, const std::string& name) {
    std::filesystem::create_directories(fl.out_dir);
    return (std::filesystem::path(fl.out_dir) / name).string();
}

bool want_csv(const Flags& fl) { return fl.format == "csv" || fl.format == "both"; }
bool want_json(const Flags& fl) { return fl.format == "json" || fl.format == "both"; }

int verify_command(const Flags& fl, verify::Theorem th, std::ostream& out) {
    const verify::ExperimentConfig cfg = resolve(fl);
    const verify::InequalityReport rep = verify::run(cfg, th);
    std::string stem = verify::theorem_name(th);
    if (th == verify::Theorem::Two) stem += "_m" + std::to_string(cfg.m);
    if (want_csv(fl)) write_atomic(path_in(fl, stem + ".csv"), report_csv(rep));
    if (want_json(fl)) write_atomic(path_in(fl, stem + ".json"), report_json(rep).dump(2) + "\n");
    out << stem << " sup_ratio=" << format_number(rep.fine.sup_ratio);
    if (rep.coarse) out << " sup_ratio_J-2=" << format_number(rep.coarse->sup_ratio);
    out << " stable=" << (rep.stable ? "yes" : "no") << " monotone=" << (rep.monotone ? "yes" : "no")
        << (rep.forced ? " forced" : "") << (rep.passed() ? " PASS" : " FAIL") << "\n";
    return rep.passed() ? kExitOk : kExitPredicate;
}

int estimate_command(const Flags& fl, std::ostream& out) {
    const auto start = std::chrono::steady_clock::now();
    const verify::ExperimentConfig cfg = resolve(fl);
    cfg.validate(verify::Theorem::One);
    const Grid grid = Grid::make(cfg.L, cfg.J);
    const Scan scan = cfg.scan();
    const Weight u = verify::build_weight(cfg.u, grid);
    const Weight v = verify::build_weight(cfg.v, grid);
    const SampledFunction b = verify::build_function(cfg.b, grid);

    std::vector<std::pair<std::string, ConstantEstimate>> rows{
        {"A1(u)", estimate_Ap(u, 1.0, scan)},     {"A2(u)", estimate_Ap(u, 2.0, scan)},
        {"RHinf(u)", estimate_RH_inf(u, scan)},   {"A1(v)", estimate_Ap(v, 1.0, scan)},
        {"A2(v;u)", estimate_Ap_u(v, u, 2.0, scan)}, {"fundamental(u,v)", fundamental_ratio(u, v, scan)},
    };
    nlohmann::json j;
    j["config"] = config_json(cfg);
    std::string csv = "name,value,coarse,stable\n";
    for (const auto& [name, e] : rows) {
        j["estimates"][name] = {{"value", number_json(e.value)}, {"coarse", number_json(e.coarse)}, {"stable", e.stable}};
        csv += name + "," + format_number(e.value) + "," + format_number(e.coarse) + "," + (e.stable ? "1" : "0") + "\n";
        out << name << " = " << format_number(e.value) << (e.stable ? " (stable)" : " (unstable)") << "\n";
    }
    const double bmo1 = bmo_norm(b, scan, 1.0), bmo2 = bmo_norm(b, scan, 2.0), bmow = bmo_w_norm(b, u.values(), scan);
    j["bmo"] = {{"p1", bmo1}, {"p2", bmo2}, {"weighted_u", bmow}};
    csv += "bmo_p1," + format_number(bmo1) + ",,\nbmo_p2," + format_number(bmo2) + ",,\nbmo_w_u," +
           format_number(bmow) + ",,\n";
    out << "bmo = " << format_number(bmo1) << "\n";
    j["metadata"] = metadata_json(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    if (want_csv(fl)) write_atomic(path_in(fl, "estimate.csv"), csv);
    if (want_json(fl)) write_atomic(path_in(fl, "estimate.json"), j.dump(2) + "\n");
    return kExitOk;
}

int decompose_command(const Flags& fl, std::ostream& out) {
    const auto start = std::chrono::steady_clock::now();
    const verify::ExperimentConfig cfg = resolve(fl);
    if (!fl.height) throw ConfigError("decompose needs --height");
    const Grid grid = Grid::make(cfg.L, cfg.J);
    const SampledFunction f = verify::build_function(cfg.f, grid);
    const SampledFunction v = verify::build_weight(cfg.v, grid).values();
    const DecompositionResult d = cz_decompose(f, *fl.height, v);
    const ValidationReport rep = validate_decomposition(d, f, &v);

    nlohmann::json j;
    j["config"] = config_json(cfg);
    j["t"] = d.t;
    j["cubes"] = cubes_json(d);
    j["doubling_bound"] = d.doubling_bound;
    j["root_average"] = d.root_average;
    for (const Check& c : rep.checks) j["checks"][c.name] = {{"pass", c.pass}, {"slack", number_json(c.slack)}};
    j["floor_exceptions"] = rep.floor_exceptions;
    j["metadata"] = metadata_json(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    write_atomic(path_in(fl, "decompose.json"), j.dump(2) + "\n");
    if (fl.dump) {
        std::vector<double> hsum(grid.N(), 0.0);
        for (const BadPart& b : d.h)
            for (std::size_t i = 0; i < b.values.size(); ++i) hsum[b.cells.begin + i] = b.values[i];
        write_f64(path_in(fl, "g.f64"), d.g.data());
        write_f64(path_in(fl, "h.f64"), hsum);
        write_atomic(path_in(fl, "decompose.dump.txt"),
                     "# float64 little-endian, N=" + std::to_string(grid.N()) + " L=" + format_number(grid.L()) +
                         " J=" + std::to_string(grid.J()) + "; g.f64 = good part, h.f64 = sum of bad parts\n");
    }
    out << "decompose cubes=" << d.cubes.size() << " D_mu=" << format_number(d.doubling_bound)
        << (rep.all_pass() ? " PASS" : " FAIL") << "\n";
    return rep.all_pass() ? kExitOk : kExitPredicate;
}

int maximal_command(const Flags& fl, std::ostream& out) {
    const auto start = std::chrono::steady_clock::now();
    const verify::ExperimentConfig cfg = resolve(fl);
    const Grid grid = Grid::make(cfg.L, cfg.J);
    const Scan scan = cfg.scan();
    const SampledFunction f = verify::build_function(cfg.f, grid);
    const young::YoungFunction phi = young::YoungFunction::llogl(cfg.r, cfg.delta);
    const SampledFunction m1 = hl_maximal(f, scan);
    const SampledFunction m2 = hl_maximal(m1, scan);
    const SampledFunction mp = orlicz_maximal(f, phi, scan);
    if (want_csv(fl)) {
        std::string csv = "x,f,Mf,M2f,Mphi_f\n";
        for (std::size_t i = 0; i < grid.N(); ++i)
            csv += format_number(grid.center(i)) + "," + format_number(f[i]) + "," + format_number(m1[i]) + "," +
                   format_number(m2[i]) + "," + format_number(mp[i]) + "\n";
        write_atomic(path_in(fl, "maximal.csv"), csv);
    }
    if (want_json(fl)) {
        nlohmann::json j;
        j["config"] = config_json(cfg);
        j["phi"] = phi.name();
        j["x"] = grid.centers();
        j["f"] = f.data();
        j["Mf"] = m1.data();
        j["M2f"] = m2.data();
        j["Mphi_f"] = mp.data();
        j["weak11_ratio"] = weak11_ratio(f, scan);
        j["metadata"] = metadata_json(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
        write_atomic(path_in(fl, "maximal.json"), j.dump(2) + "\n");
    }
    out << "maximal N=" << grid.N() << " max Mf=" << format_number(*std::max_element(m1.data().begin(), m1.data().end()))
        << "\n";
    return kExitOk;
}

int selftest_command(std::ostream& out) {
    bool ok = true;
    for (const SelftestCase& c : run_selftest()) {
        out << (c.pass ? "PASS " : "FAIL ") << c.name << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
        ok = ok && c.pass;
    }
    return ok ? kExitOk : kExitPredicate;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"mixlab: numerical checks of mixed weak-type inequalities"};
    app.require_subcommand(1, 1);
    Flags fl;
    app.add_option("--config", fl.config, "config file (section.key = value)");
    app.add_option("--out", fl.out_dir, "output directory");
    app.add_option("--format", fl.format, "csv, json or both")->check(CLI::IsMember({"csv", "json", "both"}));
    app.add_option("--grid-J", fl.J, "resolution exponent");
    app.add_option("--grid-L", fl.L, "domain half-width");
    app.add_option("--m", fl.m, "commutator order");
    app.add_option("--r", fl.r, "Orlicz maximal check: power r");
    app.add_option("--delta", fl.delta, "Orlicz maximal check: log power delta");
    app.add_option("--beta", fl.beta, "Orlicz maximal check: exponent of v");
    app.add_option("--t-min", fl.t_min, "smallest t");
    app.add_option("--t-max", fl.t_max, "largest t");
    app.add_option("--t-steps", fl.t_steps, "number of t values");
    app.add_option("--jmax", fl.jmax, "finest scanned scale");
    app.add_option("--shifts", fl.shifts, "1 or 3 shifted dyadic families");
    app.add_option("--margin", fl.margin, "boundary fraction excluded per side");
    app.add_option("--seed", fl.seed, "random seed");
    app.add_option("--height", fl.height, "decompose: height t");
    app.add_flag("--force", fl.force, "run even when the weight preflight fails");
    app.add_flag("--dump", fl.dump, "decompose: write g and h as float64 files");

    const std::vector<std::pair<std::string, std::string>> subs{
        {"verify-base", "weighted weak (1,1) of the Hilbert transform"},
        {"verify-thm1", "commutator mixed inequality, m = 1"},
        {"verify-thm2", "higher-order commutators"},
        {"verify-thm3", "Orlicz maximal operator with v = |x|^beta"},
        {"estimate", "weight constants and BMO norms"},
        {"decompose", "Calderon-Zygmund decomposition"},
        {"maximal", "maximal functions of f"},
        {"selftest", "built-in example corpus"},
    };
    for (const auto& [name, help] : subs) app.add_subcommand(name, help)->fallthrough();

    std::vector<char*> argv;
    std::vector<std::string> copy = args;
    for (std::string& a : copy) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        if (cmd == "verify-base") return verify_command(fl, verify::Theorem::Base, out);
        if (cmd == "verify-thm1") return verify_command(fl, verify::Theorem::One, out);
        if (cmd == "verify-thm2") return verify_command(fl, verify::Theorem::Two, out);
        if (cmd == "verify-thm3") return verify_command(fl, verify::Theorem::Three, out);
        if (cmd == "estimate") return estimate_command(fl, out);
        if (cmd == "decompose") return decompose_command(fl, out);
        if (cmd == "maximal") return maximal_command(fl, out);
        return selftest_command(out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

}  // namespace mixlab
