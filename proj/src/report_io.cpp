#include "mixlab/report_io.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>
#include <locale>
#include <sstream>
#include <unistd.h>

namespace mixlab {

std::string format_number(double x) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(17);
    os << x;
    return os.str();
}

nlohmann::json number_json(double x) {
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}

std::string report_csv(const verify::InequalityReport& r) {
    const bool alt = !r.rows().empty() && r.rows().front().alt_rhs.has_value();
    const bool wo = !r.rows().empty() && r.rows().front().weak_orlicz.has_value();
    std::string out = "t,lhs,rhs,ratio";
    if (alt) out += ",alt_rhs";
    if (wo) out += ",weak_orlicz";
    out += "\n";
    for (const verify::Row& row : r.rows()) {
        out += format_number(row.t) + "," + format_number(row.lhs) + "," + format_number(row.rhs) + "," +
               format_number(row.ratio);
        if (alt) out += "," + format_number(*row.alt_rhs);
        if (wo) out += "," + format_number(*row.weak_orlicz);
        out += "\n";
    }
    return out;
}

nlohmann::json config_json(const verify::ExperimentConfig& c) {
    return {
        {"L", c.L},
        {"J", c.J},
        {"f", c.f.describe()},
        {"b", c.b.describe()},
        {"b_normalize", c.b_normalize},
        {"u", c.u.describe()},
        {"v", c.v.describe()},
        {"t_min", c.t_min},
        {"t_max", c.t_max},
        {"t_steps", c.t_steps},
        {"jmax", c.jmax},
        {"shifts", c.shifts},
        {"m", c.m},
        {"r", c.r},
        {"delta", c.delta},
        {"beta", c.beta},
        {"margin", c.margin},
        {"seed", c.seed},
        {"force", c.force},
    };
}

nlohmann::json report_json(const verify::InequalityReport& r) {
    nlohmann::json j;
    j["theorem"] = verify::theorem_name(r.theorem);
    j["m"] = r.m;
    j["config"] = config_json(r.config);
    nlohmann::json t = nlohmann::json::array(), lhs = nlohmann::json::array(), rhs = nlohmann::json::array(),
                   ratio = nlohmann::json::array(), alt = nlohmann::json::array(), wo = nlohmann::json::array();
    for (const verify::Row& row : r.rows()) {
        t.push_back(number_json(row.t));
        lhs.push_back(number_json(row.lhs));
        rhs.push_back(number_json(row.rhs));
        ratio.push_back(number_json(row.ratio));
        if (row.alt_rhs) alt.push_back(number_json(*row.alt_rhs));
        if (row.weak_orlicz) wo.push_back(number_json(*row.weak_orlicz));
    }
    j["t"] = t;
    j["lhs"] = lhs;
    j["rhs"] = rhs;
    j["ratio"] = ratio;
    if (!alt.empty()) j["alt_rhs"] = alt;
    if (!wo.empty()) {
        j["weak_orlicz"] = wo;
        j["sup_weak_orlicz"] = number_json(r.sup_weak_orlicz);
    }
    j["J"] = r.fine.J;
    j["sup_ratio"] = number_json(r.fine.sup_ratio);
    j["argmax_t"] = number_json(r.fine.argmax_t);
    if (r.coarse) {
        j["J_coarse"] = r.coarse->J;
        j["sup_ratio_coarse"] = number_json(r.coarse->sup_ratio);
    }
    j["b_bmo"] = number_json(r.fine.b_bmo);
    j["stable"] = r.stable;
    j["monotone"] = r.monotone;
    j["degenerate_symbol"] = r.degenerate_symbol;
    j["forced"] = r.forced;
    j["passed"] = r.passed();
    nlohmann::json pre = nlohmann::json::array();
    for (const verify::PreflightEntry& e : r.preflight)
        pre.push_back({{"name", e.name},
                       {"value", number_json(e.estimate.value)},
                       {"coarse", number_json(e.estimate.coarse)},
                       {"stable", e.estimate.stable}});
    j["preflight"] = pre;
    j["metadata"] = metadata_json(r.runtime_seconds);
    return j;
}

nlohmann::json cubes_json(const DecompositionResult& d) {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < d.cubes.size(); ++i) {
        const auto [a, b] = d.cubes[i].endpoints(d.grid);
        arr.push_back({{"j", d.cubes[i].j}, {"k", d.cubes[i].k}, {"a", a}, {"b", b}, {"avg", d.averages[i]}});
    }
    return arr;
}

nlohmann::json metadata_json(double runtime_seconds) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return {{"timestamp", buf}, {"runtime_seconds", runtime_seconds}};
}

void write_atomic(const std::string& path, const std::string& contents) {
    const std::string tmp = path + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot write '" + tmp + "'");
        out << contents;
        out.flush();
        if (!out) throw ConfigError("write failed for '" + tmp + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw ConfigError("cannot rename '" + tmp + "' to '" + path + "'");
    }
}

void write_f64(const std::string& path, const std::vector<double>& values) {
    std::string bytes(values.size() * 8, '\0');
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::uint64_t u;
        std::memcpy(&u, &values[i], 8);
        if constexpr (std::endian::native == std::endian::big) u = __builtin_bswap64(u);
        for (int b = 0; b < 8; ++b) bytes[i * 8 + b] = static_cast<char>((u >> (8 * b)) & 0xff);
    }
    write_atomic(path, bytes);
}

}  // namespace mixlab
