#include "mixlab/config.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace mixlab {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ParseError("not a number: '" + s + "'");
    }
    if (used != s.size()) throw ParseError("not a number: '" + s + "'");
    return v;
}

long long to_int(const std::string& s) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &used);
    } catch (const std::exception&) {
        throw ParseError("not an integer: '" + s + "'");
    }
    if (used != s.size()) throw ParseError("not an integer: '" + s + "'");
    return v;
}

bool to_bool(const std::string& s) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ParseError("not a boolean: '" + s + "'");
}

const std::set<std::string>& families(const std::string& role) {
    static const std::map<std::string, std::set<std::string>> known{
        {"f", {"indicator", "twobump", "powerchi", "spike", "zero", "constant", "file"}},
        {"b", {"log", "sawtooth-log", "constant", "file"}},
        {"weight", {"power", "bump", "const", "file"}},
    };
    return known.at(role);
}

using Setter = std::function<void(verify::ExperimentConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    using C = verify::ExperimentConfig;
    static const std::map<std::string, Setter> table{
        {"grid.L", [](C& c, const std::string& v) { c.L = to_double(v); }},
        {"grid.J", [](C& c, const std::string& v) { c.J = static_cast<int>(to_int(v)); }},
        {"f.family", [](C& c, const std::string& v) { c.f = parse_family(v, "f"); }},
        {"b.family", [](C& c, const std::string& v) { c.b = parse_family(v, "b"); }},
        {"b.normalize", [](C& c, const std::string& v) { c.b_normalize = to_bool(v); }},
        {"weight.u", [](C& c, const std::string& v) { c.u = parse_family(v, "weight"); }},
        {"weight.v", [](C& c, const std::string& v) { c.v = parse_family(v, "weight"); }},
        {"sweep.t_min", [](C& c, const std::string& v) { c.t_min = to_double(v); }},
        {"sweep.t_max", [](C& c, const std::string& v) { c.t_max = to_double(v); }},
        {"sweep.steps", [](C& c, const std::string& v) { c.t_steps = static_cast<int>(to_int(v)); }},
        {"scan.jmax", [](C& c, const std::string& v) { c.jmax = static_cast<int>(to_int(v)); }},
        {"scan.shifts", [](C& c, const std::string& v) { c.shifts = static_cast<int>(to_int(v)); }},
        {"theorem.m", [](C& c, const std::string& v) { c.m = static_cast<int>(to_int(v)); }},
        {"theorem.r", [](C& c, const std::string& v) { c.r = to_double(v); }},
        {"theorem.delta", [](C& c, const std::string& v) { c.delta = to_double(v); }},
        {"theorem.beta", [](C& c, const std::string& v) { c.beta = to_double(v); }},
        {"run.margin", [](C& c, const std::string& v) { c.margin = to_double(v); }},
        {"run.seed", [](C& c, const std::string& v) { c.seed = static_cast<std::uint64_t>(to_int(v)); }},
        {"run.force", [](C& c, const std::string& v) { c.force = to_bool(v); }},
    };
    return table;
}

}  // namespace

verify::FamilySpec parse_family(const std::string& value, const std::string& role) {
    std::istringstream in(value);
    std::vector<std::string> tokens;
    for (std::string t; in >> t;) tokens.push_back(t);
    if (tokens.empty()) throw ParseError("empty family specification");
    verify::FamilySpec spec;
    std::size_t next = 1;
    spec.family = tokens[0].rfind("family=", 0) == 0 ? tokens[0].substr(7) : tokens[0];
    if (!families(role).count(spec.family)) throw ParseError("unknown " + role + " family '" + spec.family + "'");
    if (spec.family == "file") {
        if (tokens.size() < 2) throw ParseError("'file' needs a path");
        spec.path = tokens[1];
        next = 2;
    }
    for (std::size_t i = next; i < tokens.size(); ++i) {
        const auto eq = tokens[i].find('=');
        if (eq == std::string::npos || eq == 0) throw ParseError("expected key=value, got '" + tokens[i] + "'");
        const std::string key = tokens[i].substr(0, eq);
        if (spec.params.count(key)) throw ParseError("duplicate parameter '" + key + "'");
        spec.params[key] = to_double(tokens[i].substr(eq + 1));
    }
    return spec;
}

verify::ExperimentConfig parse_config_text(const std::string& text, verify::ExperimentConfig cfg) {
    std::istringstream in(text);
    std::set<std::string> seen;
    std::string line;
    for (int n = 1; std::getline(in, line); ++n) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(n) + ": ";
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(where + "expected 'section.key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) throw ParseError(where + "unknown key '" + key + "'");
        if (!seen.insert(key).second) throw ParseError(where + "duplicate key '" + key + "'");
        if (value.empty()) throw ParseError(where + "missing value for '" + key + "'");
        try {
            it->second(cfg, value);
        } catch (const ParseError& e) {
            throw ParseError(where + key + ": " + e.what());
        }
    }
    return cfg;
}

verify::ExperimentConfig parse_config_file(const std::string& path, verify::ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config_text(ss.str(), std::move(base));
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

}  // namespace mixlab
