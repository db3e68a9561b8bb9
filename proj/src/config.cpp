#include "bsskit/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "bsskit/errors.hpp"

namespace bss {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, const std::string& where) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0' || !std::isfinite(x))
        throw ConfigError(where + ": `" + v + "` is not a finite decimal number");
    return x;
}

}  // namespace

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file `" + path + "`");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str(), path);
}

Config Config::parse_string(const std::string& text, const std::string& origin) {
    Config cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty section name");
            cfg.data_[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected `key = value`");
        if (section.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": key outside any section");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        if (cfg.data_[section].count(key))
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key `" + key + "`");
        cfg.data_[section][key] = value;
    }
    return cfg;
}

bool Config::has(const std::string& section, const std::string& key) const {
    const auto s = data_.find(section);
    return s != data_.end() && s->second.count(key) > 0;
}

bool Config::has_section(const std::string& section) const { return data_.count(section) > 0; }

std::string Config::get_string(const std::string& section, const std::string& key) const {
    const auto s = data_.find(section);
    if (s == data_.end())
        throw ConfigError(origin_ + ": missing section [" + section + "]");
    const auto k = s->second.find(key);
    if (k == s->second.end())
        throw ConfigError(origin_ + ": missing key `" + key + "` in section [" + section + "]");
    return k->second;
}

std::string Config::get_string_or(const std::string& section, const std::string& key,
                                  const std::string& fallback) const {
    return has(section, key) ? get_string(section, key) : fallback;
}

double Config::get_double(const std::string& section, const std::string& key) const {
    return parse_double(get_string(section, key), origin_ + ": [" + section + "] " + key);
}

double Config::get_double_or(const std::string& section, const std::string& key,
                             double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
}

std::int64_t Config::get_int(const std::string& section, const std::string& key) const {
    const double x = get_double(section, key);
    const auto i = static_cast<std::int64_t>(std::llround(x));
    if (std::abs(x - static_cast<double>(i)) > 1e-9)
        throw ConfigError(origin_ + ": [" + section + "] " + key + " must be an integer");
    return i;
}

std::int64_t Config::get_int_or(const std::string& section, const std::string& key,
                                std::int64_t fallback) const {
    return has(section, key) ? get_int(section, key) : fallback;
}

std::vector<double> Config::get_double_list(const std::string& section,
                                            const std::string& key) const {
    const std::string raw = get_string(section, key);
    std::vector<double> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(parse_double(item, origin_ + ": [" + section + "] " + key));
    }
    if (out.empty())
        throw ConfigError(origin_ + ": [" + section + "] " + key + " must be a comma-separated list");
    return out;
}

void Config::restrict(const std::map<std::string, std::set<std::string>>& allowed) const {
    for (const auto& [section, keys] : data_) {
        const auto it = allowed.find(section);
        if (it == allowed.end())
            throw ConfigError(origin_ + ": unknown section [" + section + "]");
        for (const auto& [key, value] : keys) {
            (void)value;
            if (!it->second.count(key))
                throw ConfigError(origin_ + ": unknown key `" + key + "` in section [" + section + "]");
        }
    }
}

bool problem_dim_is_auto(const Config& cfg) {
    return cfg.get_string_or("problem", "dim", "auto") == "auto";
}

ProblemSpec problem_from_config(const Config& cfg, double auto_dim_loss) {
    ProblemSpec spec;
    spec.s = cfg.get_double("problem", "s");
    spec.beta = cfg.get_double("problem", "beta");
    spec.sigma = cfg.get_double("problem", "sigma");
    spec.eta = cfg.get_double("problem", "eta");
    if (problem_dim_is_auto(cfg)) {
        spec.dim = 1000;
        if (auto_dim_loss > 0.0) spec.dim = recommended_dim(spec, auto_dim_loss);
    } else {
        spec.dim = cfg.get_int("problem", "dim");
    }
    spec.validate();
    return spec;
}

ScheduleSpec schedule_spec_from_config(const Config& cfg) {
    ScheduleSpec ss;
    const std::string kind = cfg.get_string("schedule", "kind");
    if (kind == "constant") {
        ss.kind = ScheduleSpec::Kind::Constant;
        ss.B = cfg.get_double("schedule", "B");
        ss.D = cfg.get_double("schedule", "D");
    } else if (kind == "two_stage") {
        ss.kind = ScheduleSpec::Kind::TwoStage;
        ss.B1 = cfg.get_double("schedule", "B1");
        ss.B2 = cfg.get_double("schedule", "B2");
        ss.D = cfg.get_double("schedule", "D");
        ss.P = cfg.get_double("schedule", "P");
    } else if (kind == "b2_easy" || kind == "b2_hard") {
        ss.kind = kind == "b2_easy" ? ScheduleSpec::Kind::B2Easy : ScheduleSpec::Kind::B2Hard;
        ss.D0 = cfg.get_double("schedule", "D0");
        ss.alpha = cfg.get_double_or("schedule", "alpha", kind == "b2_easy" ? 1000.0 : 1.0);
        ss.nu = cfg.get_double_or("schedule", "nu", 10.0);
    } else if (kind == "file") {
        ss.kind = ScheduleSpec::Kind::File;
        ss.path = cfg.get_string("schedule", "path");
    } else {
        throw ConfigError("[schedule] kind `" + kind + "` is not one of constant, two_stage, b2_easy, b2_hard, file");
    }
    return ss;
}

Schedule build_continuous_schedule(const ScheduleSpec& ss, const ProblemSpec& spec) {
    switch (ss.kind) {
        case ScheduleSpec::Kind::Constant: return Schedule::constant(ss.B, ss.D);
        case ScheduleSpec::Kind::TwoStage: return Schedule::two_stage(ss.B1, ss.B2, ss.D, ss.P);
        case ScheduleSpec::Kind::B2Easy:
            return to_piecewise_constant(appendix_b2_easy(ss.D0, ss.alpha, ss.nu, spec));
        case ScheduleSpec::Kind::B2Hard:
            return to_piecewise_constant(appendix_b2_hard(ss.D0, ss.alpha, ss.nu, spec));
        default: {
            std::ifstream in(ss.path);
            if (!in) throw ConfigError("cannot open schedule file `" + ss.path + "`");
            std::stringstream buf;
            buf << in.rdbuf();
            return parse_schedule_text(buf.str());
        }
    }
}

DiscreteSchedule build_discrete_schedule(const ScheduleSpec& ss, const ProblemSpec& spec) {
    switch (ss.kind) {
        case ScheduleSpec::Kind::B2Easy: return appendix_b2_easy(ss.D0, ss.alpha, ss.nu, spec);
        case ScheduleSpec::Kind::B2Hard: return appendix_b2_hard(ss.D0, ss.alpha, ss.nu, spec);
        default: return discretize(build_continuous_schedule(ss, spec), spec.eta);
    }
}

}  // namespace bss
