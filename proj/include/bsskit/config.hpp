#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bsskit/model.hpp"
#include "bsskit/schedule.hpp"

namespace bss {

// Flat sectioned key-value config. `#` starts a comment; values are decimal
// text. Unknown sections or keys are rejected by name.
class Config {
public:
    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key) const;
    std::string get_string_or(const std::string& section, const std::string& key,
                              const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double_or(const std::string& section, const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& section, const std::string& key) const;
    std::int64_t get_int_or(const std::string& section, const std::string& key,
                            std::int64_t fallback) const;
    std::vector<double> get_double_list(const std::string& section, const std::string& key) const;

    // Validates that every present section/key appears in `allowed`
    // (section -> keys); throws ConfigError naming the offender.
    void restrict(const std::map<std::string, std::set<std::string>>& allowed) const;

    bool has_section(const std::string& section) const;

private:
    // section -> key -> value
    std::map<std::string, std::map<std::string, std::string>> data_;
    std::string origin_;
};

// [problem] section: keys s, beta, sigma, eta, dim (dim may be `auto`).
// When dim is auto, `auto_dim_loss` supplies the predicted loss for the
// truncation rule; passing 0 keeps dim = 1000.
ProblemSpec problem_from_config(const Config& cfg, double auto_dim_loss = 0.0);
bool problem_dim_is_auto(const Config& cfg);

// [schedule] section: kind = constant | two_stage | b2_easy | b2_hard | file.
struct ScheduleSpec {
    enum class Kind { Constant, TwoStage, B2Easy, B2Hard, File } kind;
    double B = 1, D = 0, B1 = 1, B2 = 2, P = 0;
    double D0 = 0, alpha = 1000.0, nu = 10.0;
    std::string path;
};
ScheduleSpec schedule_spec_from_config(const Config& cfg);
Schedule build_continuous_schedule(const ScheduleSpec& ss, const ProblemSpec& spec);
DiscreteSchedule build_discrete_schedule(const ScheduleSpec& ss, const ProblemSpec& spec);

}  // namespace bss
