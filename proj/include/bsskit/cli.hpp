#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bss {

// Shared flag overrides; unset fields defer to the config file.
struct CliOverrides {
    std::optional<std::uint64_t> seed;
    int threads = 0;  // 0 -> hardware concurrency
};

// Each command returns the text written to stdout (echoed by the caller) and
// writes its primary artifact to `out_path`. Throws ConfigError/DomainError
// for bad input (exit 2) and DivergenceError for numeric blow-ups (exit 3).
std::string cmd_fsl_eval(const std::string& config_path, const std::string& out_path,
                         const std::string& predictor, const std::string& t_grid,
                         const CliOverrides& ov);
std::string cmd_simulate(const std::string& config_path, const std::string& out_path,
                         const CliOverrides& ov);
std::string cmd_optimize(const std::string& config_path, const std::string& out_path,
                         const std::string& method_override, const CliOverrides& ov);
std::string cmd_switch(const std::string& config_path, const std::string& out_path,
                       const CliOverrides& ov);
std::string cmd_sweep(const std::string& config_path, const std::string& out_path,
                      const CliOverrides& ov);
std::string cmd_catchup(const std::string& config_path, const std::string& out_path,
                        const CliOverrides& ov);
std::string cmd_plot(const std::vector<std::string>& csv_paths, const std::string& out_path,
                     bool loglog);

}  // namespace bss
