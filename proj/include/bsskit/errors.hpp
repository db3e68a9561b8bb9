#pragma once

#include <stdexcept>
#include <string>

namespace bss {

// Bad user input: config files, CLI arguments, parameter domains.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Parameter outside the mathematical domain of an operation.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// A solver or simulation blew up; `step` is the first offending step.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& msg, long long step)
        : std::runtime_error(msg + " (step " + std::to_string(step) + ")"), step_(step) {}
    long long step() const { return step_; }

private:
    long long step_;
};

}  // namespace bss
