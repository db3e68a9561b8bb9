#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bss {

enum class TrajectoryKind {
    SimplifiedFsl,
    SpectralVolterra,
    MomentOdeLower,
    MomentOdeUpper,
    MonteCarlo,
};

const char* to_string(TrajectoryKind k);

// Expected excess-risk curve with provenance.
struct Trajectory {
    std::vector<double> times;    // strictly increasing, first point > 0
    std::vector<double> losses;   // finite, >= 0
    std::vector<double> stderrs;  // empty unless MonteCarlo with repeats >= 2
    TrajectoryKind kind = TrajectoryKind::SimplifiedFsl;

    struct Meta {
        std::uint64_t spec_hash = 0;
        std::uint64_t schedule_hash = 0;
        std::vector<std::uint64_t> seeds;
    } meta;

    void validate() const;  // throws DomainError on malformed data
    double final_loss() const;
    // linear interpolation; clamps to the endpoints outside the grid
    double interpolate(double t) const;
};

}  // namespace bss
