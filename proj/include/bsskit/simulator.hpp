#pragma once

#include <cstdint>
#include <vector>

#include "bsskit/model.hpp"
#include "bsskit/schedule.hpp"
#include "bsskit/trajectory.hpp"

namespace bss {

enum class InitMode { Zero, TargetDebug };  // theta_0 = 0, or theta_0 = theta* (debug)

struct RunConfig {
    ProblemSpec spec;
    DiscreteSchedule schedule;
    std::uint64_t seed = 42;
    std::int64_t eval_every = 1;
    int repeats = 1;
    InitMode init = InitMode::Zero;
};

// One-pass mini-batch SGD on freshly sampled Gaussian data. Records the
// excess risk at t = k*eta every eval_every steps (and at the final step).
// Bit-reproducible for a fixed seed within this implementation.
Trajectory run_sgd(const RunConfig& config);

// Mean trajectory over `repeats` independent runs with seeds derived from
// config.seed via the splitting rule; stderr = sample std / sqrt(repeats).
// The reduction is done in run-index order, so the result does not depend
// on thread scheduling.
Trajectory run_sgd_averaged(const RunConfig& config, int n_threads = 0);

// Mini-batch gradient statistics at a fixed parameter point, for checking
// the gradient-noise model. Each of the `n_batches` draws uses an
// independent batch of size `batch`.
struct GradientProbe {
    std::vector<double> mean;        // empirical mean gradient
    std::vector<double> var;         // per-coordinate variance of the batch gradient
    std::vector<double> mean_se;     // standard error of `mean`
    std::vector<double> var_se;      // standard error of `var` (group-wise estimate)
    std::vector<double> covariance;  // row-major dim x dim covariance of the noise
    std::vector<double> covariance_se;
};
GradientProbe probe_gradient_noise(const ProblemSpec& spec, const std::vector<double>& theta,
                                   std::int64_t batch, std::int64_t n_batches,
                                   std::uint64_t seed, bool with_covariance = false);

}  // namespace bss
