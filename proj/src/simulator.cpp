#include "bsskit/simulator.hpp"

#include <cmath>
#include <mutex>

#include "bsskit/errors.hpp"
#include "bsskit/parallel.hpp"
#include "bsskit/rng.hpp"

namespace bss {

namespace {

struct Workspace {
    std::vector<double> displacement;  // u = theta - theta*
    std::vector<double> features;      // z-draws for the current sample
    std::vector<double> grad;          // accumulated gradient in z-coordinates
    std::vector<double> sqrt_lambda;
    std::vector<double> lambda;
};

// Single SGD pass; appends (time, loss) checkpoints.
void sgd_pass(const RunConfig& config, const Spectrum& sp, std::uint64_t seed,
              std::vector<double>& times, std::vector<double>& losses) {
    const auto n = static_cast<std::size_t>(config.spec.dim);
    const double eta = config.schedule.eta;
    const std::size_t steps = config.schedule.batch_sizes.size();

    Workspace ws;
    ws.displacement.assign(n, 0.0);
    ws.features.resize(n);
    ws.grad.resize(n);
    ws.sqrt_lambda.resize(n);
    ws.lambda = sp.lambdas;
    for (std::size_t j = 0; j < n; ++j) ws.sqrt_lambda[j] = std::sqrt(sp.lambdas[j]);
    if (config.init == InitMode::Zero)
        for (std::size_t j = 0; j < n; ++j) ws.displacement[j] = -sp.theta_star[j];

    Rng rng(seed);
    const double sigma = config.spec.sigma;

    const auto risk = [&]() {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            acc += ws.lambda[j] * ws.displacement[j] * ws.displacement[j];
        return 0.5 * acc;
    };

    for (std::size_t k = 1; k <= steps; ++k) {
        const auto batch = config.schedule.batch_sizes[k - 1];
        std::fill(ws.grad.begin(), ws.grad.end(), 0.0);
        for (std::int64_t i = 0; i < batch; ++i) {
            // feature phi_j = sqrt(lambda_j) z_j; residual <phi,u> - eps
            double dot = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double z = rng.normal();
                ws.features[j] = z;
                dot += ws.sqrt_lambda[j] * z * ws.displacement[j];
            }
            const double resid = sigma > 0.0 ? dot - sigma * rng.normal() : dot;
            for (std::size_t j = 0; j < n; ++j) ws.grad[j] += resid * ws.features[j];
        }
        const double scale = eta / static_cast<double>(batch);
        for (std::size_t j = 0; j < n; ++j)
            ws.displacement[j] -= scale * ws.sqrt_lambda[j] * ws.grad[j];

        if (k % static_cast<std::size_t>(config.eval_every) == 0 || k == steps) {
            const double loss = risk();
            if (!std::isfinite(loss))
                throw DivergenceError("run_sgd: non-finite loss", static_cast<long long>(k));
            times.push_back(eta * static_cast<double>(k));
            losses.push_back(loss);
        }
    }
}

void validate_config(const RunConfig& config) {
    config.spec.validate();
    if (config.schedule.batch_sizes.empty()) throw DomainError("run_sgd: empty schedule");
    if (config.schedule.eta != config.spec.eta)
        throw DomainError("run_sgd: schedule eta differs from the problem learning rate");
    if (config.eval_every < 1) throw DomainError("run_sgd: eval_every must be >= 1");
    if (config.repeats < 1) throw DomainError("run_sgd: repeats must be >= 1");
    for (auto b : config.schedule.batch_sizes)
        if (b < 1) throw DomainError("run_sgd: batch sizes must be >= 1");
}

}  // namespace

Trajectory run_sgd(const RunConfig& config) {
    validate_config(config);
    const Spectrum sp = make_spectrum(config.spec);
    Trajectory tr;
    tr.kind = TrajectoryKind::MonteCarlo;
    sgd_pass(config, sp, config.seed, tr.times, tr.losses);
    tr.meta.spec_hash = config.spec.content_hash();
    tr.meta.schedule_hash = config.schedule.content_hash();
    tr.meta.seeds = {config.seed};
    tr.validate();
    return tr;
}

Trajectory run_sgd_averaged(const RunConfig& config, int n_threads) {
    validate_config(config);
    if (config.repeats < 2)
        throw DomainError("run_sgd_averaged: repeats must be >= 2 for a standard error");
    const Spectrum sp = make_spectrum(config.spec);
    const auto repeats = static_cast<std::size_t>(config.repeats);

    std::vector<std::vector<double>> all_losses(repeats);
    std::vector<double> grid_times;
    std::vector<std::uint64_t> seeds(repeats);
    for (std::size_t r = 0; r < repeats; ++r) seeds[r] = derive_run_seed(config.seed, r);

    std::mutex first_error_mutex;
    long long diverged_run = -1;
    std::string divergence_msg;

    parallel_for_index(static_cast<std::int64_t>(repeats), n_threads, [&](std::int64_t r) {
        std::vector<double> times, losses;
        try {
            sgd_pass(config, sp, seeds[static_cast<std::size_t>(r)], times, losses);
        } catch (const DivergenceError& e) {
            std::lock_guard<std::mutex> lock(first_error_mutex);
            if (diverged_run < 0 || r < diverged_run) {
                diverged_run = r;
                divergence_msg = e.what();
            }
            return;
        }
        all_losses[static_cast<std::size_t>(r)] = std::move(losses);
        if (r == 0) {
            std::lock_guard<std::mutex> lock(first_error_mutex);
            grid_times = std::move(times);
        }
    });
    if (diverged_run >= 0)
        throw DivergenceError(divergence_msg + " [run " + std::to_string(diverged_run) + "]",
                              diverged_run);

    const std::size_t n_pts = all_losses[0].size();
    Trajectory tr;
    tr.kind = TrajectoryKind::MonteCarlo;
    tr.times = std::move(grid_times);
    tr.losses.resize(n_pts);
    tr.stderrs.resize(n_pts);
    for (std::size_t i = 0; i < n_pts; ++i) {
        double mean = 0.0;
        for (std::size_t r = 0; r < repeats; ++r) mean += all_losses[r][i];
        mean /= static_cast<double>(repeats);
        double var = 0.0;
        for (std::size_t r = 0; r < repeats; ++r) {
            const double d = all_losses[r][i] - mean;
            var += d * d;
        }
        var /= static_cast<double>(repeats - 1);
        tr.losses[i] = mean;
        tr.stderrs[i] = std::sqrt(var / static_cast<double>(repeats));
    }
    tr.meta.spec_hash = config.spec.content_hash();
    tr.meta.schedule_hash = config.schedule.content_hash();
    tr.meta.seeds = std::move(seeds);
    tr.validate();
    return tr;
}

GradientProbe probe_gradient_noise(const ProblemSpec& spec, const std::vector<double>& theta,
                                   std::int64_t batch, std::int64_t n_batches,
                                   std::uint64_t seed, bool with_covariance) {
    spec.validate();
    const auto n = static_cast<std::size_t>(spec.dim);
    if (theta.size() != n) throw DomainError("probe_gradient_noise: theta length mismatch");
    if (batch < 1 || n_batches < 2) throw DomainError("probe_gradient_noise: need batch >= 1, n_batches >= 2");
    const Spectrum sp = make_spectrum(spec);

    std::vector<double> u(n), sqrt_lambda(n), z(n), g(n);
    for (std::size_t j = 0; j < n; ++j) {
        u[j] = theta[j] - sp.theta_star[j];
        sqrt_lambda[j] = std::sqrt(sp.lambdas[j]);
    }
    // population gradient H(theta - theta*)
    std::vector<double> pop_grad(n);
    for (std::size_t j = 0; j < n; ++j) pop_grad[j] = sp.lambdas[j] * u[j];

    GradientProbe probe;
    probe.mean.assign(n, 0.0);
    probe.var.assign(n, 0.0);
    probe.mean_se.assign(n, 0.0);
    probe.var_se.assign(n, 0.0);
    if (with_covariance) {
        probe.covariance.assign(n * n, 0.0);
        probe.covariance_se.assign(n * n, 0.0);
    }

    // group means of the per-coordinate variance for its standard error
    constexpr int kGroups = 20;
    std::vector<double> group_var(static_cast<std::size_t>(kGroups) * n, 0.0);
    std::vector<std::int64_t> group_count(kGroups, 0);
    std::vector<double> group_cov;
    if (with_covariance) group_cov.assign(static_cast<std::size_t>(kGroups) * n * n, 0.0);

    Rng rng(seed);
    std::vector<double> sum(n, 0.0), sum_sq(n, 0.0);
    std::vector<double> noise(n);
    for (std::int64_t m = 0; m < n_batches; ++m) {
        std::fill(g.begin(), g.end(), 0.0);
        for (std::int64_t i = 0; i < batch; ++i) {
            double dot = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                z[j] = rng.normal();
                dot += sqrt_lambda[j] * z[j] * u[j];
            }
            const double resid = spec.sigma > 0.0 ? dot - spec.sigma * rng.normal() : dot;
            for (std::size_t j = 0; j < n; ++j) g[j] += resid * sqrt_lambda[j] * z[j];
        }
        const int group = static_cast<int>(m % kGroups);
        ++group_count[group];
        for (std::size_t j = 0; j < n; ++j) {
            const double gj = g[j] / static_cast<double>(batch);
            sum[j] += gj;
            const double nj = gj - pop_grad[j];
            noise[j] = nj;
            sum_sq[j] += nj * nj;
            group_var[static_cast<std::size_t>(group) * n + j] += nj * nj;
        }
        if (with_covariance) {
            double* gc = group_cov.data() + static_cast<std::size_t>(group) * n * n;
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b) gc[a * n + b] += noise[a] * noise[b];
        }
    }

    const double inv_m = 1.0 / static_cast<double>(n_batches);
    for (std::size_t j = 0; j < n; ++j) {
        probe.mean[j] = sum[j] * inv_m;
        probe.var[j] = sum_sq[j] * inv_m;
    }
    // spread of group means -> standard errors
    for (int gidx = 0; gidx < kGroups; ++gidx) {
        const double cnt = static_cast<double>(group_count[gidx]);
        for (std::size_t j = 0; j < n; ++j) group_var[static_cast<std::size_t>(gidx) * n + j] /= cnt;
    }
    for (std::size_t j = 0; j < n; ++j) {
        double gm = 0.0, gs = 0.0;
        for (int gidx = 0; gidx < kGroups; ++gidx) gm += group_var[static_cast<std::size_t>(gidx) * n + j];
        gm /= kGroups;
        for (int gidx = 0; gidx < kGroups; ++gidx) {
            const double d = group_var[static_cast<std::size_t>(gidx) * n + j] - gm;
            gs += d * d;
        }
        probe.var_se[j] = std::sqrt(gs / (kGroups - 1) / kGroups);
        probe.mean_se[j] = std::sqrt(probe.var[j] * inv_m);
    }
    if (with_covariance) {
        for (int gidx = 0; gidx < kGroups; ++gidx) {
            const double cnt = static_cast<double>(group_count[gidx]);
            double* gc = group_cov.data() + static_cast<std::size_t>(gidx) * n * n;
            for (std::size_t e = 0; e < n * n; ++e) gc[e] /= cnt;
        }
        for (std::size_t e = 0; e < n * n; ++e) {
            double gm = 0.0, gs = 0.0;
            for (int gidx = 0; gidx < kGroups; ++gidx) gm += group_cov[static_cast<std::size_t>(gidx) * n * n + e];
            gm /= kGroups;
            for (int gidx = 0; gidx < kGroups; ++gidx) {
                const double d = group_cov[static_cast<std::size_t>(gidx) * n * n + e] - gm;
                gs += d * d;
            }
            probe.covariance[e] = gm;
            probe.covariance_se[e] = std::sqrt(gs / (kGroups - 1) / kGroups);
        }
    }
    return probe;
}

}  // namespace bss
