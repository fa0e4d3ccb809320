#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hetq/model.hpp"

namespace hetq {

/// Max of lambda + mu1 + mu2 over a 10^4-point grid, inflated by 1%.
[[nodiscard]] double dominating_rate(const ModelSpec& spec);

struct SimSettings {
    std::size_t n_paths = 100000;
    std::uint64_t seed = 20190101;
    std::vector<double> sample_times;
    double rate_bound = 0.0;        // 0 means dominating_rate(spec)
    std::size_t initial_state = 0;  // state index at t = 0
    unsigned threads = 0;           // 0 means hardware concurrency
};

/// State indices of one uniformised path at each sample time. Paths are
/// reproducible from (seed, path_index) alone.
[[nodiscard]] std::vector<std::size_t> simulate_path(const ModelSpec& spec, const SimSettings& settings,
                                                     std::uint64_t path_index);

struct ProbabilityEstimates {
    std::vector<double> times;
    std::size_t n_paths = 0;
    std::vector<std::vector<std::uint64_t>> counts;  // counts[time][state]

    [[nodiscard]] double estimate(std::size_t time_index, std::size_t state) const noexcept;
    /// Binomial standard error sqrt(p (1 - p) / n_paths) of the estimate.
    [[nodiscard]] double standard_error(std::size_t time_index, std::size_t state) const noexcept;
    [[nodiscard]] std::size_t states(std::size_t time_index) const noexcept { return counts[time_index].size(); }
};

/// Throws std::invalid_argument for fewer than 100 paths or a rate bound
/// below lambda + mu1 + mu2 somewhere on the check grid.
[[nodiscard]] ProbabilityEstimates estimate_probs(const ModelSpec& spec, const SimSettings& settings);

}  // namespace hetq
