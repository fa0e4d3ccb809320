#include "hetq/mcsim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

namespace hetq {
namespace {

constexpr int kRateGrid = 10000;

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class PathStream {
public:
    PathStream(std::uint64_t seed, std::uint64_t path) : engine_(splitmix64(splitmix64(seed) ^ path)) {}

    // 53 random bits in [0, 1); avoids implementation-defined distributions
    double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double exponential(double rate) noexcept { return -std::log1p(-uniform()) / rate; }

private:
    std::mt19937_64 engine_;
};

std::size_t on_arrival(std::size_t s) noexcept {
    switch (s) {
        case 0: return 1;  // fastest server first: the main server takes it
        case 1: return 3;  // backup takes it
        case 2: return 3;  // idle main takes it
        default: return s + 1;
    }
}

std::size_t on_main_completion(std::size_t s) noexcept {
    switch (s) {
        case 1: return 0;
        case 3: return 2;
        default: return s >= 4 ? s - 1 : s;  // main idle in 0 and 2: no effect
    }
}

std::size_t on_backup_completion(std::size_t s) noexcept {
    switch (s) {
        case 2: return 0;
        case 3: return 1;
        default: return s >= 4 ? s - 1 : s;
    }
}

void check_bound(const ModelSpec& spec, double bound) {
    for (int i = 0; i < kRateGrid; ++i) {
        const Rates r = eval_rates(spec, static_cast<double>(i) / kRateGrid);
        if (r.lambda + r.mu > bound) {
            throw std::invalid_argument("rate bound does not dominate lambda + mu1 + mu2");
        }
    }
}

}  // namespace

double dominating_rate(const ModelSpec& spec) {
    double peak = 0.0;
    for (int i = 0; i < kRateGrid; ++i) {
        const Rates r = eval_rates(spec, static_cast<double>(i) / kRateGrid);
        peak = std::max(peak, r.lambda + r.mu);
    }
    return peak > 0.0 ? 1.01 * peak : 1.0;
}

std::vector<std::size_t> simulate_path(const ModelSpec& spec, const SimSettings& settings, std::uint64_t path_index) {
    const double bound = settings.rate_bound > 0.0 ? settings.rate_bound : dominating_rate(spec);
    PathStream rng(settings.seed, path_index);
    std::vector<std::size_t> out;
    out.reserve(settings.sample_times.size());

    std::size_t state = settings.initial_state;
    double t = 0.0;
    for (double sample : settings.sample_times) {
        while (true) {
            const double next = t + rng.exponential(bound);
            if (next > sample) break;
            t = next;
            const Rates r = eval_rates(spec, t);
            const double u = rng.uniform() * bound;
            if (u < r.lambda) {
                state = on_arrival(state);
            } else if (u < r.lambda + r.mu1) {
                state = on_main_completion(state);
            } else if (u < r.lambda + r.mu) {
                state = on_backup_completion(state);
            }
        }
        // memorylessness of the candidate process lets the clock restart here
        t = sample;
        out.push_back(state);
    }
    return out;
}

double ProbabilityEstimates::estimate(std::size_t time_index, std::size_t state) const noexcept {
    const auto& c = counts[time_index];
    if (state >= c.size() || n_paths == 0) return 0.0;
    return static_cast<double>(c[state]) / static_cast<double>(n_paths);
}

double ProbabilityEstimates::standard_error(std::size_t time_index, std::size_t state) const noexcept {
    const double p = estimate(time_index, state);
    return std::sqrt(p * (1.0 - p) / static_cast<double>(n_paths));
}

ProbabilityEstimates estimate_probs(const ModelSpec& spec, const SimSettings& settings) {
    if (settings.n_paths < 100) throw std::invalid_argument("estimate_probs needs at least 100 paths");
    if (!std::is_sorted(settings.sample_times.begin(), settings.sample_times.end()) ||
        (!settings.sample_times.empty() && settings.sample_times.front() < 0.0)) {
        throw std::invalid_argument("sample times must be nonnegative and sorted");
    }
    SimSettings s = settings;
    if (s.rate_bound <= 0.0) s.rate_bound = dominating_rate(spec);
    check_bound(spec, s.rate_bound);

    const std::size_t n_times = s.sample_times.size();
    unsigned workers = s.threads ? s.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, s.n_paths));

    std::vector<std::vector<std::vector<std::uint64_t>>> partial(workers,
                                                                 std::vector<std::vector<std::uint64_t>>(n_times));
    auto work = [&](unsigned id) {
        auto& local = partial[id];
        for (std::size_t path = id; path < s.n_paths; path += workers) {
            const auto states = simulate_path(spec, s, path);
            for (std::size_t k = 0; k < n_times; ++k) {
                if (states[k] >= local[k].size()) local[k].resize(states[k] + 1, 0);
                ++local[k][states[k]];
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned id = 1; id < workers; ++id) pool.emplace_back(work, id);
    work(0);
    for (auto& th : pool) th.join();

    ProbabilityEstimates est;
    est.times = s.sample_times;
    est.n_paths = s.n_paths;
    est.counts.assign(n_times, {});
    for (const auto& local : partial) {
        for (std::size_t k = 0; k < n_times; ++k) {
            if (local[k].size() > est.counts[k].size()) est.counts[k].resize(local[k].size(), 0);
            for (std::size_t i = 0; i < local[k].size(); ++i) est.counts[k][i] += local[k][i];
        }
    }
    return est;
}

}  // namespace hetq
