#pragma once

#include <cstddef>
#include <string>

#include "hetq/rate_function.hpp"

namespace hetq {

/// Instantaneous intensities; `mu` is always `mu1 + mu2`.
struct Rates {
    double lambda = 0.0;
    double mu1 = 0.0;
    double mu2 = 0.0;
    double mu = 0.0;
};

/// Two-server heterogeneous queue: arrivals at lambda(t), a fast main server
/// at mu1(t) and a slow backup server at mu2(t) <= mu1(t).
class ModelSpec {
public:
    static constexpr int kValidationGrid = 10000;

    /// Throws std::invalid_argument if mu2(t) > mu1(t) anywhere on the grid.
    ModelSpec(RateFunction lambda, RateFunction mu1, RateFunction mu2, std::string name = {});

    [[nodiscard]] const RateFunction& lambda() const noexcept { return lambda_; }
    [[nodiscard]] const RateFunction& mu1() const noexcept { return mu1_; }
    [[nodiscard]] const RateFunction& mu2() const noexcept { return mu2_; }
    [[nodiscard]] const std::string& name() const noexcept { return name_; }

    [[nodiscard]] bool is_constant() const noexcept;
    /// True when mu1 and mu2 are the same function (not merely equal on a grid).
    [[nodiscard]] bool equal_mu() const noexcept { return mu1_ == mu2_; }
    /// Averaged traffic condition lambda* < mu1* + mu2*.
    [[nodiscard]] bool traffic_condition() const noexcept;

    /// Homogeneous model with every rate replaced by its mean over one period.
    [[nodiscard]] ModelSpec averaged() const;

private:
    RateFunction lambda_;
    RateFunction mu1_;
    RateFunction mu2_;
    std::string name_;
};

[[nodiscard]] Rates eval_rates(const ModelSpec& spec, double t) noexcept;
[[nodiscard]] Rates mean_rates(const ModelSpec& spec) noexcept;

/// Queue state in the (main, level) notation of p_{ij}:
/// (0,0) empty, (1,0) main busy, (0,1) backup busy, (1,j) both busy with j-1 waiting.
struct QueueState {
    int main = 0;
    int level = 0;

    friend bool operator==(const QueueState&, const QueueState&) = default;
};

/// Vector position of a state: (0,0)->0, (1,0)->1, (0,1)->2, (1,j)->j+2.
[[nodiscard]] std::size_t state_encode(QueueState s);
[[nodiscard]] QueueState state_decode(std::size_t index) noexcept;
/// Signed entry point for untrusted input; throws std::out_of_range on a negative index.
[[nodiscard]] QueueState decode_index(long long index);
[[nodiscard]] int job_count(std::size_t index) noexcept;

/// Label such as "p00", "p10", "p01", "p11", "p12" used in CSV headers.
[[nodiscard]] std::string state_label(std::size_t index);

}  // namespace hetq
