#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "hetq/matrices.hpp"
#include "hetq/model.hpp"

namespace hetq {

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A single RK4 step lost more than kMaxStepDefect of probability mass
/// before projection. Halve the step and retry.
class StepSizeError : public SolverError {
public:
    using SolverError::SolverError;
};

/// Doubling the truncation level did not converge below the cap.
class TruncationError : public SolverError {
public:
    using SolverError::SolverError;
};

/// Trajectories did not merge (or the limit cycle did not fit) before the horizon.
class HorizonTooShort : public SolverError {
public:
    HorizonTooShort(const std::string& what, double decay_rate) : SolverError(what), decay_rate(decay_rate) {}
    double decay_rate;  // NaN when no fit was possible
};

class FitError : public SolverError {
public:
    using SolverError::SolverError;
};

inline constexpr double kMaxStepDefect = 1e-6;

struct SolveSettings {
    std::size_t n = 64;           // truncation level (number of states)
    double step = 1e-3;           // RK4 step
    double horizon = 50.0;
    double tol_truncation = 1e-6; // sup |E_n - E_2n| accepted by choose_truncation
    double tol_mix = 1e-5;        // l1 distance at which two trajectories count as merged
    double record_interval = 0.01;
    std::optional<std::size_t> far_state;  // default: n - 1
    std::size_t initial_n = 16;
    std::size_t max_n = 4096;

    void validate() const;
    [[nodiscard]] std::size_t far_index() const { return far_state.value_or(n - 1); }
};

/// Recorded solution of the truncated forward equations.
struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> probs;  // after projection
    std::vector<double> mean;
    std::vector<double> l1_defect;           // |1 - sum p| before projection, at the recorded step
    double max_defect = 0.0;                 // over every step, not only recorded ones
    double max_defect_rate = 0.0;            // max_defect / step

    [[nodiscard]] std::size_t size() const noexcept { return times.size(); }
    [[nodiscard]] Trajectory slice(double t_begin, double t_end) const;
};

/// Called at t = 0 and at every record point.
using Observer = std::function<void(double t, std::span<const double> p, double defect)>;

struct IntegrationStats {
    double max_defect = 0.0;
    double max_defect_rate = 0.0;
    std::size_t steps = 0;
};

/// Fixed-step classical RK4 on p' = A(t) p, each step followed by clipping
/// negatives and renormalising. Throws StepSizeError if a step's
/// pre-projection defect exceeds kMaxStepDefect.
IntegrationStats integrate(const ModelSpec& spec, const SolveSettings& settings,
                           std::span<const double> p0, const Observer& observer);
[[nodiscard]] Trajectory integrate(const ModelSpec& spec, const SolveSettings& settings,
                                   std::span<const double> p0);

/// Point mass on state `index` in an n-state truncation.
[[nodiscard]] std::vector<double> unit_vector(std::size_t n, std::size_t index);

/// E = sum_k job_count(k) p_k.
[[nodiscard]] double mean_of(std::span<const double> p) noexcept;

/// Doubles n from settings.initial_n until the mean from the empty state
/// moves by less than tol_truncation (sup over the record grid).
[[nodiscard]] std::size_t choose_truncation(const ModelSpec& spec, const SolveSettings& settings);

struct TrajectoryPair {
    Trajectory from_empty;  // X(0) = 0
    Trajectory from_far;    // X(0) = far_index()
};

[[nodiscard]] TrajectoryPair run_pair(const ModelSpec& spec, const SolveSettings& settings);

struct LimitingRegime {
    double t_mix = 0.0;
    Trajectory cycle;  // [ceil(t_mix), ceil(t_mix) + 1] of the empty-start trajectory
};

[[nodiscard]] LimitingRegime limiting_regime(const TrajectoryPair& pair, const SolveSettings& settings);
[[nodiscard]] LimitingRegime limiting_regime(const ModelSpec& spec, const SolveSettings& settings);

/// l1 distance between the two trajectories at each recorded time.
[[nodiscard]] std::vector<double> l1_distance(const Trajectory& a, const Trajectory& b);

struct DecayFit {
    double beta_hat = 0.0;
    double prefactor_hat = 0.0;
    double window_begin = 0.0;
    double window_end = 0.0;
    std::size_t points = 0;
};

inline constexpr double kFitNormLow = 1e-8;
inline constexpr double kFitNormHigh = 1e-2;

/// Least-squares line through log ||p1(t) - p2(t)||_1 on the points where the
/// norm lies in [kFitNormLow, kFitNormHigh]. The prefactor is exp(intercept)
/// divided by the initial distance (weighted z-distance when weights are given).
[[nodiscard]] DecayFit decay_fit(const Trajectory& a, const Trajectory& b,
                                 const WeightSequence* weights = nullptr);

/// ||z1(t) - z2(t)||_{1D}, the distance in the weighted space used by the bounds.
[[nodiscard]] std::vector<double> weighted_distance(const Trajectory& a, const Trajectory& b,
                                                    const WeightSequence& w);

/// Measured counterpart of ||x(t)||_{1D} <= N e^{-beta t} ||x(0)||_{1D}.
/// The ratio is only evaluated while the l1 distance stays above kFitNormLow;
/// N is its sup over the first half of that window, and the bound must then
/// hold on the whole window to within 5%.
struct ContractionCheck {
    double prefactor = 0.0;
    double max_ratio = 0.0;
    double window_end = 0.0;
    double ratio_limit = 0.0;   // 1.05 * prefactor
    bool holds = false;
};

[[nodiscard]] ContractionCheck check_contraction(const Trajectory& a, const Trajectory& b,
                                                 const WeightSequence& w, double beta);

}  // namespace hetq
