#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hetq/matrices.hpp"
#include "hetq/model.hpp"
#include "hetq/solver.hpp"

namespace hetq {

enum class Regime { General, EqualMu, Heterogeneous, Averaged };

[[nodiscard]] const char* to_string(Regime r) noexcept;

/// Negative column sums alpha_1..alpha_5 of the transformed generator;
/// alpha_k = alpha_5 for every k >= 5 because the tail weights are geometric.
struct AlphaProfile {
    std::array<double, 5> alpha{};
    Regime regime = Regime::General;

    [[nodiscard]] double operator[](std::size_t k) const noexcept { return alpha[k]; }
};

[[nodiscard]] AlphaProfile alphas_general(const Rates& r, const WeightSequence& w) noexcept;
[[nodiscard]] AlphaProfile alphas_general(const ModelSpec& spec, const WeightSequence& w, double t) noexcept;

/// Closed forms for mu1 = mu2 with delta1 = delta = sqrt(mu/lambda) taken at
/// the rates passed in (frozen in time). Well defined at lambda = 0.
[[nodiscard]] AlphaProfile alphas_equal_mu(const Rates& r, double epsilon) noexcept;
/// Throws std::invalid_argument unless mu1 and mu2 are the same function.
[[nodiscard]] AlphaProfile alphas_equal_mu(const ModelSpec& spec, double epsilon, double t);

/// Closed forms for constant rates with mu1 = (1 + chi) mu2.
[[nodiscard]] AlphaProfile alphas_hetero(double lambda, double mu2, double chi, const WeightSequence& w) noexcept;

struct BetaStar {
    double value = 0.0;
    int binding = 0;  // 1-based alpha index attaining the minimum (5 stands for every k >= 5)
};

/// Minimum over all five distinct alphas.
[[nodiscard]] BetaStar beta_star(const AlphaProfile& profile) noexcept;

/// beta*(t) sampled on a uniform grid over one period.
struct BetaProfile {
    std::vector<double> times;
    std::vector<double> beta;
    std::vector<int> binding;
    double inf = 0.0;
    double inf_time = 0.0;
    double mean = 0.0;  // integral of beta*(t) over [0, 1], composite Simpson
};

inline constexpr std::size_t kSimpsonPanels = 2048;

/// Fixed weights: beta*(t) = min_i alpha_i(t) from alphas_general.
[[nodiscard]] BetaProfile beta_star_time(const ModelSpec& spec, const WeightSequence& w,
                                         std::size_t panels = kSimpsonPanels);
/// Frozen-time equal-mu closed forms (delta re-evaluated at every t).
[[nodiscard]] BetaProfile beta_star_frozen(const ModelSpec& spec, double epsilon,
                                           std::size_t panels = kSimpsonPanels);

/// Candidate grids searched by tune_weights. Both are sorted ascending and
/// contain epsilon = 1/12 and delta1 = 13/8 (when 13/8 <= 2 delta).
struct TuningGrid {
    std::vector<double> epsilons;
    std::vector<double> delta1s;
};

[[nodiscard]] double tail_ratio(const ModelSpec& spec) noexcept;
[[nodiscard]] TuningGrid tuning_grid(double delta);

/// delta = sqrt(mu* / lambda*) and the (epsilon, delta1) on the grid that
/// maximise beta* of the averaged model; ties go to the smallest epsilon, then
/// the smallest delta1. nullopt when lambda* >= mu*.
[[nodiscard]] std::optional<WeightSequence> tune_weights(const ModelSpec& spec);

/// Exact sup over x of ||p* - p**||_1 / ||x||_{1D} for p* - p** = (-sum x, x).
[[nodiscard]] double norm_chain_constant(const WeightSequence& w) noexcept;

/// Largest number with `digits` significant digits not exceeding x (x > 0).
[[nodiscard]] double round_down_significant(double x, int digits = 1);

enum class CertificateKind { ConstantRate, Periodic };

struct AlphaTableRow {
    double t = 0.0;
    AlphaProfile profile;
    BetaStar beta;
};

struct ConvergenceCertificate {
    CertificateKind kind = CertificateKind::ConstantRate;
    WeightSequence weights{0.5, 2.0, 2.0};
    Rates averaged_rates;

    double beta_star = 0.0;   // rate used in the bound (averaged model for periodic rates)
    double beta_star0 = 0.0;  // averaged-model beta*
    int binding = 0;          // alpha index binding beta_star0

    std::optional<BetaProfile> fixed_weight_profile;  // periodic only
    std::optional<BetaProfile> frozen_profile;        // periodic and mu1 == mu2 only

    double norm_chain_constant = 0.0;
    std::optional<double> prefactor_N;  // measured, never certified
    std::optional<ContractionCheck> contraction;
    std::size_t measured_n = 0;

    std::vector<AlphaTableRow> alpha_table;  // 101 points of t in [0, 1]
};

struct CertificateOptions {
    bool measure_prefactor = true;
    SolveSettings settings;
    std::optional<std::size_t> n;  // truncation for the measurement; chosen by doubling otherwise
};

struct CertificateResult {
    std::optional<ConvergenceCertificate> certificate;
    std::string reason;  // set when no certificate was issued

    [[nodiscard]] bool certified() const noexcept { return certificate.has_value(); }
};

[[nodiscard]] CertificateResult make_certificate(const ModelSpec& spec, const WeightSequence& w,
                                                 const CertificateOptions& options = {});

}  // namespace hetq
