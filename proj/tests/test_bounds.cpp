#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "hetq/bounds.hpp"
#include "oracles.hpp"

using namespace hetq;

namespace {

Rates make_rates(double lam, double mu1, double mu2) { return {lam, mu1, mu2, mu1 + mu2}; }

// alpha_k read off the transformed matrix: minus the l1 column measure of column k - 1.
std::array<double, 5> column_alphas(const Matrix& m) {
    std::array<double, 5> out{};
    for (std::size_t j = 0; j < 5; ++j) {
        double s = m(j, j);
        for (std::size_t i = 0; i < m.rows(); ++i)
            if (i != j) s += std::abs(m(i, j));
        out[j] = -s;
    }
    return out;
}

}  // namespace

// Property: every alpha formula equals the negated column measure of the
// transformed generator, for random rates and weights.
TEST(BoundsProperty, GeneralAlphasAreColumnMeasures) {
    std::mt19937_64 rng(201);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        const double a = 0.05 + 10 * u(rng), b = 0.05 + 10 * u(rng);
        const Rates r = make_rates(0.05 + 10 * u(rng), std::max(a, b), std::min(a, b));
        const WeightSequence w(0.001 + 0.998 * u(rng), 1.001 + 4 * u(rng), 1.001 + 4 * u(rng));
        const auto profile = alphas_general(r, w);
        const auto cols = column_alphas(build_transformed(r, w, 12));
        for (std::size_t k = 0; k < 5; ++k) {
            ASSERT_NEAR(profile[k], cols[k], 1e-12 * (1 + std::abs(cols[k])));
        }
        // columns 5.. repeat alpha_5 because the tail is geometric
        const Matrix m = build_transformed(r, w, 14);
        for (std::size_t j = 5; j + 2 < 14; ++j) {
            double s = m(j, j) + std::abs(m(j - 1, j)) + std::abs(m(j + 1, j));
            ASSERT_NEAR(-s, profile[4], 1e-12 * (1 + std::abs(s)));
        }
        EXPECT_NEAR(beta_star(profile).value, -log_norm_l1(build_transformed(r, w, 12), 10), 1e-12 * (1 + std::abs(profile[4])));
    }
}

TEST(BoundsProperty, EqualMuClosedFormsMatchGeneral) {
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        const double lam = 0.05 + 5 * u(rng);
        const double mu = lam * (1.01 + 5 * u(rng));
        const double eps = 0.001 + 0.998 * u(rng);
        const Rates r = make_rates(lam, mu / 2, mu / 2);
        const double delta = std::sqrt(mu / lam);
        const auto general = alphas_general(r, WeightSequence(eps, delta, delta));
        const auto closed = alphas_equal_mu(r, eps);
        EXPECT_EQ(closed.regime, Regime::EqualMu);
        for (std::size_t k = 0; k < 5; ++k) ASSERT_NEAR(closed[k], general[k], 1e-12 * (1 + mu));
    }
}

TEST(BoundsProperty, HeteroClosedFormsMatchGeneral) {
    std::mt19937_64 rng(203);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        const double lam = 0.05 + 5 * u(rng), mu2 = 0.05 + 5 * u(rng), chi = 3 * u(rng);
        const WeightSequence w(0.001 + 0.998 * u(rng), 1.001 + 4 * u(rng), 1.001 + 4 * u(rng));
        const auto general = alphas_general(make_rates(lam, (1 + chi) * mu2, mu2), w);
        const auto closed = alphas_hetero(lam, mu2, chi, w);
        for (std::size_t k = 0; k < 5; ++k) ASSERT_NEAR(closed[k], general[k], 1e-12 * (1 + lam + mu2 * (1 + chi) / w.epsilon()));
    }
}

TEST(Bounds, EqualMuRequiresSameFunction) {
    const auto ex3 = oracle::load_example(3);
    EXPECT_THROW((void)alphas_equal_mu(ex3, 0.1, 0.0), std::invalid_argument);
    EXPECT_THROW((void)beta_star_frozen(ex3, 0.1), std::invalid_argument);
}

TEST(Bounds, BetaStarBindingIndex) {
    AlphaProfile p;
    p.alpha = {3.0, 1.0, 2.0, 0.5, 0.7};
    const auto b = beta_star(p);
    EXPECT_EQ(b.value, 0.5);
    EXPECT_EQ(b.binding, 4);
}

// Averaged values for example 3 with epsilon = 1/12, delta1 = 487/400, computed
// independently at 30 digits.
TEST(Bounds, Example3AveragedAlphas) {
    const WeightSequence w(1.0 / 12.0, 1.2175, std::sqrt(11.0 / 8.0));
    const auto a = alphas_general(make_rates(8, 6, 5), w);
    EXPECT_NEAR(a[0], 5.333333333333333, 1e-12);
    EXPECT_NEAR(a[1], 1.0, 1e-12);
    EXPECT_NEAR(a[2], 4.26, 1e-12);
    EXPECT_NEAR(a[3], 0.2420295344256941, 1e-12);
    EXPECT_NEAR(a[4], 0.2383369607062818, 1e-12);
    EXPECT_EQ(beta_star(a).binding, 5);
}

TEST(Bounds, TunedWeightsForExamples) {
    const auto w1 = tune_weights(oracle::load_example(1));
    ASSERT_TRUE(w1);
    EXPECT_DOUBLE_EQ(w1->epsilon(), 1e-3);
    EXPECT_DOUBLE_EQ(w1->delta(), 2.0);
    EXPECT_NEAR(beta_star(alphas_general(Rates{1, 2, 2, 4}, *w1)).value, 1.0 - 1e-3, 1e-12);

    const auto w2 = tune_weights(oracle::load_example(2));
    ASSERT_TRUE(w2);
    EXPECT_NEAR(beta_star(alphas_general(Rates{3, 2, 2, 4}, *w2)).value, 7.0 - 4.0 * std::sqrt(3.0), 1e-12);

    const auto w3 = tune_weights(oracle::load_example(3));
    ASSERT_TRUE(w3);
    const double target = std::pow(std::sqrt(11.0) - std::sqrt(8.0), 2);
    EXPECT_NEAR(beta_star(alphas_general(Rates{8, 6, 5, 11}, *w3)).value, target, 1e-12);
}

// Property: no point of a much finer grid beats the tuned beta* by more than
// the grid resolution allows (the tail alpha is an upper bound for every choice).
TEST(BoundsProperty, TuningNeverExceedsTailAlpha) {
    oracle::RandomSpecs gen(204);
    for (int trial = 0; trial < 30; ++trial) {
        const auto spec = gen.general();
        const auto w = tune_weights(spec);
        if (!spec.traffic_condition()) {
            EXPECT_FALSE(w);
            continue;
        }
        ASSERT_TRUE(w);
        const Rates m = mean_rates(spec);
        const double tail = std::pow(std::sqrt(m.lambda) - std::sqrt(m.mu), 2);
        EXPECT_LE(beta_star(alphas_general(m, *w)).value, tail + 1e-12);
    }
}

TEST(Bounds, OverloadedHasNoWeights) {
    EXPECT_FALSE(tune_weights(oracle::constant_spec(5, 1, 1)));
    const auto r = make_certificate(oracle::constant_spec(5, 1, 1), WeightSequence(0.5, 2, 2), {false, {}, {}});
    EXPECT_FALSE(r.certified());
    EXPECT_NE(r.reason.find("ergodicity not certified"), std::string::npos);
}

TEST(Bounds, NonPositiveBetaIsNotCertified) {
    // alpha_2 = lambda + mu2 - (mu1 - mu2)/eps is very negative for a tiny epsilon
    const auto r = make_certificate(oracle::constant_spec(1, 10, 1), WeightSequence(0.01, 1.5, 2), {false, {}, {}});
    EXPECT_FALSE(r.certified());
    EXPECT_NE(r.reason.find("alpha_2"), std::string::npos);
}

// The frozen-time equal-mu profile of example 1 bottoms out at the arrival
// peak: (2 - sqrt 2)^2 - eps sqrt 2.
TEST(Bounds, Example1FrozenInfimum) {
    const auto profile = beta_star_frozen(oracle::load_example(1), 1e-3);
    EXPECT_NEAR(profile.inf, 0.3417315369452467, 1e-10);
    EXPECT_NEAR(profile.inf_time, 0.25, 1e-12);
    EXPECT_EQ(round_down_significant(profile.inf), 0.3);
}

TEST(Bounds, RoundDownSignificant) {
    EXPECT_EQ(round_down_significant(0.3417), 0.3);
    EXPECT_EQ(round_down_significant(0.0717967697244908), 0.07);
    EXPECT_EQ(round_down_significant(0.2383369607062818), 0.2);
    EXPECT_EQ(round_down_significant(0.999), 0.9);
    EXPECT_EQ(round_down_significant(37.0), 30.0);
    EXPECT_EQ(round_down_significant(0.2383369607062818, 2), 0.23);
    EXPECT_THROW((void)round_down_significant(0.0), std::invalid_argument);
}

// Property: the norm-chain constant bounds the sampled ratio and is attained.
TEST(BoundsProperty, NormChainConstantBySampling) {
    std::mt19937_64 rng(205);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        const WeightSequence w(0.001 + 0.998 * std::abs(u(rng)), 1.001 + 3 * std::abs(u(rng)), 1.001 + 3 * std::abs(u(rng)));
        const double c = norm_chain_constant(w);
        for (int s = 0; s < 500; ++s) {
            std::vector<double> x(3 + rng() % 12);
            double sum = 0.0, l1 = 0.0;
            for (auto& v : x) {
                v = u(rng);
                sum += v;
                l1 += std::abs(v);
            }
            ASSERT_LE((std::abs(sum) + l1) / weighted_norm(x, w), c * (1 + 1e-12));
        }
        // suffix sums equal to e_1 reach the constant
        const std::vector<double> x = {-1.0, 1.0, 0.0, 0.0};
        EXPECT_NEAR((0.0 + 2.0) / weighted_norm(x, w), c, 1e-12 * c);
    }
}

TEST(Certificate, ConstantRateWithoutMeasurement) {
    const auto spec = oracle::constant_spec(1, 2, 1.5);
    const auto w = tune_weights(spec);
    ASSERT_TRUE(w);
    const auto r = make_certificate(spec, *w, {false, {}, {}});
    ASSERT_TRUE(r.certified());
    EXPECT_EQ(r.certificate->kind, CertificateKind::ConstantRate);
    EXPECT_FALSE(r.certificate->fixed_weight_profile);
    EXPECT_EQ(r.certificate->alpha_table.size(), 101u);
    EXPECT_GT(r.certificate->beta_star, 0.0);
    EXPECT_FALSE(r.certificate->prefactor_N);
}

TEST(Certificate, MeasuredPrefactorHolds) {
    const auto spec = oracle::constant_spec(1, 2, 1.5);
    const auto w = tune_weights(spec);
    CertificateOptions opt;
    opt.settings.horizon = 30;
    opt.n = 32;
    const auto r = make_certificate(spec, *w, opt);
    ASSERT_TRUE(r.certified());
    ASSERT_TRUE(r.certificate->contraction);
    EXPECT_TRUE(r.certificate->contraction->holds);
    EXPECT_GE(*r.certificate->prefactor_N, 1.0);
    EXPECT_EQ(r.certificate->measured_n, 32u);
}

TEST(Certificate, PeriodicEqualMuCarriesBothProfiles) {
    const auto spec = oracle::load_example(1);
    const auto r = make_certificate(spec, *tune_weights(spec), {false, {}, {}});
    ASSERT_TRUE(r.certified());
    const auto& c = *r.certificate;
    EXPECT_EQ(c.kind, CertificateKind::Periodic);
    ASSERT_TRUE(c.fixed_weight_profile);
    ASSERT_TRUE(c.frozen_profile);
    EXPECT_NEAR(c.beta_star0, 0.999, 1e-12);
    EXPECT_EQ(c.binding, 4);
    // fixed weights: beta*(t) is affine in lambda(t), so its mean is the averaged value
    EXPECT_NEAR(c.fixed_weight_profile->mean, c.beta_star0, 1e-9);
    EXPECT_DOUBLE_EQ(c.norm_chain_constant, 2.0 / 1e-3);
}

// Log norm of the transformed averaged generator of example 1 with weights
// (eps, 2, 2), truncation-edge columns excluded, is -(1 - eps).
TEST(Bounds, Example1LogNormIdentity) {
    for (double eps : {1e-3, 1e-2, 0.1}) {
        const Matrix m = build_transformed(Rates{1, 2, 2, 4}, WeightSequence(eps, 2, 2), 20);
        EXPECT_NEAR(log_norm_l1(m, 18), -(1.0 - eps), 1e-12);
    }
}

TEST(Bounds, TuningBeatsHandChoiceForExample3) {
    const auto spec = oracle::load_example(3);
    const double delta = tail_ratio(spec);
    const auto grid = tuning_grid(delta);
    auto has = [](const std::vector<double>& v, double x) {
        return std::any_of(v.begin(), v.end(), [&](double y) { return std::abs(x - y) < 1e-15; });
    };
    EXPECT_TRUE(has(grid.epsilons, 1.0 / 12.0));
    EXPECT_TRUE(has(grid.delta1s, 13.0 / 8.0));
    const Rates m = mean_rates(spec);
    const double hand = beta_star(alphas_general(m, WeightSequence(1.0 / 12.0, 13.0 / 8.0, delta))).value;
    const double tuned = beta_star(alphas_general(m, *tune_weights(spec))).value;
    EXPECT_GE(tuned, hand);
    EXPECT_GE(tuned, 0.2);
}
