#pragma once

// Test-only reference computations. Nothing here calls into the code paths
// it is used to check.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "hetq/config.hpp"
#include "hetq/model.hpp"

namespace hetq::oracle {

inline ModelSpec load_example(int k) {
    return load_model_config(std::string(HETQ_CONFIG_DIR) + "/example" + std::to_string(k) + ".json").spec;
}

inline ModelSpec constant_spec(double lambda, double mu1, double mu2) {
    return ModelSpec(RateFunction::constant(lambda), RateFunction::constant(mu1), RateFunction::constant(mu2));
}

inline ModelSpec sin_arrivals(double base, double mu1, double mu2) {
    return ModelSpec(RateFunction::trigonometric(base, {{base, Wave::Sin, 1}}), RateFunction::constant(mu1),
                     RateFunction::constant(mu2));
}

/// Generator written out transition by transition from the model description
/// (arrival/service moves between (main, level) states), as a dense Eigen matrix.
inline Eigen::MatrixXd generator_by_transitions(double lam, double mu1, double mu2, std::size_t n) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    auto move = [&](std::size_t from, std::size_t to, double rate) {
        if (to >= n) return;  // truncated: the move is suppressed
        a(static_cast<Eigen::Index>(to), static_cast<Eigen::Index>(from)) += rate;
        a(static_cast<Eigen::Index>(from), static_cast<Eigen::Index>(from)) -= rate;
    };
    // (0,0)=0, (1,0)=1, (0,1)=2, (1,j)=j+2
    move(0, 1, lam);
    move(1, 3, lam);
    move(1, 0, mu1);
    move(2, 3, lam);
    move(2, 0, mu2);
    move(3, 1, mu2);
    move(3, 2, mu1);
    for (std::size_t k = 3; k < n; ++k) {
        move(k, k + 1, lam);
        if (k >= 4) move(k, k - 1, mu1 + mu2);
    }
    return a;
}

/// Stationary vector: replace one balance equation by the normalisation.
inline Eigen::VectorXd stationary(const Eigen::MatrixXd& a) {
    const auto n = a.rows();
    Eigen::MatrixXd m = a;
    m.row(n - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(n - 1) = 1.0;
    return m.fullPivLu().solve(rhs);
}

/// exp(a) by Taylor series with scaling and squaring.
inline Eigen::MatrixXd expm_series(const Eigen::MatrixXd& a) {
    const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    double scale = 1.0;
    while (norm * scale > 0.125) {
        scale *= 0.5;
        ++squarings;
    }
    const Eigen::MatrixXd x = a * scale;
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(a.rows(), a.cols());
    Eigen::MatrixXd sum = term;
    for (int k = 1; k < 40; ++k) {
        term = term * x / static_cast<double>(k);
        sum += term;
        if (term.cwiseAbs().maxCoeff() < 1e-18) break;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
    const double h = (b - a) / panels;
    double acc = f(a) + f(b);
    for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return acc * h / 3.0;
}

/// Random spec with mu2(t) <= mu1(t) and lambda > 0: shared profile scaled.
struct RandomSpecs {
    explicit RandomSpecs(std::uint64_t seed) : rng(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

    ModelSpec general() {
        const double lam = uniform(0.2, 5.0);
        const double lam_amp = uniform(0.0, 0.9) * lam;
        const double mu2 = uniform(0.2, 4.0);
        const double ratio = uniform(1.0, 3.0);
        const double amp = uniform(0.0, 0.9);
        auto mu_fn = [&](double base) {
            return RateFunction::trigonometric(base, {{amp * base, Wave::Cos, 1}});
        };
        return ModelSpec(RateFunction::trigonometric(lam, {{lam_amp, Wave::Sin, 1 + static_cast<int>(rng() % 3)}}),
                         mu_fn(ratio * mu2), mu_fn(mu2));
    }

    ModelSpec equal_mu() {
        const double lam = uniform(0.2, 5.0);
        const double mu = uniform(0.2, 4.0);
        auto m = RateFunction::constant(mu);
        return ModelSpec(RateFunction::trigonometric(lam, {{uniform(0.0, 0.9) * lam, Wave::Sin, 1}}), m, m);
    }

    std::mt19937_64 rng;
};

}  // namespace hetq::oracle
