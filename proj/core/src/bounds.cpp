#include "hetq/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hetq {

const char* to_string(Regime r) noexcept {
    switch (r) {
        case Regime::General: return "general";
        case Regime::EqualMu: return "equal-mu";
        case Regime::Heterogeneous: return "heterogeneous";
        case Regime::Averaged: return "averaged";
    }
    return "unknown";
}

AlphaProfile alphas_general(const Rates& r, const WeightSequence& w) noexcept {
    const double lam = r.lambda, mu1 = r.mu1, mu2 = r.mu2, mu = r.mu;
    const double d1 = w.d(0), d2 = w.d(1), d3 = w.d(2), d4 = w.d(3), d5 = w.d(4), d6 = w.d(5);
    AlphaProfile a;
    a.alpha[0] = (lam + mu1) - d2 / d1 * lam - d3 / d1 * lam;
    a.alpha[1] = (lam + mu2) - d1 / d2 * (mu1 - mu2);
    a.alpha[2] = (lam + mu) - d1 / d3 * mu2 - d4 / d3 * lam;
    a.alpha[3] = (lam + mu) - d2 / d4 * mu2 - d3 / d4 * mu - d5 / d4 * lam;
    a.alpha[4] = (lam + mu) - d4 / d5 * mu - d6 / d5 * lam;
    a.regime = Regime::General;
    return a;
}

AlphaProfile alphas_general(const ModelSpec& spec, const WeightSequence& w, double t) noexcept {
    return alphas_general(eval_rates(spec, t), w);
}

AlphaProfile alphas_equal_mu(const Rates& r, double epsilon) noexcept {
    const double lam = r.lambda, mu = r.mu;
    const double root = std::sqrt(lam * mu);
    const double gap = (std::sqrt(lam) - std::sqrt(mu)) * (std::sqrt(lam) - std::sqrt(mu));
    AlphaProfile a;
    a.alpha[0] = mu / 2.0 - epsilon * lam;
    a.alpha[1] = lam + mu / 2.0;
    a.alpha[2] = mu / 2.0 + lam - root;
    a.alpha[3] = gap - epsilon / 2.0 * root;
    a.alpha[4] = gap;
    a.regime = Regime::EqualMu;
    return a;
}

AlphaProfile alphas_equal_mu(const ModelSpec& spec, double epsilon, double t) {
    if (!spec.equal_mu()) {
        throw std::invalid_argument("equal-mu closed forms need mu1 and mu2 to be the same function");
    }
    return alphas_equal_mu(eval_rates(spec, t), epsilon);
}

AlphaProfile alphas_hetero(double lambda, double mu2, double chi, const WeightSequence& w) noexcept {
    const double eps = w.epsilon(), d1 = w.delta1(), d = w.delta();
    AlphaProfile a;
    a.alpha[0] = (1.0 + chi) * mu2 - eps * lambda;
    a.alpha[1] = lambda + mu2 * (1.0 - chi / eps);
    a.alpha[2] = lambda * (1.0 - d1) + (1.0 + chi) * mu2;
    a.alpha[3] = lambda * (1.0 - d) + mu2 * (2.0 + chi - (2.0 + eps + chi) / d1);
    a.alpha[4] = lambda * (1.0 - d) + mu2 * (1.0 - 1.0 / d) * (2.0 + chi);
    a.regime = Regime::Heterogeneous;
    return a;
}

BetaStar beta_star(const AlphaProfile& profile) noexcept {
    BetaStar b{profile.alpha[0], 1};
    for (int k = 1; k < 5; ++k) {
        if (profile.alpha[k] < b.value) b = {profile.alpha[k], k + 1};
    }
    return b;
}

namespace {

template <typename ProfileAt>
BetaProfile sample_profile(std::size_t panels, ProfileAt&& at) {
    if (panels < 2 || panels % 2 != 0) throw std::invalid_argument("Simpson needs an even panel count");
    BetaProfile out;
    out.inf = std::numeric_limits<double>::infinity();
    double acc = 0.0;
    for (std::size_t k = 0; k <= panels; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(panels);
        const BetaStar b = beta_star(at(t));
        out.times.push_back(t);
        out.beta.push_back(b.value);
        out.binding.push_back(b.binding);
        if (b.value < out.inf) {
            out.inf = b.value;
            out.inf_time = t;
        }
        const double weight = (k == 0 || k == panels) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
        acc += weight * b.value;
    }
    out.mean = acc / (3.0 * static_cast<double>(panels));
    return out;
}

}  // namespace

BetaProfile beta_star_time(const ModelSpec& spec, const WeightSequence& w, std::size_t panels) {
    return sample_profile(panels, [&](double t) { return alphas_general(spec, w, t); });
}

BetaProfile beta_star_frozen(const ModelSpec& spec, double epsilon, std::size_t panels) {
    if (!spec.equal_mu()) {
        throw std::invalid_argument("frozen-time equal-mu profile needs mu1 and mu2 to be the same function");
    }
    return sample_profile(panels, [&](double t) { return alphas_equal_mu(eval_rates(spec, t), epsilon); });
}

double tail_ratio(const ModelSpec& spec) noexcept {
    const Rates m = mean_rates(spec);
    if (m.lambda <= 0.0) {
        // no arrivals: any geometric tail works and nothing favours a large one
        return 2.0;
    }
    return std::sqrt(m.mu / m.lambda);
}

TuningGrid tuning_grid(double delta) {
    TuningGrid g;
    constexpr int kLogPoints = 64;
    const double lo = std::log(1e-3), hi = std::log(0.5);
    for (int i = 0; i < kLogPoints; ++i) {
        g.epsilons.push_back(std::exp(lo + (hi - lo) * i / (kLogPoints - 1)));
    }
    g.epsilons.front() = 1e-3;
    g.epsilons.back() = 0.5;
    for (int k = 3; k <= 20; ++k) g.epsilons.push_back(1.0 / k);

    const double upper = std::min(2.0 * delta, 200.0);
    g.delta1s.push_back(1.01);
    for (int k = 405; k / 400.0 <= upper; ++k) g.delta1s.push_back(k / 400.0);
    if (delta > 1.0 && delta <= upper) g.delta1s.push_back(delta);

    for (auto* v : {&g.epsilons, &g.delta1s}) {
        std::sort(v->begin(), v->end());
        v->erase(std::unique(v->begin(), v->end()), v->end());
    }
    return g;
}

std::optional<WeightSequence> tune_weights(const ModelSpec& spec) {
    if (!spec.traffic_condition()) return std::nullopt;
    const Rates m = mean_rates(spec);
    const double delta = tail_ratio(spec);
    if (!(delta > 1.0)) return std::nullopt;
    const TuningGrid grid = tuning_grid(delta);

    double best = -std::numeric_limits<double>::infinity();
    std::optional<WeightSequence> chosen;
    for (double eps : grid.epsilons) {
        for (double d1 : grid.delta1s) {
            const WeightSequence w(eps, d1, delta);
            const double b = beta_star(alphas_general(m, w)).value;
            if (b > best) {
                best = b;
                chosen = w;
            }
        }
    }
    return chosen;
}

double norm_chain_constant(const WeightSequence& w) noexcept {
    // the ratio is convex in the suffix sums, so its sup sits on a unit vector
    // s = e_k: that gives 2/d_k for every k, and d_k >= min(1, epsilon)
    return 2.0 / w.min_weight();
}

double round_down_significant(double x, int digits) {
    if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument("round_down_significant needs x > 0");
    const int exponent = static_cast<int>(std::floor(std::log10(x))) - (digits - 1);
    if (exponent < 0) {
        const double scale = std::pow(10.0, -exponent);
        double r = std::floor(x * scale) / scale;
        if (r > x) r = std::floor(x * scale - 1.0) / scale;
        return r;
    }
    const double scale = std::pow(10.0, exponent);
    return std::floor(x / scale) * scale;
}

CertificateResult make_certificate(const ModelSpec& spec, const WeightSequence& w,
                                   const CertificateOptions& options) {
    CertificateResult result;
    const Rates m = mean_rates(spec);
    if (!spec.traffic_condition()) {
        result.reason = "ergodicity not certified: averaged arrival rate " + std::to_string(m.lambda) +
                        " is not below the averaged total service rate " + std::to_string(m.mu);
        return result;
    }

    ConvergenceCertificate c;
    c.kind = spec.is_constant() ? CertificateKind::ConstantRate : CertificateKind::Periodic;
    c.weights = w;
    c.averaged_rates = m;
    const BetaStar averaged = beta_star(alphas_general(m, w));
    c.beta_star0 = averaged.value;
    c.binding = averaged.binding;
    c.beta_star = averaged.value;
    c.norm_chain_constant = norm_chain_constant(w);

    if (!(c.beta_star > 0.0)) {
        result.reason = "ergodicity not certified: beta* = " + std::to_string(c.beta_star) +
                        " (alpha_" + std::to_string(c.binding) + " binds) is not positive for these weights";
        return result;
    }

    if (c.kind == CertificateKind::Periodic) {
        c.fixed_weight_profile = beta_star_time(spec, w);
        if (spec.equal_mu()) c.frozen_profile = beta_star_frozen(spec, w.epsilon());
    }

    for (int k = 0; k <= 100; ++k) {
        const double t = k / 100.0;
        const auto profile = alphas_general(spec, w, t);
        c.alpha_table.push_back({t, profile, beta_star(profile)});
    }

    if (options.measure_prefactor) {
        SolveSettings s = options.settings;
        s.n = options.n ? *options.n : choose_truncation(spec, s);
        s.far_state.reset();
        const auto pair = run_pair(spec, s);
        c.contraction = check_contraction(pair.from_empty, pair.from_far, w, c.beta_star);
        c.prefactor_N = std::max(1.0, c.contraction->prefactor);
        c.measured_n = s.n;
    }

    result.certificate = std::move(c);
    return result;
}

}  // namespace hetq
