#include "hetq/model.hpp"

#include <stdexcept>
#include <utility>

namespace hetq {

ModelSpec::ModelSpec(RateFunction lambda, RateFunction mu1, RateFunction mu2, std::string name)
    : lambda_(std::move(lambda)), mu1_(std::move(mu1)), mu2_(std::move(mu2)), name_(std::move(name)) {
    if (equal_mu()) {
        return;
    }
    for (int i = 0; i < kValidationGrid; ++i) {
        const double t = static_cast<double>(i) / kValidationGrid;
        if (mu2_(t) > mu1_(t)) {
            throw std::invalid_argument("mu2(t) exceeds mu1(t) at t = " + std::to_string(t) +
                                        "; the backup server must not be faster than the main server");
        }
    }
}

bool ModelSpec::is_constant() const noexcept {
    return lambda_.is_constant() && mu1_.is_constant() && mu2_.is_constant();
}

bool ModelSpec::traffic_condition() const noexcept {
    const Rates m = mean_rates(*this);
    return m.lambda < m.mu;
}

ModelSpec ModelSpec::averaged() const {
    const Rates m = mean_rates(*this);
    auto mu2 = equal_mu() ? RateFunction::constant(m.mu1) : RateFunction::constant(m.mu2);
    return ModelSpec(RateFunction::constant(m.lambda), RateFunction::constant(m.mu1), std::move(mu2),
                     name_.empty() ? std::string{} : name_ + " (averaged)");
}

Rates eval_rates(const ModelSpec& spec, double t) noexcept {
    Rates r;
    r.lambda = spec.lambda()(t);
    r.mu1 = spec.mu1()(t);
    r.mu2 = spec.mu2()(t);
    r.mu = r.mu1 + r.mu2;
    return r;
}

Rates mean_rates(const ModelSpec& spec) noexcept {
    Rates r;
    r.lambda = spec.lambda().mean();
    r.mu1 = spec.mu1().mean();
    r.mu2 = spec.mu2().mean();
    r.mu = r.mu1 + r.mu2;
    return r;
}

std::size_t state_encode(QueueState s) {
    if (s.main == 0 && s.level == 0) return 0;
    if (s.main == 1 && s.level == 0) return 1;
    if (s.main == 0 && s.level == 1) return 2;
    if (s.main == 1 && s.level >= 1) return static_cast<std::size_t>(s.level) + 2;
    throw std::invalid_argument("not a reachable queue state: (" + std::to_string(s.main) + "," +
                                std::to_string(s.level) + ")");
}

QueueState state_decode(std::size_t index) noexcept {
    switch (index) {
        case 0: return {0, 0};
        case 1: return {1, 0};
        case 2: return {0, 1};
        default: return {1, static_cast<int>(index - 2)};
    }
}

QueueState decode_index(long long index) {
    if (index < 0) {
        throw std::out_of_range("state index must be nonnegative");
    }
    return state_decode(static_cast<std::size_t>(index));
}

int job_count(std::size_t index) noexcept {
    if (index == 0) return 0;
    if (index <= 2) return 1;
    return static_cast<int>(index) - 1;
}

std::string state_label(std::size_t index) {
    const QueueState s = state_decode(index);
    return "p" + std::to_string(s.main) + std::to_string(s.level);
}

}  // namespace hetq
