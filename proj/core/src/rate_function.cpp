#include "hetq/rate_function.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hetq {

RateFunction RateFunction::constant(double value) {
    RateFunction f;
    f.constant_ = value;
    f.validate();
    return f;
}

RateFunction RateFunction::trigonometric(double constant_term, std::vector<Harmonic> harmonics) {
    RateFunction f;
    f.constant_ = constant_term;
    // zero-amplitude terms carry no information; dropping them keeps
    // is_constant() and equality structural
    std::erase_if(harmonics, [](const Harmonic& h) { return h.amplitude == 0.0; });
    f.harmonics_ = std::move(harmonics);
    f.validate();
    return f;
}

RateFunction RateFunction::table(std::vector<Breakpoint> breakpoints) {
    if (breakpoints.empty()) {
        throw std::invalid_argument("rate table must have at least one breakpoint");
    }
    RateFunction f;
    f.table_ = std::move(breakpoints);
    f.validate();
    return f;
}

double RateFunction::operator()(double t) const noexcept {
    if (!table_.empty()) {
        double frac = t - std::floor(t);
        auto it = std::upper_bound(table_.begin(), table_.end(), frac,
                                   [](double x, const Breakpoint& b) { return x < b.start; });
        return std::prev(it)->value;
    }
    double v = constant_;
    for (const auto& h : harmonics_) {
        const double arg = 2.0 * std::numbers::pi * h.harmonic * t;
        v += h.amplitude * (h.kind == Wave::Sin ? std::sin(arg) : std::cos(arg));
    }
    // sin(2*pi*k*t) at a true zero evaluates to ~1e-16; a rate such as
    // 1 + sin(2*pi*t) must not go negative there
    return v < 0.0 && v > -1e-12 ? 0.0 : v;
}

double RateFunction::mean() const noexcept {
    if (table_.empty()) {
        return constant_;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < table_.size(); ++i) {
        const double end = i + 1 < table_.size() ? table_[i + 1].start : 1.0;
        acc += table_[i].value * (end - table_[i].start);
    }
    return acc;
}

bool RateFunction::is_constant() const noexcept {
    if (!table_.empty()) {
        return std::all_of(table_.begin(), table_.end(),
                           [&](const Breakpoint& b) { return b.value == table_.front().value; });
    }
    return harmonics_.empty();
}

void RateFunction::validate() const {
    if (!table_.empty()) {
        if (table_.front().start != 0.0) {
            throw std::invalid_argument("rate table must start at breakpoint 0");
        }
        for (std::size_t i = 0; i < table_.size(); ++i) {
            const auto& b = table_[i];
            if (!(b.start >= 0.0 && b.start < 1.0)) {
                throw std::invalid_argument("rate table breakpoints must lie in [0, 1)");
            }
            if (i > 0 && !(b.start > table_[i - 1].start)) {
                throw std::invalid_argument("rate table breakpoints must be strictly increasing");
            }
            if (!(b.value >= 0.0) || !std::isfinite(b.value)) {
                throw std::invalid_argument("rate table values must be finite and nonnegative");
            }
        }
        return;
    }
    if (!std::isfinite(constant_)) {
        throw std::invalid_argument("rate constant must be finite");
    }
    for (const auto& h : harmonics_) {
        if (h.harmonic < 1) {
            throw std::invalid_argument("harmonic index must be a positive integer");
        }
        if (!std::isfinite(h.amplitude)) {
            throw std::invalid_argument("harmonic amplitude must be finite");
        }
    }
    for (int i = 0; i < kValidationGrid; ++i) {
        const double t = static_cast<double>(i) / kValidationGrid;
        const double v = (*this)(t);
        if (v < 0.0) {
            throw std::invalid_argument("rate function is negative at t = " + std::to_string(t));
        }
    }
}

}  // namespace hetq
