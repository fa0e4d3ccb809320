#pragma once

#include <vector>

namespace hetq {

enum class Wave { Sin, Cos };

/// One term `amplitude * sin(2*pi*harmonic*t)` (or cos) of a trigonometric rate.
struct Harmonic {
    double amplitude = 0.0;
    Wave kind = Wave::Sin;
    int harmonic = 1;

    friend bool operator==(const Harmonic&, const Harmonic&) = default;
};

/// Piecewise-constant segment: the rate equals `value` on [start, next start).
struct Breakpoint {
    double start = 0.0;
    double value = 0.0;

    friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
};

/// A nonnegative 1-periodic (or constant) intensity.
///
/// Two families are supported: a constant plus a finite trigonometric
/// polynomial with integer harmonics, or a piecewise-constant table over one
/// period. Both have an exact mean over [0, 1]. Nonnegativity is checked on a
/// grid of `kValidationGrid` points at construction, which is approximate for
/// the trigonometric family.
class RateFunction {
public:
    static constexpr int kValidationGrid = 10000;

    RateFunction() = default;

    static RateFunction constant(double value);
    static RateFunction trigonometric(double constant_term, std::vector<Harmonic> harmonics);
    static RateFunction table(std::vector<Breakpoint> breakpoints);

    [[nodiscard]] double operator()(double t) const noexcept;
    [[nodiscard]] double mean() const noexcept;
    [[nodiscard]] bool is_constant() const noexcept;
    [[nodiscard]] bool is_table() const noexcept { return !table_.empty(); }

    [[nodiscard]] double constant_term() const noexcept { return constant_; }
    [[nodiscard]] const std::vector<Harmonic>& harmonics() const noexcept { return harmonics_; }
    [[nodiscard]] const std::vector<Breakpoint>& breakpoints() const noexcept { return table_; }

    friend bool operator==(const RateFunction&, const RateFunction&) = default;

private:
    void validate() const;

    double constant_ = 0.0;
    std::vector<Harmonic> harmonics_;
    std::vector<Breakpoint> table_;
};

}  // namespace hetq
