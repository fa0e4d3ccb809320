#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hetq/model.hpp"

namespace hetq {

/// Dense row-major matrix. Only sized for the desk-scale truncations used in
/// checks and dumps (n up to a few hundred); integration goes through
/// apply_generator instead.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    static Matrix identity(std::size_t n);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept {
        return {data_.data() + i * cols_, cols_};
    }
    [[nodiscard]] double column_sum(std::size_t j) const noexcept;

    friend Matrix operator*(const Matrix& a, const Matrix& b);
    [[nodiscard]] std::vector<double> operator*(std::span<const double> x) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Geometric weight sequence d = (1, epsilon, 1, delta1, delta1*delta, delta1*delta^2, ...).
class WeightSequence {
public:
    /// Throws std::invalid_argument unless 0 < epsilon < 1, delta1 > 1, delta > 1.
    WeightSequence(double epsilon, double delta1, double delta);

    [[nodiscard]] double epsilon() const noexcept { return epsilon_; }
    [[nodiscard]] double delta1() const noexcept { return delta1_; }
    [[nodiscard]] double delta() const noexcept { return delta_; }

    /// Zero-based: d(0) = 1, d(1) = epsilon, d(2) = 1, d(3) = delta1, ...
    [[nodiscard]] double d(std::size_t i) const noexcept;
    [[nodiscard]] std::vector<double> diagonal(std::size_t n) const;
    [[nodiscard]] double min_weight() const noexcept { return epsilon_ < 1.0 ? epsilon_ : 1.0; }

private:
    double epsilon_;
    double delta1_;
    double delta_;
};

/// Truncated generator A(t) = Q(t)^T on states 0..n-1 (see state_encode).
/// The last state keeps its service outflow but not the arrival outflow, so
/// every column sums to zero and the truncated chain conserves probability.
[[nodiscard]] Matrix build_A(const Rates& r, std::size_t n);
[[nodiscard]] Matrix build_A(const ModelSpec& spec, double t, std::size_t n);

/// out = A p without forming A; same truncation as build_A with n = p.size().
void apply_generator(const Rates& r, std::span<const double> p, std::span<double> out) noexcept;

/// dz/dt = B z + f for z = (p_1, ..., p_n) after eliminating p_0 = 1 - sum z.
struct ReducedSystem {
    Matrix B;
    std::vector<double> f;
};

/// n x n reduced system; consistent with build_A(spec, t, n + 1).
[[nodiscard]] ReducedSystem build_B(const Rates& r, std::size_t n);
[[nodiscard]] ReducedSystem build_B(const ModelSpec& spec, double t, std::size_t n);

/// Upper-triangular all-ones T (suffix sums) and its bidiagonal inverse.
[[nodiscard]] Matrix triangular_T(std::size_t n);
[[nodiscard]] Matrix triangular_T_inverse(std::size_t n);

/// Closed-form D T B T^{-1} D^{-1}, truncated to n x n.
[[nodiscard]] Matrix build_transformed(const Rates& r, const WeightSequence& w, std::size_t n);
[[nodiscard]] Matrix build_transformed(const ModelSpec& spec, const WeightSequence& w, double t, std::size_t n);

/// The same matrix computed as the explicit product D * T * B * T^{-1} * D^{-1}.
/// Agrees with build_transformed away from the truncation edge only.
[[nodiscard]] Matrix transformed_by_product(const Rates& r, const WeightSequence& w, std::size_t n);

/// ||x||_{1D} = sum_i d_i |sum_{j>=i} x_j|.
[[nodiscard]] double weighted_norm(std::span<const double> x, const WeightSequence& w);

/// l1 logarithmic norm: max over columns of (diagonal + sum of |off-diagonal|).
/// `columns` restricts the maximum to the leading columns (all rows still count).
[[nodiscard]] double log_norm_l1(const Matrix& m, std::size_t columns);
[[nodiscard]] double log_norm_l1(const Matrix& m);

}  // namespace hetq
