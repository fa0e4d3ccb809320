#include "hetq/matrices.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hetq {
namespace {

void require_size(std::size_t n, std::size_t minimum, const char* what) {
    if (n < minimum) {
        throw std::invalid_argument(std::string(what) + ": truncation needs at least " +
                                    std::to_string(minimum) + " states, got " + std::to_string(n));
    }
}

}  // namespace

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

double Matrix::column_sum(std::size_t j) const noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) s += (*this)(i, j);
    return s;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) {
        throw std::invalid_argument("matrix product: dimension mismatch");
    }
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

std::vector<double> Matrix::operator*(std::span<const double> x) const {
    if (x.size() != cols_) {
        throw std::invalid_argument("matrix-vector product: dimension mismatch");
    }
    std::vector<double> y(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

WeightSequence::WeightSequence(double epsilon, double delta1, double delta)
    : epsilon_(epsilon), delta1_(delta1), delta_(delta) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::invalid_argument("weight epsilon must lie in (0, 1)");
    }
    if (!(delta1 > 1.0) || !std::isfinite(delta1)) {
        throw std::invalid_argument("weight delta1 must be finite and > 1");
    }
    if (!(delta > 1.0) || !std::isfinite(delta)) {
        throw std::invalid_argument("weight delta must be finite and > 1");
    }
}

double WeightSequence::d(std::size_t i) const noexcept {
    switch (i) {
        case 0: return 1.0;
        case 1: return epsilon_;
        case 2: return 1.0;
        case 3: return delta1_;
        default: return delta1_ * std::pow(delta_, static_cast<double>(i - 3));
    }
}

std::vector<double> WeightSequence::diagonal(std::size_t n) const {
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = this->d(i);
    return d;
}

Matrix build_A(const Rates& r, std::size_t n) {
    require_size(n, 5, "build_A");
    const double lam = r.lambda, mu1 = r.mu1, mu2 = r.mu2, mu = r.mu;
    Matrix a(n, n);
    // column j lists the rates out of state j
    a(0, 0) = -lam;
    a(1, 0) = lam;

    a(1, 1) = -(lam + mu1);
    a(0, 1) = mu1;
    a(3, 1) = lam;

    a(2, 2) = -(lam + mu2);
    a(0, 2) = mu2;
    a(3, 2) = lam;

    for (std::size_t j = 3; j < n; ++j) {
        a(j, j) = -(lam + mu);
        if (j == 3) {
            a(1, 3) = mu2;
            a(2, 3) = mu1;
        } else {
            a(j - 1, j) = mu;
        }
        if (j + 1 < n) {
            a(j + 1, j) = lam;
        } else {
            a(j, j) = -mu;
        }
    }
    return a;
}

Matrix build_A(const ModelSpec& spec, double t, std::size_t n) { return build_A(eval_rates(spec, t), n); }

void apply_generator(const Rates& r, std::span<const double> p, std::span<double> out) noexcept {
    const std::size_t n = p.size();
    const double lam = r.lambda, mu1 = r.mu1, mu2 = r.mu2, mu = r.mu;
    out[0] = -lam * p[0] + mu1 * p[1] + mu2 * p[2];
    out[1] = lam * p[0] - (lam + mu1) * p[1] + mu2 * p[3];
    out[2] = -(lam + mu2) * p[2] + mu1 * p[3];
    out[3] = lam * (p[1] + p[2]) - (lam + mu) * p[3] + (n > 4 ? mu * p[4] : 0.0);
    for (std::size_t k = 4; k + 1 < n; ++k) {
        out[k] = lam * p[k - 1] - (lam + mu) * p[k] + mu * p[k + 1];
    }
    // conservative edge: no arrivals out of the last state
    const std::size_t last = n - 1;
    if (last == 3) {
        out[3] += lam * p[3];
    } else {
        out[last] = lam * p[last - 1] - mu * p[last];
    }
}

ReducedSystem build_B(const Rates& r, std::size_t n) {
    require_size(n, 4, "build_B");
    const double lam = r.lambda, mu1 = r.mu1, mu2 = r.mu2, mu = r.mu;
    ReducedSystem sys{Matrix(n, n), std::vector<double>(n, 0.0)};
    Matrix& b = sys.B;

    // first row: the eliminated p_0 feeds lambda * (1 - sum z) into p_1
    for (std::size_t j = 0; j < n; ++j) b(0, j) = -lam;
    b(0, 0) = -(2.0 * lam + mu1);
    b(0, 2) = mu2 - lam;

    b(1, 1) = -(lam + mu2);
    b(1, 2) = mu1;

    b(2, 0) = lam;
    b(2, 1) = lam;
    b(2, 2) = -(lam + mu);
    if (n > 3) b(2, 3) = mu;

    for (std::size_t i = 3; i < n; ++i) {
        b(i, i - 1) = lam;
        b(i, i) = -(lam + mu);
        if (i + 1 < n) b(i, i + 1) = mu;
    }
    // the last z-state keeps no arrival outflow (matches build_A(n + 1))
    b(n - 1, n - 1) += lam;

    sys.f[0] = lam;
    return sys;
}

ReducedSystem build_B(const ModelSpec& spec, double t, std::size_t n) {
    return build_B(eval_rates(spec, t), n);
}

Matrix triangular_T(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) m(i, j) = 1.0;
    return m;
}

Matrix triangular_T_inverse(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
        if (i + 1 < n) m(i, i + 1) = -1.0;
    }
    return m;
}

Matrix build_transformed(const Rates& r, const WeightSequence& w, std::size_t n) {
    require_size(n, 5, "build_transformed");
    const double lam = r.lambda, mu1 = r.mu1, mu2 = r.mu2, mu = r.mu;
    const auto d = w.diagonal(n + 1);
    Matrix m(n, n);

    m(0, 0) = -(lam + mu1);
    m(0, 1) = d[0] / d[1] * (mu1 - mu2);
    m(0, 2) = d[0] / d[2] * mu2;

    m(1, 0) = d[1] / d[0] * lam;
    m(1, 1) = -(lam + mu2);
    m(1, 3) = d[1] / d[3] * mu2;

    m(2, 0) = d[2] / d[0] * lam;
    m(2, 2) = -(lam + mu);
    m(2, 3) = d[2] / d[3] * mu;

    for (std::size_t i = 3; i < n; ++i) {
        m(i, i - 1) = d[i] / d[i - 1] * lam;
        m(i, i) = -(lam + mu);
        if (i + 1 < n) m(i, i + 1) = d[i] / d[i + 1] * mu;
    }
    return m;
}

Matrix build_transformed(const ModelSpec& spec, const WeightSequence& w, double t, std::size_t n) {
    return build_transformed(eval_rates(spec, t), w, n);
}

Matrix transformed_by_product(const Rates& r, const WeightSequence& w, std::size_t n) {
    const auto sys = build_B(r, n);
    const auto d = w.diagonal(n);
    Matrix dm(n, n), dinv(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        dm(i, i) = d[i];
        dinv(i, i) = 1.0 / d[i];
    }
    return dm * triangular_T(n) * sys.B * triangular_T_inverse(n) * dinv;
}

double weighted_norm(std::span<const double> x, const WeightSequence& w) {
    double suffix = 0.0;
    double acc = 0.0;
    for (std::size_t k = x.size(); k-- > 0;) {
        suffix += x[k];
        if (suffix != 0.0) acc += w.d(k) * std::abs(suffix);
    }
    return acc;
}

double log_norm_l1(const Matrix& m, std::size_t columns) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("log_norm_l1 needs a square matrix");
    }
    if (columns == 0 || columns > m.cols()) columns = m.cols();
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < columns; ++j) {
        double s = m(j, j);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i != j) s += std::abs(m(i, j));
        }
        best = std::max(best, s);
    }
    return m.cols() == 0 ? 0.0 : best;
}

double log_norm_l1(const Matrix& m) { return log_norm_l1(m, m.cols()); }

}  // namespace hetq
