#include "hetq/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace hetq {

std::string format_number(double x, int digits) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, digits);
    if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
    return std::string(buf.data(), end);
}

namespace {

// CSV column order: p00, p01, p10, then p11, p12, ...
std::size_t column_state(std::size_t column) noexcept {
    if (column == 1) return 2;
    if (column == 2) return 1;
    return column;
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    const std::size_t n = traj.probs.empty() ? 0 : traj.probs.front().size();
    out << "t";
    for (std::size_t c = 0; c < n; ++c) out << ',' << state_label(column_state(c));
    out << ",mean\n";
    const std::size_t stride = traj.size() <= kMaxCsvRows ? 1 : (traj.size() + kMaxCsvRows - 1) / kMaxCsvRows;
    for (std::size_t k = 0; k < traj.size(); k += stride) {
        out << format_number(traj.times[k]);
        for (std::size_t c = 0; c < n; ++c) out << ',' << format_number(traj.probs[k][column_state(c)]);
        out << ',' << format_number(traj.mean[k]) << '\n';
    }
}

void write_estimates_csv(std::ostream& out, const ProbabilityEstimates& est) {
    out << "t,state,estimate,stderr\n";
    for (std::size_t k = 0; k < est.times.size(); ++k) {
        for (std::size_t s = 0; s < est.states(k); ++s) {
            out << format_number(est.times[k]) << ',' << state_label(s) << ','
                << format_number(est.estimate(k, s)) << ',' << format_number(est.standard_error(k, s)) << '\n';
        }
    }
}

void write_matrix(std::ostream& out, const Matrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out << ' ';
            out << format_number(m(i, j), 17);
        }
        out << '\n';
    }
}

void write_certificate(std::ostream& out, const ConvergenceCertificate& c, const std::string& model_name) {
    auto kv = [&](const char* key, const std::string& value) { out << key << " = " << value << '\n'; };
    auto num = [&](const char* key, double v) { kv(key, format_number(v)); };

    out << "# convergence certificate\n";
    kv("model", model_name.empty() ? "unnamed" : model_name);
    kv("regime", c.kind == CertificateKind::Periodic ? "periodic" : "constant-rate");
    num("lambda_mean", c.averaged_rates.lambda);
    num("mu1_mean", c.averaged_rates.mu1);
    num("mu2_mean", c.averaged_rates.mu2);
    num("epsilon", c.weights.epsilon());
    num("delta1", c.weights.delta1());
    num("delta", c.weights.delta());
    kv("binding_alpha", std::to_string(c.binding));
    num("beta_star", c.beta_star);
    num("beta_star0", c.beta_star0);
    num("beta_star0_reported", round_down_significant(c.beta_star0));
    if (c.fixed_weight_profile) {
        num("fixed_weight_beta_inf", c.fixed_weight_profile->inf);
        num("fixed_weight_beta_inf_t", c.fixed_weight_profile->inf_time);
        num("fixed_weight_beta_mean", c.fixed_weight_profile->mean);
    }
    if (c.frozen_profile) {
        num("frozen_beta_inf", c.frozen_profile->inf);
        num("frozen_beta_inf_t", c.frozen_profile->inf_time);
        num("frozen_beta_mean", c.frozen_profile->mean);
        if (c.frozen_profile->inf > 0.0) num("frozen_beta_reported", round_down_significant(c.frozen_profile->inf));
    }
    num("norm_chain_constant", c.norm_chain_constant);
    if (c.prefactor_N) {
        num("prefactor_N_measured", *c.prefactor_N);
        kv("prefactor_truncation", std::to_string(c.measured_n));
        num("contraction_max_ratio", c.contraction->max_ratio);
        num("contraction_window_end", c.contraction->window_end);
        kv("contraction_holds", c.contraction->holds ? "true" : "false");
    } else {
        kv("prefactor_N_measured", "not measured");
    }
    out << "\n[alpha_table]\nt,alpha1,alpha2,alpha3,alpha4,alpha5,beta,binding\n";
    for (const auto& row : c.alpha_table) {
        out << format_number(row.t);
        for (double a : row.profile.alpha) out << ',' << format_number(a);
        out << ',' << format_number(row.beta.value) << ',' << row.beta.binding << '\n';
    }
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
    f << contents;
}

}  // namespace hetq
