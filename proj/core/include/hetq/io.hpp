#pragma once

#include <cstddef>
#include <filesystem>
#include <ostream>
#include <string>

#include "hetq/bounds.hpp"
#include "hetq/matrices.hpp"
#include "hetq/mcsim.hpp"
#include "hetq/solver.hpp"

namespace hetq {

/// Locale-independent `%g`-style rendering with `digits` significant digits.
[[nodiscard]] std::string format_number(double x, int digits = 12);

inline constexpr std::size_t kMaxCsvRows = 10000;

/// `t,p00,p01,p10,p11,p12,...,mean`, subsampled to at most kMaxCsvRows rows.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
/// `t,state,estimate,stderr`, one row per observed state per sample time.
void write_estimates_csv(std::ostream& out, const ProbabilityEstimates& est);
/// Row-major dense matrix, 17 significant digits, one row per line.
void write_matrix(std::ostream& out, const Matrix& m);
/// Structured `key = value` report followed by the alpha table.
void write_certificate(std::ostream& out, const ConvergenceCertificate& c, const std::string& model_name);

void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace hetq
