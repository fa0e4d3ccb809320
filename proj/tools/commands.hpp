#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hetq/config.hpp"
#include "hetq/mcsim.hpp"
#include "hetq/solver.hpp"

namespace hetq::cli {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
    kExitOk = 0,
    kExitConfigError = 1,
    kExitCheckFailed = 2,  // no certificate, or a compare threshold was violated
    kExitNumericalFailure = 3,
};

inline constexpr const char* kOutDirEnv = "HETQ_OUT_DIR";

struct RunConfig {
    std::filesystem::path model;
    std::filesystem::path out_dir;  // empty: $HETQ_OUT_DIR, else ./hetq_out

    std::optional<std::size_t> n;
    std::optional<double> step;
    std::optional<double> horizon;
    std::optional<double> tol_mix;
    std::optional<double> tol_trunc;
    std::optional<std::size_t> paths;
    std::optional<std::uint64_t> seed;
    std::optional<double> epsilon;
    std::optional<double> delta1;
    std::optional<std::size_t> far_state;

    bool measure = false;  // bound: also measure the prefactor N
    std::vector<double> times;  // simulate: sample times

    std::string matrix = "A";  // dump: A | B | transformed | product
    double at = 0.0;
    std::size_t dim = 8;
};

/// Fully resolved run parameters: built-in defaults < model file settings < flags.
struct ResolvedRun {
    ModelConfig model;
    SolveSettings solve;
    SimSettings sim;
    std::optional<double> epsilon;
    std::optional<double> delta1;
    std::filesystem::path out_dir;
};

inline constexpr std::size_t kDefaultPaths = 100000;
inline constexpr std::uint64_t kDefaultSeed = 20190101;

[[nodiscard]] ResolvedRun resolve(const RunConfig& config);

int cmd_bound(const RunConfig& config, std::ostream& out);
int cmd_solve(const RunConfig& config, std::ostream& out);
int cmd_simulate(const RunConfig& config, std::ostream& out);
int cmd_compare(const RunConfig& config, std::ostream& out);
int cmd_dump(const RunConfig& config, std::ostream& out);

/// Runs one subcommand and maps exceptions onto exit codes, reporting on `err`.
int run_command(const std::string& command, const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace hetq::cli
