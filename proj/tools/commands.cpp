#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hetq/bounds.hpp"
#include "hetq/io.hpp"
#include "svg.hpp"

namespace hetq::cli {
namespace {

constexpr double kConservationLimit = 1e-8;  // pre-projection defect per unit time
constexpr double kAgreementSigmas = 3.0;
constexpr double kAgreementFraction = 0.95;
constexpr double kDecayRelTolerance = 0.05;

// tracked states in the order P00, P01, P10, P11
constexpr std::size_t kTracked[] = {0, 2, 1, 3};
constexpr const char* kTrackedNames[] = {"P00", "P01", "P10", "P11"};

std::filesystem::path prepare_out_dir(const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    return dir;
}

std::optional<WeightSequence> select_weights(const ResolvedRun& run) {
    const auto& spec = run.model.spec;
    auto tuned = tune_weights(spec);
    if (!run.epsilon && !run.delta1) return tuned;
    if (!spec.traffic_condition()) return std::nullopt;
    const double delta = tail_ratio(spec);
    const double eps = run.epsilon.value_or(tuned ? tuned->epsilon() : 0.1);
    const double d1 = run.delta1.value_or(tuned ? tuned->delta1() : delta);
    return WeightSequence(eps, d1, delta);
}

std::string model_name(const ResolvedRun& run) {
    if (!run.model.spec.name().empty()) return run.model.spec.name();
    return "unnamed";
}

std::vector<Series> state_series(const TrajectoryPair& pair, std::size_t state, const SolveSettings& s) {
    Series a{"X(0) = 0", pair.from_empty.times, {}};
    Series b{"X(0) = state " + std::to_string(s.far_index()), pair.from_far.times, {}};
    for (const auto& p : pair.from_empty.probs) a.y.push_back(p[state]);
    for (const auto& p : pair.from_far.probs) b.y.push_back(p[state]);
    return {a, b};
}

void write_csv(const std::filesystem::path& path, const Trajectory& traj) {
    std::ostringstream ss;
    write_trajectory_csv(ss, traj);
    write_file(path, ss.str());
}

}  // namespace

ResolvedRun resolve(const RunConfig& config) {
    if (config.model.empty()) throw ConfigError("--model is required");
    ResolvedRun run{load_model_config(config.model), {}, {}, {}, {}, {}};
    const auto& fs = run.model.settings;
    auto& s = run.solve;
    s.step = config.step.value_or(fs.step.value_or(s.step));
    s.horizon = config.horizon.value_or(fs.horizon.value_or(s.horizon));
    s.tol_mix = config.tol_mix.value_or(fs.tol_mix.value_or(s.tol_mix));
    s.tol_truncation = config.tol_trunc.value_or(fs.tol_trunc.value_or(s.tol_truncation));
    if (auto n = config.n ? config.n : fs.n) s.n = *n;
    s.far_state = config.far_state;
    s.record_interval = std::max(s.record_interval, s.step);

    if (!(s.step > 0.0) || !(s.horizon > 0.0) || !(s.tol_mix > 0.0) || !(s.tol_truncation > 0.0)) {
        throw ConfigError("step, horizon and tolerances must be positive");
    }
    if (s.n < 5) throw ConfigError("--n must be at least 5");

    run.sim.n_paths = config.paths.value_or(fs.paths.value_or(kDefaultPaths));
    run.sim.seed = config.seed.value_or(fs.seed.value_or(kDefaultSeed));
    if (run.sim.n_paths < 100) throw ConfigError("--paths must be at least 100");

    run.epsilon = config.epsilon ? config.epsilon : fs.epsilon;
    run.delta1 = config.delta1 ? config.delta1 : fs.delta1;
    if (run.epsilon && !(*run.epsilon > 0.0 && *run.epsilon < 1.0)) throw ConfigError("--epsilon must lie in (0, 1)");
    if (run.delta1 && !(*run.delta1 > 1.0)) throw ConfigError("--delta1 must exceed 1");

    if (!config.out_dir.empty()) {
        run.out_dir = config.out_dir;
    } else if (const char* env = std::getenv(kOutDirEnv); env && *env) {
        run.out_dir = env;
    } else {
        run.out_dir = "hetq_out";
    }
    return run;
}

int cmd_bound(const RunConfig& config, std::ostream& out) {
    const auto run = resolve(config);
    const auto& spec = run.model.spec;
    const auto weights = select_weights(run);
    if (!weights) {
        const Rates m = mean_rates(spec);
        out << "ergodicity not certified: averaged arrival rate " << format_number(m.lambda)
            << " is not below the averaged service rate " << format_number(m.mu) << '\n';
        return kExitCheckFailed;
    }

    CertificateOptions options;
    options.measure_prefactor = config.measure;
    options.settings = run.solve;
    if (config.n || run.model.settings.n) options.n = run.solve.n;
    const auto result = make_certificate(spec, *weights, options);
    if (!result.certified()) {
        out << result.reason << '\n';
        return kExitCheckFailed;
    }
    const auto& c = *result.certificate;

    const auto dir = prepare_out_dir(run.out_dir);
    std::ostringstream report;
    write_certificate(report, c, model_name(run));
    write_file(dir / "certificate.txt", report.str());

    out << "model: " << model_name(run) << '\n';
    out << "regime: " << (c.kind == CertificateKind::Periodic ? "periodic" : "constant-rate") << '\n';
    out << "weights: epsilon=" << format_number(c.weights.epsilon()) << " delta1=" << format_number(c.weights.delta1())
        << " delta=" << format_number(c.weights.delta()) << '\n';
    out << "beta*0 (averaged model) = " << format_number(c.beta_star0) << "  [alpha_" << c.binding
        << " binds; reported " << format_number(round_down_significant(c.beta_star0)) << "]\n";
    out << "beta* (certified rate) = " << format_number(c.beta_star) << '\n';
    if (c.frozen_profile) {
        out << "frozen-time beta*(t): inf = " << format_number(c.frozen_profile->inf) << " at t = "
            << format_number(c.frozen_profile->inf_time);
        if (c.frozen_profile->inf > 0.0) {
            out << "  [reported " << format_number(round_down_significant(c.frozen_profile->inf)) << "]";
        }
        out << '\n';
    }
    if (c.fixed_weight_profile) {
        out << "fixed-weight beta*(t): inf = " << format_number(c.fixed_weight_profile->inf)
            << ", mean over a period = " << format_number(c.fixed_weight_profile->mean) << '\n';
    }
    out << "norm chain constant = " << format_number(c.norm_chain_constant) << '\n';
    if (c.prefactor_N) {
        out << "measured prefactor N = " << format_number(*c.prefactor_N) << " (n = " << c.measured_n
            << ", contraction " << (c.contraction->holds ? "holds" : "VIOLATED") << ")\n";
    }
    out << "wrote " << (dir / "certificate.txt").string() << '\n';
    return kExitOk;
}

int cmd_solve(const RunConfig& config, std::ostream& out) {
    auto run = resolve(config);
    const auto& spec = run.model.spec;
    auto& s = run.solve;
    if (!config.n && !run.model.settings.n) s.n = choose_truncation(spec, s);
    if (s.far_state && *s.far_state >= s.n) {
        throw ConfigError("--far-state must be below the truncation n = " + std::to_string(s.n));
    }
    const auto dir = prepare_out_dir(run.out_dir);
    const auto pair = run_pair(spec, s);

    write_csv(dir / "trajectory_x0.csv", pair.from_empty);
    write_csv(dir / "trajectory_xfar.csv", pair.from_far);

    std::ostringstream report;
    int status = kExitOk;
    report << "# transient solution\n";
    report << "model = " << model_name(run) << '\n';
    report << "n = " << s.n << '\n';
    report << "step = " << format_number(s.step) << '\n';
    report << "horizon = " << format_number(s.horizon) << '\n';
    report << "far_state = " << s.far_index() << '\n';
    const double defect_rate = std::max(pair.from_empty.max_defect_rate, pair.from_far.max_defect_rate);
    report << "max_defect_per_unit_time = " << format_number(defect_rate) << '\n';
    if (!(defect_rate < kConservationLimit)) {
        report << "conservation = FAILED\n";
        status = kExitNumericalFailure;
    }

    std::optional<LimitingRegime> limit;
    try {
        limit = limiting_regime(pair, s);
        report << "t_mix = " << format_number(limit->t_mix) << '\n';
        write_csv(dir / "limit_cycle.csv", limit->cycle);
    } catch (const HorizonTooShort& e) {
        report << "t_mix = not reached (" << e.what() << ")\n";
        report << "decay_rate_so_far = " << format_number(e.decay_rate) << '\n';
        status = kExitNumericalFailure;
    }

    std::optional<WeightSequence> weights = select_weights(run);
    try {
        const auto fit = decay_fit(pair.from_empty, pair.from_far, weights ? &*weights : nullptr);
        report << "beta_hat = " << format_number(fit.beta_hat) << '\n';
        report << "fit_window = [" << format_number(fit.window_begin) << ", " << format_number(fit.window_end)
               << "] (" << fit.points << " points)\n";
    } catch (const FitError& e) {
        report << "beta_hat = unavailable (" << e.what() << ")\n";
    }
    if (weights) {
        const double beta0 = beta_star(alphas_general(mean_rates(spec), *weights)).value;
        if (beta0 > 0.0) {
            const auto cc = check_contraction(pair.from_empty, pair.from_far, *weights, beta0);
            report << "beta_star0 = " << format_number(beta0) << '\n';
            report << "prefactor_N_measured = " << format_number(cc.prefactor) << '\n';
            report << "contraction_max_ratio = " << format_number(cc.max_ratio) << '\n';
            report << "contraction_holds = " << (cc.holds ? "true" : "false") << '\n';
        }
    }

    const std::string suffix = " (" + model_name(run) + ")";
    for (std::size_t k = 0; k < 4; ++k) {
        const std::string name = kTrackedNames[k];
        std::string file = name;
        std::transform(file.begin(), file.end(), file.begin(), [](unsigned char ch) { return std::tolower(ch); });
        write_file(dir / (file + ".svg"),
                   render_line_chart(name + "(t)" + suffix, "t", name, state_series(pair, kTracked[k], s)));
    }
    write_file(dir / "mean.svg",
               render_line_chart("Mean E(t)" + suffix, "t", "E(t)",
                                 {{"X(0) = 0", pair.from_empty.times, pair.from_empty.mean},
                                  {"X(0) = state " + std::to_string(s.far_index()), pair.from_far.times,
                                   pair.from_far.mean}}));
    if (limit) {
        write_file(dir / "mean_cycle.svg",
                   render_line_chart("Limiting mean over one period" + suffix, "t", "E(t)",
                                     {{"limit cycle", limit->cycle.times, limit->cycle.mean}}));
    }
    write_file(dir / "report.txt", report.str());
    out << report.str();
    out << "wrote " << dir.string() << '\n';
    return status;
}

int cmd_simulate(const RunConfig& config, std::ostream& out) {
    auto run = resolve(config);
    auto& sim = run.sim;
    sim.sample_times = config.times.empty() ? std::vector<double>{1.0, 5.0, run.solve.horizon} : config.times;
    std::sort(sim.sample_times.begin(), sim.sample_times.end());
    sim.sample_times.erase(std::unique(sim.sample_times.begin(), sim.sample_times.end()), sim.sample_times.end());
    const auto est = estimate_probs(run.model.spec, sim);

    const auto dir = prepare_out_dir(run.out_dir);
    std::ostringstream csv;
    write_estimates_csv(csv, est);
    write_file(dir / "mc_estimates.csv", csv.str());

    out << "paths = " << sim.n_paths << ", seed = " << sim.seed << '\n';
    for (std::size_t k = 0; k < est.times.size(); ++k) {
        out << "t = " << format_number(est.times[k]);
        for (std::size_t i = 0; i < 4; ++i) {
            out << "  " << kTrackedNames[i] << " = " << format_number(est.estimate(k, kTracked[i]), 6) << " +- "
                << format_number(est.standard_error(k, kTracked[i]), 2);
        }
        out << '\n';
    }
    out << "wrote " << (dir / "mc_estimates.csv").string() << '\n';
    return kExitOk;
}

int cmd_compare(const RunConfig& config, std::ostream& out) {
    auto run = resolve(config);
    const auto& spec = run.model.spec;
    auto& s = run.solve;
    if (!config.n && !run.model.settings.n) s.n = choose_truncation(spec, s);

    const auto pair = run_pair(spec, s);
    auto& sim = run.sim;
    sim.sample_times.clear();
    for (double t : {1.0, 5.0, s.horizon}) {
        if (t <= s.horizon && (sim.sample_times.empty() || t > sim.sample_times.back())) sim.sample_times.push_back(t);
    }
    const auto est = estimate_probs(spec, sim);

    std::ostringstream table;
    table << "# ODE vs Monte-Carlo (" << sim.n_paths << " paths, seed " << sim.seed << ", n = " << s.n << ")\n";
    table << "t,state,ode,mc,stderr,z,within\n";
    std::size_t cells = 0, agree = 0;
    for (std::size_t k = 0; k < est.times.size(); ++k) {
        const auto idx = static_cast<std::size_t>(std::llround(est.times[k] / s.record_interval));
        const auto& p = pair.from_empty.probs.at(idx);
        for (std::size_t i = 0; i < 4; ++i) {
            const double ode = p[kTracked[i]];
            const double mc = est.estimate(k, kTracked[i]);
            const double se = est.standard_error(k, kTracked[i]);
            const bool ok = std::abs(mc - ode) <= kAgreementSigmas * se;
            ++cells;
            agree += ok ? 1 : 0;
            table << format_number(est.times[k]) << ',' << kTrackedNames[i] << ',' << format_number(ode, 8) << ','
                  << format_number(mc, 8) << ',' << format_number(se, 4) << ','
                  << format_number(se > 0.0 ? (mc - ode) / se : 0.0, 4) << ',' << (ok ? "yes" : "no") << '\n';
        }
    }
    const double fraction = static_cast<double>(agree) / static_cast<double>(cells);
    const bool mc_pass = fraction >= kAgreementFraction;
    table << "agreement = " << agree << "/" << cells << " (" << format_number(100.0 * fraction, 4) << "%, need "
          << format_number(100.0 * kAgreementFraction, 3) << "%) " << (mc_pass ? "PASS" : "FAIL") << '\n';

    bool decay_pass = false;
    table << "\n# decay rate: periodic model vs averaged model\n";
    try {
        const auto fit_periodic = decay_fit(pair.from_empty, pair.from_far);
        const auto averaged_pair = run_pair(spec.averaged(), s);
        const auto fit_averaged = decay_fit(averaged_pair.from_empty, averaged_pair.from_far);
        const double rel = std::abs(fit_periodic.beta_hat - fit_averaged.beta_hat) / fit_averaged.beta_hat;
        decay_pass = rel <= kDecayRelTolerance;
        table << "beta_hat_periodic = " << format_number(fit_periodic.beta_hat) << '\n';
        table << "beta_hat_averaged = " << format_number(fit_averaged.beta_hat) << '\n';
        table << "relative_difference = " << format_number(rel, 6) << " (limit " << kDecayRelTolerance << ") "
              << (decay_pass ? "PASS" : "FAIL") << '\n';
    } catch (const FitError& e) {
        table << "decay fit unavailable: " << e.what() << " FAIL\n";
    }

    const auto dir = prepare_out_dir(run.out_dir);
    write_file(dir / "compare_report.txt", table.str());
    out << table.str();
    out << (mc_pass && decay_pass ? "compare: PASS\n" : "compare: FAIL\n");
    return mc_pass && decay_pass ? kExitOk : kExitCheckFailed;
}

int cmd_dump(const RunConfig& config, std::ostream& out) {
    const auto run = resolve(config);
    const auto& spec = run.model.spec;
    const Rates r = eval_rates(spec, config.at);
    Matrix m;
    if (config.matrix == "A") {
        m = build_A(r, config.dim);
    } else if (config.matrix == "B") {
        m = build_B(r, config.dim).B;
    } else if (config.matrix == "transformed" || config.matrix == "product") {
        const auto w = select_weights(run);
        if (!w) throw ConfigError("no weight sequence available: the model is not ergodic on average");
        m = config.matrix == "transformed" ? build_transformed(r, *w, config.dim)
                                           : transformed_by_product(r, *w, config.dim);
    } else {
        throw ConfigError("unknown matrix '" + config.matrix + "' (expected A, B, transformed or product)");
    }
    write_matrix(out, m);
    return kExitOk;
}

int run_command(const std::string& command, const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        if (command == "bound") return cmd_bound(config, out);
        if (command == "solve") return cmd_solve(config, out);
        if (command == "simulate") return cmd_simulate(config, out);
        if (command == "compare") return cmd_compare(config, out);
        if (command == "dump") return cmd_dump(config, out);
        err << "unknown command '" << command << "'\n";
        return kExitConfigError;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const SolverError& e) {
        err << "solver error: " << e.what() << '\n';
        return kExitNumericalFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumericalFailure;
    }
}

}  // namespace hetq::cli
