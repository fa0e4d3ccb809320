#include "hetq/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace hetq {

void SolveSettings::validate() const {
    if (!(step > 0.0) || !std::isfinite(step)) throw std::invalid_argument("step must be positive");
    if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
    if (n < 5) throw std::invalid_argument("truncation level n must be at least 5");
    if (!(record_interval >= step)) throw std::invalid_argument("record interval must be at least one step");
    if (far_state && *far_state >= n) {
        throw std::invalid_argument("far initial state " + std::to_string(*far_state) +
                                    " lies outside the truncation n = " + std::to_string(n));
    }
}

Trajectory Trajectory::slice(double t_begin, double t_end) const {
    Trajectory out;
    const double slack = 1e-9;
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (times[k] < t_begin - slack || times[k] > t_end + slack) continue;
        out.times.push_back(times[k]);
        out.probs.push_back(probs[k]);
        out.mean.push_back(mean[k]);
        out.l1_defect.push_back(l1_defect[k]);
    }
    out.max_defect = max_defect;
    out.max_defect_rate = max_defect_rate;
    return out;
}

std::vector<double> unit_vector(std::size_t n, std::size_t index) {
    if (index >= n) throw std::invalid_argument("unit_vector: index outside truncation");
    std::vector<double> v(n, 0.0);
    v[index] = 1.0;
    return v;
}

double mean_of(std::span<const double> p) noexcept {
    double e = 0.0;
    for (std::size_t k = 1; k < p.size(); ++k) e += job_count(k) * p[k];
    return e;
}

IntegrationStats integrate(const ModelSpec& spec, const SolveSettings& settings,
                           std::span<const double> p0, const Observer& observer) {
    settings.validate();
    const std::size_t n = settings.n;
    if (p0.size() != n) throw std::invalid_argument("initial vector length differs from n");
    if (std::any_of(p0.begin(), p0.end(), [](double v) { return v < 0.0; }) ||
        std::abs(std::accumulate(p0.begin(), p0.end(), 0.0) - 1.0) > 1e-12) {
        throw std::invalid_argument("initial vector must be a probability distribution");
    }

    const double h = settings.step;
    const auto steps = static_cast<std::size_t>(std::llround(settings.horizon / h));
    const auto stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(settings.record_interval / h)));

    std::vector<double> p(p0.begin(), p0.end());
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
    IntegrationStats stats;

    if (observer) observer(0.0, p, 0.0);

    for (std::size_t s = 0; s < steps; ++s) {
        const double t = static_cast<double>(s) * h;
        const Rates r0 = eval_rates(spec, t);
        const Rates rh = eval_rates(spec, t + 0.5 * h);
        const Rates r1 = eval_rates(spec, t + h);

        apply_generator(r0, p, k1);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = p[i] + 0.5 * h * k1[i];
        apply_generator(rh, tmp, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = p[i] + 0.5 * h * k2[i];
        apply_generator(rh, tmp, k3);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = p[i] + h * k3[i];
        apply_generator(r1, tmp, k4);

        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            p[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            total += p[i];
        }
        const double defect = std::abs(1.0 - total);
        if (!(defect <= kMaxStepDefect)) {
            std::ostringstream msg;
            msg << "probability defect " << defect << " at t = " << t + h << " exceeds " << kMaxStepDefect
                << "; reduce the step (currently " << h << ")";
            throw StepSizeError(msg.str());
        }
        stats.max_defect = std::max(stats.max_defect, defect);

        double clipped = 0.0;
        for (auto& v : p) {
            if (v < 0.0) v = 0.0;
            clipped += v;
        }
        for (auto& v : p) v /= clipped;

        ++stats.steps;
        if (observer && (s + 1) % stride == 0) {
            observer(static_cast<double>(s + 1) * h, p, defect);
        }
    }
    stats.max_defect_rate = stats.max_defect / h;
    return stats;
}

Trajectory integrate(const ModelSpec& spec, const SolveSettings& settings, std::span<const double> p0) {
    Trajectory traj;
    const auto stats = integrate(spec, settings, p0, [&](double t, std::span<const double> p, double defect) {
        traj.times.push_back(t);
        traj.probs.emplace_back(p.begin(), p.end());
        traj.mean.push_back(mean_of(p));
        traj.l1_defect.push_back(defect);
    });
    traj.max_defect = stats.max_defect;
    traj.max_defect_rate = stats.max_defect_rate;
    return traj;
}

namespace {

std::vector<double> mean_curve(const ModelSpec& spec, SolveSettings settings, std::size_t n) {
    settings.n = n;
    settings.far_state.reset();
    std::vector<double> e;
    integrate(spec, settings, unit_vector(n, 0),
              [&](double, std::span<const double> p, double) { e.push_back(mean_of(p)); });
    return e;
}

}  // namespace

std::size_t choose_truncation(const ModelSpec& spec, const SolveSettings& settings) {
    std::size_t n = std::max<std::size_t>(settings.initial_n, 8);
    auto coarse = mean_curve(spec, settings, n);
    double last_gap = std::numeric_limits<double>::quiet_NaN();
    while (2 * n <= settings.max_n) {
        auto fine = mean_curve(spec, settings, 2 * n);
        double gap = 0.0;
        for (std::size_t k = 0; k < coarse.size(); ++k) gap = std::max(gap, std::abs(coarse[k] - fine[k]));
        if (gap < settings.tol_truncation) return n;
        last_gap = gap;
        n *= 2;
        coarse = std::move(fine);
    }
    std::ostringstream msg;
    msg << "truncation did not converge below n = " << settings.max_n << " (last sup |E_n - E_2n| = " << last_gap
        << "); the system is probably overloaded";
    throw TruncationError(msg.str());
}

TrajectoryPair run_pair(const ModelSpec& spec, const SolveSettings& settings) {
    settings.validate();
    TrajectoryPair pair;
    pair.from_empty = integrate(spec, settings, unit_vector(settings.n, 0));
    pair.from_far = integrate(spec, settings, unit_vector(settings.n, settings.far_index()));
    return pair;
}

std::vector<double> l1_distance(const Trajectory& a, const Trajectory& b) {
    if (a.size() != b.size()) throw std::invalid_argument("trajectories are on different grids");
    std::vector<double> d(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.probs[k].size(); ++i) s += std::abs(a.probs[k][i] - b.probs[k][i]);
        d[k] = s;
    }
    return d;
}

LimitingRegime limiting_regime(const TrajectoryPair& pair, const SolveSettings& settings) {
    const auto dist = l1_distance(pair.from_empty, pair.from_far);
    const auto& times = pair.from_empty.times;
    auto it = std::find_if(dist.begin(), dist.end(), [&](double d) { return d < settings.tol_mix; });
    if (it == dist.end()) {
        double rate = std::numeric_limits<double>::quiet_NaN();
        try {
            rate = decay_fit(pair.from_empty, pair.from_far).beta_hat;
        } catch (const FitError&) {
        }
        std::ostringstream msg;
        msg << "trajectories did not merge to l1 distance " << settings.tol_mix << " within horizon "
            << settings.horizon << " (final distance " << (dist.empty() ? 0.0 : dist.back()) << ")";
        throw HorizonTooShort(msg.str(), rate);
    }
    LimitingRegime out;
    out.t_mix = times[static_cast<std::size_t>(it - dist.begin())];
    const double start = std::ceil(out.t_mix - 1e-9);
    if (start + 1.0 > times.back() + 1e-9) {
        throw HorizonTooShort("merged at t = " + std::to_string(out.t_mix) +
                                  " but the horizon leaves no full period after it",
                              std::numeric_limits<double>::quiet_NaN());
    }
    out.cycle = pair.from_empty.slice(start, start + 1.0);
    return out;
}

LimitingRegime limiting_regime(const ModelSpec& spec, const SolveSettings& settings) {
    return limiting_regime(run_pair(spec, settings), settings);
}

DecayFit decay_fit(const Trajectory& a, const Trajectory& b, const WeightSequence* weights) {
    const auto dist = l1_distance(a, b);
    std::vector<double> ts, ys;
    for (std::size_t k = 0; k < dist.size(); ++k) {
        if (dist[k] >= kFitNormLow && dist[k] <= kFitNormHigh) {
            ts.push_back(a.times[k]);
            ys.push_back(std::log(dist[k]));
        }
    }
    if (ts.size() < 10) {
        throw FitError("decay fit needs at least 10 points with distance in [1e-8, 1e-2], found " +
                       std::to_string(ts.size()));
    }
    const double m = static_cast<double>(ts.size());
    const double tbar = std::accumulate(ts.begin(), ts.end(), 0.0) / m;
    const double ybar = std::accumulate(ys.begin(), ys.end(), 0.0) / m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        sxx += (ts[k] - tbar) * (ts[k] - tbar);
        sxy += (ts[k] - tbar) * (ys[k] - ybar);
    }
    if (sxx == 0.0) throw FitError("decay fit window has zero width");
    const double slope = sxy / sxx;
    const double intercept = ybar - slope * tbar;

    double initial = dist.front();
    if (weights) {
        std::vector<double> x(a.probs.front().size() - 1);
        for (std::size_t i = 1; i < a.probs.front().size(); ++i) x[i - 1] = a.probs.front()[i] - b.probs.front()[i];
        initial = weighted_norm(x, *weights);
    }
    DecayFit fit;
    fit.beta_hat = -slope;
    fit.prefactor_hat = initial > 0.0 ? std::exp(intercept) / initial : std::numeric_limits<double>::infinity();
    fit.window_begin = ts.front();
    fit.window_end = ts.back();
    fit.points = ts.size();
    return fit;
}

std::vector<double> weighted_distance(const Trajectory& a, const Trajectory& b, const WeightSequence& w) {
    if (a.size() != b.size()) throw std::invalid_argument("trajectories are on different grids");
    std::vector<double> out(a.size());
    std::vector<double> x;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const auto& pa = a.probs[k];
        const auto& pb = b.probs[k];
        x.assign(pa.size() - 1, 0.0);
        for (std::size_t i = 1; i < pa.size(); ++i) x[i - 1] = pa[i] - pb[i];
        out[k] = weighted_norm(x, w);
    }
    return out;
}

ContractionCheck check_contraction(const Trajectory& a, const Trajectory& b, const WeightSequence& w, double beta) {
    const auto dist = weighted_distance(a, b, w);
    const auto l1 = l1_distance(a, b);
    ContractionCheck c;
    if (dist.empty() || dist.front() == 0.0) {
        c.holds = true;
        return c;
    }
    // below kFitNormLow the l1 distance is rounding noise amplified by the weights
    std::size_t usable = 0;
    while (usable < l1.size() && l1[usable] >= kFitNormLow) ++usable;
    const std::size_t half = usable / 2;
    for (std::size_t k = 0; k < usable; ++k) {
        const double ratio = dist[k] * std::exp(beta * a.times[k]) / dist.front();
        if (k <= half) c.prefactor = std::max(c.prefactor, ratio);
        c.max_ratio = std::max(c.max_ratio, ratio);
    }
    c.window_end = usable > 0 ? a.times[usable - 1] : 0.0;
    c.ratio_limit = 1.05 * c.prefactor;
    c.holds = c.max_ratio <= c.ratio_limit;
    return c;
}

}  // namespace hetq
