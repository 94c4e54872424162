#include "kuramoto/integrators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "kuramoto/diagnostics.hpp"
#include "kuramoto/error.hpp"

namespace kuramoto {

void StepController::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol >= 0.0)) throw ConfigError("tolerances must be positive");
    if (!(h_min > 0.0) || !(h_min <= h_init) || !(h_init <= h_max)) {
        throw ConfigError(fmt::format("step bounds must satisfy 0 < h_min <= h_init <= h_max (got {}, {}, {})", h_min,
                                      h_init, h_max));
    }
    if (!(safety > 0.0) || safety > 1.0) throw ConfigError("safety factor must lie in (0, 1]");
}

namespace {

void require_positive_step(double h) {
    if (!(h > 0.0) || !std::isfinite(h)) throw NumericalError(fmt::format("step size {} is not positive", h));
}

void require_size(const PhaseState& state, const RhsEvaluator& rhs) {
    if (state.size() != rhs.size()) {
        throw DimensionError(fmt::format("state has {} phases, model has {}", state.size(), rhs.size()));
    }
}

void require_finite(const PhaseState& state) {
    for (double v : state.phases) {
        if (!std::isfinite(v)) throw NumericalError(fmt::format("non-finite phase at t = {}", state.time));
    }
}

bool all_finite(std::span<const double> values) {
    return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

// y + a * k, written into out.
void axpy(std::span<const double> y, double a, std::span<const double> k, std::vector<double>& out) {
    out.resize(y.size());
    for (std::size_t m = 0; m < y.size(); ++m) out[m] = y[m] + a * k[m];
}

/// One RK4 step; `k1` is the derivative at `y` when already known.
std::vector<double> rk4_phases(std::span<const double> y, RhsEvaluator& rhs, double h, std::span<const double> k1) {
    const std::size_t n = y.size();
    std::vector<double> tmp;
    std::vector<double> k2(n);
    std::vector<double> k3(n);
    std::vector<double> k4(n);
    axpy(y, 0.5 * h, k1, tmp);
    rhs.evaluate(tmp, k2);
    axpy(y, 0.5 * h, k2, tmp);
    rhs.evaluate(tmp, k3);
    axpy(y, h, k3, tmp);
    rhs.evaluate(tmp, k4);
    std::vector<double> out(n);
    const double w = h / 6.0;
    for (std::size_t m = 0; m < n; ++m) out[m] = y[m] + w * (k1[m] + 2.0 * k2[m] + 2.0 * k3[m] + k4[m]);
    return out;
}

}  // namespace

PhaseState step_euler(const PhaseState& state, RhsEvaluator& rhs, double h) {
    require_positive_step(h);
    require_size(state, rhs);
    const auto k = rhs.evaluate(state.phases);
    PhaseState next{{}, state.time + h};
    axpy(state.phases, h, k, next.phases);
    require_finite(next);
    return next;
}

PhaseState step_rk2(const PhaseState& state, RhsEvaluator& rhs, double h) {
    require_positive_step(h);
    require_size(state, rhs);
    const auto k1 = rhs.evaluate(state.phases);
    std::vector<double> predictor;
    axpy(state.phases, h, k1, predictor);
    const auto k2 = rhs.evaluate(predictor);
    PhaseState next{std::vector<double>(state.size()), state.time + h};
    for (std::size_t m = 0; m < state.size(); ++m) {
        next.phases[m] = state.phases[m] + 0.5 * h * (k1[m] + k2[m]);
    }
    require_finite(next);
    return next;
}

PhaseState step_rk4(const PhaseState& state, RhsEvaluator& rhs, double h) {
    require_positive_step(h);
    require_size(state, rhs);
    const auto k1 = rhs.evaluate(state.phases);
    PhaseState next{rk4_phases(state.phases, rhs, h, k1), state.time + h};
    require_finite(next);
    return next;
}

namespace {

struct MidpointIncrement {
    std::vector<double> increment;
    int iterations = 0;
};

MidpointIncrement midpoint_increment(const PhaseState& state, RhsEvaluator& rhs, double h, double fp_tol,
                                     int fp_max_iters) {
    require_positive_step(h);
    require_size(state, rhs);
    const std::size_t n = state.size();
    const auto& y = state.phases;

    std::vector<double> increment = rhs.evaluate(y);
    for (double& d : increment) d *= h;
    std::vector<double> midpoint(n);
    std::vector<double> slope(n);
    for (int iter = 1; iter <= fp_max_iters; ++iter) {
        for (std::size_t m = 0; m < n; ++m) midpoint[m] = y[m] + 0.5 * increment[m];
        rhs.evaluate(midpoint, slope);
        double change = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
            const double updated = h * slope[m];
            change = std::max(change, std::abs(updated - increment[m]));
            increment[m] = updated;
        }
        if (!std::isfinite(change)) break;
        if (change < fp_tol) return {std::move(increment), iter};
    }
    throw NumericalError(
        fmt::format("implicit midpoint iteration did not converge in {} iterations (h = {})", fp_max_iters, h));
}

}  // namespace

MidpointStep implicit_midpoint_step(const PhaseState& state, RhsEvaluator& rhs, double h, double fp_tol,
                                    int fp_max_iters) {
    auto [increment, iterations] = midpoint_increment(state, rhs, h, fp_tol, fp_max_iters);
    MidpointStep out{PhaseState{std::vector<double>(state.size()), state.time + h}, iterations};
    for (std::size_t m = 0; m < state.size(); ++m) out.state.phases[m] = state.phases[m] + increment[m];
    require_finite(out.state);
    return out;
}

std::string_view to_string(StepMethod method) {
    switch (method) {
        case StepMethod::euler: return "euler";
        case StepMethod::rk2: return "rk2";
        case StepMethod::rk4: return "rk4";
        case StepMethod::implicit_midpoint: return "implicit_midpoint";
    }
    return "unknown";
}

StepMethod parse_step_method(std::string_view name) {
    for (auto m : {StepMethod::euler, StepMethod::rk2, StepMethod::rk4, StepMethod::implicit_midpoint}) {
        if (to_string(m) == name) return m;
    }
    throw ConfigError(fmt::format("unknown integrator '{}'", name));
}

SampleDiagnostics sample_diagnostics(const PhaseState& state, const PhaseState& initial, const RhsEvaluator& rhs) {
    const OrderParameter op = order_parameter(state.phases);
    return {op.r, op.psi, rhs.potential(state.phases), conserved_residual(state, rhs.frequencies(), initial)};
}

namespace {

void record(Trajectory& traj, PhaseState state, const PhaseState& initial, const RhsEvaluator& rhs) {
    traj.sample_times.push_back(state.time);
    traj.diagnostics.push_back(sample_diagnostics(state, initial, rhs));
    traj.states.push_back(std::move(state));
}

double weighted_rms(std::span<const double> coarse, std::span<const double> fine, const StepController& ctrl) {
    double sum = 0.0;
    for (std::size_t m = 0; m < fine.size(); ++m) {
        const double scale = ctrl.abs_tol + ctrl.rel_tol * std::max(std::abs(coarse[m]), std::abs(fine[m]));
        const double e = (fine[m] - coarse[m]) / scale;
        sum += e * e;
    }
    return std::sqrt(sum / static_cast<double>(fine.size()));
}

}  // namespace

Trajectory integrate_adaptive(const PhaseState& initial, RhsEvaluator& rhs, double t_end, const StepController& ctrl,
                              std::span<const double> sample_times, const StepObserver& observer,
                              AdaptiveStats* stats) {
    ctrl.validate();
    require_size(initial, rhs);
    require_finite(initial);
    if (!(t_end > initial.time)) {
        throw ConfigError(fmt::format("end time {} must exceed the start time {}", t_end, initial.time));
    }
    for (std::size_t i = 0; i < sample_times.size(); ++i) {
        if (sample_times[i] < initial.time || sample_times[i] > t_end || (i > 0 && sample_times[i] <= sample_times[i - 1])) {
            throw ConfigError("sample times must increase strictly within [t0, t_end]");
        }
    }

    Trajectory traj;
    AdaptiveStats local;
    std::size_t next_sample = 0;
    while (next_sample < sample_times.size() && sample_times[next_sample] == initial.time) {
        record(traj, initial, initial, rhs);
        ++next_sample;
    }

    const std::size_t n = initial.size();
    PhaseState current = initial;
    double h = ctrl.h_init;
    std::vector<double> k1(n);
    bool k1_valid = false;
    while (current.time < t_end) {
        const bool last = h >= t_end - current.time;
        const double step = last ? t_end - current.time : h;
        if (!k1_valid) {
            rhs.evaluate(current.phases, k1);
            k1_valid = true;
        }
        const auto full = rk4_phases(current.phases, rhs, step, k1);
        const auto half = rk4_phases(current.phases, rhs, 0.5 * step, k1);
        const auto half_k1 = rhs.evaluate(half);
        const auto fine = rk4_phases(half, rhs, 0.5 * step, half_k1);

        double err = all_finite(fine) && all_finite(full) ? weighted_rms(full, fine, ctrl) / 15.0
                                                          : std::numeric_limits<double>::infinity();
        if (!std::isfinite(err)) err = std::numeric_limits<double>::infinity();
        const double factor =
            err == 0.0 ? 5.0 : std::clamp(ctrl.safety * std::pow(err, -0.2), 0.2, 5.0);

        if (err <= 1.0) {
            PhaseState next{fine, last ? t_end : current.time + step};
            while (next_sample < sample_times.size() && sample_times[next_sample] <= next.time) {
                const double t = sample_times[next_sample];
                const double w = (t - current.time) / (next.time - current.time);
                PhaseState s{std::vector<double>(n), t};
                for (std::size_t m = 0; m < n; ++m) {
                    s.phases[m] = (1.0 - w) * current.phases[m] + w * next.phases[m];
                }
                if (t == next.time) s.phases = next.phases;
                record(traj, std::move(s), initial, rhs);
                ++next_sample;
            }
            current = std::move(next);
            k1_valid = false;
            ++local.accepted;
            local.last_h = step;
            if (observer) observer(current);
            h = std::clamp(step * factor, ctrl.h_min, ctrl.h_max);
        } else {
            ++local.rejected;
            if (step <= ctrl.h_min) {
                throw NumericalError(fmt::format(
                    "step size underflow at t = {}: error estimate {} at h_min = {}", current.time, err, ctrl.h_min));
            }
            h = std::max(ctrl.h_min, step * factor);
        }
    }
    if (stats) *stats = local;
    return traj;
}

Trajectory integrate_fixed(const PhaseState& initial, RhsEvaluator& rhs, StepMethod method, double h,
                           std::size_t steps, std::size_t sample_every, const StepObserver& observer,
                           double fp_tol, int fp_max_iters) {
    require_positive_step(h);
    require_size(initial, rhs);
    if (sample_every == 0) sample_every = 1;
    Trajectory traj;
    record(traj, initial, initial, rhs);
    PhaseState current = initial;
    // Rounding carry of the compensated (Kahan) update used for the midpoint rule.
    std::vector<double> carry(initial.size(), 0.0);
    for (std::size_t n = 1; n <= steps; ++n) {
        switch (method) {
            case StepMethod::euler: current = step_euler(current, rhs, h); break;
            case StepMethod::rk2: current = step_rk2(current, rhs, h); break;
            case StepMethod::rk4: current = step_rk4(current, rhs, h); break;
            case StepMethod::implicit_midpoint: {
                const auto step = midpoint_increment(current, rhs, h, fp_tol, fp_max_iters);
                for (std::size_t m = 0; m < current.size(); ++m) {
                    const double y = step.increment[m] + carry[m];
                    const double t = current.phases[m] + y;
                    carry[m] = (current.phases[m] - t) + y;
                    current.phases[m] = t;
                }
                require_finite(current);
                break;
            }
        }
        current.time = initial.time + static_cast<double>(n) * h;
        if (observer) observer(current);
        if (n % sample_every == 0 || n == steps) record(traj, current, initial, rhs);
    }
    return traj;
}

std::vector<double> uniform_sample_times(double t0, double t1, std::size_t count) {
    std::vector<double> times;
    if (count == 0) return times;
    if (count == 1) return {t1};
    times.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        times.push_back(i + 1 == count ? t1 : t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    return times;
}

}  // namespace kuramoto
