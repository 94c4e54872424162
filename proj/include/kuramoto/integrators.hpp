#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>

#include "kuramoto/rhs.hpp"
#include "kuramoto/types.hpp"

namespace kuramoto {

/// Step-size control for integrate_adaptive.
struct StepController {
    double abs_tol = 1e-8;
    double rel_tol = 1e-8;
    double h_init = 1e-2;
    double h_min = 1e-12;
    double h_max = 1.0;
    double safety = 0.9;

    /// Throws ConfigError on non-positive tolerances or inconsistent bounds.
    void validate() const;
};

// Single steps. Each advances state.time by h and throws NumericalError when
// the new phases are not finite.

[[nodiscard]] PhaseState step_euler(const PhaseState& state, RhsEvaluator& rhs, double h);
/// Heun's method (explicit trapezoidal rule), two evaluations.
[[nodiscard]] PhaseState step_rk2(const PhaseState& state, RhsEvaluator& rhs, double h);
/// Classical fourth-order Runge-Kutta, four evaluations.
[[nodiscard]] PhaseState step_rk4(const PhaseState& state, RhsEvaluator& rhs, double h);

struct MidpointStep {
    PhaseState state;
    int iterations = 0;
};

/// Implicit midpoint rule solved by fixed-point iteration on the increment
/// d = h F(theta + d/2), seeded with the Euler increment. Stops once the
/// max-norm change of d drops below fp_tol; throws NumericalError after
/// fp_max_iters iterations without convergence.
[[nodiscard]] MidpointStep implicit_midpoint_step(const PhaseState& state, RhsEvaluator& rhs, double h,
                                                  double fp_tol = 1e-12, int fp_max_iters = 50);
[[nodiscard]] inline PhaseState step_implicit_midpoint(const PhaseState& state, RhsEvaluator& rhs, double h,
                                                       double fp_tol = 1e-12, int fp_max_iters = 50) {
    return implicit_midpoint_step(state, rhs, h, fp_tol, fp_max_iters).state;
}

enum class StepMethod { euler, rk2, rk4, implicit_midpoint };

[[nodiscard]] std::string_view to_string(StepMethod method);
[[nodiscard]] StepMethod parse_step_method(std::string_view name);

/// Called with every accepted step.
using StepObserver = std::function<void(const PhaseState&)>;

/// Diagnostics of one state relative to the initial state of the run.
[[nodiscard]] SampleDiagnostics sample_diagnostics(const PhaseState& state, const PhaseState& initial,
                                                   const RhsEvaluator& rhs);

struct AdaptiveStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    double last_h = 0.0;
};

/// Adaptive RK4 with step-doubling error control from initial.time to t_end.
///
/// The local error estimate is the weighted RMS of (two half steps - one full
/// step) / 15 with weights abs_tol + rel_tol |theta_m|; a step is accepted
/// when the estimate is at most one, and the next step is
/// safety * h * err^(-1/5) clamped to [h_min, h_max]. The propagated solution
/// is the two-half-step result. States at `sample_times` (strictly increasing,
/// inside [initial.time, t_end]) are linearly interpolated between accepted steps.
/// Throws NumericalError when a step at h_min is still rejected.
[[nodiscard]] Trajectory integrate_adaptive(const PhaseState& initial, RhsEvaluator& rhs, double t_end,
                                            const StepController& ctrl, std::span<const double> sample_times,
                                            const StepObserver& observer = {}, AdaptiveStats* stats = nullptr);

/// Fixed step size h for `steps` steps; samples the initial state and every
/// `sample_every`-th step (and always the last). Step times are t0 + n h.
/// The fixed-point settings apply to the implicit midpoint rule only; that rule
/// also accumulates the phases with compensated summation, which keeps the
/// linear invariant free of round-off drift over long runs.
[[nodiscard]] Trajectory integrate_fixed(const PhaseState& initial, RhsEvaluator& rhs, StepMethod method, double h,
                                         std::size_t steps, std::size_t sample_every,
                                         const StepObserver& observer = {}, double fp_tol = 1e-12,
                                         int fp_max_iters = 50);

/// `count` equally spaced sample times covering [t0, t1], both ends included.
[[nodiscard]] std::vector<double> uniform_sample_times(double t0, double t1, std::size_t count);

}  // namespace kuramoto
