#pragma once

#include <span>

#include "kuramoto/types.hpp"

namespace kuramoto {

/// Polar form r e^{i psi} of the mean phasor. psi is 0 when r is 0.
struct OrderParameter {
    double r = 0.0;
    double psi = 0.0;
};

[[nodiscard]] OrderParameter order_parameter(std::span<const double> theta);
[[nodiscard]] inline OrderParameter order_parameter(const PhaseState& state) { return order_parameter(state.phases); }

/// V = -omega.theta + (K M / 2)(1 - C^2 - S^2) with S, C the mean sine and cosine.
[[nodiscard]] double potential_classical(std::span<const double> theta, std::span<const double> omega,
                                         double coupling);
[[nodiscard]] double potential_classical(const PhaseState& state, const NaturalFrequencies& freq, double coupling);
/// Same value from the O(M^2) pair sum of 1 - cos(theta_l - theta_m).
[[nodiscard]] double potential_classical_naive(std::span<const double> theta, std::span<const double> omega,
                                               double coupling);

/// V = -omega.theta + (K/2)(sum(scaled A) - cos.(scaled A cos) - sin.(scaled A sin)).
/// `adjacency_total` is scaled_adjacency_total(graph, scaling), which callers
/// evaluating many states should compute once.
[[nodiscard]] double potential_graph(std::span<const double> theta, std::span<const double> omega, double coupling,
                                     const CouplingGraph& graph, ScalingMode scaling, double adjacency_total);
[[nodiscard]] double potential_graph(const PhaseState& state, const NaturalFrequencies& freq, double coupling,
                                     const CouplingGraph& graph, ScalingMode scaling);

/// sum_m (theta_m(t) - omega_m t - theta_m(0)) with t = state.time - initial.time.
[[nodiscard]] double conserved_residual(const PhaseState& state, const NaturalFrequencies& freq,
                                        const PhaseState& initial);

}  // namespace kuramoto
