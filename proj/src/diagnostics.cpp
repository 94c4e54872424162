#include "kuramoto/diagnostics.hpp"

#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "kuramoto/error.hpp"
#include "kuramoto/rhs.hpp"

namespace kuramoto {

namespace {

struct MeanPhasor {
    double s = 0.0;
    double c = 0.0;
};

MeanPhasor mean_phasor(std::span<const double> theta) {
    MeanPhasor p;
    for (double t : theta) {
        p.s += std::sin(t);
        p.c += std::cos(t);
    }
    const double n = static_cast<double>(theta.size());
    p.s /= n;
    p.c /= n;
    return p;
}

void require_same(std::size_t a, std::size_t b, const char* what) {
    if (a != b) throw DimensionError(fmt::format("{}: length {} does not match {}", what, b, a));
}

}  // namespace

OrderParameter order_parameter(std::span<const double> theta) {
    if (theta.empty()) throw DimensionError("order parameter of an empty phase vector");
    const MeanPhasor p = mean_phasor(theta);
    const double r = std::hypot(p.c, p.s);
    return {r, r == 0.0 ? 0.0 : std::atan2(p.s, p.c)};
}

double potential_classical(std::span<const double> theta, std::span<const double> omega, double coupling) {
    require_same(theta.size(), omega.size(), "frequency vector");
    const MeanPhasor p = mean_phasor(theta);
    double drift = 0.0;
    for (std::size_t m = 0; m < theta.size(); ++m) drift += omega[m] * theta[m];
    const double size = static_cast<double>(theta.size());
    return -drift + 0.5 * coupling * size * (1.0 - p.c * p.c - p.s * p.s);
}

double potential_classical(const PhaseState& state, const NaturalFrequencies& freq, double coupling) {
    return potential_classical(state.phases, freq.omega, coupling);
}

double potential_classical_naive(std::span<const double> theta, std::span<const double> omega, double coupling) {
    require_same(theta.size(), omega.size(), "frequency vector");
    double drift = 0.0;
    double pairs = 0.0;
    for (std::size_t m = 0; m < theta.size(); ++m) {
        drift += omega[m] * theta[m];
        for (std::size_t l = 0; l < theta.size(); ++l) pairs += 1.0 - std::cos(theta[l] - theta[m]);
    }
    return -drift + 0.5 * coupling / static_cast<double>(theta.size()) * pairs;
}

double potential_graph(std::span<const double> theta, std::span<const double> omega, double coupling,
                       const CouplingGraph& graph, ScalingMode scaling, double adjacency_total) {
    require_same(theta.size(), omega.size(), "frequency vector");
    require_same(graph.size(), theta.size(), "phase vector");
    const std::size_t size = theta.size();
    std::vector<double> sines(size);
    std::vector<double> cosines(size);
    for (std::size_t m = 0; m < size; ++m) {
        sines[m] = std::sin(theta[m]);
        cosines[m] = std::cos(theta[m]);
    }
    std::vector<double> u(size);
    std::vector<double> v(size);
    scaled_adjacency_products(graph, scaling, sines, cosines, u, v);
    double drift = 0.0;
    double interaction = 0.0;
    for (std::size_t m = 0; m < size; ++m) {
        drift += omega[m] * theta[m];
        interaction += cosines[m] * v[m] + sines[m] * u[m];
    }
    return -drift + 0.5 * coupling * (adjacency_total - interaction);
}

double potential_graph(const PhaseState& state, const NaturalFrequencies& freq, double coupling,
                       const CouplingGraph& graph, ScalingMode scaling) {
    return potential_graph(state.phases, freq.omega, coupling, graph, scaling,
                           scaled_adjacency_total(graph, scaling));
}

double conserved_residual(const PhaseState& state, const NaturalFrequencies& freq, const PhaseState& initial) {
    require_same(state.size(), freq.size(), "frequency vector");
    require_same(state.size(), initial.size(), "initial state");
    const double t = state.time - initial.time;
    double sum = 0.0;
    for (std::size_t m = 0; m < state.size(); ++m) {
        sum += (state.phases[m] - initial.phases[m]) - freq.omega[m] * t;
    }
    return sum;
}

}  // namespace kuramoto
