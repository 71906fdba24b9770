#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qsearch/numerics.hpp"

namespace qsearch {

/// Reduced two-amplitude model of simple search: b is the target amplitude,
/// a the common non-target amplitude, N the search-space size. Kept complex
/// for uniformity with the other reduced models even though the dynamics
/// stays real.
struct GroverReducedState {
    Complex b;
    Complex a;
    double N = 0.0;

    double weighted_norm() const {
        return std::norm(b) + (N - 1.0) * std::norm(a);
    }
};

/// Coefficient matrix of the one-step difference system: the step below is
/// state + matrix*state with this matrix.
inline DenseMatrix grover_difference_matrix(double n_size) {
    DenseMatrix m(2, 2);
    m(0, 0) = -2.0 / n_size;
    m(0, 1) = 2.0 * (1.0 - 1.0 / n_size);
    m(1, 0) = -2.0 / n_size;
    m(1, 1) = -2.0 / n_size;
    return m;
}

/// One iteration of the reduced map:
///   b' = (1 - 2/N) b + 2 (1 - 1/N) a
///   a' = -(2/N) b + (1 - 2/N) a
/// Evaluated as state + increment with the same operation order as a unit
/// explicit-Euler step on grover_difference_matrix, so the two routes agree
/// bit for bit.
inline GroverReducedState grover_step(const GroverReducedState& s) {
    const Complex cbb{-2.0 / s.N, 0.0};
    const Complex cba{2.0 * (1.0 - 1.0 / s.N), 0.0};
    const Complex cab{-2.0 / s.N, 0.0};
    const Complex caa{-2.0 / s.N, 0.0};

    Complex db = cbb * s.b;
    db += cba * s.a;
    Complex da = cab * s.b;
    da += caa * s.a;
    return GroverReducedState{s.b + 1.0 * db, s.a + 1.0 * da, s.N};
}

/// Iterates grover_step from a0 = b0 = 1/sqrt(N). Entry 0 is the initial
/// state. Checks the weighted norm stays within 1e-9 of 1 along the way.
inline std::vector<GroverReducedState> grover_trace(double n_size, int steps) {
    require(n_size >= 2.0 && is_power_of_two(n_size), "grover_trace: N must be a power of two >= 2");
    require(steps >= 0, "grover_trace: steps must be non-negative");

    const double amp = 1.0 / std::sqrt(n_size);
    std::vector<GroverReducedState> trace;
    trace.reserve(static_cast<std::size_t>(steps) + 1);
    trace.push_back(GroverReducedState{Complex{amp, 0.0}, Complex{amp, 0.0}, n_size});
    for (int i = 0; i < steps; ++i) {
        trace.push_back(grover_step(trace.back()));
        if (std::abs(trace.back().weighted_norm() - 1.0) > 1e-9)
            throw std::logic_error("grover_trace: norm drifted beyond 1e-9");
    }
    return trace;
}

/// floor(pi sqrt(N) / 4), the step count at which the target amplitude peaks.
inline int optimal_steps_simple(double n_size) {
    require(n_size >= 2.0, "optimal_steps_simple: N must be >= 2");
    return static_cast<int>(std::floor(kPi * std::sqrt(n_size) / 4.0));
}

/// Continuous-time parameters: delta is the Euler step of the approximating
/// ODE and omega = 2/(delta sqrt(N)) its angular frequency. delta defaults
/// to 1 so one time unit equals one iteration of the recurrence.
struct GroverOdeParams {
    double N = 0.0;
    double delta = 1.0;
    double omega = 0.0;
};

inline GroverOdeParams make_grover_ode_params(double n_size, double delta = 1.0) {
    require(n_size >= 2.0 && is_power_of_two(n_size), "grover ode: N must be a power of two >= 2");
    require(delta > 0.0, "grover ode: delta must be positive");
    return GroverOdeParams{n_size, delta, 2.0 / (delta * std::sqrt(n_size))};
}

/// Closed-form target amplitude of the ODE approximation:
/// b(t) = sin(omega t) + cos(omega t)/sqrt(N), valid on one oscillation.
inline double grover_ode_closed_form(const GroverOdeParams& p, double t) {
    require(t >= 0.0 && t <= 2.0 * kPi / p.omega + 1e-12,
            "grover_ode_closed_form: t outside the one-oscillation guard");
    return std::sin(p.omega * t) + std::cos(p.omega * t) / std::sqrt(p.N);
}

/// Peak location of the closed form: t0 = pi sqrt(N) delta / 4 - delta / 2.
inline double grover_ode_peak_time(const GroverOdeParams& p) {
    return kPi * std::sqrt(p.N) * p.delta / 4.0 - p.delta / 2.0;
}

/// Locates the true maximizer by bisection on the sign change of the
/// derivative, bracketing around t0. The analytic offset from t0 is
/// delta/(6N) + O(delta/N^2).
inline double grover_ode_locate_peak(const GroverOdeParams& p) {
    const double t0 = grover_ode_peak_time(p);
    auto deriv = [&](double t) {
        return p.omega * (std::cos(p.omega * t) - std::sin(p.omega * t) / std::sqrt(p.N));
    };
    double lo = t0 - p.delta;
    double hi = t0 + p.delta;
    if (!(deriv(lo) > 0.0 && deriv(hi) < 0.0))
        throw std::logic_error("grover_ode_locate_peak: derivative does not change sign near t0");
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        (deriv(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// |b|^2 at the given step of a reduced trace.
inline double success_probability(const std::vector<GroverReducedState>& trace, std::size_t step) {
    if (step >= trace.size()) throw std::out_of_range("success_probability: step out of range");
    return std::norm(trace[step].b);
}

/// First step index attaining the maximum of |b|^2.
inline int peak_step(const std::vector<GroverReducedState>& trace) {
    int best = 0;
    double best_prob = std::norm(trace[0].b);
    for (std::size_t i = 1; i < trace.size(); ++i) {
        const double prob = std::norm(trace[i].b);
        if (prob > best_prob) {
            best_prob = prob;
            best = static_cast<int>(i);
        }
    }
    return best;
}

}  // namespace qsearch
