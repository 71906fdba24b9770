#pragma once

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "qsearch/numerics.hpp"

namespace qsearch {

/// Reduced four-amplitude model of parallel repeated search. Per-basis-state
/// amplitudes: b at (e1,e2), a at (e1, y!=e2), alpha at (x!=e1, y!=e2),
/// beta at (x!=e1, e2). The norm carries the class multiplicities.
struct RSReducedState {
    Complex b;
    Complex a;
    Complex alpha;
    Complex beta;
    double N = 0.0;

    double weighted_norm() const {
        const double m = N - 1.0;
        return std::norm(b) + m * std::norm(a) + m * m * std::norm(alpha) + m * std::norm(beta);
    }
};

/// One Z step, rederived from the two inversion-about-average phases rather
/// than transcribed from any printed matrix (the typeset recurrences drop a
/// factor of 2 in the beta line). Phase 1 searches y with both slices of x
/// fixed; phase 2 searches x with both slices of y fixed. The brute-force
/// state-vector run adjudicates this form.
inline RSReducedState rs_exact_step(const RSReducedState& s) {
    const double n = s.N;

    // phase 1, x = e1 slice: flip (e1,e2) then invert about the slice average
    const Complex av1 = ((n - 1.0) * s.a - s.b) / n;
    const Complex b1 = 2.0 * av1 + s.b;
    const Complex a1 = 2.0 * av1 - s.a;
    // phase 1, x != e1 slices: nothing flipped
    const Complex av2 = ((n - 1.0) * s.alpha + s.beta) / n;
    const Complex alpha1 = 2.0 * av2 - s.alpha;
    const Complex beta1 = 2.0 * av2 - s.beta;

    // phase 2, y = e2 slice: flip x = e1 then invert
    const Complex av3 = ((n - 1.0) * beta1 - b1) / n;
    const Complex b2 = 2.0 * av3 + b1;
    const Complex beta2 = 2.0 * av3 - beta1;
    // phase 2, y != e2 slices
    const Complex av4 = ((n - 1.0) * alpha1 - a1) / n;
    const Complex a2 = 2.0 * av4 + a1;
    const Complex alpha2 = 2.0 * av4 - alpha1;

    return RSReducedState{b2, a2, alpha2, beta2, s.N};
}

enum class RSBasis { Raw, Ortho };

/// The exact one-step 4x4 matrix, assembled by applying rs_exact_step to the
/// unit vectors (the step is linear). Raw acts on (b, a, alpha, beta); Ortho
/// conjugates with the exact orthonormalization S = diag(1, sqrt(N-1), N-1,
/// sqrt(N-1)), under which the step is exactly unitary.
inline DenseMatrix rs_matrix(double n_size, RSBasis basis) {
    require(n_size >= 4.0, "rs_matrix: N must be >= 4");
    DenseMatrix z(4, 4);
    for (std::size_t col = 0; col < 4; ++col) {
        RSReducedState unit{Complex{col == 0 ? 1.0 : 0.0, 0.0}, Complex{col == 1 ? 1.0 : 0.0, 0.0},
                            Complex{col == 2 ? 1.0 : 0.0, 0.0}, Complex{col == 3 ? 1.0 : 0.0, 0.0},
                            n_size};
        const RSReducedState image = rs_exact_step(unit);
        z(0, col) = image.b;
        z(1, col) = image.a;
        z(2, col) = image.alpha;
        z(3, col) = image.beta;
    }
    if (basis == RSBasis::Raw) return z;

    const double s = std::sqrt(n_size - 1.0);
    const double weights[4] = {1.0, s, s * s, s};
    DenseMatrix ortho(4, 4);
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) ortho(r, c) = z(r, c) * weights[r] / weights[c];
    return ortho;
}

/// Iterates rs_exact_step from the uniform initial classes (1/N each).
inline std::vector<RSReducedState> rs_trace(double n_size, int steps) {
    require(n_size >= 4.0 && is_power_of_two(n_size), "rs_trace: N must be a power of two >= 4");
    require(steps >= 0, "rs_trace: steps must be non-negative");

    const Complex init{1.0 / n_size, 0.0};
    std::vector<RSReducedState> trace;
    trace.reserve(static_cast<std::size_t>(steps) + 1);
    trace.push_back(RSReducedState{init, init, init, init, n_size});
    for (int i = 0; i < steps; ++i) {
        trace.push_back(rs_exact_step(trace.back()));
        if (std::abs(trace.back().weighted_norm() - 1.0) > 1e-9)
            throw std::logic_error("rs_trace: norm drifted beyond 1e-9");
    }
    return trace;
}

/// floor(pi sqrt(N) / (2 sqrt(2))), the parallel-search peak step count.
inline int optimal_steps_rs(double n_size) {
    require(n_size >= 4.0, "optimal_steps_rs: N must be >= 4");
    return static_cast<int>(std::floor(kPi * std::sqrt(n_size) / (2.0 * std::sqrt(2.0))));
}

struct RSClosedForm {
    double b;
    double a;
    double alpha;
};

/// Leading closed-form solution of the continuous approximation:
///   b(t)     = 1/2 - cos(2 sqrt(2) t / sqrt(N)) / 2
///   a(t)     = sin(2 sqrt(2) t / sqrt(N)) / sqrt(2N) + cos(2 sqrt(2) t / sqrt(N)) / N
///   alpha(t) = cos(2 t / sqrt(N)) / (2N) + 1/(2N)
inline RSClosedForm rs_ode_closed_form(double n_size, double t) {
    require(n_size >= 4.0, "rs_ode_closed_form: N must be >= 4");
    const double t1 = kPi * std::sqrt(n_size) / (2.0 * std::sqrt(2.0));
    require(t >= 0.0 && t <= t1 + 1.0, "rs_ode_closed_form: t outside [0, t1 + 1]");

    const double phase = 2.0 * std::sqrt(2.0) * t / std::sqrt(n_size);
    RSClosedForm out;
    out.b = 0.5 - 0.5 * std::cos(phase);
    out.a = std::sin(phase) / std::sqrt(2.0 * n_size) + std::cos(phase) / n_size;
    out.alpha = std::cos(2.0 * t / std::sqrt(n_size)) / (2.0 * n_size) + 1.0 / (2.0 * n_size);
    return out;
}

/// Paired-step matrix B = A1^2 - I in the orthonormal basis. Checks the
/// entrywise distance to the limiting pattern (4/sqrt(N)) K, where K has
/// +1 at (1,2) and (2,3), -1 at (2,1) and (3,2), zeros elsewhere; every
/// entry must sit within 100/N of the pattern.
inline DenseMatrix rs_paired_matrix(double n_size) {
    require(n_size >= 4.0, "rs_paired_matrix: N must be >= 4");
    const DenseMatrix a1 = rs_matrix(n_size, RSBasis::Ortho);
    const DenseMatrix b = a1 * a1 - DenseMatrix::identity(4);

    DenseMatrix pattern(4, 4);
    const double g = 4.0 / std::sqrt(n_size);
    pattern(0, 1) = g;
    pattern(1, 0) = -g;
    pattern(1, 2) = g;
    pattern(2, 1) = -g;

    double worst = 0.0;
    std::size_t worst_r = 0;
    std::size_t worst_c = 0;
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            const double dev = std::abs(b(r, c) - pattern(r, c));
            if (dev > worst) {
                worst = dev;
                worst_r = r;
                worst_c = c;
            }
        }
    }
    if (worst > 100.0 / n_size) {
        std::ostringstream msg;
        msg << "rs_paired_matrix: entry (" << worst_r + 1 << "," << worst_c + 1
            << ") deviates from the limit pattern by " << worst << " > " << 100.0 / n_size;
        throw std::logic_error(msg.str());
    }
    return b;
}

/// The 3x3 generator of the paired-step limit: (1,2) = -i/sqrt(2),
/// (2,1) = i/sqrt(2), (2,3) = -i/sqrt(2), (3,2) = i/sqrt(2).
inline DenseMatrix rs_limit_generator() {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    DenseMatrix d(3, 3);
    d(0, 1) = Complex{0.0, -inv_sqrt2};
    d(1, 0) = Complex{0.0, inv_sqrt2};
    d(1, 2) = Complex{0.0, -inv_sqrt2};
    d(2, 1) = Complex{0.0, inv_sqrt2};
    return d;
}

/// Computes exp(pi i D) through the matrix exponential and checks it equals
/// both I - 2 D^2 and the explicit matrix [[0,0,1],[0,-1,0],[1,0,0]] to
/// 1e-10 (D^3 = D makes the series collapse). Returns the exponential.
inline DenseMatrix rs_limit_matrix() {
    const DenseMatrix d = rs_limit_generator();
    if (max_abs_diff(mat_pow(d, 3), d) > 1e-12)
        throw std::logic_error("rs_limit_matrix: D^3 != D");

    const DenseMatrix id = scaled(d, Complex{0.0, 1.0});
    const DenseMatrix e = mat_exp(id, kPi);

    const DenseMatrix from_square = DenseMatrix::identity(3) - scaled(mat_pow(d, 2), 2.0);
    if (max_abs_diff(e, from_square) > 1e-10)
        throw std::logic_error("rs_limit_matrix: exp(pi i D) != I - 2 D^2");

    DenseMatrix expected(3, 3);
    expected(0, 2) = 1.0;
    expected(1, 1) = -1.0;
    expected(2, 0) = 1.0;
    if (max_abs_diff(e, expected) > 1e-10)
        throw std::logic_error("rs_limit_matrix: exp(pi i D) differs from the explicit matrix");
    return e;
}

struct Theorem1Report {
    int peak_step = 0;
    double peak_prob = 0.0;
    double error_deficit = 0.0;
    double bound = 0.0;
    bool error_bound_ok = false;
};

/// Runs the reduced trace a little past the predicted peak and reports where
/// |b|^2 actually peaks and whether the deficit beats 10/sqrt(N).
inline Theorem1Report theorem1_check(double n_size) {
    require(n_size >= 16.0, "theorem1_check: N must be >= 16");
    const int steps = optimal_steps_rs(n_size) + 5;
    const std::vector<RSReducedState> trace = rs_trace(n_size, steps);

    Theorem1Report report;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const double prob = std::norm(trace[i].b);
        if (prob > report.peak_prob) {
            report.peak_prob = prob;
            report.peak_step = static_cast<int>(i);
        }
    }
    report.error_deficit = 1.0 - report.peak_prob;
    report.bound = 10.0 / std::sqrt(n_size);
    report.error_bound_ok = report.error_deficit <= report.bound;
    return report;
}

}  // namespace qsearch
