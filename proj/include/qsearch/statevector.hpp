#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "qsearch/numerics.hpp"

namespace qsearch {

/// Target placement for a search instance: e1 is the solution index of the
/// first (x) register, e2 of the second (y) register. e2 is ignored for
/// single-register (simple search) runs.
struct SearchInstance {
    int qubits = 0;
    std::size_t e1 = 0;
    std::size_t e2 = 0;
};

/// Brute-force state vector over one or two n-qubit registers. Two-register
/// basis states are indexed as x * 2^n + y (x outer, y inner). Serves as the
/// ground-truth oracle for every reduced amplitude model.
class StateVector {
public:
    StateVector(int qubits, int registers)
        : qubits_(qubits), registers_(registers) {
        require(registers == 1 || registers == 2, "StateVector: registers must be 1 or 2");
        if (registers == 1)
            require(qubits >= 1 && qubits <= 13, "StateVector: single register needs 1 <= n <= 13");
        else
            require(qubits >= 1 && qubits <= 10, "StateVector: double register needs 1 <= n <= 10");
        amps_.assign(std::size_t{1} << (qubits * registers), Complex{0.0, 0.0});
    }

    int qubits() const { return qubits_; }
    int registers() const { return registers_; }
    std::size_t register_dim() const { return std::size_t{1} << qubits_; }
    std::size_t dim() const { return amps_.size(); }

    CVector& amps() { return amps_; }
    const CVector& amps() const { return amps_; }

    double total_probability() const {
        double sum = 0.0;
        for (const Complex& z : amps_) sum += std::norm(z);
        return sum;
    }

private:
    int qubits_;
    int registers_;
    CVector amps_;
};

/// Equal superposition over the joint basis; every amplitude N^(-registers/2).
inline StateVector uniform_state(int qubits, int registers) {
    StateVector s(qubits, registers);
    const double amp = 1.0 / std::sqrt(static_cast<double>(s.dim()));
    for (Complex& z : s.amps()) z = amp;
    return s;
}

/// Oracle query as conditional phase inversion: negates the amplitude of
/// every basis index the predicate marks. Norm preserved exactly.
template <typename Pred>
void apply_phase_flip(StateVector& s, Pred&& marked) {
    CVector& a = s.amps();
    for (std::size_t i = 0; i < a.size(); ++i)
        if (marked(i)) a[i] = -a[i];
}

/// Inversion about average on one register: within each slice (the other
/// register held fixed) every amplitude becomes 2*mean - amplitude.
inline void apply_diffusion(StateVector& s, int reg) {
    require(reg >= 0 && reg < s.registers(), "apply_diffusion: register out of range");
    CVector& a = s.amps();
    const std::size_t n = s.register_dim();

    if (s.registers() == 1) {
        Complex mean{0.0, 0.0};
        for (const Complex& z : a) mean += z;
        mean /= static_cast<double>(a.size());
        for (Complex& z : a) z = 2.0 * mean - z;
        return;
    }

    if (reg == 1) {
        // inner register: contiguous slices of length n
        for (std::size_t x = 0; x < n; ++x) {
            const std::size_t base = x * n;
            Complex mean{0.0, 0.0};
            for (std::size_t y = 0; y < n; ++y) mean += a[base + y];
            mean /= static_cast<double>(n);
            for (std::size_t y = 0; y < n; ++y) a[base + y] = 2.0 * mean - a[base + y];
        }
    } else {
        // outer register: stride-n slices
        for (std::size_t y = 0; y < n; ++y) {
            Complex mean{0.0, 0.0};
            for (std::size_t x = 0; x < n; ++x) mean += a[x * n + y];
            mean /= static_cast<double>(n);
            for (std::size_t x = 0; x < n; ++x) a[x * n + y] = 2.0 * mean - a[x * n + y];
        }
    }
}

inline std::vector<double> measure_distribution(const StateVector& s) {
    std::vector<double> p(s.dim());
    for (std::size_t i = 0; i < s.dim(); ++i) p[i] = std::norm(s.amps()[i]);
    return p;
}

/// Per-step amplitude classes of a simple-search run.
struct GroverAmplitudes {
    Complex target;
    Complex rest;
};

/// Per-step amplitude classes of a repeated-search run: b at (e1,e2),
/// a at (e1, y != e2), alpha at (x != e1, y != e2), beta at (x != e1, e2).
struct RSAmplitudes {
    Complex b;
    Complex a;
    Complex alpha;
    Complex beta;
};

namespace detail {

inline constexpr double kClassTol = 1e-12;

inline GroverAmplitudes extract_grover_classes(const StateVector& s, std::size_t target) {
    const CVector& a = s.amps();
    GroverAmplitudes out{a[target], Complex{0.0, 0.0}};
    const std::size_t ref = (target == 0) ? 1 : 0;
    out.rest = a[ref];
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (i == target) continue;
        if (std::abs(a[i] - out.rest) > kClassTol)
            throw std::logic_error("grover_full_run: non-target amplitudes diverged");
    }
    return out;
}

inline RSAmplitudes extract_rs_classes(const StateVector& s, const SearchInstance& inst) {
    const CVector& amps = s.amps();
    const std::size_t n = s.register_dim();
    const std::size_t xr = (inst.e1 == 0) ? 1 : 0;  // reference non-target x
    const std::size_t yr = (inst.e2 == 0) ? 1 : 0;  // reference non-target y

    RSAmplitudes out;
    out.b = amps[inst.e1 * n + inst.e2];
    out.a = amps[inst.e1 * n + yr];
    out.alpha = amps[xr * n + yr];
    out.beta = amps[xr * n + inst.e2];

    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            const Complex value = amps[x * n + y];
            const Complex expected = (x == inst.e1)
                                         ? ((y == inst.e2) ? out.b : out.a)
                                         : ((y == inst.e2) ? out.beta : out.alpha);
            if (std::abs(value - expected) > kClassTol)
                throw std::logic_error("rs_full_run: amplitude class symmetry violated");
        }
    }
    return out;
}

}  // namespace detail

/// Iterates the simple-search step (phase flip at e1, then diffusion) from
/// the uniform state, recording the target amplitude b and the common
/// non-target amplitude a per step. Entry 0 is the initial state.
inline std::vector<GroverAmplitudes> grover_full_run(const SearchInstance& inst, int steps) {
    StateVector s = uniform_state(inst.qubits, 1);
    require(inst.e1 < s.dim(), "grover_full_run: target out of range");

    std::vector<GroverAmplitudes> trace;
    trace.reserve(static_cast<std::size_t>(steps) + 1);
    trace.push_back(detail::extract_grover_classes(s, inst.e1));
    for (int i = 0; i < steps; ++i) {
        apply_phase_flip(s, [&](std::size_t idx) { return idx == inst.e1; });
        apply_diffusion(s, 0);
        trace.push_back(detail::extract_grover_classes(s, inst.e1));
    }
    return trace;
}

/// One Z step of the parallel repeated search on the two-register state:
/// phase flip on {(x,y) = (e1,e2)}, diffusion on y, phase flip on {x = e1},
/// diffusion on x.
inline void apply_rs_step(StateVector& s, const SearchInstance& inst) {
    const std::size_t n = s.register_dim();
    const std::size_t joint = inst.e1 * n + inst.e2;
    apply_phase_flip(s, [&](std::size_t idx) { return idx == joint; });
    apply_diffusion(s, 1);
    apply_phase_flip(s, [&](std::size_t idx) { return idx / n == inst.e1; });
    apply_diffusion(s, 0);
}

/// Iterates the Z step from the uniform two-register state, recording the
/// four amplitude classes per step. Entry 0 is the initial state.
inline std::vector<RSAmplitudes> rs_full_run(const SearchInstance& inst, int steps) {
    StateVector s = uniform_state(inst.qubits, 2);
    const std::size_t n = s.register_dim();
    require(inst.e1 < n && inst.e2 < n, "rs_full_run: target out of range");
    require(n >= 2, "rs_full_run: need at least 1 qubit per register");

    std::vector<RSAmplitudes> trace;
    trace.reserve(static_cast<std::size_t>(steps) + 1);
    trace.push_back(detail::extract_rs_classes(s, inst));
    for (int i = 0; i < steps; ++i) {
        apply_rs_step(s, inst);
        trace.push_back(detail::extract_rs_classes(s, inst));
    }
    return trace;
}

}  // namespace qsearch
