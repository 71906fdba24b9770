#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qsearch/numerics.hpp"
#include "qsearch/parallel_rs.hpp"

namespace qsearch {

/// (k+1)-dimensional reduced model of k simultaneous oracles: tridiagonal
/// matrix with 2 on the superdiagonal and -2/N on the subdiagonal. The
/// matrix acts on amplitudes ordered most-targets-first, (a_k, ..., a_0) --
/// the ordering under which the k=1 case reduces to the simple-search system
/// (da_k/dt = 2 a_{k-1} + ...). Public traces report (a_0, ..., a_k).
struct JacobiModel {
    int k = 0;
    double N = 0.0;
    double theta = 0.0;
    DenseMatrix matrix;
};

inline void require_k_guard(int k, double n_size) {
    require(k >= 1, "iterated model: k must be >= 1");
    require(n_size >= 4.0, "iterated model: N must be >= 4");
    require(static_cast<double>(k) <= std::sqrt(n_size) / 8.0,
            "iterated model: k exceeds sqrt(N)/8 guard");
}

inline JacobiModel jacobi_matrix(int k, double n_size) {
    require_k_guard(k, n_size);
    const std::size_t dim = static_cast<std::size_t>(k) + 1;
    JacobiModel model{k, n_size, kPi / (k + 2), DenseMatrix(dim, dim)};
    for (std::size_t i = 0; i + 1 < dim; ++i) {
        model.matrix(i, i + 1) = 2.0;
        model.matrix(i + 1, i) = -2.0 / n_size;
    }
    return model;
}

/// Which couplings the reduced generator carries. Jacobi is the strict
/// tridiagonal pattern above. FullCoupling adds 2^(j-i) at every upper
/// entry (i,j), generalizing the two-oracle generator whose first row reads
/// 0, 2, 4: at k=2 it reproduces that 3x3 exactly, and it matches the
/// state-vector-derived one-step generator to O(1/N) where strict Jacobi
/// misses the (1,3) entry by 4.
enum class ReducedVariant { Jacobi, FullCoupling };

inline DenseMatrix reduced_generator(int k, double n_size, ReducedVariant variant) {
    if (variant == ReducedVariant::Jacobi) return jacobi_matrix(k, n_size).matrix;
    require_k_guard(k, n_size);
    const std::size_t dim = static_cast<std::size_t>(k) + 1;
    DenseMatrix m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i + 1; j < dim; ++j) m(i, j) = std::ldexp(1.0, static_cast<int>(j - i));
    for (std::size_t i = 0; i + 1 < dim; ++i) m(i + 1, i) = -2.0 / n_size;
    return m;
}

/// Closed-form spectrum (4i/sqrt(N)) cos(m pi/(k+2)), m = 1..k+1, via the
/// tridiagonal Toeplitz formula. The set is symmetric under negation; the
/// zero eigenvalue appears whenever k is even. Cross-checked internally
/// against the explicitly generated +/- list.
inline CVector jacobi_eigenvalues(const JacobiModel& model) {
    const std::size_t dim = static_cast<std::size_t>(model.k) + 1;
    CVector values = tridiag_toeplitz_eigenvalues(Complex{-2.0 / model.N, 0.0}, Complex{2.0, 0.0}, dim);

    CVector expected(dim);
    const double scale = 4.0 / std::sqrt(model.N);
    for (std::size_t m = 1; m <= dim; ++m)
        expected[m - 1] = Complex{0.0, -scale * std::cos(static_cast<double>(m) * model.theta)};

    std::vector<bool> used(dim, false);
    for (const Complex& v : values) {
        bool matched = false;
        for (std::size_t j = 0; j < dim; ++j) {
            if (used[j]) continue;
            if (std::abs(v - expected[j]) <= 1e-12 * std::max(1.0, scale)) {
                used[j] = true;
                matched = true;
                break;
            }
        }
        if (!matched)
            throw std::logic_error("jacobi_eigenvalues: spectrum differs from the cos closed form");
    }
    return values;
}

namespace detail {

// Similarity D A D^{-1} = (2i/sqrt(N)) T with T the 0/1 symmetric
// tridiagonal matrix, d_p = (-i sqrt(N))^p (descending component order).
// T's eigenvectors are sines, so the propagator is evaluated in closed form.
inline CVector jacobi_solution_descending(int k, double n_size, double t) {
    const std::size_t dim = static_cast<std::size_t>(k) + 1;
    const double theta = kPi / (k + 2);
    const double qscale = std::sqrt(2.0 / (k + 2));
    const Complex step_factor{0.0, -std::sqrt(n_size)};  // -i sqrt(N)

    // w = D x0 with x0 = N^{-k/2} (1, ..., 1)
    CVector w(dim);
    Complex d{1.0, 0.0};
    const double init = std::pow(n_size, -0.5 * k);
    for (std::size_t p = 0; p < dim; ++p) {
        w[p] = d * init;
        d *= step_factor;
    }

    // z = Q^T w, rotate each mode, map back
    CVector z(dim, Complex{0.0, 0.0});
    for (std::size_t m = 1; m <= dim; ++m) {
        Complex sum{0.0, 0.0};
        for (std::size_t p = 1; p <= dim; ++p)
            sum += qscale * std::sin(static_cast<double>(p * m) * theta) * w[p - 1];
        const double freq = 4.0 / std::sqrt(n_size) * std::cos(static_cast<double>(m) * theta);
        z[m - 1] = sum * std::exp(Complex{0.0, freq * t});
    }

    CVector x(dim, Complex{0.0, 0.0});
    Complex dinv{1.0, 0.0};
    const Complex step_inv = 1.0 / step_factor;
    for (std::size_t p = 1; p <= dim; ++p) {
        Complex sum{0.0, 0.0};
        for (std::size_t m = 1; m <= dim; ++m)
            sum += qscale * std::sin(static_cast<double>(p * m) * theta) * z[m - 1];
        x[p - 1] = dinv * sum;
        dinv *= step_inv;
    }
    return x;
}

}  // namespace detail

/// Exact-in-time solution of the strict Jacobi Cauchy problem, reported in
/// ascending order (a_0, ..., a_k).
inline CVector jacobi_solution_at(int k, double n_size, double t) {
    require_k_guard(k, n_size);
    CVector x = detail::jacobi_solution_descending(k, n_size, t);
    std::reverse(x.begin(), x.end());
    return x;
}

/// Reduced-model trace: the Cauchy problem da/dt = A a from the uniform
/// initial vector N^{-k/2}(1,...,1), solved two independent ways
/// (eigendecomposition for the Jacobi variant, one-step resolvent powers for
/// FullCoupling; RK4 for both) and sampled at integer steps. States are
/// ascending (a_0, ..., a_k); the target amplitude a_k is the last entry.
struct IsTrace {
    int k = 0;
    double N = 0.0;
    ReducedVariant variant = ReducedVariant::Jacobi;
    std::vector<double> times;
    std::vector<CVector> states_exact;
    std::vector<CVector> states_rk4;
};

inline IsTrace is_reduced_trace(int k, double n_size, int steps,
                                ReducedVariant variant = ReducedVariant::Jacobi) {
    require_k_guard(k, n_size);
    require(steps >= 0, "is_reduced_trace: steps must be non-negative");
    const std::size_t dim = static_cast<std::size_t>(k) + 1;
    const DenseMatrix gen = reduced_generator(k, n_size, variant);

    IsTrace trace;
    trace.k = k;
    trace.N = n_size;
    trace.variant = variant;

    CVector x0(dim, Complex{std::pow(n_size, -0.5 * k), 0.0});
    if (variant == ReducedVariant::Jacobi) {
        for (int i = 0; i <= steps; ++i) {
            trace.times.push_back(i);
            trace.states_exact.push_back(jacobi_solution_at(k, n_size, i));
        }
    } else {
        const DenseMatrix propagator = mat_exp(gen, 1.0);
        CVector x = x0;  // descending order
        for (int i = 0; i <= steps; ++i) {
            trace.times.push_back(i);
            CVector ascending = x;
            std::reverse(ascending.begin(), ascending.end());
            trace.states_exact.push_back(ascending);
            x = mat_vec(propagator, x);
        }
    }

    IvpProblem ivp;
    ivp.system_matrix = gen;
    ivp.initial_state = x0;
    ivp.t_end = steps;
    ivp.step = 1.0;
    ivp.method = IvpMethod::Rk4;
    const VectorTrace rk = (steps > 0) ? integrate_ivp(ivp) : VectorTrace{{0.0}, {x0}};
    for (const CVector& state : rk.states) {
        CVector ascending = state;
        std::reverse(ascending.begin(), ascending.end());
        trace.states_rk4.push_back(ascending);
    }
    return trace;
}

inline double target_amplitude_abs(const IsTrace& trace, std::size_t step) {
    if (step >= trace.states_exact.size())
        throw std::out_of_range("target_amplitude_abs: step out of range");
    return std::abs(trace.states_exact[step].back());
}

/// Growth envelope from dropping every -2/N backreaction:
/// N^{-k/2} + 2^k N^{-k/2} t^k / k!.
inline double amplitude_upper_bound(int k, double n_size, double t) {
    require(k >= 1, "amplitude_upper_bound: k must be >= 1");
    require(t >= 0.0, "amplitude_upper_bound: t must be non-negative");
    const double base = std::pow(n_size, -0.5 * k);
    return base + base * std::pow(2.0 * t, k) / factorial(k);
}

/// Fixed-budget comparison at total time sqrt(N): the parallel model's
/// target probability |a_k(sqrt(N))|^2 against the sequential bound
/// (2/k)^{2k} (k searches of length sqrt(N)/k, each reaching amplitude
/// about 2/k). The target class has multiplicity 1, so |a_k|^2 is the
/// probability as-is.
struct BudgetComparison {
    int k = 0;
    double N = 0.0;
    double total_time = 0.0;
    double p_par = 0.0;
    double p_seq_bound = 0.0;
    double ratio = 0.0;
};

inline BudgetComparison compare_par_seq(int k, double n_size,
                                        ReducedVariant variant = ReducedVariant::Jacobi) {
    require(k >= 3, "compare_par_seq: k must be >= 3");
    require_k_guard(k, n_size);

    BudgetComparison cmp;
    cmp.k = k;
    cmp.N = n_size;
    cmp.total_time = std::sqrt(n_size);

    Complex a_k;
    if (variant == ReducedVariant::Jacobi) {
        a_k = jacobi_solution_at(k, n_size, cmp.total_time).back();
    } else {
        const DenseMatrix gen = reduced_generator(k, n_size, variant);
        const std::size_t dim = static_cast<std::size_t>(k) + 1;
        CVector x(dim, Complex{std::pow(n_size, -0.5 * k), 0.0});
        x = mat_vec(mat_exp(gen, cmp.total_time), x);
        a_k = x.front();  // descending order: target first
    }
    cmp.p_par = std::norm(a_k);
    cmp.p_seq_bound = std::pow(2.0 / k, 2.0 * k);
    cmp.ratio = cmp.p_par / cmp.p_seq_bound;
    return cmp;
}

/// Pairwise schedule for a k-oracle chain: k-1 repeated-search runs over the
/// pairs (f_i, f_{i+1}), each of optimal_steps_rs(N) simultaneous queries.
/// Each run resolves two targets and consecutive runs overlap by one oracle;
/// scheduling disjoint pairs instead needs only ceil(k/2) runs, which is the
/// aggregate paired_total_queries records (the two accountings agree at k=2).
struct SchedulePlan {
    int num_runs = 0;
    int queries_per_run = 0;
    long long total_queries = 0;
    long long paired_total_queries = 0;
    double error_bound = 0.0;
};

inline SchedulePlan pairwise_is_schedule(int k, double n_size) {
    require(k >= 2, "pairwise_is_schedule: k must be >= 2");
    require(n_size >= 4.0, "pairwise_is_schedule: N must be >= 4");

    SchedulePlan plan;
    plan.num_runs = k - 1;
    plan.queries_per_run = optimal_steps_rs(n_size);
    plan.total_queries = static_cast<long long>(plan.num_runs) * plan.queries_per_run;
    plan.paired_total_queries = static_cast<long long>((k + 1) / 2) * plan.queries_per_run;
    plan.error_bound = 10.0 * (k - 1) / std::sqrt(n_size);
    return plan;
}

}  // namespace qsearch
