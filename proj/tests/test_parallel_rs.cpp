#include <catch2/catch_amalgamated.hpp>

#include "qsearch/parallel_rs.hpp"
#include "qsearch/grover.hpp"
#include "qsearch/statevector.hpp"
#include "test_helpers.hpp"

using namespace qsearch;

TEST_CASE("rs_exact_step") {
    // N = 4 uniform input matches the brute-force run after one step
    const Complex q{0.25, 0.0};
    const RSReducedState stepped = rs_exact_step({q, q, q, q, 4.0});
    const auto full = rs_full_run(SearchInstance{2, 3, 1}, 1);
    CHECK(std::abs(stepped.b - full[1].b) < 1e-12);
    CHECK(std::abs(stepped.a - full[1].a) < 1e-12);
    CHECK(std::abs(stepped.alpha - full[1].alpha) < 1e-12);
    CHECK(std::abs(stepped.beta - full[1].beta) < 1e-12);
    CHECK(std::abs(stepped.weighted_norm() - 1.0) < 1e-12);

    // leading-order difference b1 - b0 = 2 a + 4 alpha - 2 beta + O(1/N)
    const double big = 1048576.0;
    const Complex u{1.0 / big, 0.0};
    const RSReducedState wide = rs_exact_step({u, u, u, u, big});
    const Complex leading = 2.0 * u + 4.0 * u - 2.0 * u;
    CHECK(std::abs((wide.b - u) - leading) < 1e-10);

    const RSReducedState zero = rs_exact_step({{}, {}, {}, {}, 64.0});
    CHECK(std::abs(zero.b) == 0.0);
    CHECK(std::abs(zero.a) == 0.0);
    CHECK(std::abs(zero.alpha) == 0.0);
    CHECK(std::abs(zero.beta) == 0.0);
}

TEST_CASE("rs_matrix") {
    const double big = 1048576.0;

    const DenseMatrix ortho = rs_matrix(big, RSBasis::Ortho);
    CHECK(std::abs(ortho(0, 1) - Complex{2.0 / std::sqrt(big), 0.0}) <= 10.0 / big);

    const DenseMatrix raw = rs_matrix(big, RSBasis::Raw);
    CHECK(std::abs(raw(1, 0) - Complex{-2.0 / big, 0.0}) <= 1e-9);

    // change of basis with the exact orthonormalization weights
    const double s = std::sqrt(big - 1.0);
    DenseMatrix scale(4, 4), unscale(4, 4);
    const double w[4] = {1.0, s, s * s, s};
    for (std::size_t i = 0; i < 4; ++i) {
        scale(i, i) = w[i];
        unscale(i, i) = 1.0 / w[i];
    }
    CHECK(max_abs_diff(ortho, scale * raw * unscale) < 1e-12);

    // consistency: the assembled matrix reproduces the factored step
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const RSReducedState state{{unit(rng), unit(rng)}, {unit(rng), unit(rng)},
                               {unit(rng), unit(rng)}, {unit(rng), unit(rng)}, 1024.0};
    const RSReducedState direct = rs_exact_step(state);
    const CVector via_matrix = mat_vec(rs_matrix(1024.0, RSBasis::Raw),
                                       CVector{state.b, state.a, state.alpha, state.beta});
    CHECK(std::abs(direct.b - via_matrix[0]) < 1e-12);
    CHECK(std::abs(direct.a - via_matrix[1]) < 1e-12);
    CHECK(std::abs(direct.alpha - via_matrix[2]) < 1e-12);
    CHECK(std::abs(direct.beta - via_matrix[3]) < 1e-12);
}

TEST_CASE("ortho step is unitary for all sizes") {
    for (double n : {4.0, 16.0, 256.0, 1024.0, 1048576.0}) {
        const DenseMatrix a1 = rs_matrix(n, RSBasis::Ortho);
        CHECK(max_abs_diff(adjoint(a1) * a1, DenseMatrix::identity(4)) < 1e-10);
    }
}

TEST_CASE("rs_trace") {
    const auto trace = rs_trace(1024.0, optimal_steps_rs(1024.0) + 5);
    const Complex init{1.0 / 1024.0, 0.0};
    CHECK(trace[0].b == init);
    CHECK(trace[0].a == init);
    CHECK(trace[0].alpha == init);
    CHECK(trace[0].beta == init);

    int best = 0;
    double best_prob = 0.0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        if (std::norm(trace[i].b) > best_prob) {
            best_prob = std::norm(trace[i].b);
            best = static_cast<int>(i);
        }
    }
    CHECK(std::abs(best - 35) <= 2);
    CHECK(best_prob >= 1.0 - 10.0 / 32.0);

    for (const auto& s : trace) CHECK(std::abs(s.weighted_norm() - 1.0) < 1e-9);
}

TEST_CASE("optimal_steps_rs and speedup") {
    CHECK(optimal_steps_rs(1024.0) == 35);
    CHECK(optimal_steps_rs(1048576.0) == 1137);

    CHECK(std::abs(2.0 * optimal_steps_simple(1048576.0) / optimal_steps_rs(1048576.0) -
                   std::sqrt(2.0)) <= 0.01);
    for (int e = 10; e <= 20; ++e) {
        const double n = std::ldexp(1.0, e);
        const double speedup = 2.0 * optimal_steps_simple(n) / optimal_steps_rs(n);
        CHECK(speedup >= std::sqrt(2.0) - 0.05);
        CHECK(speedup <= std::sqrt(2.0) + 0.05);
    }
}

TEST_CASE("rs_ode_closed_form") {
    const auto start = rs_ode_closed_form(1024.0, 0.0);
    CHECK(std::abs(start.b) < 1e-15);
    CHECK(std::abs(start.a - 1.0 / 1024.0) < 1e-15);
    CHECK(std::abs(start.alpha - 1.0 / 1024.0) < 1e-15);

    const double t1 = kPi * std::sqrt(1024.0) / (2.0 * std::sqrt(2.0));
    CHECK(std::abs(rs_ode_closed_form(1024.0, t1).b - 1.0) < 1e-12);

    const double n = 65536.0;
    const auto trace = rs_trace(n, optimal_steps_rs(n));
    double dev = 0.0;
    for (int i = 0; i <= optimal_steps_rs(n); ++i)
        dev = std::max(dev, std::abs(trace[i].b.real() - rs_ode_closed_form(n, i).b));
    CHECK(std::sqrt(n) * dev <= 10.0);
}

TEST_CASE("rs_paired_matrix") {
    const double big = 1048576.0;
    const DenseMatrix b = rs_paired_matrix(big);  // throws if outside the 100/N envelope
    CHECK(std::abs(b(0, 1) - Complex{4.0 / std::sqrt(big), 0.0}) <= 100.0 / big);
    CHECK(std::abs(b(3, 3)) <= 100.0 / big);
    CHECK(std::abs(b(3, 0)) <= 100.0 / big);

    // scaled entries converge between sizes
    const DenseMatrix b10 = rs_paired_matrix(1024.0);
    const DenseMatrix b12 = rs_paired_matrix(4096.0);
    CHECK(max_abs_diff(scaled(b10, std::sqrt(1024.0)), scaled(b12, std::sqrt(4096.0))) <=
          100.0 / 1024.0);

    // spectral check: eigenvalues of the 3x3 restriction of
    // B / (4 sqrt(2) i / sqrt(N)) approach {0, 1, -1}
    for (double n : {16384.0, 1048576.0}) {
        const DenseMatrix paired = rs_paired_matrix(n);
        DenseMatrix restricted(3, 3);
        const Complex divisor = Complex{0.0, 4.0 * std::sqrt(2.0) / std::sqrt(n)};
        for (std::size_t r = 0; r < 3; ++r)
            for (std::size_t c = 0; c < 3; ++c) restricted(r, c) = paired(r, c) / divisor;
        const CVector eig = testutil::dense_eigenvalues(restricted);
        double worst = 1e300;
        for (const Complex& target : {Complex{0.0, 0.0}, Complex{1.0, 0.0}, Complex{-1.0, 0.0}}) {
            double best = 1e300;
            for (const Complex& v : eig) best = std::min(best, std::abs(v - target));
            worst = std::min(worst, best);
            CHECK(best <= 10.0 / std::sqrt(n));
        }
    }
}

TEST_CASE("rs_limit_matrix") {
    const DenseMatrix lim = rs_limit_matrix();
    const CVector mapped = mat_vec(lim, CVector{{}, {}, {1.0, 0.0}});
    CHECK(std::abs(mapped[0] - Complex{1.0, 0.0}) < 1e-10);
    CHECK(std::abs(mapped[1]) < 1e-10);
    CHECK(std::abs(mapped[2]) < 1e-10);

    CHECK(max_abs_diff(lim * lim, DenseMatrix::identity(3)) < 1e-10);
    const DenseMatrix d = rs_limit_generator();
    CHECK(max_abs_diff(mat_pow(d, 3), d) < 1e-12);
}

TEST_CASE("theorem1_check") {
    const Theorem1Report small = theorem1_check(1024.0);
    CHECK(small.error_bound_ok);

    const Theorem1Report big = theorem1_check(1048576.0);
    CHECK(big.error_deficit <= 10.0 / 1024.0);
    CHECK(std::abs(big.peak_step - 1137) <= 2);

    // deficit scaled by sqrt(N) stays bounded and of one order across sizes
    double scaled_deficits[3];
    int idx = 0;
    for (double n : {1024.0, 16384.0, 262144.0}) {
        const Theorem1Report rep = theorem1_check(n);
        scaled_deficits[idx++] = rep.error_deficit * std::sqrt(n);
        CHECK(rep.error_deficit * std::sqrt(n) <= 10.0);
    }
    (void)scaled_deficits;
}

TEST_CASE("rs oracle equivalence across placements") {
    std::mt19937_64 rng(202);
    for (int n = 2; n <= 5; ++n) {
        const std::size_t dim = std::size_t{1} << n;
        const int steps = optimal_steps_rs(static_cast<double>(dim)) + 3;
        const auto reduced = rs_trace(static_cast<double>(dim), steps);
        for (int trial = 0; trial < 4; ++trial) {
            const auto full = rs_full_run(SearchInstance{n, rng() % dim, rng() % dim}, steps);
            for (std::size_t i = 0; i < full.size(); ++i) {
                CHECK(std::abs(full[i].b - reduced[i].b) < 1e-12);
                CHECK(std::abs(full[i].beta - reduced[i].beta) < 1e-12);
            }
        }
    }
}
