#include <catch2/catch_amalgamated.hpp>

#include "qsearch/grover.hpp"

using namespace qsearch;

TEST_CASE("grover_step") {
    // N = 4 from the uniform reduced state lands exactly on the target
    const GroverReducedState uniform{Complex{0.5, 0.0}, Complex{0.5, 0.0}, 4.0};
    const GroverReducedState next = grover_step(uniform);
    CHECK(std::abs(next.b - Complex{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(next.a) < 1e-15);

    // large-N sanity: b' = 3/sqrt(N) - O(N^{-3/2})
    const double big = 1048576.0;
    const double amp = 1.0 / std::sqrt(big);
    const GroverReducedState wide = grover_step({Complex{amp, 0.0}, Complex{amp, 0.0}, big});
    CHECK(std::abs(wide.b.real() - 3.0 / std::sqrt(big)) < 1e-4);

    // (a, b) = (0, 1) is not a fixed point: one step gives (1 - 2/N, -2/N)
    const GroverReducedState peak{Complex{1.0, 0.0}, Complex{0.0, 0.0}, 64.0};
    const GroverReducedState after = grover_step(peak);
    CHECK(std::abs(after.b - Complex{1.0 - 2.0 / 64.0, 0.0}) < 1e-15);
    CHECK(std::abs(after.a - Complex{-2.0 / 64.0, 0.0}) < 1e-15);

    // norm preserved
    CHECK(std::abs(after.weighted_norm() - 1.0) < 1e-12);
}

TEST_CASE("grover_trace") {
    CHECK(std::abs(grover_trace(4.0, 1)[1].b - Complex{1.0, 0.0}) < 1e-12);

    const auto trace = grover_trace(1024.0, 100);
    int best = 0;
    double best_prob = 0.0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        if (std::norm(trace[i].b) > best_prob) {
            best_prob = std::norm(trace[i].b);
            best = static_cast<int>(i);
        }
    }
    CHECK(best == 25);
    CHECK(1.0 - std::norm(trace[25].b) <= 10.0 / 1024.0);

    for (const auto& s : trace) CHECK(std::abs(s.weighted_norm() - 1.0) < 1e-9);

    CHECK_THROWS_AS(grover_trace(48.0, 3), std::invalid_argument);   // not a power of two
    CHECK_THROWS_AS(grover_trace(1024.0, -1), std::invalid_argument);
}

TEST_CASE("optimal_steps_simple") {
    CHECK(optimal_steps_simple(4.0) == 1);
    CHECK(optimal_steps_simple(1024.0) == 25);
    CHECK(optimal_steps_simple(1048576.0) == 804);
}

TEST_CASE("peak location across sizes") {
    for (int e = 4; e <= 20; ++e) {
        const double n = std::ldexp(1.0, e);
        const int opt = optimal_steps_simple(n);
        const auto trace = grover_trace(n, opt + 5);
        CHECK(std::abs(peak_step(trace) - opt) <= 1);
    }
}

TEST_CASE("grover_ode_closed_form") {
    const auto params = make_grover_ode_params(1024.0);
    CHECK(std::abs(grover_ode_closed_form(params, 0.0) - 1.0 / 32.0) < 1e-15);

    const double t0 = grover_ode_peak_time(params);
    CHECK(grover_ode_closed_form(params, t0) >= 1.0 - 1.0 / 1024.0);

    // the bisected maximizer sits within delta/(4N) of t0
    for (double n : {1024.0, 65536.0, 1048576.0}) {
        const auto p = make_grover_ode_params(n);
        const double located = grover_ode_locate_peak(p);
        CHECK(std::abs(located - grover_ode_peak_time(p)) <= p.delta / (4.0 * n) + 1e-9);
    }

    CHECK_THROWS_AS(grover_ode_closed_form(params, -1.0), std::invalid_argument);
}

TEST_CASE("closed form tracks the recurrence") {
    // shared constant C <= 5 on sqrt(N) * max deviation across sizes
    for (double n : {4096.0, 65536.0, 1048576.0}) {
        const auto params = make_grover_ode_params(n);
        const int t1 = optimal_steps_simple(n);
        const auto trace = grover_trace(n, t1);
        double dev = 0.0;
        for (int i = 0; i <= t1; ++i)
            dev = std::max(dev, std::abs(trace[i].b.real() - grover_ode_closed_form(params, i)));
        CHECK(std::sqrt(n) * dev <= 5.0);
    }
}

TEST_CASE("euler correspondence is exact") {
    const double n = 256.0;
    IvpProblem p;
    p.system_matrix = grover_difference_matrix(n);
    const double amp = 1.0 / std::sqrt(n);
    p.initial_state = {Complex{amp, 0.0}, Complex{amp, 0.0}};
    p.t_end = 10.0;
    p.step = 1.0;
    p.method = IvpMethod::ExplicitEuler;
    const VectorTrace euler = integrate_ivp(p);

    const auto recurrence = grover_trace(n, 10);
    for (std::size_t i = 0; i <= 10; ++i) {
        CHECK(euler.states[i][0] == recurrence[i].b);  // bitwise
        CHECK(euler.states[i][1] == recurrence[i].a);
    }
}

TEST_CASE("success_probability") {
    const auto trace = grover_trace(64.0, optimal_steps_simple(64.0));
    CHECK(std::abs(success_probability(trace, 0) - 1.0 / 64.0) < 1e-15);
    CHECK(success_probability(trace, optimal_steps_simple(64.0)) >= 1.0 - 10.0 / 64.0);
    CHECK(std::abs(success_probability(grover_trace(4.0, 1), 1) - 1.0) < 1e-12);
    CHECK_THROWS_AS(success_probability(trace, trace.size()), std::out_of_range);
}
