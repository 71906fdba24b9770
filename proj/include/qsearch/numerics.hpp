#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsearch {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

inline constexpr double kPi = std::numbers::pi;

inline bool is_finite(Complex z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline bool is_power_of_two(double n) {
    if (n < 1.0 || n != std::floor(n)) return false;
    int exponent = 0;
    return std::frexp(n, &exponent) == 0.5;
}

inline double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

/// Dense row-major complex matrix. Everything in this project is tiny
/// (4x4 reduced models, (k+1)-dimensional Jacobi systems), so the
/// implementation is plain loops with a fixed evaluation order; traces
/// built on top stay reproducible bit for bit.
class DenseMatrix {
public:
    DenseMatrix() = default;

    DenseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols, Complex{0.0, 0.0}) {}

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    Complex& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    Complex operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    const CVector& entries() const { return entries_; }

    bool all_finite() const {
        for (const Complex& z : entries_)
            if (!is_finite(z)) return false;
        return true;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    CVector entries_;
};

inline void require(bool condition, const std::string& message) {
    if (!condition) throw std::invalid_argument(message);
}

inline DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix sum: shape mismatch");
    DenseMatrix out(a.rows(), a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a(r, c) + b(r, c);
    return out;
}

inline DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix difference: shape mismatch");
    DenseMatrix out(a.rows(), a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a(r, c) - b(r, c);
    return out;
}

inline DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    require(a.cols() == b.rows(), "matrix product: inner dimension mismatch");
    DenseMatrix out(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < b.cols(); ++c) {
            Complex sum{0.0, 0.0};
            for (std::size_t k = 0; k < a.cols(); ++k) sum += a(r, k) * b(k, c);
            out(r, c) = sum;
        }
    }
    return out;
}

inline DenseMatrix scaled(const DenseMatrix& m, Complex factor) {
    DenseMatrix out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = factor * m(r, c);
    return out;
}

inline DenseMatrix adjoint(const DenseMatrix& m) {
    DenseMatrix out(m.cols(), m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out(c, r) = std::conj(m(r, c));
    return out;
}

inline double max_abs(const DenseMatrix& m) {
    double best = 0.0;
    for (const Complex& z : m.entries()) best = std::max(best, std::abs(z));
    return best;
}

inline double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
    return max_abs(a - b);
}

/// Maximum absolute row sum.
inline double inf_norm(const DenseMatrix& m) {
    double best = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        double row = 0.0;
        for (std::size_t c = 0; c < m.cols(); ++c) row += std::abs(m(r, c));
        best = std::max(best, row);
    }
    return best;
}

inline CVector mat_vec(const DenseMatrix& m, const CVector& v) {
    require(m.cols() == v.size(), "mat_vec: dimension mismatch");
    CVector out(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Complex sum{0.0, 0.0};
        for (std::size_t k = 0; k < m.cols(); ++k) sum += m(r, k) * v[k];
        out[r] = sum;
    }
    return out;
}

/// k-fold product, left to right; mat_pow(m, 0) is the identity.
inline DenseMatrix mat_pow(const DenseMatrix& m, unsigned k) {
    require(m.square(), "mat_pow: matrix must be square");
    DenseMatrix out = DenseMatrix::identity(m.rows());
    for (unsigned i = 0; i < k; ++i) out = out * m;
    return out;
}

/// exp(m*t) by scaling and squaring: scale to inf-norm <= 1/2, run the
/// Taylor series until terms fall below 1e-20, square back up. Entrywise
/// error stays below 1e-10 for the norm range used here (||m t|| <= 20).
inline DenseMatrix mat_exp(const DenseMatrix& m, double t) {
    require(m.square(), "mat_exp: matrix must be square");
    require(m.all_finite() && std::isfinite(t), "mat_exp: non-finite input");
    DenseMatrix b = scaled(m, Complex{t, 0.0});
    int squarings = 0;
    double norm = inf_norm(b);
    while (norm > 0.5 && squarings < 64) {
        norm *= 0.5;
        ++squarings;
    }
    b = scaled(b, Complex{std::ldexp(1.0, -squarings), 0.0});

    DenseMatrix result = DenseMatrix::identity(m.rows());
    DenseMatrix term = DenseMatrix::identity(m.rows());
    for (int j = 1; j <= 32; ++j) {
        term = scaled(term * b, Complex{1.0 / j, 0.0});
        result = result + term;
        if (max_abs(term) < 1e-20) break;
    }
    for (int i = 0; i < squarings; ++i) result = result * result;
    if (!result.all_finite()) throw std::runtime_error("mat_exp: result not finite");
    return result;
}

namespace detail {

inline Complex eval_cubic(Complex c2, Complex c1, Complex c0, Complex x) {
    return ((x + c2) * x + c1) * x + c0;
}

// One to eight Newton steps; keeps the best residual seen.
inline Complex polish_cubic_root(Complex c2, Complex c1, Complex c0, Complex x) {
    Complex best = x;
    double best_res = std::abs(eval_cubic(c2, c1, c0, x));
    for (int i = 0; i < 8; ++i) {
        Complex deriv = (3.0 * x + 2.0 * c2) * x + c1;
        if (std::abs(deriv) == 0.0) break;
        x -= eval_cubic(c2, c1, c0, x) / deriv;
        double res = std::abs(eval_cubic(c2, c1, c0, x));
        if (res < best_res) {
            best_res = res;
            best = x;
        }
        if (res == 0.0) break;
    }
    return best;
}

}  // namespace detail

/// Roots of x^3 + c2 x^2 + c1 x + c0 with complex coefficients
/// (Cardano on the depressed cubic, Newton-polished). Unordered.
inline std::array<Complex, 3> cubic_roots(Complex c2, Complex c1, Complex c0) {
    require(is_finite(c2) && is_finite(c1) && is_finite(c0), "cubic_roots: non-finite coefficient");
    const Complex shift = c2 / 3.0;
    const Complex p = c1 - c2 * c2 / 3.0;
    const Complex q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;

    std::array<Complex, 3> roots;
    if (std::abs(p) == 0.0 && std::abs(q) == 0.0) {
        roots.fill(-shift);
        return roots;
    }

    const Complex omega{-0.5, std::sqrt(3.0) / 2.0};
    if (std::abs(p) == 0.0) {
        // x^3 = -q
        Complex u = std::exp(std::log(-q) / 3.0);
        for (int k = 0; k < 3; ++k) {
            roots[k] = u - shift;
            u *= omega;
        }
    } else {
        Complex disc = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
        Complex u3 = -q / 2.0 - disc;
        if (std::abs(-q / 2.0 + disc) > std::abs(u3)) u3 = -q / 2.0 + disc;
        Complex u = std::exp(std::log(u3) / 3.0);
        for (int k = 0; k < 3; ++k) {
            roots[k] = u - p / (3.0 * u) - shift;
            u *= omega;
        }
    }
    for (Complex& r : roots) r = detail::polish_cubic_root(c2, c1, c0, r);
    return roots;
}

/// Eigenvalues of the size x size tridiagonal Toeplitz matrix with zero
/// diagonal, `sup` above and `sub` below: 2 sqrt(sub*sup) cos(m pi/(size+1)),
/// m = 1..size. The square root is the principal branch of std::sqrt, so
/// e.g. sub*sup < 0 yields the +i sqrt(|sub*sup|) factor.
inline CVector tridiag_toeplitz_eigenvalues(Complex sub, Complex sup, std::size_t size) {
    require(size >= 1, "tridiag_toeplitz_eigenvalues: size must be >= 1");
    const Complex root = 2.0 * std::sqrt(sub * sup);
    CVector out(size);
    for (std::size_t m = 1; m <= size; ++m)
        out[m - 1] = root * std::cos(static_cast<double>(m) * kPi / static_cast<double>(size + 1));
    return out;
}

enum class IvpMethod { ExplicitEuler, Rk4 };

/// Constant-coefficient linear IVP x' = A x + sigma(t), sampled on the
/// uniform step grid. `forcing` may be left empty for sigma = 0.
struct IvpProblem {
    DenseMatrix system_matrix;
    std::function<CVector(double)> forcing;
    CVector initial_state;
    double t_end = 0.0;
    double step = 0.0;
    IvpMethod method = IvpMethod::Rk4;
};

struct VectorTrace {
    std::vector<double> times;
    std::vector<CVector> states;

    std::size_t size() const { return times.size(); }
};

namespace detail {

inline CVector ivp_rhs(const IvpProblem& p, double t, const CVector& x) {
    CVector d = mat_vec(p.system_matrix, x);
    if (p.forcing) {
        const CVector s = p.forcing(t);
        require(s.size() == d.size(), "integrate_ivp: forcing dimension mismatch");
        for (std::size_t j = 0; j < d.size(); ++j) d[j] += s[j];
    }
    return d;
}

}  // namespace detail

/// Integrates the problem from 0 to t_end, recording every multiple of
/// p.step (the initial state included). Explicit Euler reproduces
/// x_{i+1} = x_i + step*(A x_i + sigma(t_i)) with a fixed evaluation
/// order, so step-1 runs match difference recursions exactly.
inline VectorTrace integrate_ivp(const IvpProblem& p) {
    require(p.step > 0.0, "integrate_ivp: step must be positive");
    require(p.t_end >= 0.0, "integrate_ivp: t_end must be non-negative");
    require(p.system_matrix.square(), "integrate_ivp: system matrix must be square");
    require(p.system_matrix.rows() == p.initial_state.size(),
            "integrate_ivp: initial state dimension mismatch");

    const auto n_steps = static_cast<std::size_t>(std::floor(p.t_end / p.step + 1e-9));
    VectorTrace trace;
    trace.times.reserve(n_steps + 1);
    trace.states.reserve(n_steps + 1);

    CVector x = p.initial_state;
    trace.times.push_back(0.0);
    trace.states.push_back(x);

    const double h = p.step;
    for (std::size_t i = 0; i < n_steps; ++i) {
        const double t = static_cast<double>(i) * h;
        if (p.method == IvpMethod::ExplicitEuler) {
            const CVector d = detail::ivp_rhs(p, t, x);
            for (std::size_t j = 0; j < x.size(); ++j) x[j] = x[j] + h * d[j];
        } else {
            const CVector k1 = detail::ivp_rhs(p, t, x);
            CVector tmp(x.size());
            for (std::size_t j = 0; j < x.size(); ++j) tmp[j] = x[j] + 0.5 * h * k1[j];
            const CVector k2 = detail::ivp_rhs(p, t + 0.5 * h, tmp);
            for (std::size_t j = 0; j < x.size(); ++j) tmp[j] = x[j] + 0.5 * h * k2[j];
            const CVector k3 = detail::ivp_rhs(p, t + 0.5 * h, tmp);
            for (std::size_t j = 0; j < x.size(); ++j) tmp[j] = x[j] + h * k3[j];
            const CVector k4 = detail::ivp_rhs(p, t + h, tmp);
            for (std::size_t j = 0; j < x.size(); ++j)
                x[j] += (h / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        trace.times.push_back(static_cast<double>(i + 1) * h);
        trace.states.push_back(x);
        for (const Complex& z : x)
            if (!is_finite(z)) throw std::runtime_error("integrate_ivp: state not finite");
    }
    return trace;
}

}  // namespace qsearch
