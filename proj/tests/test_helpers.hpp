#pragma once

// Test-only oracles, deliberately independent of the library's own code
// paths: dense eigensolves and companion-matrix polynomial roots go through
// Eigen, so closed-form spectra and Cardano roots are checked against a
// second route.

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <vector>

#include "qsearch/numerics.hpp"

namespace testutil {

using qsearch::Complex;
using qsearch::CVector;
using qsearch::DenseMatrix;

inline Eigen::MatrixXcd to_eigen(const DenseMatrix& m) {
    Eigen::MatrixXcd out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
    return out;
}

inline CVector dense_eigenvalues(const DenseMatrix& m) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(to_eigen(m), false);
    CVector out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) out[i] = solver.eigenvalues()(i);
    return out;
}

// Roots of a monic polynomial (coefficients low to high, leading 1 implied)
// via the companion-matrix eigensolve.
inline CVector companion_roots(const CVector& coeffs) {
    const std::size_t n = coeffs.size();
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (std::size_t i = 0; i < n; ++i) companion(i, n - 1) = -coeffs[i];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    CVector out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = solver.eigenvalues()(i);
    return out;
}

// Characteristic polynomial of the zero-diagonal tridiagonal Toeplitz matrix
// by the three-term recurrence p_k = -x p_{k-1} - sub*sup p_{k-2}; returned
// monic, coefficients low to high without the leading term.
inline CVector tridiag_char_poly(Complex sub, Complex sup, std::size_t size) {
    // p_0 = 1, p_1 = -x (times (-1)^k so the polynomial stays monic in x
    // after sign normalization; we track det(xI - T) directly instead)
    // det(xI - T_k) = x det(xI - T_{k-1}) - sub*sup det(xI - T_{k-2})
    std::vector<CVector> p(size + 1);
    p[0] = {Complex{1.0, 0.0}};
    p[1] = {Complex{0.0, 0.0}, Complex{1.0, 0.0}};  // x
    const Complex offdiag = sub * sup;
    for (std::size_t k = 2; k <= size; ++k) {
        CVector next(k + 1, Complex{0.0, 0.0});
        for (std::size_t j = 0; j < p[k - 1].size(); ++j) next[j + 1] += p[k - 1][j];
        for (std::size_t j = 0; j < p[k - 2].size(); ++j) next[j] -= offdiag * p[k - 2][j];
        p[k] = std::move(next);
    }
    CVector out(size);
    for (std::size_t j = 0; j < size; ++j) out[j] = p[size][j];
    return out;
}

inline DenseMatrix random_matrix(std::mt19937_64& rng, std::size_t n, double scale) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    DenseMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) m(r, c) = Complex{unit(rng), unit(rng)} * scale;
    return m;
}

inline DenseMatrix random_anti_hermitian(std::mt19937_64& rng, std::size_t n, double scale) {
    DenseMatrix m = random_matrix(rng, n, scale);
    DenseMatrix out(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) out(r, c) = 0.5 * (m(r, c) - std::conj(m(c, r)));
    return out;
}

}  // namespace testutil
