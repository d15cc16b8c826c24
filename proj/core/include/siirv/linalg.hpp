#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace siirv {

using Vec = std::vector<double>;
// Natural parameter of an exponential family member.
using ParamVector = Vec;

double dot(const Vec& a, const Vec& b);
double norm(const Vec& a);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scale(const Vec& a, double c);
// a + c * b
Vec axpy(const Vec& a, double c, const Vec& b);
double distance(const Vec& a, const Vec& b);

// Dense row-major matrix, used for covariance blocks and linear systems.
struct Matrix {
    std::size_t rows = 0, cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

// Largest eigenvalue of a symmetric positive semidefinite matrix.
double max_eigenvalue_psd(const Matrix& m, double tol = 1e-9, int max_iter = 10000);

struct NnlsResult {
    Vec coef;
    double residual = 0.0;
};

// min ||sum_j coef_j cols[j] - target|| subject to coef >= 0 (Lawson-Hanson).
NnlsResult nnls(const std::vector<Vec>& cols, const Vec& target);

// Solves the square system rows * x = rhs; empty if singular.
std::optional<Vec> solve_square(const std::vector<Vec>& rows, const Vec& rhs);

}  // namespace siirv
