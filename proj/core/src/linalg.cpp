#include "siirv/linalg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "siirv/error.hpp"

namespace siirv {

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

Vec add(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Vec sub(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Vec scale(const Vec& a, double c) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * c;
    return r;
}

Vec axpy(const Vec& a, double c, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + c * b[i];
    return r;
}

double distance(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

double max_eigenvalue_psd(const Matrix& m, double tol, int max_iter) {
    const std::size_t n = m.rows;
    if (n == 0) return 0.0;
    if (n == 1) return m(0, 0);
    Vec v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    // a slightly uneven start avoids landing orthogonal to the top eigenvector
    for (std::size_t i = 0; i < n; ++i) v[i] += 1e-3 * static_cast<double>(i + 1);
    v = scale(v, 1.0 / norm(v));
    double lambda = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        Vec w(n, 0.0);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) w[r] += m(r, c) * v[c];
        const double nw = norm(w);
        if (nw == 0.0) return 0.0;
        const double next = dot(v, w);
        v = scale(w, 1.0 / nw);
        if (std::abs(next - lambda) <= tol * std::max(1.0, std::abs(next))) return next;
        lambda = next;
    }
    return lambda;
}

namespace {

Eigen::VectorXd least_squares(const std::vector<Vec>& cols, const std::vector<std::size_t>& idx, const Vec& target) {
    const auto k = static_cast<Eigen::Index>(target.size());
    Eigen::MatrixXd a(k, static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j)
        for (Eigen::Index r = 0; r < k; ++r) a(r, static_cast<Eigen::Index>(j)) = cols[idx[j]][static_cast<std::size_t>(r)];
    Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(target.data(), k);
    return a.colPivHouseholderQr().solve(b);
}

Vec combine(const std::vector<Vec>& cols, const Vec& coef, std::size_t k) {
    Vec r(k, 0.0);
    for (std::size_t j = 0; j < cols.size(); ++j)
        if (coef[j] != 0.0)
            for (std::size_t i = 0; i < k; ++i) r[i] += coef[j] * cols[j][i];
    return r;
}

}  // namespace

NnlsResult nnls(const std::vector<Vec>& cols, const Vec& target) {
    const std::size_t s = cols.size();
    const std::size_t k = target.size();
    Vec x(s, 0.0);
    std::vector<bool> passive(s, false);
    const double tol = 1e-13 * std::max(1.0, norm(target));

    auto gradient = [&]() {
        Vec resid = sub(target, combine(cols, x, k));
        Vec w(s);
        for (std::size_t j = 0; j < s; ++j) w[j] = dot(cols[j], resid);
        return w;
    };

    Vec w = gradient();
    for (std::size_t outer = 0; outer < 3 * s + 10; ++outer) {
        std::size_t best = s;
        double best_w = tol;
        for (std::size_t j = 0; j < s; ++j)
            if (!passive[j] && w[j] > best_w) {
                best_w = w[j];
                best = j;
            }
        if (best == s) break;
        passive[best] = true;

        for (std::size_t inner = 0; inner < 3 * s + 10; ++inner) {
            std::vector<std::size_t> idx;
            for (std::size_t j = 0; j < s; ++j)
                if (passive[j]) idx.push_back(j);
            const Eigen::VectorXd z = least_squares(cols, idx, target);
            bool feasible = true;
            for (Eigen::Index j = 0; j < z.size(); ++j)
                if (z(j) <= 0.0) feasible = false;
            if (feasible) {
                std::fill(x.begin(), x.end(), 0.0);
                for (std::size_t j = 0; j < idx.size(); ++j) x[idx[j]] = z(static_cast<Eigen::Index>(j));
                break;
            }
            double alpha = 1.0;
            for (std::size_t j = 0; j < idx.size(); ++j) {
                const double zj = z(static_cast<Eigen::Index>(j));
                if (zj <= 0.0) {
                    const double xj = x[idx[j]];
                    const double denom = xj - zj;
                    if (denom > 0.0) alpha = std::min(alpha, xj / denom);
                }
            }
            for (std::size_t j = 0; j < idx.size(); ++j) {
                const double zj = z(static_cast<Eigen::Index>(j));
                x[idx[j]] += alpha * (zj - x[idx[j]]);
                if (x[idx[j]] <= 1e-15 * std::max(1.0, norm(target))) {
                    x[idx[j]] = 0.0;
                    passive[idx[j]] = false;
                }
            }
        }
        w = gradient();
    }
    NnlsResult r;
    r.coef = x;
    r.residual = norm(sub(target, combine(cols, x, k)));
    return r;
}

std::optional<Vec> solve_square(const std::vector<Vec>& rows, const Vec& rhs) {
    const auto n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible()) return std::nullopt;
    Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(rhs.data(), n);
    Eigen::VectorXd x = lu.solve(b);
    return Vec(x.data(), x.data() + n);
}

}  // namespace siirv
