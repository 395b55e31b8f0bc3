#pragma once

// Test-side reference computations. Nothing here calls the library's LP
// solver or vertex enumerator.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Visits every k-subset of {0..n-1} in lexicographic order.
template <class Fn>
void for_each_subset(int n, int k, Fn&& fn) {
    if (k > n) return;
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    while (true) {
        fn(idx);
        int i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
        if (i < 0) return;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
}

// Vertices of {x : M x <= m} by solving every n x n active subsystem.
// Only meaningful for bounded sets.
inline std::vector<Vec> brute_vertices(const Mat& M, const Vec& m, double tol = 1e-9) {
    const int q = static_cast<int>(M.rows());
    const int n = static_cast<int>(M.cols());
    std::vector<Vec> out;
    for_each_subset(q, n, [&](const std::vector<int>& rows) {
        Mat A(n, n);
        Vec b(n);
        for (int i = 0; i < n; ++i) {
            A.row(i) = M.row(rows[static_cast<std::size_t>(i)]);
            b(i) = m(rows[static_cast<std::size_t>(i)]);
        }
        Eigen::ColPivHouseholderQR<Mat> qr(A);
        if (qr.rank() < n) return;
        const Vec x = qr.solve(b);
        if (((M * x - m).array() > tol * (1.0 + m.cwiseAbs().maxCoeff())).any()) return;
        for (const auto& v : out) {
            if ((v - x).cwiseAbs().maxCoeff() < 1e-8) return;
        }
        out.push_back(x);
    });
    return out;
}

// max over vertex images A v (v in V) and rows j of M2_j A v - m2_j.
inline double image_violation(const std::vector<Vec>& V, const std::vector<Mat>& maps, const Mat& M2, const Vec& m2) {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& A : maps) {
        for (const auto& v : V) worst = std::max(worst, (M2 * (A * v) - m2).maxCoeff());
    }
    return worst;
}

// Minkowski-sum version: images A v + D w over vertex pairs.
inline double image_violation(const std::vector<Vec>& V, const std::vector<Vec>& W, const std::vector<Mat>& maps,
                              const Mat& D, const Mat& M2, const Vec& m2) {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& A : maps) {
        for (const auto& v : V) {
            for (const auto& w : W) worst = std::max(worst, (M2 * (A * v + D * w) - m2).maxCoeff());
        }
    }
    return worst;
}

// max c'x over the vertices of {A x <= b}; nullopt when there are none.
inline std::optional<double> brute_lp_max(const Vec& c, const Mat& A, const Vec& b) {
    const auto V = brute_vertices(A, b, 1e-10);
    if (V.empty()) return std::nullopt;
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& v : V) best = std::max(best, c.dot(v));
    return best;
}

inline Vec unit_vector(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = g(rng);
    return v / v.norm();
}

// Bounded polytope with the origin strictly inside: `extra` random halfspaces
// plus a loose box so that boundedness never depends on luck.
struct RandomPolytope {
    Mat M;
    Vec m;
};

inline RandomPolytope random_polytope(int n, int extra, std::mt19937_64& rng, double box = 3.0) {
    std::uniform_real_distribution<double> off(0.4, 1.5);
    RandomPolytope P;
    P.M.resize(extra + 2 * n, n);
    P.m.resize(extra + 2 * n);
    for (int i = 0; i < extra; ++i) {
        P.M.row(i) = unit_vector(n, rng).transpose();
        P.m(i) = off(rng);
    }
    for (int i = 0; i < n; ++i) {
        P.M.row(extra + 2 * i) = Vec::Unit(n, i).transpose();
        P.M.row(extra + 2 * i + 1) = -Vec::Unit(n, i).transpose();
        P.m(extra + 2 * i) = box * off(rng);
        P.m(extra + 2 * i + 1) = box * off(rng);
    }
    return P;
}

inline Mat random_matrix(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    Mat A(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        for (Eigen::Index j = 0; j < c; ++j) A(i, j) = u(rng);
    }
    return A;
}

}  // namespace oracle
