#pragma once

// Independent reference computations used only by the tests. None of these
// call into the library's own decompositions.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// Basis of ker N, orthonormal in the metric ‖f‖² = fᵀ G f. FullPivLU kernel
// followed by modified Gram-Schmidt.
inline Matrix kernel_basis(const Matrix& n_rows, const Matrix& gram)
{
    const Index m = gram.rows();
    Matrix raw;
    if (n_rows.rows() == 0) {
        raw = Matrix::Identity(m, m);
    } else {
        Eigen::FullPivLU<Matrix> lu(n_rows);
        lu.setThreshold(1e-10);
        if (lu.rank() == m) return Matrix(m, 0);
        raw = lu.kernel();
    }
    Matrix q(m, 0);
    for (Index j = 0; j < raw.cols(); ++j) {
        Vector v = raw.col(j);
        for (int pass = 0; pass < 2; ++pass)
            for (Index k = 0; k < q.cols(); ++k) v -= (q.col(k).dot(gram * v)) * q.col(k);
        const double nrm = std::sqrt(v.dot(gram * v));
        if (nrm < 1e-12) continue;
        q.conservativeResize(m, q.cols() + 1);
        q.col(q.cols() - 1) = v / nrm;
    }
    return q;
}

// max ‖S f‖ over random unit f in ker N (metric G), by sampling.
inline double sampled_radius(const Matrix& s, const Matrix& n_rows, const Matrix& gram, std::mt19937_64& rng,
                             int samples)
{
    const Matrix k = kernel_basis(n_rows, gram);
    if (k.cols() == 0) return 0.0;
    std::normal_distribution<double> nd;
    double best = 0.0;
    for (int i = 0; i < samples; ++i) {
        Vector c(k.cols());
        for (Index j = 0; j < c.size(); ++j) c(j) = nd(rng);
        c.normalize();
        best = std::max(best, (s * (k * c)).norm());
    }
    return best;
}

// max ‖x‖₂ on {‖x‖₁ ≤ 1, N x = 0} by the facet route: the kernel is K t, the
// polytope in t is {sᵀ K t ≤ 1 : s ∈ {±1}^m}; every vertex solves dim(ker)
// linearly independent facet equations.
inline double facet_polytope_max(const Matrix& n_rows, Index m)
{
    const Matrix k = kernel_basis(n_rows, Matrix::Identity(m, m));
    const Index dim = k.cols();
    if (dim == 0) return 0.0;

    std::vector<Vector> normals;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        Vector s(m);
        for (Index i = 0; i < m; ++i) s(i) = (mask >> i) & 1u ? 1.0 : -1.0;
        normals.push_back(k.transpose() * s);
    }

    double best = 0.0;
    std::vector<int> pick(static_cast<std::size_t>(dim));
    std::function<void(int, int)> rec = [&](int depth, int start) {
        if (depth == dim) {
            Matrix a(dim, dim);
            for (Index r = 0; r < dim; ++r) a.row(r) = normals[static_cast<std::size_t>(pick[static_cast<std::size_t>(r)])].transpose();
            Eigen::FullPivLU<Matrix> lu(a);
            if (lu.rank() < dim) return;
            const Vector t = lu.solve(Vector::Ones(dim));
            const Vector x = k * t;
            if (x.lpNorm<1>() > 1.0 + 1e-9) return;
            best = std::max(best, x.norm());
            return;
        }
        for (int i = start; i < static_cast<int>(normals.size()); ++i) {
            pick[static_cast<std::size_t>(depth)] = i;
            rec(depth + 1, i + 1);
        }
    };
    rec(0, 0);
    return best;
}

// Random point of {‖x‖₁ ≤ 1, N x = 0}: random kernel direction scaled to the boundary.
inline Vector feasible_point(const Matrix& kernel, std::mt19937_64& rng)
{
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Vector c(kernel.cols());
    for (Index j = 0; j < c.size(); ++j) c(j) = nd(rng);
    Vector x = kernel * c;
    const double l1 = x.lpNorm<1>();
    if (l1 == 0.0) return x;
    return x * (u(rng) < 0.5 ? 1.0 : u(rng)) / l1;
}

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

// Exact mean/variance of the sample-variance estimator over all 2^{m n} sign
// patterns of n independent Rademacher sums.
inline Moments enumerate_estimator(const Vector& x, int n)
{
    const auto m = static_cast<int>(x.size());
    const int bits = m * n;
    const std::uint64_t total = 1ull << bits;
    double s1 = 0.0, s2 = 0.0;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        std::vector<double> l(static_cast<std::size_t>(n), 0.0);
        for (int c = 0; c < n; ++c)
            for (int k = 0; k < m; ++k) l[static_cast<std::size_t>(c)] += ((mask >> (c * m + k)) & 1u ? 1.0 : -1.0) * x(k);
        double mean = 0.0;
        for (double v : l) mean += v;
        mean /= n;
        double ss = 0.0;
        for (double v : l) ss += (v - mean) * (v - mean);
        const double a = ss / (n - 1);
        s1 += a;
        s2 += a * a;
    }
    Moments out;
    out.mean = s1 / static_cast<double>(total);
    out.variance = s2 / static_cast<double>(total) - out.mean * out.mean;
    return out;
}

// 5-point Gauss-Legendre on [0, 1]; exact for polynomials of degree ≤ 9.
inline double gauss_legendre_01(const std::function<double(double)>& f)
{
    static constexpr std::array<double, 5> nodes{0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                                 0.9061798459386640};
    static constexpr std::array<double, 5> weights{0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                                   0.2369268850561891, 0.2369268850561891};
    double s = 0.0;
    for (std::size_t i = 0; i < 5; ++i) s += weights[i] * f(0.5 * (nodes[i] + 1.0));
    return 0.5 * s;
}

} // namespace oracle
