#include "ibc/std_info.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ibc/information.hpp"

namespace ibc {

void GridModel::validate() const
{
    const auto m = static_cast<Index>(grid.size());
    if (m == 0) throw std::invalid_argument("grid model needs at least one point");
    for (double x : grid)
        if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("grid points must lie in [0, 1]");
    if (gram.rows() != m || gram.cols() != m) throw std::invalid_argument("Gram matrix must be m × m");
    if (s.cols() != m) throw std::invalid_argument("operator must act on m grid values");
    (void)SourceMetric::gram(gram);
}

GridModel random_grid_model(std::size_t m, std::size_t rows, std::uint64_t seed)
{
    if (m == 0 || rows == 0) throw std::invalid_argument("grid model dimensions must be positive");
    Rng rng(seed);
    std::uniform_real_distribution<double> uniform;
    std::normal_distribution<double> normal;

    GridModel model;
    model.grid.resize(m);
    for (auto& x : model.grid) x = uniform(rng);
    std::sort(model.grid.begin(), model.grid.end());

    const auto mm = static_cast<Index>(m);
    Matrix b(mm, mm);
    for (Index i = 0; i < b.size(); ++i) b(i) = normal(rng);
    model.gram = b * b.transpose() / static_cast<double>(m) + 0.1 * Matrix::Identity(mm, mm);
    model.gram = 0.5 * (model.gram + model.gram.transpose()).eval();

    model.s.resize(static_cast<Index>(rows), mm);
    for (Index i = 0; i < model.s.size(); ++i) model.s(i) = normal(rng);
    return model;
}

StdVsAll std_vs_all(const GridModel& model, std::size_t n)
{
    model.validate();
    const std::size_t m = model.grid.size();
    if (m > kMaxGridPoints) throw std::invalid_argument("std-vs-all subset search limited to m <= 12");
    if (n > m) throw std::invalid_argument("cardinality exceeds the number of grid points");

    const LinearProblem problem = model.problem();
    StdVsAll out;
    out.e_all = worst_case_error(problem.spectrum(), n);
    out.e_std = std::numeric_limits<double>::infinity();

    // Lexicographic n-subsets of {0, …, m−1}.
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    while (true) {
        InformationMap info;
        for (std::size_t i : idx) info.append(Vector::Unit(static_cast<Index>(m), static_cast<Index>(i)));
        const double r = radius_nonadaptive(problem, info).radius;
        if (r < out.e_std) {
            out.e_std = r;
            out.points = idx;
        }
        std::size_t k = n;
        while (k > 0 && idx[k - 1] == m - n + k - 1) --k;
        if (k == 0) break;
        ++idx[k - 1];
        for (std::size_t j = k; j < n; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

RandomizedEstimate mc_integration(const std::function<double(double)>& f, std::size_t n, Rng& rng)
{
    if (n == 0) throw std::invalid_argument("Monte Carlo needs n >= 1");
    std::uniform_real_distribution<double> uniform;
    std::vector<double> vals(n);
    for (auto& v : vals) v = f(uniform(rng));

    RandomizedEstimate est;
    est.samples = n;
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= static_cast<double>(n);
    est.value = mean;
    if (n > 1) {
        double ss = 0.0;
        for (double v : vals) ss += (v - mean) * (v - mean);
        est.standard_error = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
    }
    return est;
}

// ---------------------------------------------------------------------------

double Polynomial::operator()(double x) const
{
    double acc = 0.0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * x + *it;
    return acc;
}

double Polynomial::integral() const
{
    double acc = 0.0;
    for (std::size_t j = 0; j < coefficients.size(); ++j) acc += coefficients[j] / static_cast<double>(j + 1);
    return acc;
}

double Polynomial::endpoint_average() const
{
    return 0.5 * ((*this)(0.0) + (*this)(1.0));
}

double two_point_violation(const Polynomial& f)
{
    return f.integral() - f.endpoint_average();
}

Polynomial project_to_two_point_constraint(const Polynomial& f)
{
    const auto k = static_cast<Index>(f.coefficients.size());
    if (k == 0) return f;

    // Constraint aᵀc = 0 with aⱼ = 1/(j+1) − 1/2 (a₀ = 0); L₂ Gram is the Hilbert matrix.
    Vector a(k);
    Matrix h(k, k);
    for (Index i = 0; i < k; ++i) {
        a(i) = 1.0 / static_cast<double>(i + 1) - (i == 0 ? 1.0 : 0.5);
        for (Index j = 0; j < k; ++j) h(i, j) = 1.0 / static_cast<double>(i + j + 1);
    }
    const Vector c = Eigen::Map<const Vector>(f.coefficients.data(), k);
    const double viol = a.dot(c);
    if (viol == 0.0) return f;
    const Vector hinv_a = h.ldlt().solve(a);
    const Vector p = c - hinv_a * (viol / a.dot(hinv_a));

    Polynomial out;
    out.coefficients.assign(p.data(), p.data() + p.size());
    return out;
}

double two_point_exact(const Polynomial& f)
{
    if (std::abs(two_point_violation(f)) > 1e-10)
        throw std::invalid_argument("function violates the two-point integration constraint");
    return f.endpoint_average();
}

} // namespace ibc
