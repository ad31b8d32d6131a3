#include "ibc/l1_case_study.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace ibc {

L1Vector::L1Vector(Vector x) : x_(std::move(x))
{
    if (!x_.allFinite()) throw std::invalid_argument("l1 vector must be finite");
    if (x_.lpNorm<1>() >= 1.0) throw std::invalid_argument("l1 vector must lie in the open unit ball");
}

double rademacher_functional(const L1Vector& x, Rng& rng)
{
    const Vector& c = x.coords();
    double sum = 0.0;
    std::uint64_t bits = 0;
    int left = 0;
    for (Index k = 0; k < c.size(); ++k) {
        if (left == 0) {
            bits = rng();
            left = 64;
        }
        sum += (bits & 1U) ? c(k) : -c(k);
        bits >>= 1;
        --left;
    }
    return sum;
}

double rademacher_functional(const L1Vector& x, std::span<const int> signs)
{
    if (static_cast<Index>(signs.size()) != x.dim()) throw std::invalid_argument("sign vector has the wrong length");
    double sum = 0.0;
    for (Index k = 0; k < x.dim(); ++k) sum += signs[static_cast<std::size_t>(k)] * x.coords()(k);
    return sum;
}

double sample_variance(std::span<const double> values)
{
    const std::size_t n = values.size();
    if (n < 2) throw std::invalid_argument("sample variance needs at least two values");
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return ss / static_cast<double>(n - 1);
}

double empirical_variance_estimator(const L1Vector& x, std::size_t n, Rng& rng)
{
    if (n < 2) throw std::invalid_argument("empirical variance needs n >= 2");
    std::vector<double> draws(n);
    for (auto& d : draws) d = rademacher_functional(x, rng);
    return sample_variance(draws);
}

double estimator_exact_variance(const L1Vector& x, std::size_t n)
{
    if (n < 2) throw std::invalid_argument("empirical variance needs n >= 2");
    const double nn = static_cast<double>(n);
    const double s2 = x.l2_squared();
    return (2.0 / nn) * (s2 * s2 * nn / (nn - 1.0) - x.l4_fourth());
}

double estimator_rmse_envelope(const L1Vector& x, std::size_t n)
{
    if (n < 2) throw std::invalid_argument("empirical variance needs n >= 2");
    const double l1 = x.l1();
    return std::sqrt(2.0 / static_cast<double>(n - 1)) * l1 * l1;
}

std::vector<RmseRow> rmse_sweep(const L1Vector& x, std::span<const std::size_t> n_grid, std::size_t reps,
                                std::uint64_t seed)
{
    if (reps < 100) throw std::invalid_argument("rmse sweep needs at least 100 replications");
    const double target = x.l2_squared();
    std::vector<RmseRow> rows;
    rows.reserve(n_grid.size());
    for (const std::size_t n : n_grid) {
        double sq = 0.0;
        for (std::size_t r = 0; r < reps; ++r) {
            Rng rng = make_rng(seed, {n, r});
            const double err = empirical_variance_estimator(x, n, rng) - target;
            sq += err * err;
        }
        rows.push_back({n, std::sqrt(sq / static_cast<double>(reps)), estimator_rmse_envelope(x, n), reps, seed});
    }
    return rows;
}

// ---------------------------------------------------------------------------

namespace {

void require_exact_dim(Index m)
{
    if (m > kMaxExactWidthDim)
        throw std::invalid_argument("exact width limited to m ≤ " + std::to_string(kMaxExactWidthDim));
}

Index rank_of(const Eigen::JacobiSVD<Matrix>& svd, double scale)
{
    const auto& sv = svd.singularValues();
    Index r = 0;
    while (r < sv.size() && sv(r) > kRankTol * scale) ++r;
    return r;
}

} // namespace

PolytopeMax kernel_polytope_max_l2(const Matrix& info)
{
    const Index m = info.cols();
    if (m < 1) throw std::invalid_argument("need at least one coordinate");
    require_exact_dim(m);

    const Index n = info.rows();
    const double scale = n == 0 ? 0.0 : info.rowwise().norm().maxCoeff();
    Index rank = 0;
    if (n > 0) rank = rank_of(Eigen::JacobiSVD<Matrix>(info), scale);

    PolytopeMax best;
    best.witness = Vector::Zero(0);
    const std::uint32_t full = (1U << m);
    std::vector<Index> cols;
    cols.reserve(static_cast<std::size_t>(m));
    Eigen::ColPivHouseholderQR<Matrix> qr;
    Vector z;
    for (std::uint32_t mask = 1; mask < full; ++mask) {
        const int size = std::popcount(mask);
        if (size > rank + 1) continue;

        cols.clear();
        for (Index j = 0; j < m; ++j)
            if (mask & (1U << j)) cols.push_back(j);

        if (rank == 0) {
            if (size != 1) continue;
            z = Vector::Ones(1);
        } else {
            // Null space of N_J is the orthogonal complement of range(N_Jᵀ).
            qr.compute(info(Eigen::all, cols).transpose());
            Index r = 0;
            const auto diag = qr.matrixR().diagonal();
            while (r < diag.size() && std::abs(diag(r)) > kRankTol * scale) ++r;
            if (size - r != 1) continue;
            z = qr.householderQ() * Vector::Unit(size, size - 1);
        }
        const double zmax = z.lpNorm<Eigen::Infinity>();
        if ((z.array().abs() <= 1e-10 * zmax).any()) continue;

        const double l1 = z.lpNorm<1>();
        const double value = z.norm() / l1;
        if (value > best.value) {
            best.value = value;
            best.witness = Vector::Zero(m);
            for (std::size_t k = 0; k < cols.size(); ++k) best.witness(cols[k]) = z(static_cast<Index>(k)) / l1;
        }
    }
    return best;
}

Vector restriction_witness(const Matrix& info)
{
    const Index n = info.rows();
    const Index m = info.cols();
    if (m < n + 1) throw std::invalid_argument("restriction witness needs m >= n + 1");
    Vector out = Vector::Zero(m);
    if (n == 0) {
        out(0) = 1.0;
        return out;
    }
    Eigen::JacobiSVD<Matrix> svd(info.leftCols(n + 1), Eigen::ComputeFullV);
    const Vector z = svd.matrixV().col(n);
    out.head(n + 1) = z / z.lpNorm<1>();
    return out;
}

double certified_width_lower_bound(Index m, Index n)
{
    if (n < 0 || m < 1) throw std::invalid_argument("invalid width dimensions");
    return n < m ? 1.0 / std::sqrt(static_cast<double>(n + 1)) : 0.0;
}

namespace {

Matrix orthonormal_rows(const Matrix& rows)
{
    Eigen::HouseholderQR<Matrix> qr(rows.transpose());
    const Matrix q = qr.householderQ() * Matrix::Identity(rows.cols(), rows.rows());
    return q.transpose();
}

struct SearchResult {
    Matrix info;
    PolytopeMax best;
};

// Coordinate-wise perturbation search; accepts only strict decreases.
SearchResult local_search(Matrix info, Rng& rng, std::size_t iterations)
{
    std::uniform_int_distribution<Index> pick_row(0, info.rows() - 1);
    std::uniform_int_distribution<Index> pick_col(0, info.cols() - 1);
    std::normal_distribution<double> normal;

    SearchResult cur{info, kernel_polytope_max_l2(info)};
    double step = 0.3;
    for (std::size_t it = 0; it < iterations; ++it) {
        Matrix trial = cur.info;
        const Index i = pick_row(rng);
        trial(i, pick_col(rng)) += step * normal(rng);
        const double nrm = trial.row(i).norm();
        if (nrm == 0.0) continue;
        trial.row(i) /= nrm;
        PolytopeMax val = kernel_polytope_max_l2(trial);
        if (val.value < cur.best.value) {
            cur.info = std::move(trial);
            cur.best = std::move(val);
            step = std::min(1.0, step * 1.5);
        } else {
            step = std::max(1e-7, step * 0.95);
        }
    }
    return cur;
}

std::size_t search_budget(Index m, Index n)
{
    return static_cast<std::size_t>(std::min<Index>(1200, 40 * m * n));
}

} // namespace

WidthEstimate gelfand_width_bounds(Index m, Index n, std::size_t restarts, std::uint64_t seed, const Matrix& warm)
{
    if (m < 1 || n < 0) throw std::invalid_argument("invalid width dimensions");
    require_exact_dim(m);
    if (warm.size() > 0 && (warm.cols() != m || warm.rows() + 1 != n))
        throw std::invalid_argument("warm start must have n-1 rows and m columns");

    WidthEstimate est;
    est.m = m;
    est.n = n;
    est.restarts = restarts;
    est.seed = seed;
    est.lower_bound = certified_width_lower_bound(m, n);

    if (n == 0) {
        est.upper_bound = 1.0;
        est.witness = restriction_witness(Matrix(0, m));
        return est;
    }
    if (n >= m) {
        Matrix rows = Matrix::Zero(n, m);
        rows.topRows(m) = Matrix::Identity(m, m);
        est.best_info = InformationMap::from_rows(rows);
        est.upper_bound = 0.0;
        est.witness = Vector::Zero(m);
        return est;
    }

    std::normal_distribution<double> normal;
    std::vector<Matrix> starts;
    for (std::size_t r = 0; r < restarts; ++r) {
        Rng rng = make_rng(seed, {static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(n), r});
        Matrix g(n, m);
        for (Index i = 0; i < g.size(); ++i) g(i) = normal(rng);
        starts.push_back(orthonormal_rows(g));
    }
    if (warm.size() > 0) {
        Rng rng = make_rng(seed, {static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(n), restarts});
        Matrix g(n, m);
        g.topRows(n - 1) = warm;
        for (Index j = 0; j < m; ++j) g(n - 1, j) = normal(rng);
        starts.push_back(g);
    }
    if (starts.empty()) throw std::invalid_argument("need at least one restart or a warm start");

    SearchResult best;
    best.best.value = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < starts.size(); ++r) {
        Rng rng = make_rng(seed, {static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(n), r, 1});
        SearchResult res = local_search(starts[r], rng, search_budget(m, n));
        if (res.best.value < best.best.value) best = std::move(res);
    }

    est.upper_bound = best.best.value;
    est.best_info = InformationMap::from_rows(best.info);
    est.witness = best.best.witness;
    return est;
}

std::vector<WidthEstimate> gelfand_width_table(Index m, std::span<const std::size_t> ns, std::size_t restarts,
                                               std::uint64_t seed)
{
    for (std::size_t i = 1; i < ns.size(); ++i)
        if (ns[i] <= ns[i - 1]) throw std::invalid_argument("n grid must be increasing");
    std::vector<WidthEstimate> out;
    for (const std::size_t n : ns) {
        Matrix warm;
        if (!out.empty() && out.back().n + 1 == static_cast<Index>(n) && out.back().n >= 1 &&
            out.back().n < m)
            warm = out.back().best_info.as_matrix(m);
        out.push_back(gelfand_width_bounds(m, static_cast<Index>(n), restarts, seed, warm));
    }
    return out;
}

double wc_lower_bound_norm_squared(Index m, Index n, const WidthEstimate& width)
{
    if (width.m != m || width.n != n) throw std::invalid_argument("width estimate is for different (m, n)");
    return 0.5 * width.lower_bound * width.lower_bound;
}

// ---------------------------------------------------------------------------

L1Vector worst_estimator_input(Index m, std::size_t n)
{
    if (m < 1) throw std::invalid_argument("dimension must be positive");
    const std::size_t nn = std::max<std::size_t>(n, 2);
    std::optional<L1Vector> best;
    double best_var = -1.0;
    for (Index k = 1; k <= m; ++k) {
        Vector x = Vector::Zero(m);
        x.head(k).setConstant(kOpenBallScale / static_cast<double>(k));
        L1Vector cand(std::move(x));
        const double v = estimator_exact_variance(cand, nn);
        if (v > best_var) {
            best_var = v;
            best = std::move(cand);
        }
    }
    return *best;
}

std::vector<SeparationRow> separation_report(Index m, std::span<const std::size_t> n_grid, std::size_t reps,
                                             std::uint64_t seed)
{
    std::vector<SeparationRow> rows;
    rows.reserve(n_grid.size());
    for (const std::size_t n : n_grid) {
        SeparationRow row;
        row.n = n;
        const Index dim = std::max<Index>(m, static_cast<Index>(n) + 1);
        const double lower = certified_width_lower_bound(dim, static_cast<Index>(n));
        row.wc_floor = 0.5 * lower * lower;
        if (n < 2) {
            row.ran_rmse = std::numeric_limits<double>::quiet_NaN();
        } else {
            const std::size_t grid[] = {n};
            row.ran_rmse = rmse_sweep(worst_estimator_input(m, n), grid, reps, seed).front().rmse;
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace ibc
