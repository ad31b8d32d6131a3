#pragma once

// S(x) = ‖x‖₂² on the ℓ₁ unit ball: a randomized estimator with error
// O(n^{-1/2}) and certified worst-case floors from Gelfand widths of B₁ᵐ.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ibc/information.hpp"
#include "ibc/rng.hpp"
#include "ibc/spectral.hpp"

namespace ibc {

/// Widths are computed exactly only up to this dimension.
inline constexpr Index kMaxExactWidthDim = 10;

/// A point of the open ℓ₁ unit ball.
class L1Vector {
public:
    explicit L1Vector(Vector x);

    const Vector& coords() const noexcept { return x_; }
    Index dim() const noexcept { return x_.size(); }
    double l1() const noexcept { return x_.lpNorm<1>(); }
    double l2_squared() const noexcept { return x_.squaredNorm(); }
    double l4_fourth() const noexcept { return x_.array().square().square().sum(); }

private:
    Vector x_;
};

/// Σ εₖ xₖ with independent fair signs εₖ drawn from `rng`.
double rademacher_functional(const L1Vector& x, Rng& rng);
/// Same, with the signs given explicitly (used for exhaustive enumeration).
double rademacher_functional(const L1Vector& x, std::span<const int> signs);

/// Unbiased sample variance (1/(n−1)) Σᵢ (Lᵢ − L̄)² of n independent copies.
double empirical_variance_estimator(const L1Vector& x, std::size_t n, Rng& rng);
double sample_variance(std::span<const double> values);

/// Var(Aₙ(x)) = (2/n)·(‖x‖₂⁴·n/(n−1) − ‖x‖₄⁴).
double estimator_exact_variance(const L1Vector& x, std::size_t n);
/// sqrt(2/(n−1))·‖x‖₁², an upper bound on the RMSE of Aₙ(x).
double estimator_rmse_envelope(const L1Vector& x, std::size_t n);

struct RmseRow {
    std::size_t n = 0;
    double rmse = 0.0;
    double envelope = 0.0;
    std::size_t reps = 0;
    std::uint64_t seed = 0;
};

/// Empirical RMSE of Aₙ(x) around ‖x‖₂², per n. Replication r of grid point n
/// draws from derive_seed(seed, {n, r}).
std::vector<RmseRow> rmse_sweep(const L1Vector& x, std::span<const std::size_t> n_grid, std::size_t reps,
                                std::uint64_t seed);

struct PolytopeMax {
    double value = 0.0;
    /// Maximizer with ‖x‖₁ = 1 (empty if the kernel is trivial).
    Vector witness;
};

/// max ‖x‖₂ over {‖x‖₁ ≤ 1, N x = 0} for N with m ≤ 10 columns, by vertex
/// enumeration. A vertex with support J is a nonzero null vector of the columns
/// N_J whose null space is one-dimensional and which has full support on J.
PolytopeMax kernel_polytope_max_l2(const Matrix& info);

/// Null vector of N restricted to the first n+1 coordinates, ℓ₁-normalized.
/// Its ℓ₂ norm is at least (n+1)^{-1/2}, certifying the width lower bound.
Vector restriction_witness(const Matrix& info);

/// (n+1)^{-1/2} for n < m, 0 otherwise.
double certified_width_lower_bound(Index m, Index n);

struct WidthEstimate {
    Index m = 0;
    Index n = 0;
    double lower_bound = 0.0;
    double upper_bound = 0.0;
    InformationMap best_info;
    /// Kernel vector of best_info with ‖·‖₁ = 1 attaining upper_bound.
    Vector witness;
    std::size_t restarts = 0;
    std::uint64_t seed = 0;
};

/// Two-sided bracket for the Gelfand width c_n(B₁ᵐ, ℓ₂ᵐ). The upper bound is
/// the best kernel_polytope_max_l2 found by restarted local search; `warm`
/// (if nonempty) joins the candidate pool as an extra start.
WidthEstimate gelfand_width_bounds(Index m, Index n, std::size_t restarts, std::uint64_t seed,
                                   const Matrix& warm = Matrix());

/// Widths for each n in ascending order; the search for n is warm-started from
/// the best candidate for the previous n plus one row, so upper bounds are
/// nonincreasing in n.
std::vector<WidthEstimate> gelfand_width_table(Index m, std::span<const std::size_t> ns, std::size_t restarts,
                                               std::uint64_t seed);

/// ½·lower², a worst-case error floor for any algorithm using n linear
/// functionals to approximate ‖x‖₂² over B₁ᵐ.
double wc_lower_bound_norm_squared(Index m, Index n, const WidthEstimate& width);

struct SeparationRow {
    std::size_t n = 0;
    double wc_floor = 0.0;
    /// NaN for n < 2 (the estimator needs two samples).
    double ran_rmse = 0.0;
};

/// The ℓ₁ vector (equal weights on k coordinates, scaled into the open ball)
/// maximizing the exact estimator variance at cardinality n.
L1Vector worst_estimator_input(Index m, std::size_t n);

/// Per n: the certified worst-case floor in dimension max(m, n+1) against the
/// empirical RMSE of Aₙ at worst_estimator_input(m, n).
std::vector<SeparationRow> separation_report(Index m, std::span<const std::size_t> n_grid, std::size_t reps,
                                             std::uint64_t seed);

} // namespace ibc
