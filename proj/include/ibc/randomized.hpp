#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ibc/rng.hpp"
#include "ibc/spectral.hpp"

namespace ibc {

struct RandomizedEstimate {
    double value = 0.0;
    double standard_error = 0.0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
};

/// Uniform samples from the unit sphere of ℝᵐ (normalized Gaussian vectors).
class SphereSampler {
public:
    SphereSampler(Index dim, std::uint64_t seed);

    Index dim() const noexcept { return dim_; }
    std::uint64_t seed() const noexcept { return seed_; }
    /// Number of points drawn so far.
    std::uint64_t position() const noexcept { return position_; }

    Vector next();
    /// Fills each column with a fresh point.
    void fill(Eigen::Ref<Matrix> block);

private:
    Index dim_;
    std::uint64_t seed_;
    std::uint64_t position_ = 0;
    Rng rng_;
    std::normal_distribution<double> normal_;
};

/// e^avg(n, ρ_m) = sqrt((1/m) Σ_{i=n+1}^{m} σᵢ²), the average error of A*ₙ
/// under the uniform distribution on the unit sphere of span(e₁, …, e_m).
double avg_case_error_closed_form(const SingularSpectrum& spectrum, std::size_t n, std::size_t m);

/// Root-mean-square of ‖S f − A*ₙ f‖ over f = Σ_{i≤m} αᵢ eᵢ with α drawn by
/// `sampler` (whose dimension is m). The standard error is propagated from
/// the mean square by the delta method.
RandomizedEstimate avg_case_error_mc(const LinearProblem& problem, std::size_t n, SphereSampler& sampler,
                                     std::size_t samples);

/// ½·σ₄ₙ, a lower bound for the n-th minimal randomized error (n ≥ 1).
double bakhvalov_lower_bound(const SingularSpectrum& spectrum, std::size_t n);

/// (√2/2)·e^avg(2n, ρ₄ₙ), the intermediate bound between ½σ₄ₙ and the
/// randomized error.
double bakhvalov_average_bound(const SingularSpectrum& spectrum, std::size_t n);

struct SandwichBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// ½σ₄ₙ ≤ ẽₙ^ran ≤ σₙ₊₁.
SandwichBounds sandwich_report(const SingularSpectrum& spectrum, std::size_t n);

struct SandwichRow {
    std::size_t n = 0;
    double lower = 0.0;
    /// e^avg(2n, ρ₄ₙ).
    double closed_form_avg = 0.0;
    std::optional<RandomizedEstimate> mc_avg;
    double upper = 0.0;
};

/// One row per n; the Monte Carlo column is filled when `seed` is given.
std::vector<SandwichRow> sandwich_table(const SingularSpectrum& spectrum, std::span<const std::size_t> ns,
                                        std::optional<std::uint64_t> seed, std::size_t samples);

} // namespace ibc
