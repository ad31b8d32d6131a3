#pragma once

// Standard information (function values) in finite function-space models.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "ibc/randomized.hpp"
#include "ibc/rng.hpp"
#include "ibc/spectral.hpp"

namespace ibc {

/// Exhaustive subset search is limited to this many grid points.
inline constexpr std::size_t kMaxGridPoints = 12;

/// Functions represented by their values on a grid in [0, 1]; ‖f‖² = vᵀ G v.
struct GridModel {
    std::vector<double> grid;
    Matrix gram;
    /// Solution operator acting on value vectors.
    Matrix s;

    void validate() const;
    LinearProblem problem() const { return LinearProblem(s, SourceMetric::gram(gram)); }
};

/// Sorted uniform grid, Gram matrix B Bᵀ/m + 0.1·I and a random `rows` × m operator.
GridModel random_grid_model(std::size_t m, std::size_t rows, std::uint64_t seed);

struct StdVsAll {
    double e_std = 0.0;
    double e_all = 0.0;
    /// 0-based grid indices of an optimal evaluation set.
    std::vector<std::size_t> points;
};

/// e_all = σₙ₊₁ against e_std = the smallest radius over all n-point evaluation sets.
StdVsAll std_vs_all(const GridModel& model, std::size_t n);

/// Mₙ(f) = (1/n) Σ f(xⱼ) with xⱼ uniform on [0, 1]; the standard error is the
/// sample deviation over √n (0 when n = 1).
RandomizedEstimate mc_integration(const std::function<double(double)>& f, std::size_t n, Rng& rng);

/// Σ cⱼ xʲ.
struct Polynomial {
    std::vector<double> coefficients;

    double operator()(double x) const;
    double integral() const;
    /// (f(0) + f(1)) / 2.
    double endpoint_average() const;
};

/// ∫₀¹ f − (f(0) + f(1))/2; zero exactly on the constrained model.
double two_point_violation(const Polynomial& f);

/// L₂[0,1]-closest polynomial of the same degree satisfying the two-point constraint.
Polynomial project_to_two_point_constraint(const Polynomial& f);

/// Integral from two function values, (f(0) + f(1))/2. Throws when f violates
/// the constraint by more than 10⁻¹⁰.
double two_point_exact(const Polynomial& f);

} // namespace ibc
