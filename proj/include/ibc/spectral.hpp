#pragma once

// Compact linear problems between finite-dimensional inner-product spaces,
// their singular spectra, and the optimal truncation algorithm.
//
// A problem is a matrix S acting on source coordinates f. The source norm is
// ‖f‖ = ‖R f‖₂ for an invertible upper-triangular whitening factor R
// (R = diag(w) for diagonal weights, R = Lᵀ for a Gram matrix G = L Lᵀ). The
// SVD is taken of S R⁻¹ in Euclidean coordinates and mapped back, so the right
// basis eᵢ is orthonormal in the source inner product and S eᵢ = σᵢ ẽᵢ.

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

#include "ibc/rng.hpp"

namespace ibc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Sup over the open unit ball is evaluated on the closed ball of this radius.
inline constexpr double kOpenBallScale = 1.0 - 1e-9;
/// Singular values below this fraction of σ₁ are stored as exact zeros.
inline constexpr double kZeroSpectrumRel = 1e-14;
/// Relative tolerance for orthonormality / SVD reconstruction checks.
inline constexpr double kSvdTol = 1e-10;

enum class SpectrumKind { explicit_values, power_law };

class SingularSpectrum {
public:
    static SingularSpectrum explicit_values(std::vector<double> values);
    static SingularSpectrum power_law(double p, std::size_t m);

    const std::vector<double>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    SpectrumKind kind() const noexcept { return kind_; }
    /// Power-law exponent; zero for explicit spectra.
    double exponent() const noexcept { return exponent_; }

    /// σᵢ with 1-based i; zero past the end.
    double sigma(std::size_t i) const noexcept
    {
        return (i >= 1 && i <= values_.size()) ? values_[i - 1] : 0.0;
    }
    double largest() const noexcept { return values_.empty() ? 0.0 : values_.front(); }

private:
    SingularSpectrum(std::vector<double> v, SpectrumKind k, double p)
        : values_(std::move(v)), kind_(k), exponent_(p) {}

    std::vector<double> values_;
    SpectrumKind kind_;
    double exponent_;
};

/// `params` holds the values for explicit spectra and {p} for power laws.
SingularSpectrum make_spectrum(SpectrumKind kind, std::span<const double> params, std::size_t m);

/// Inner product on a source space: ‖f‖² = ‖R f‖₂².
class SourceMetric {
public:
    /// Euclidean metric on `dim` coordinates.
    static SourceMetric identity(Index dim);
    static SourceMetric diagonal(const Vector& weights);
    static SourceMetric gram(const Matrix& gram);

    Index dim() const noexcept { return whiten_.rows(); }
    const Matrix& whiten() const noexcept { return whiten_; }
    const Matrix& unwhiten() const noexcept { return unwhiten_; }

    double norm(const Vector& f) const { return (whiten_ * f).norm(); }
    double inner(const Vector& f, const Vector& g) const { return (whiten_ * f).dot(whiten_ * g); }

private:
    SourceMetric(Matrix r, Matrix rinv) : whiten_(std::move(r)), unwhiten_(std::move(rinv)) {}

    Matrix whiten_;
    Matrix unwhiten_;
};

/// A point of the source space, in source coordinates.
struct Element {
    Vector coords;
};

class LinearProblem {
public:
    LinearProblem(Matrix s, const Vector& source_weights);
    LinearProblem(Matrix s, SourceMetric metric);

    static LinearProblem diagonal(std::span<const double> sigma);
    static LinearProblem diagonal(const SingularSpectrum& spectrum);

    const Matrix& matrix() const noexcept { return s_; }
    const SourceMetric& metric() const noexcept { return metric_; }
    Index source_dim() const noexcept { return s_.cols(); }
    Index target_dim() const noexcept { return s_.rows(); }

    /// Columns eᵢ, orthonormal in the source inner product (source_dim of them).
    const Matrix& right_basis() const noexcept { return right_; }
    /// Columns ẽᵢ, orthonormal in ℓ₂ (min(source_dim, target_dim) of them).
    const Matrix& left_basis() const noexcept { return left_; }
    /// Length source_dim, padded with zeros.
    const SingularSpectrum& spectrum() const noexcept { return spectrum_; }

    /// αᵢ with f = Σ αᵢ eᵢ.
    Vector basis_coefficients(const Element& f) const;
    Element from_basis_coefficients(const Vector& alpha) const;

    Vector apply(const Element& f) const { return s_ * f.coords; }

private:
    void decompose();

    Matrix s_;
    SourceMetric metric_;
    Matrix right_;
    Matrix left_;
    SingularSpectrum spectrum_ = SingularSpectrum::explicit_values({});
};

/// n-th minimal worst-case error: σₙ₊₁, or 0 once the spectrum is exhausted.
double worst_case_error(const SingularSpectrum& spectrum, std::size_t n);

/// A*ₙ(f) = Σ_{i≤n} σᵢ αᵢ ẽᵢ.
Vector apply_optimal_algorithm(const LinearProblem& problem, std::size_t n, const Element& f);

/// Largest ‖S f − A*ₙ f‖ over `samples` points drawn uniformly from the open
/// unit ball, plus the witness (1 − 10⁻⁹)·eₙ₊₁.
double brute_force_worst_error(const LinearProblem& problem, std::size_t n, Rng& rng,
                               std::size_t samples);

} // namespace ibc
