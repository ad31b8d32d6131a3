#pragma once

// Weighted sequence-space model with executable discontinuous functionals.
//
// Source norm ‖f‖² = Σᵢ i^{2q} fᵢ², problem S = embedding into ℓ₂ (σᵢ = i^{-q}).
// A coefficient functional Σᵢ cᵢ fᵢ has dual norm² Σᵢ cᵢ² i^{-2q}, so a
// power-law term α·i^p is bounded iff p < q − 1/2. Finitely supported parts
// are always bounded.

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "ibc/information.hpp"
#include "ibc/spectral.hpp"

namespace ibc {

struct PowerTerm {
    double exponent = 0.0;
    double coefficient = 0.0;

    friend bool operator==(const PowerTerm&, const PowerTerm&) = default;
};

/// L(f) = Σᵢ (Σₜ αₜ i^{pₜ} + finiteᵢ) fᵢ with 1-based i.
///
/// Always stored canonically: exponents distinct and sorted descending,
/// zero coefficients dropped.
class SymbolicFunctional {
public:
    SymbolicFunctional() = default;
    explicit SymbolicFunctional(std::vector<PowerTerm> terms, std::map<std::size_t, double> finite = {});

    const std::vector<PowerTerm>& terms() const noexcept { return terms_; }
    const std::map<std::size_t, double>& finite_part() const noexcept { return finite_; }
    bool is_zero() const noexcept { return terms_.empty() && finite_.empty(); }

    /// Coefficient of i^p (0 if absent).
    double term_coefficient(double p) const noexcept;
    /// cᵢ for 1-based i.
    double coefficient(std::size_t i) const;
    /// (c₁, …, c_d).
    Vector truncate(std::size_t d) const;

    SymbolicFunctional scaled(double a) const;
    friend SymbolicFunctional operator+(const SymbolicFunctional& a, const SymbolicFunctional& b);
    friend SymbolicFunctional operator-(const SymbolicFunctional& a, const SymbolicFunctional& b);
    friend bool operator==(const SymbolicFunctional&, const SymbolicFunctional&) = default;

private:
    std::vector<PowerTerm> terms_;
    std::map<std::size_t, double> finite_;
};

class ModelSpace {
public:
    explicit ModelSpace(double q);

    double q() const noexcept { return q_; }
    /// Exponents at or above this make a term unbounded.
    double continuity_threshold() const noexcept { return q_ - 0.5; }
    bool is_divergent(double exponent) const noexcept { return exponent >= continuity_threshold(); }

    double sigma(std::size_t i) const;
    /// First d coordinates: identity operator with weights i^q.
    LinearProblem truncated_problem(std::size_t d) const;

private:
    double q_;
};

enum class Continuity { continuous, discontinuous };

const char* to_string(Continuity c) noexcept;

Continuity classify_continuity(const SymbolicFunctional& l, const ModelSpace& space);

struct RestrictedVerdict {
    Continuity verdict = Continuity::discontinuous;
    /// aⱼ with L + Σ aⱼ priorⱼ bounded on the whole space; empty when discontinuous.
    std::vector<double> coefficients;
};

/// Decides whether L is bounded on ∩ⱼ ker priorⱼ by cancelling the unbounded
/// power-law terms of L against those of the priors. Among valid cancellations
/// the minimal-norm coefficient vector is returned.
RestrictedVerdict classify_continuity_restricted(const SymbolicFunctional& l,
                                                 std::span<const SymbolicFunctional> prior,
                                                 const ModelSpace& space);

struct TransformStep {
    Continuity verdict = Continuity::discontinuous;
    /// aⱼ against every earlier input functional (zeros where unused).
    std::vector<double> extension;
    SymbolicFunctional emitted;
};

struct TransformTrace {
    std::vector<SymbolicFunctional> input;
    std::vector<SymbolicFunctional> output;
    std::vector<TransformStep> steps;
};

/// N → N*: each Lₖ₊₁ bounded on ker L₁ ∩ … ∩ ker Lₖ is replaced by its bounded
/// extension Lₖ₊₁ + Σ aⱼ Lⱼ; every other one by the zero functional.
TransformTrace transform_information(std::span<const SymbolicFunctional> info, const ModelSpace& space);

struct LadderRung {
    std::size_t dim = 0;
    double radius_original = 0.0;
    double radius_transformed = 0.0;

    double gap() const noexcept { return radius_transformed - radius_original; }
};

InformationMap truncate_information(std::span<const SymbolicFunctional> info, std::size_t d);

/// r(N_d) and r(N*_d) on the d-dimensional truncation, for each d in `dims`.
std::vector<LadderRung> truncated_radius_ladder(std::span<const SymbolicFunctional> info,
                                                const ModelSpace& space,
                                                std::span<const std::size_t> dims);

} // namespace ibc
