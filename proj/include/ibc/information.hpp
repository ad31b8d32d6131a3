#pragma once

#include <cstddef>
#include <vector>

#include "ibc/spectral.hpp"

namespace ibc {

/// Relative rank tolerance for functional lists.
inline constexpr double kRankTol = 1e-10;

/// Nonadaptive information N(f) = (L₁(f), …, Lₙ(f)) with Lⱼ(f) = Σᵢ Lⱼᵢ fᵢ.
class InformationMap {
public:
    InformationMap() = default;
    explicit InformationMap(std::vector<Vector> functionals);
    /// One functional per row.
    static InformationMap from_rows(const Matrix& rows);

    std::size_t size() const noexcept { return functionals_.size(); }
    bool empty() const noexcept { return functionals_.empty(); }
    const std::vector<Vector>& functionals() const noexcept { return functionals_; }
    const Vector& operator[](std::size_t j) const { return functionals_[j]; }

    void append(Vector functional);

    /// n × dim; throws if a functional has a different length.
    Matrix as_matrix(Index dim) const;
    Vector evaluate(const Element& f) const;

    /// Keeps, in order, each functional that raises the rank.
    InformationMap canonicalized() const;

private:
    std::vector<Vector> functionals_;
};

struct RadiusReport {
    double radius = 0.0;
    Index kernel_dim = 0;
    /// Unit vector of ker N (source norm) attaining the radius; empty if ker N = {0}.
    Element witness;
};

/// Columns form a basis of ker N, orthonormal in `metric`.
Matrix kernel_basis(const InformationMap& info, const SourceMetric& metric);

/// r(N) = sup{ ‖S f‖ : N f = 0, ‖f‖ < 1 }.
RadiusReport radius_nonadaptive(const LinearProblem& problem, const InformationMap& info);

/// Information with rows multiplied by an invertible T.
InformationMap recombine(const InformationMap& info, const Matrix& t);

/// True iff r(N) and r(T·N) agree to 10⁻⁹·σ₁. Throws when T is singular.
bool radius_recombination_check(const LinearProblem& problem, const InformationMap& info, const Matrix& t);

/// (e₁*, …, eₙ*) with eᵢ*(f) = αᵢ, the information used by A*ₙ.
InformationMap truncation_information(const LinearProblem& problem, std::size_t n);

} // namespace ibc
