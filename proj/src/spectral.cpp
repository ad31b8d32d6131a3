#include "ibc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ibc {

SingularSpectrum SingularSpectrum::explicit_values(std::vector<double> values)
{
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]) || values[i] < 0.0)
            throw std::invalid_argument("singular values must be finite and nonnegative");
        if (i > 0 && values[i] > values[i - 1])
            throw std::invalid_argument("singular values are not nonincreasing at index " +
                                        std::to_string(i + 1));
    }
    return SingularSpectrum(std::move(values), SpectrumKind::explicit_values, 0.0);
}

SingularSpectrum SingularSpectrum::power_law(double p, std::size_t m)
{
    if (!(p > 0.0) || !std::isfinite(p))
        throw std::invalid_argument("power-law exponent must be positive");
    std::vector<double> v(m);
    for (std::size_t i = 0; i < m; ++i) v[i] = std::pow(static_cast<double>(i + 1), -p);
    return SingularSpectrum(std::move(v), SpectrumKind::power_law, p);
}

SingularSpectrum make_spectrum(SpectrumKind kind, std::span<const double> params, std::size_t m)
{
    if (m == 0) throw std::invalid_argument("spectrum length must be at least 1");
    switch (kind) {
    case SpectrumKind::power_law:
        if (params.size() != 1) throw std::invalid_argument("power-law spectrum takes one parameter p");
        return SingularSpectrum::power_law(params[0], m);
    case SpectrumKind::explicit_values:
        if (params.size() != m)
            throw std::invalid_argument("explicit spectrum has " + std::to_string(params.size()) +
                                        " values, expected " + std::to_string(m));
        return SingularSpectrum::explicit_values({params.begin(), params.end()});
    }
    throw std::invalid_argument("unknown spectrum kind");
}

// ---------------------------------------------------------------------------

SourceMetric SourceMetric::identity(Index dim)
{
    return SourceMetric(Matrix::Identity(dim, dim), Matrix::Identity(dim, dim));
}

SourceMetric SourceMetric::diagonal(const Vector& weights)
{
    if ((weights.array() <= 0.0).any() || !weights.allFinite())
        throw std::invalid_argument("source weights must be positive");
    Matrix r = weights.asDiagonal();
    Matrix rinv = weights.cwiseInverse().asDiagonal();
    return SourceMetric(std::move(r), std::move(rinv));
}

SourceMetric SourceMetric::gram(const Matrix& gram)
{
    if (gram.rows() != gram.cols()) throw std::invalid_argument("Gram matrix must be square");
    if (!gram.isApprox(gram.transpose(), 1e-12))
        throw std::invalid_argument("Gram matrix must be symmetric");
    Eigen::LLT<Matrix> llt(gram);
    if (llt.info() != Eigen::Success) throw std::invalid_argument("Gram matrix must be positive definite");
    Matrix r = llt.matrixU();
    Matrix rinv = llt.matrixU().solve(Matrix::Identity(gram.rows(), gram.cols()));
    return SourceMetric(std::move(r), std::move(rinv));
}

// ---------------------------------------------------------------------------

LinearProblem::LinearProblem(Matrix s, const Vector& source_weights)
    : LinearProblem(std::move(s), SourceMetric::diagonal(source_weights))
{
}

LinearProblem::LinearProblem(Matrix s, SourceMetric metric) : s_(std::move(s)), metric_(std::move(metric))
{
    if (s_.cols() == 0) throw std::invalid_argument("problem needs a nonempty source space");
    if (metric_.dim() != s_.cols())
        throw std::invalid_argument("source metric dimension does not match the operator");
    decompose();
}

LinearProblem LinearProblem::diagonal(std::span<const double> sigma)
{
    const auto m = static_cast<Index>(sigma.size());
    Matrix s = Matrix::Zero(m, m);
    for (Index i = 0; i < m; ++i) s(i, i) = sigma[static_cast<std::size_t>(i)];
    return LinearProblem(std::move(s), SourceMetric::identity(m));
}

LinearProblem LinearProblem::diagonal(const SingularSpectrum& spectrum)
{
    return diagonal(std::span<const double>(spectrum.values()));
}

void LinearProblem::decompose()
{
    const Matrix euclid = s_ * metric_.unwhiten();
    Eigen::JacobiSVD<Matrix> svd(euclid, Eigen::ComputeThinU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();

    const Index m = s_.cols();
    std::vector<double> values(static_cast<std::size_t>(m), 0.0);
    const double top = sv.size() > 0 ? sv(0) : 0.0;
    for (Index i = 0; i < sv.size(); ++i)
        values[static_cast<std::size_t>(i)] = sv(i) > kZeroSpectrumRel * top ? sv(i) : 0.0;
    spectrum_ = SingularSpectrum::explicit_values(std::move(values));

    right_ = metric_.unwhiten() * svd.matrixV();
    left_ = svd.matrixU();
}

Vector LinearProblem::basis_coefficients(const Element& f) const
{
    if (f.coords.size() != source_dim())
        throw std::invalid_argument("element dimension does not match the problem");
    // αᵢ = ⟨f, eᵢ⟩_F = (V ᵀ R f)ᵢ
    return right_.transpose() * (metric_.whiten().transpose() * (metric_.whiten() * f.coords));
}

Element LinearProblem::from_basis_coefficients(const Vector& alpha) const
{
    if (alpha.size() > source_dim()) throw std::invalid_argument("too many basis coefficients");
    return Element{right_.leftCols(alpha.size()) * alpha};
}

// ---------------------------------------------------------------------------

double worst_case_error(const SingularSpectrum& spectrum, std::size_t n)
{
    return spectrum.sigma(n + 1);
}

Vector apply_optimal_algorithm(const LinearProblem& problem, std::size_t n, const Element& f)
{
    if (n > static_cast<std::size_t>(problem.source_dim()))
        throw std::invalid_argument("cardinality exceeds the problem dimension");
    const Vector alpha = problem.basis_coefficients(f);
    const Index r = std::min<Index>(static_cast<Index>(n), problem.left_basis().cols());
    Vector out = Vector::Zero(problem.target_dim());
    for (Index i = 0; i < r; ++i)
        out += problem.spectrum().values()[static_cast<std::size_t>(i)] * alpha(i) * problem.left_basis().col(i);
    return out;
}

double brute_force_worst_error(const LinearProblem& problem, std::size_t n, Rng& rng, std::size_t samples)
{
    if (samples == 0) throw std::invalid_argument("need at least one sample");
    const Index m = problem.source_dim();
    if (n >= static_cast<std::size_t>(m)) return 0.0;

    auto residual = [&](const Element& f) {
        return (problem.apply(f) - apply_optimal_algorithm(problem, n, f)).norm();
    };

    double best = residual(Element{kOpenBallScale * problem.right_basis().col(static_cast<Index>(n))});

    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform;
    Vector g(m);
    for (std::size_t s = 0; s < samples; ++s) {
        for (Index i = 0; i < m; ++i) g(i) = normal(rng);
        const double nrm = g.norm();
        if (nrm == 0.0) continue;
        const double radius = kOpenBallScale * std::pow(uniform(rng), 1.0 / static_cast<double>(m));
        g *= radius / nrm;
        best = std::max(best, residual(Element{problem.metric().unwhiten() * g}));
    }
    return best;
}

} // namespace ibc
