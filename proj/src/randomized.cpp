#include "ibc/randomized.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ibc {

SphereSampler::SphereSampler(Index dim, std::uint64_t seed) : dim_(dim), seed_(seed), rng_(seed)
{
    if (dim < 1) throw std::invalid_argument("sphere dimension must be at least 1");
}

Vector SphereSampler::next()
{
    Vector v(dim_);
    fill(v);
    return v;
}

void SphereSampler::fill(Eigen::Ref<Matrix> block)
{
    if (block.rows() != dim_) throw std::invalid_argument("sample block has the wrong dimension");
    for (Index c = 0; c < block.cols(); ++c) {
        double nrm = 0.0;
        do {
            for (Index i = 0; i < dim_; ++i) block(i, c) = normal_(rng_);
            nrm = block.col(c).norm();
        } while (nrm == 0.0);
        block.col(c) /= nrm;
        ++position_;
    }
}

// ---------------------------------------------------------------------------

double avg_case_error_closed_form(const SingularSpectrum& spectrum, std::size_t n, std::size_t m)
{
    if (n > m) throw std::invalid_argument("cardinality n exceeds sphere dimension m");
    if (m == 0 || m > spectrum.size())
        throw std::invalid_argument("sphere dimension must be between 1 and the spectrum length");
    double sum = 0.0;
    for (std::size_t i = n + 1; i <= m; ++i) sum += spectrum.sigma(i) * spectrum.sigma(i);
    return std::sqrt(sum / static_cast<double>(m));
}

RandomizedEstimate avg_case_error_mc(const LinearProblem& problem, std::size_t n, SphereSampler& sampler,
                                     std::size_t samples)
{
    if (samples < 10) throw std::invalid_argument("need at least 10 samples");
    const Index m = sampler.dim();
    if (m > problem.source_dim()) throw std::invalid_argument("sphere dimension exceeds the problem dimension");
    if (n > static_cast<std::size_t>(m)) throw std::invalid_argument("cardinality n exceeds sphere dimension m");

    RandomizedEstimate est;
    est.samples = samples;
    est.seed = sampler.seed();

    // f = Σ_{i≤m} αᵢ eᵢ, so S f − A*ₙ f = E α with E = (S − Ũₙ Σₙ Cₙ) V_m, where
    // Cₙ maps source coordinates to the first n basis coefficients.
    const Index r = std::min<Index>(static_cast<Index>(n), problem.left_basis().cols());
    const Matrix& whiten = problem.metric().whiten();
    const Matrix basis = problem.right_basis().leftCols(m);
    Matrix residual_map = problem.matrix() * basis;
    if (r > 0) {
        Vector sigma_n(r);
        for (Index i = 0; i < r; ++i) sigma_n(i) = problem.spectrum().values()[static_cast<std::size_t>(i)];
        const Matrix coeffs = problem.right_basis().leftCols(r).transpose() * whiten.transpose() * whiten * basis;
        residual_map.noalias() -= problem.left_basis().leftCols(r) * (sigma_n.asDiagonal() * coeffs);
    }

    constexpr Index kBlock = 2048;
    Matrix alpha(m, kBlock);
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t done = 0;
    while (done < samples) {
        const Index b = std::min<Index>(kBlock, static_cast<Index>(samples - done));
        auto a = alpha.leftCols(b);
        sampler.fill(a);
        const Eigen::ArrayXd sq = (residual_map * a).colwise().squaredNorm().transpose().array();
        sum += sq.sum();
        sum_sq += sq.square().sum();
        done += static_cast<std::size_t>(b);
    }

    const double count = static_cast<double>(samples);
    const double mean = sum / count;
    const double var = std::max(0.0, (sum_sq - count * mean * mean) / (count - 1.0));
    est.value = std::sqrt(mean);
    est.standard_error = est.value > 0.0 ? std::sqrt(var / count) / (2.0 * est.value) : 0.0;
    return est;
}

// ---------------------------------------------------------------------------

namespace {

void require_bakhvalov_range(const SingularSpectrum& spectrum, std::size_t n)
{
    if (n == 0) throw std::invalid_argument("randomized lower bound needs n >= 1");
    if (spectrum.size() < 4 * n)
        throw std::invalid_argument("spectrum too short: need length >= 4n = " + std::to_string(4 * n));
}

} // namespace

double bakhvalov_lower_bound(const SingularSpectrum& spectrum, std::size_t n)
{
    require_bakhvalov_range(spectrum, n);
    return 0.5 * spectrum.sigma(4 * n);
}

double bakhvalov_average_bound(const SingularSpectrum& spectrum, std::size_t n)
{
    require_bakhvalov_range(spectrum, n);
    return std::sqrt(0.5) * avg_case_error_closed_form(spectrum, 2 * n, 4 * n);
}

SandwichBounds sandwich_report(const SingularSpectrum& spectrum, std::size_t n)
{
    SandwichBounds b;
    b.lower = bakhvalov_lower_bound(spectrum, n);
    b.upper = worst_case_error(spectrum, n);
    return b;
}

std::vector<SandwichRow> sandwich_table(const SingularSpectrum& spectrum, std::span<const std::size_t> ns,
                                        std::optional<std::uint64_t> seed, std::size_t samples)
{
    std::vector<SandwichRow> rows;
    rows.reserve(ns.size());
    for (const std::size_t n : ns) {
        const SandwichBounds b = sandwich_report(spectrum, n);
        SandwichRow row;
        row.n = n;
        row.lower = b.lower;
        row.upper = b.upper;
        row.closed_form_avg = avg_case_error_closed_form(spectrum, 2 * n, 4 * n);
        if (seed) {
            std::vector<double> head(spectrum.values().begin(),
                                     spectrum.values().begin() + static_cast<std::ptrdiff_t>(4 * n));
            const LinearProblem problem = LinearProblem::diagonal(head);
            SphereSampler sampler(static_cast<Index>(4 * n), derive_seed(*seed, {n}));
            row.mc_avg = avg_case_error_mc(problem, 2 * n, sampler, samples);
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace ibc
