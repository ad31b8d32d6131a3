#include "ibc/information.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ibc {

namespace {

Index numerical_rank(const Eigen::JacobiSVD<Matrix>& svd, double scale)
{
    const auto& sv = svd.singularValues();
    Index r = 0;
    while (r < sv.size() && sv(r) > kRankTol * scale) ++r;
    return r;
}

double max_row_norm(const Matrix& rows)
{
    return rows.rows() == 0 ? 0.0 : rows.rowwise().norm().maxCoeff();
}

} // namespace

InformationMap::InformationMap(std::vector<Vector> functionals) : functionals_(std::move(functionals))
{
    for (const auto& l : functionals_)
        if (l.size() != functionals_.front().size())
            throw std::invalid_argument("functionals must share one dimension");
}

InformationMap InformationMap::from_rows(const Matrix& rows)
{
    std::vector<Vector> f;
    f.reserve(static_cast<std::size_t>(rows.rows()));
    for (Index j = 0; j < rows.rows(); ++j) f.emplace_back(rows.row(j).transpose());
    return InformationMap(std::move(f));
}

void InformationMap::append(Vector functional)
{
    if (!functionals_.empty() && functional.size() != functionals_.front().size())
        throw std::invalid_argument("functionals must share one dimension");
    functionals_.push_back(std::move(functional));
}

Matrix InformationMap::as_matrix(Index dim) const
{
    Matrix a(static_cast<Index>(functionals_.size()), dim);
    for (std::size_t j = 0; j < functionals_.size(); ++j) {
        if (functionals_[j].size() != dim)
            throw std::invalid_argument("functional length does not match the source dimension");
        a.row(static_cast<Index>(j)) = functionals_[j].transpose();
    }
    return a;
}

Vector InformationMap::evaluate(const Element& f) const
{
    return as_matrix(f.coords.size()) * f.coords;
}

InformationMap InformationMap::canonicalized() const
{
    if (functionals_.empty()) return {};
    const Index dim = functionals_.front().size();
    const double scale = max_row_norm(as_matrix(dim));

    InformationMap out;
    Matrix kept(0, dim);
    Index rank = 0;
    for (const auto& l : functionals_) {
        Matrix trial(kept.rows() + 1, dim);
        trial << kept, l.transpose();
        Eigen::JacobiSVD<Matrix> svd(trial);
        const Index r = numerical_rank(svd, scale);
        if (r > rank) {
            kept = std::move(trial);
            rank = r;
            out.append(l);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

Matrix kernel_basis(const InformationMap& info, const SourceMetric& metric)
{
    const Index m = metric.dim();
    if (info.empty()) return metric.unwhiten();

    // Rows in whitened coordinates g = R f.
    const Matrix rows = info.as_matrix(m) * metric.unwhiten();
    Eigen::JacobiSVD<Matrix> svd(rows, Eigen::ComputeFullV);
    const Index rank = numerical_rank(svd, max_row_norm(rows));
    return metric.unwhiten() * svd.matrixV().rightCols(m - rank);
}

RadiusReport radius_nonadaptive(const LinearProblem& problem, const InformationMap& info)
{
    const Matrix basis = kernel_basis(info, problem.metric());
    RadiusReport report;
    report.kernel_dim = basis.cols();
    if (basis.cols() == 0) {
        report.witness = Element{Vector::Zero(0)};
        return report;
    }
    Eigen::BDCSVD<Matrix> svd(problem.matrix() * basis, Eigen::ComputeThinV);
    report.radius = svd.singularValues()(0);
    report.witness = Element{basis * svd.matrixV().col(0)};
    return report;
}

InformationMap recombine(const InformationMap& info, const Matrix& t)
{
    const auto n = static_cast<Index>(info.size());
    if (t.rows() != n || t.cols() != n)
        throw std::invalid_argument("recombination matrix must be n × n");
    Eigen::FullPivLU<Matrix> lu(t);
    if (!lu.isInvertible()) throw std::invalid_argument("recombination matrix is singular");
    if (n == 0) return {};
    return InformationMap::from_rows(t * info.as_matrix(info[0].size()));
}

bool radius_recombination_check(const LinearProblem& problem, const InformationMap& info, const Matrix& t)
{
    const InformationMap mixed = recombine(info, t);
    const double a = radius_nonadaptive(problem, info).radius;
    const double b = radius_nonadaptive(problem, mixed).radius;
    return std::abs(a - b) <= 1e-9 * problem.spectrum().largest();
}

InformationMap truncation_information(const LinearProblem& problem, std::size_t n)
{
    if (n > static_cast<std::size_t>(problem.source_dim()))
        throw std::invalid_argument("cardinality exceeds the problem dimension");
    const Matrix& r = problem.metric().whiten();
    const Matrix gram = r.transpose() * r;
    InformationMap out;
    for (std::size_t i = 0; i < n; ++i) out.append(gram * problem.right_basis().col(static_cast<Index>(i)));
    return out;
}

} // namespace ibc
