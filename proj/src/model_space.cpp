#include "ibc/model_space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ibc {

namespace {

// Residual allowed when cancelling unbounded terms, relative to the largest
// coefficient involved.
constexpr double kCancelTol = 1e-10;

} // namespace

SymbolicFunctional::SymbolicFunctional(std::vector<PowerTerm> terms, std::map<std::size_t, double> finite)
{
    for (const auto& t : terms) {
        if (!std::isfinite(t.exponent) || !std::isfinite(t.coefficient))
            throw std::invalid_argument("power-law terms must be finite");
    }
    std::sort(terms.begin(), terms.end(),
              [](const PowerTerm& a, const PowerTerm& b) { return a.exponent > b.exponent; });
    for (const auto& t : terms) {
        if (!terms_.empty() && terms_.back().exponent == t.exponent)
            terms_.back().coefficient += t.coefficient;
        else
            terms_.push_back(t);
    }
    std::erase_if(terms_, [](const PowerTerm& t) { return t.coefficient == 0.0; });

    for (const auto& [i, v] : finite) {
        if (i == 0) throw std::invalid_argument("finite-part indices are 1-based");
        if (!std::isfinite(v)) throw std::invalid_argument("finite-part values must be finite");
        if (v != 0.0) finite_.emplace(i, v);
    }
}

double SymbolicFunctional::term_coefficient(double p) const noexcept
{
    for (const auto& t : terms_)
        if (t.exponent == p) return t.coefficient;
    return 0.0;
}

double SymbolicFunctional::coefficient(std::size_t i) const
{
    if (i == 0) throw std::invalid_argument("coefficient indices are 1-based");
    const double x = static_cast<double>(i);
    double c = 0.0;
    for (const auto& t : terms_) c += t.coefficient * std::pow(x, t.exponent);
    if (auto it = finite_.find(i); it != finite_.end()) c += it->second;
    return c;
}

Vector SymbolicFunctional::truncate(std::size_t d) const
{
    Vector v(static_cast<Index>(d));
    for (std::size_t i = 1; i <= d; ++i) v(static_cast<Index>(i - 1)) = coefficient(i);
    return v;
}

SymbolicFunctional SymbolicFunctional::scaled(double a) const
{
    std::vector<PowerTerm> t = terms_;
    for (auto& term : t) term.coefficient *= a;
    std::map<std::size_t, double> f = finite_;
    for (auto& [i, v] : f) v *= a;
    return SymbolicFunctional(std::move(t), std::move(f));
}

SymbolicFunctional operator+(const SymbolicFunctional& a, const SymbolicFunctional& b)
{
    std::vector<PowerTerm> t = a.terms_;
    t.insert(t.end(), b.terms_.begin(), b.terms_.end());
    std::map<std::size_t, double> f = a.finite_;
    for (const auto& [i, v] : b.finite_) f[i] += v;
    return SymbolicFunctional(std::move(t), std::move(f));
}

SymbolicFunctional operator-(const SymbolicFunctional& a, const SymbolicFunctional& b)
{
    return a + b.scaled(-1.0);
}

// ---------------------------------------------------------------------------

ModelSpace::ModelSpace(double q) : q_(q)
{
    if (!(q > 0.0) || !std::isfinite(q)) throw std::invalid_argument("weight exponent q must be positive");
}

double ModelSpace::sigma(std::size_t i) const
{
    if (i == 0) throw std::invalid_argument("singular value indices are 1-based");
    return std::pow(static_cast<double>(i), -q_);
}

LinearProblem ModelSpace::truncated_problem(std::size_t d) const
{
    if (d == 0) throw std::invalid_argument("truncation dimension must be positive");
    const auto n = static_cast<Index>(d);
    Vector w(n);
    for (Index i = 0; i < n; ++i) w(i) = std::pow(static_cast<double>(i + 1), q_);
    return LinearProblem(Matrix::Identity(n, n), w);
}

const char* to_string(Continuity c) noexcept
{
    return c == Continuity::continuous ? "continuous" : "discontinuous";
}

Continuity classify_continuity(const SymbolicFunctional& l, const ModelSpace& space)
{
    for (const auto& t : l.terms())
        if (space.is_divergent(t.exponent)) return Continuity::discontinuous;
    return Continuity::continuous;
}

RestrictedVerdict classify_continuity_restricted(const SymbolicFunctional& l,
                                                 std::span<const SymbolicFunctional> prior,
                                                 const ModelSpace& space)
{
    std::vector<double> exps;
    auto collect = [&](const SymbolicFunctional& f) {
        for (const auto& t : f.terms())
            if (space.is_divergent(t.exponent)) exps.push_back(t.exponent);
    };
    collect(l);
    for (const auto& p : prior) collect(p);
    std::sort(exps.begin(), exps.end());
    exps.erase(std::unique(exps.begin(), exps.end()), exps.end());

    const auto k = static_cast<Index>(prior.size());
    RestrictedVerdict out;
    if (classify_continuity(l, space) == Continuity::continuous) {
        out.verdict = Continuity::continuous;
        out.coefficients.assign(prior.size(), 0.0);
        return out;
    }
    if (k == 0) return out;

    // Row per unbounded exponent: Σⱼ aⱼ coef(priorⱼ) = −coef(L).
    const auto rows = static_cast<Index>(exps.size());
    Matrix m(rows, k);
    Vector rhs(rows);
    double scale = 0.0;
    for (Index e = 0; e < rows; ++e) {
        const double p = exps[static_cast<std::size_t>(e)];
        rhs(e) = -l.term_coefficient(p);
        scale = std::max(scale, std::abs(rhs(e)));
        for (Index j = 0; j < k; ++j) {
            m(e, j) = prior[static_cast<std::size_t>(j)].term_coefficient(p);
            scale = std::max(scale, std::abs(m(e, j)));
        }
    }

    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(m);
    const Vector a = cod.solve(rhs);
    const double residual = (m * a - rhs).lpNorm<Eigen::Infinity>();
    if (!a.allFinite() || residual > kCancelTol * std::max(1.0, scale)) return out;

    out.verdict = Continuity::continuous;
    out.coefficients.assign(a.data(), a.data() + a.size());
    return out;
}

TransformTrace transform_information(std::span<const SymbolicFunctional> info, const ModelSpace& space)
{
    TransformTrace trace;
    trace.input.assign(info.begin(), info.end());

    // Functionals zeroed so far; their unbounded parts are linearly independent
    // and span the unbounded parts of every earlier input.
    std::vector<std::size_t> pivots;
    std::vector<SymbolicFunctional> pivot_funcs;

    for (std::size_t k = 0; k < info.size(); ++k) {
        const SymbolicFunctional& l = info[k];
        TransformStep step;
        step.extension.assign(k, 0.0);

        const RestrictedVerdict v = classify_continuity_restricted(l, pivot_funcs, space);
        step.verdict = v.verdict;
        if (v.verdict == Continuity::continuous) {
            SymbolicFunctional ext = l;
            double scale = 0.0;
            for (const auto& t : l.terms()) scale = std::max(scale, std::abs(t.coefficient));
            for (std::size_t j = 0; j < pivots.size(); ++j) {
                step.extension[pivots[j]] = v.coefficients[j];
                ext = ext + pivot_funcs[j].scaled(v.coefficients[j]);
                for (const auto& t : pivot_funcs[j].terms())
                    scale = std::max(scale, std::abs(v.coefficients[j] * t.coefficient));
            }
            // Drop cancelled unbounded terms left over from rounding.
            std::vector<PowerTerm> kept;
            for (const auto& t : ext.terms()) {
                if (space.is_divergent(t.exponent)) {
                    if (std::abs(t.coefficient) > kCancelTol * std::max(1.0, scale))
                        throw std::logic_error("unbounded term survived cancellation");
                    continue;
                }
                kept.push_back(t);
            }
            step.emitted = SymbolicFunctional(std::move(kept), ext.finite_part());
        } else {
            pivots.push_back(k);
            pivot_funcs.push_back(l);
        }
        trace.output.push_back(step.emitted);
        trace.steps.push_back(std::move(step));
    }
    return trace;
}

InformationMap truncate_information(std::span<const SymbolicFunctional> info, std::size_t d)
{
    InformationMap out;
    for (const auto& l : info) out.append(l.truncate(d));
    return out;
}

std::vector<LadderRung> truncated_radius_ladder(std::span<const SymbolicFunctional> info,
                                                const ModelSpace& space,
                                                std::span<const std::size_t> dims)
{
    for (std::size_t i = 1; i < dims.size(); ++i)
        if (dims[i] <= dims[i - 1]) throw std::invalid_argument("ladder dimensions must be increasing");

    const TransformTrace trace = transform_information(info, space);
    std::vector<LadderRung> out;
    out.reserve(dims.size());
    for (const std::size_t d : dims) {
        const LinearProblem problem = space.truncated_problem(d);
        LadderRung rung;
        rung.dim = d;
        rung.radius_original = radius_nonadaptive(problem, truncate_information(trace.input, d)).radius;
        rung.radius_transformed = radius_nonadaptive(problem, truncate_information(trace.output, d)).radius;
        out.push_back(rung);
    }
    return out;
}

} // namespace ibc
