#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ibc/cli.hpp"
#include "ibc/information.hpp"
#include "ibc/l1_case_study.hpp"
#include "ibc/model_space.hpp"
#include "ibc/randomized.hpp"
#include "ibc/spectral.hpp"
#include "ibc/std_info.hpp"

namespace py = pybind11;
using namespace ibc;

namespace {

InformationMap rows_to_info(const Matrix& rows) { return InformationMap::from_rows(rows); }

py::dict radius_dict(const RadiusReport& r)
{
    py::dict d;
    d["radius"] = r.radius;
    d["kernel_dim"] = r.kernel_dim;
    d["witness"] = r.witness.coords;
    return d;
}

void bind_spectral(py::module_& m)
{
    py::class_<SingularSpectrum>(m, "SingularSpectrum")
        .def_static("explicit_values", &SingularSpectrum::explicit_values, py::arg("values"))
        .def_static("power_law", &SingularSpectrum::power_law, py::arg("p"), py::arg("m"))
        .def_property_readonly("values", &SingularSpectrum::values)
        .def("sigma", &SingularSpectrum::sigma, py::arg("i"), "σᵢ with 1-based i; zero past the end.")
        .def("__len__", &SingularSpectrum::size)
        .def("__repr__", [](const SingularSpectrum& s) {
            return "<SingularSpectrum m=" + std::to_string(s.size()) + ">";
        });

    py::class_<LinearProblem>(m, "LinearProblem")
        .def(py::init([](const Matrix& s, std::optional<Vector> weights) {
                 if (!weights) return LinearProblem(s, SourceMetric::identity(s.cols()));
                 return LinearProblem(s, *weights);
             }),
             py::arg("matrix"), py::arg("weights") = py::none())
        .def_static("with_gram", [](const Matrix& s, const Matrix& g) { return LinearProblem(s, SourceMetric::gram(g)); },
                    py::arg("matrix"), py::arg("gram"))
        .def_static("diagonal", [](const std::vector<double>& s) { return LinearProblem::diagonal(s); }, py::arg("sigma"))
        .def_static("from_spectrum", py::overload_cast<const SingularSpectrum&>(&LinearProblem::diagonal),
                    py::arg("spectrum"))
        .def_property_readonly("matrix", &LinearProblem::matrix)
        .def_property_readonly("spectrum", &LinearProblem::spectrum)
        .def_property_readonly("right_basis", &LinearProblem::right_basis)
        .def_property_readonly("left_basis", &LinearProblem::left_basis);

    m.def("worst_case_error", &worst_case_error, py::arg("spectrum"), py::arg("n"));
    m.def("apply_optimal_algorithm",
          [](const LinearProblem& p, std::size_t n, const Vector& f) { return apply_optimal_algorithm(p, n, Element{f}); },
          py::arg("problem"), py::arg("n"), py::arg("f"));
    m.def("brute_force_worst_error",
          [](const LinearProblem& p, std::size_t n, std::uint64_t seed, std::size_t samples) {
              Rng rng(seed);
              return brute_force_worst_error(p, n, rng, samples);
          },
          py::arg("problem"), py::arg("n"), py::arg("seed"), py::arg("samples") = 10000);
}

void bind_information(py::module_& m)
{
    m.def("kernel_basis",
          [](const Matrix& rows, const LinearProblem& p) { return kernel_basis(rows_to_info(rows), p.metric()); },
          py::arg("rows"), py::arg("problem"), "Basis of ker N (one functional per row), orthonormal in the source metric.");
    m.def("radius_nonadaptive",
          [](const LinearProblem& p, const Matrix& rows) { return radius_dict(radius_nonadaptive(p, rows_to_info(rows))); },
          py::arg("problem"), py::arg("rows"));
    m.def("radius_recombination_check",
          [](const LinearProblem& p, const Matrix& rows, const Matrix& t) {
              return radius_recombination_check(p, rows_to_info(rows), t);
          },
          py::arg("problem"), py::arg("rows"), py::arg("t"));
    m.def("truncation_information",
          [](const LinearProblem& p, std::size_t n) {
              return truncation_information(p, n).as_matrix(p.source_dim());
          },
          py::arg("problem"), py::arg("n"));
}

void bind_model_space(py::module_& m)
{
    py::enum_<Continuity>(m, "Continuity")
        .value("continuous", Continuity::continuous)
        .value("discontinuous", Continuity::discontinuous);

    py::class_<SymbolicFunctional>(m, "SymbolicFunctional")
        .def(py::init([](const std::vector<std::pair<double, double>>& terms, const std::map<std::size_t, double>& finite) {
                 std::vector<PowerTerm> t;
                 for (const auto& [p, a] : terms) t.push_back({p, a});
                 return SymbolicFunctional(std::move(t), finite);
             }),
             py::arg("terms") = std::vector<std::pair<double, double>>{},
             py::arg("finite") = std::map<std::size_t, double>{},
             "terms: [(p, alpha)], finite: {1-based index: value}.")
        .def_property_readonly("terms",
                               [](const SymbolicFunctional& l) {
                                   std::vector<std::pair<double, double>> out;
                                   for (const auto& t : l.terms()) out.emplace_back(t.exponent, t.coefficient);
                                   return out;
                               })
        .def_property_readonly("finite", &SymbolicFunctional::finite_part)
        .def("is_zero", &SymbolicFunctional::is_zero)
        .def("coefficient", &SymbolicFunctional::coefficient, py::arg("i"))
        .def("truncate", &SymbolicFunctional::truncate, py::arg("d"))
        .def(py::self + py::self)
        .def(py::self - py::self)
        .def(py::self == py::self)
        .def("scaled", &SymbolicFunctional::scaled, py::arg("a"));

    py::class_<ModelSpace>(m, "ModelSpace")
        .def(py::init<double>(), py::arg("q"))
        .def_property_readonly("q", &ModelSpace::q)
        .def("sigma", &ModelSpace::sigma, py::arg("i"));

    m.def("classify_continuity", &classify_continuity, py::arg("functional"), py::arg("space"));
    m.def("classify_continuity_restricted",
          [](const SymbolicFunctional& l, const std::vector<SymbolicFunctional>& prior, const ModelSpace& s) {
              const auto v = classify_continuity_restricted(l, prior, s);
              return py::make_tuple(v.verdict, v.coefficients);
          },
          py::arg("functional"), py::arg("prior"), py::arg("space"));
    m.def("transform_information",
          [](const std::vector<SymbolicFunctional>& info, const ModelSpace& s) {
              const auto t = transform_information(info, s);
              py::list steps;
              for (const auto& st : t.steps) {
                  py::dict d;
                  d["verdict"] = st.verdict;
                  d["extension"] = st.extension;
                  d["emitted"] = st.emitted;
                  steps.append(d);
              }
              return py::make_tuple(t.output, steps);
          },
          py::arg("info"), py::arg("space"), "Returns (N*, per-step records).");
    m.def("truncated_radius_ladder",
          [](const std::vector<SymbolicFunctional>& info, const ModelSpace& s, const std::vector<std::size_t>& dims) {
              std::vector<std::tuple<std::size_t, double, double>> out;
              for (const auto& r : truncated_radius_ladder(info, s, dims))
                  out.emplace_back(r.dim, r.radius_original, r.radius_transformed);
              return out;
          },
          py::arg("info"), py::arg("space"), py::arg("dims"), "Rows (d, r(N_d), r(N*_d)).");
}

void bind_randomized(py::module_& m)
{
    py::class_<RandomizedEstimate>(m, "RandomizedEstimate")
        .def_readonly("value", &RandomizedEstimate::value)
        .def_readonly("standard_error", &RandomizedEstimate::standard_error)
        .def_readonly("samples", &RandomizedEstimate::samples)
        .def_readonly("seed", &RandomizedEstimate::seed);

    m.def("avg_case_error_closed_form", &avg_case_error_closed_form, py::arg("spectrum"), py::arg("n"), py::arg("m"));
    m.def("avg_case_error_mc",
          [](const LinearProblem& p, std::size_t n, Index m, std::uint64_t seed, std::size_t samples) {
              SphereSampler sampler(m, seed);
              return avg_case_error_mc(p, n, sampler, samples);
          },
          py::arg("problem"), py::arg("n"), py::arg("m"), py::arg("seed"), py::arg("samples") = 100000);
    m.def("bakhvalov_lower_bound", &bakhvalov_lower_bound, py::arg("spectrum"), py::arg("n"));
    m.def("sandwich_report",
          [](const SingularSpectrum& s, std::size_t n) {
              const auto b = sandwich_report(s, n);
              return py::make_tuple(b.lower, b.upper);
          },
          py::arg("spectrum"), py::arg("n"), "(½σ₄ₙ, σₙ₊₁).");
}

void bind_l1(py::module_& m)
{
    m.def("estimator_exact_variance",
          [](const Vector& x, std::size_t n) { return estimator_exact_variance(L1Vector(x), n); }, py::arg("x"),
          py::arg("n"));
    m.def("empirical_variance_estimator",
          [](const Vector& x, std::size_t n, std::uint64_t seed) {
              Rng rng(seed);
              return empirical_variance_estimator(L1Vector(x), n, rng);
          },
          py::arg("x"), py::arg("n"), py::arg("seed"));
    m.def("rmse_sweep",
          [](const Vector& x, const std::vector<std::size_t>& ns, std::size_t reps, std::uint64_t seed) {
              std::vector<std::tuple<std::size_t, double, double>> out;
              for (const auto& r : rmse_sweep(L1Vector(x), ns, reps, seed)) out.emplace_back(r.n, r.rmse, r.envelope);
              return out;
          },
          py::arg("x"), py::arg("n_grid"), py::arg("reps"), py::arg("seed"), "Rows (n, rmse, envelope).");
    m.def("kernel_polytope_max_l2",
          [](const Matrix& n) {
              const auto r = kernel_polytope_max_l2(n);
              return py::make_tuple(r.value, r.witness);
          },
          py::arg("info"));
    m.def("gelfand_width_bounds",
          [](Index m_, Index n, std::size_t restarts, std::uint64_t seed) {
              const auto w = gelfand_width_bounds(m_, n, restarts, seed);
              return py::make_tuple(w.lower_bound, w.upper_bound);
          },
          py::arg("m"), py::arg("n"), py::arg("restarts"), py::arg("seed"), "(lower, upper).");
    m.def("separation_report",
          [](Index m_, const std::vector<std::size_t>& ns, std::size_t reps, std::uint64_t seed) {
              std::vector<std::tuple<std::size_t, double, double>> out;
              for (const auto& r : separation_report(m_, ns, reps, seed)) out.emplace_back(r.n, r.wc_floor, r.ran_rmse);
              return out;
          },
          py::arg("m"), py::arg("n_grid"), py::arg("reps"), py::arg("seed"), "Rows (n, wc_floor, ran_rmse).");
}

void bind_std_info(py::module_& m)
{
    py::class_<GridModel>(m, "GridModel")
        .def(py::init([](std::vector<double> grid, Matrix gram, Matrix s) {
                 GridModel g{std::move(grid), std::move(gram), std::move(s)};
                 g.validate();
                 return g;
             }),
             py::arg("grid"), py::arg("gram"), py::arg("s"))
        .def_static("random", &random_grid_model, py::arg("m"), py::arg("rows"), py::arg("seed"))
        .def_readonly("grid", &GridModel::grid)
        .def_readonly("gram", &GridModel::gram)
        .def_readonly("s", &GridModel::s);

    m.def("std_vs_all",
          [](const GridModel& g, std::size_t n) {
              const auto r = std_vs_all(g, n);
              return py::make_tuple(r.e_std, r.e_all, r.points);
          },
          py::arg("model"), py::arg("n"), "(e_std, e_all, optimal points).");
    m.def("mc_integration",
          [](const std::function<double(double)>& f, std::size_t n, std::uint64_t seed) {
              Rng rng(seed);
              return mc_integration(f, n, rng);
          },
          py::arg("f"), py::arg("n"), py::arg("seed"));
    m.def("project_to_two_point_constraint",
          [](const std::vector<double>& c) { return project_to_two_point_constraint(Polynomial{c}).coefficients; },
          py::arg("coefficients"));
    m.def("two_point_exact", [](const std::vector<double>& c) { return two_point_exact(Polynomial{c}); },
          py::arg("coefficients"));
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Minimal errors, radii of information and randomized bounds for linear problems.";
    bind_spectral(m);
    bind_information(m);
    bind_model_space(m);
    bind_randomized(m);
    bind_l1(m);
    bind_std_info(m);

    m.def("run_cli",
          [](const std::vector<std::string>& args) {
              std::ostringstream out, err;
              const int code = cli::run(args, out, err);
              return py::make_tuple(code, out.str(), err.str());
          },
          py::arg("args"), "Runs the command-line front end in-process; returns (exit code, stdout, stderr).");
}
