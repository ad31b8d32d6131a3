#include "ibc/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ibc/information.hpp"
#include "ibc/io.hpp"
#include "ibc/l1_case_study.hpp"
#include "ibc/model_space.hpp"
#include "ibc/randomized.hpp"
#include "ibc/spectral.hpp"
#include "ibc/std_info.hpp"

namespace ibc::cli {

namespace {

struct Config {
    std::string command;
    std::string format = "csv";
    std::string output;

    std::string spectrum;
    std::string problem_file;
    std::string info_file;
    std::string functionals_file;
    std::string model_file;
    std::string batch_file;

    std::string n_list;
    std::string dims_list = "16,64,256";
    std::string x_list;

    std::optional<std::uint64_t> seed;
    std::size_t samples = 100000;
    std::size_t reps = 10000;
    std::size_t restarts = 20;
    std::size_t m = 0;
    std::size_t rows = 1;
    double q = 1.0;
    double l1 = 0.9;
};

using Cell = CsvWriter::Cell;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct Report {
    std::optional<Table> table;
    Json document;
};

Json cell_to_json(const Cell& c)
{
    return std::visit(
        [](const auto& v) -> Json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>)
                return std::isfinite(v) ? Json(v) : Json(nullptr);
            else
                return Json(v);
        },
        c);
}

void render(const Report& report, const std::string& format, std::ostream& os)
{
    if (format == "csv") {
        if (!report.table) throw ConfigError("this command only supports --format json");
        CsvWriter w(os, report.table->columns);
        for (const auto& r : report.table->rows) w.row(r);
        return;
    }
    Json doc = report.document;
    if (report.table) {
        Json rows = Json::array();
        for (const auto& r : report.table->rows) {
            Json obj = Json::object();
            for (std::size_t i = 0; i < r.size(); ++i) obj[report.table->columns[i]] = cell_to_json(r[i]);
            rows.push_back(std::move(obj));
        }
        doc["rows"] = std::move(rows);
    }
    os << doc.dump(2) << '\n';
}

std::uint64_t require_seed(const Config& cfg)
{
    if (!cfg.seed) throw ConfigError(cfg.command + " is randomized and needs --seed");
    return *cfg.seed;
}

std::vector<std::size_t> n_grid(const Config& cfg, std::vector<std::size_t> fallback)
{
    std::vector<std::size_t> ns = cfg.n_list.empty() ? std::move(fallback) : parse_index_list(cfg.n_list);
    if (ns.empty()) throw ConfigError("n grid must be nonempty");
    for (std::size_t i = 1; i < ns.size(); ++i)
        if (ns[i] <= ns[i - 1]) throw ConfigError("n grid must be increasing");
    return ns;
}

std::vector<std::size_t> iota_list(std::size_t first, std::size_t last)
{
    std::vector<std::size_t> v;
    for (std::size_t i = first; i <= last; ++i) v.push_back(i);
    return v;
}

LinearProblem load_problem(const Config& cfg)
{
    if (!cfg.problem_file.empty()) return problem_from_json(read_json_file(cfg.problem_file));
    if (!cfg.spectrum.empty()) return LinearProblem::diagonal(parse_spectrum_spec(cfg.spectrum));
    throw ConfigError(cfg.command + " needs --spectrum or --problem");
}

SingularSpectrum load_spectrum(const Config& cfg)
{
    if (!cfg.problem_file.empty()) return spectrum_from_json(read_json_file(cfg.problem_file));
    if (!cfg.spectrum.empty()) return parse_spectrum_spec(cfg.spectrum);
    throw ConfigError(cfg.command + " needs --spectrum or --problem");
}

// ---------------------------------------------------------------------------

Report cmd_spectrum(const Config& cfg)
{
    const SingularSpectrum s = load_spectrum(cfg);
    Report rep;
    rep.table = Table{{"n", "worst_case_error"}, {}};
    for (std::size_t n : n_grid(cfg, iota_list(0, s.size() - 1)))
        rep.table->rows.push_back({static_cast<std::uint64_t>(n), worst_case_error(s, n)});
    rep.document = {{"command", "spectrum"}, {"values", s.values()}};
    return rep;
}

Report cmd_radius(const Config& cfg)
{
    const LinearProblem problem = load_problem(cfg);
    Report rep;
    rep.table = Table{{"n", "radius", "kernel_dim", "worst_case_error"}, {}};
    auto add = [&](const InformationMap& info) {
        const RadiusReport r = radius_nonadaptive(problem, info);
        rep.table->rows.push_back({static_cast<std::uint64_t>(info.size()), r.radius,
                                   static_cast<std::int64_t>(r.kernel_dim),
                                   worst_case_error(problem.spectrum(), info.size())});
    };
    if (!cfg.info_file.empty()) {
        add(information_from_json(read_json_file(cfg.info_file)));
    } else {
        const auto m = static_cast<std::size_t>(problem.source_dim());
        for (std::size_t n : n_grid(cfg, iota_list(0, m))) add(truncation_information(problem, n));
    }
    rep.document = {{"command", "radius"}};
    return rep;
}

Report cmd_avgcase(const Config& cfg)
{
    const std::uint64_t seed = require_seed(cfg);
    const LinearProblem problem = load_problem(cfg);
    const std::size_t m = cfg.m ? cfg.m : static_cast<std::size_t>(problem.source_dim());
    Report rep;
    rep.table = Table{{"n", "m", "closed_form_avg", "mc_avg", "mc_se", "samples", "seed"}, {}};
    for (std::size_t n : n_grid(cfg, iota_list(0, m))) {
        SphereSampler sampler(static_cast<Index>(m), derive_seed(seed, {n}));
        const RandomizedEstimate est = avg_case_error_mc(problem, n, sampler, cfg.samples);
        rep.table->rows.push_back({static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(m),
                                   avg_case_error_closed_form(problem.spectrum(), n, m), est.value,
                                   est.standard_error, static_cast<std::uint64_t>(cfg.samples), seed});
    }
    rep.document = {{"command", "avgcase"}};
    return rep;
}

Report cmd_sandwich(const Config& cfg)
{
    const SingularSpectrum s = load_spectrum(cfg);
    const auto ns = n_grid(cfg, iota_list(1, std::max<std::size_t>(1, s.size() / 4)));
    const auto rows = sandwich_table(s, ns, cfg.seed, cfg.samples);
    Report rep;
    rep.table = Table{{"n", "lower", "closed_form_avg", "mc_avg", "mc_se", "upper"}, {}};
    for (const auto& r : rows) {
        const Cell mc = r.mc_avg ? Cell(r.mc_avg->value) : Cell(std::string());
        const Cell se = r.mc_avg ? Cell(r.mc_avg->standard_error) : Cell(std::string());
        rep.table->rows.push_back({static_cast<std::uint64_t>(r.n), r.lower, r.closed_form_avg, mc, se, r.upper});
    }
    rep.document = {{"command", "sandwich"}};
    return rep;
}

Report cmd_transform(const Config& cfg)
{
    if (cfg.functionals_file.empty()) throw ConfigError("transform needs --functionals");
    const Json doc = read_json_file(cfg.functionals_file);
    if (!doc.is_array()) throw ConfigError("functionals file must hold an array");
    std::vector<SymbolicFunctional> info;
    for (const auto& f : doc) info.push_back(functional_from_json(f));

    const ModelSpace space(cfg.q);
    const auto dims = parse_index_list(cfg.dims_list);
    const TransformTrace trace = transform_information(info, space);
    const auto ladder = truncated_radius_ladder(info, space, dims);

    Report rep;
    rep.table = Table{{"d", "r_original", "r_transformed", "gap"}, {}};
    Json jl = Json::array();
    for (const auto& r : ladder) {
        rep.table->rows.push_back({static_cast<std::uint64_t>(r.dim), r.radius_original, r.radius_transformed, r.gap()});
    }
    Json steps = Json::array();
    for (std::size_t k = 0; k < trace.steps.size(); ++k) {
        steps.push_back({{"input", to_json(trace.input[k])},
                         {"verdict", to_string(trace.steps[k].verdict)},
                         {"extension", trace.steps[k].extension},
                         {"emitted", to_json(trace.steps[k].emitted)}});
    }
    rep.document = {{"command", "transform"}, {"q", cfg.q}, {"steps", steps}};
    return rep;
}

Report cmd_mcnorm(const Config& cfg)
{
    const std::uint64_t seed = require_seed(cfg);
    Vector x;
    if (!cfg.x_list.empty()) {
        const auto v = parse_real_list(cfg.x_list);
        x = Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size()));
    } else {
        if (cfg.m == 0) throw ConfigError("mcnorm needs --x or --m");
        x = Vector::Constant(static_cast<Index>(cfg.m), cfg.l1 / static_cast<double>(cfg.m));
    }
    const L1Vector point(x);
    const auto rows = rmse_sweep(point, n_grid(cfg, {4, 16, 64, 256}), cfg.reps, seed);
    Report rep;
    rep.table = Table{{"n", "rmse", "envelope", "reps", "seed"}, {}};
    for (const auto& r : rows)
        rep.table->rows.push_back({static_cast<std::uint64_t>(r.n), r.rmse, r.envelope,
                                   static_cast<std::uint64_t>(r.reps), r.seed});
    rep.document = {{"command", "mcnorm"}};
    return rep;
}

Report cmd_width(const Config& cfg)
{
    if (cfg.m == 0) throw ConfigError("width needs --m");
    const auto m = static_cast<Index>(cfg.m);
    if (m > kMaxExactWidthDim)
        throw std::invalid_argument("exact width limited to m ≤ " + std::to_string(kMaxExactWidthDim));
    const std::uint64_t seed = require_seed(cfg);
    const auto ns = n_grid(cfg, iota_list(0, cfg.m));
    const auto widths = gelfand_width_table(m, ns, cfg.restarts, seed);
    Report rep;
    rep.table = Table{{"m", "n", "lower", "upper", "restarts", "seed"}, {}};
    for (const auto& w : widths)
        rep.table->rows.push_back({static_cast<std::int64_t>(w.m), static_cast<std::int64_t>(w.n), w.lower_bound,
                                   w.upper_bound, static_cast<std::uint64_t>(w.restarts), w.seed});
    rep.document = {{"command", "width"}};
    return rep;
}

Report cmd_separation(const Config& cfg)
{
    const std::uint64_t seed = require_seed(cfg);
    const std::size_t m = cfg.m ? cfg.m : 8;
    const auto rows = separation_report(static_cast<Index>(m), n_grid(cfg, {0, 1, 2, 4, 16, 64, 256}), cfg.reps, seed);
    Report rep;
    rep.table = Table{{"n", "wc_floor", "ran_rmse"}, {}};
    for (const auto& r : rows) rep.table->rows.push_back({static_cast<std::uint64_t>(r.n), r.wc_floor, r.ran_rmse});
    rep.document = {{"command", "separation"}, {"m", m}};
    return rep;
}

Report cmd_stdinfo(const Config& cfg)
{
    GridModel model;
    if (!cfg.model_file.empty()) {
        model = grid_model_from_json(read_json_file(cfg.model_file));
    } else {
        if (cfg.m == 0) throw ConfigError("stdinfo needs --model or --m");
        model = random_grid_model(cfg.m, cfg.rows, require_seed(cfg));
    }
    if (model.grid.size() > kMaxGridPoints)
        throw std::invalid_argument("std-vs-all subset search limited to m <= 12");
    Report rep;
    rep.table = Table{{"n", "e_std", "e_all", "points"}, {}};
    for (std::size_t n : n_grid(cfg, iota_list(0, model.grid.size()))) {
        const StdVsAll r = std_vs_all(model, n);
        std::string pts;
        for (std::size_t i = 0; i < r.points.size(); ++i) pts += (i ? ";" : "") + std::to_string(r.points[i]);
        rep.table->rows.push_back({static_cast<std::uint64_t>(n), r.e_std, r.e_all, pts});
    }
    rep.document = {{"command", "stdinfo"}, {"model", to_json(model)}};
    return rep;
}

Report dispatch(const Config& cfg)
{
    if (cfg.command == "spectrum") return cmd_spectrum(cfg);
    if (cfg.command == "radius") return cmd_radius(cfg);
    if (cfg.command == "avgcase") return cmd_avgcase(cfg);
    if (cfg.command == "sandwich") return cmd_sandwich(cfg);
    if (cfg.command == "transform") return cmd_transform(cfg);
    if (cfg.command == "mcnorm") return cmd_mcnorm(cfg);
    if (cfg.command == "width") return cmd_width(cfg);
    if (cfg.command == "separation") return cmd_separation(cfg);
    if (cfg.command == "stdinfo") return cmd_stdinfo(cfg);
    throw ConfigError("unknown command '" + cfg.command + "'");
}

void emit(const Config& cfg, const Report& report, std::ostream& out)
{
    std::string path = cfg.output;
    if (path.empty()) {
        if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir)
            path = (std::filesystem::path(dir) / (cfg.command + "." + cfg.format)).string();
    }
    if (path.empty()) {
        render(report, cfg.format, out);
        return;
    }
    std::ostringstream buf;
    render(report, cfg.format, buf);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + path + "'");
    f << buf.str();
}

// ---------------------------------------------------------------------------

std::vector<std::string> experiment_args(const Json& exp)
{
    if (!exp.is_object() || !exp.contains("command") || !exp.at("command").is_string())
        throw ConfigError("each experiment needs a string 'command'");
    std::vector<std::string> args{exp.at("command").get<std::string>()};
    for (const auto& [key, val] : exp.items()) {
        if (key == "command") continue;
        args.push_back("--" + key);
        if (val.is_array()) {
            std::string joined;
            for (std::size_t i = 0; i < val.size(); ++i) {
                if (!val[i].is_number()) throw ConfigError("list option '" + key + "' must hold numbers");
                joined += (i ? "," : "") + val[i].dump();
            }
            args.push_back(joined);
        } else if (val.is_string()) {
            args.push_back(val.get<std::string>());
        } else if (val.is_number()) {
            args.push_back(val.dump());
        } else {
            throw ConfigError("option '" + key + "' must be a number, string or list");
        }
    }
    return args;
}

int run_one(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_batch(const std::string& path, std::ostream& out, std::ostream& err)
{
    const Json doc = read_json_file(path);
    if (!doc.is_object() || !doc.contains("experiments") || !doc.at("experiments").is_array())
        throw ConfigError("batch config needs an 'experiments' array");
    for (const auto& exp : doc.at("experiments")) {
        const int rc = run_one(experiment_args(exp), out, err);
        if (rc != 0) return rc;
    }
    return 0;
}

int run_one(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Config cfg;
    CLI::App app{"Minimal-error experiments for linear problems and the l1 norm-squared case study", "ibcsim"};
    app.require_subcommand(1);

    auto common = [&cfg](CLI::App* sub) {
        sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--output,-o", cfg.output, "Output file");
    };
    auto problem_opts = [&cfg](CLI::App* sub) {
        sub->add_option("--spectrum", cfg.spectrum, "power-law:p=P:m=M or explicit:v1,v2,...");
        sub->add_option("--problem", cfg.problem_file, "Problem/spectrum JSON document");
    };
    auto seed_opt = [&cfg](CLI::App* sub) { sub->add_option("--seed", cfg.seed, "Master seed"); };
    auto n_opt = [&cfg](CLI::App* sub) { sub->add_option("--n", cfg.n_list, "Comma-separated cardinalities"); };

    auto* spectrum = app.add_subcommand("spectrum", "Worst-case minimal errors");
    common(spectrum), problem_opts(spectrum), n_opt(spectrum);

    auto* radius = app.add_subcommand("radius", "Radius of information");
    common(radius), problem_opts(radius), n_opt(radius);
    radius->add_option("--info", cfg.info_file, "Information map JSON (array of coefficient arrays)");

    auto* avgcase = app.add_subcommand("avgcase", "Average-case error on spheres: closed form vs Monte Carlo");
    common(avgcase), problem_opts(avgcase), n_opt(avgcase), seed_opt(avgcase);
    avgcase->add_option("--m", cfg.m, "Sphere dimension (default: problem dimension)");
    avgcase->add_option("--samples", cfg.samples, "Monte Carlo samples");

    auto* sandwich = app.add_subcommand("sandwich", "Randomized-error sandwich bounds");
    common(sandwich), problem_opts(sandwich), n_opt(sandwich), seed_opt(sandwich);
    sandwich->add_option("--samples", cfg.samples, "Monte Carlo samples (only with --seed)");

    auto* transform = app.add_subcommand("transform", "Discontinuous-to-continuous information transform");
    common(transform);
    transform->add_option("--functionals", cfg.functionals_file, "Array of symbolic functionals (JSON)");
    transform->add_option("--q", cfg.q, "Weight exponent of the model space");
    transform->add_option("--dims", cfg.dims_list, "Truncation ladder");

    auto* mcnorm = app.add_subcommand("mcnorm", "RMSE of the empirical-variance estimator");
    common(mcnorm), n_opt(mcnorm), seed_opt(mcnorm);
    mcnorm->add_option("--x", cfg.x_list, "Point of the open l1 ball");
    mcnorm->add_option("--m", cfg.m, "Dimension for an equal-weight point");
    mcnorm->add_option("--l1", cfg.l1, "l1 norm of the equal-weight point");
    mcnorm->add_option("--reps", cfg.reps, "Replications per n");

    auto* width = app.add_subcommand("width", "Gelfand width brackets for the l1 ball");
    common(width), n_opt(width), seed_opt(width);
    width->add_option("--m", cfg.m, "Dimension");
    width->add_option("--restarts", cfg.restarts, "Random restarts of the upper-bound search");

    auto* separation = app.add_subcommand("separation", "Worst-case floor vs randomized error");
    common(separation), n_opt(separation), seed_opt(separation);
    separation->add_option("--m", cfg.m, "Dimension of the randomized test point");
    separation->add_option("--reps", cfg.reps, "Replications per n");

    auto* stdinfo = app.add_subcommand("stdinfo", "Function values vs arbitrary linear information");
    common(stdinfo), n_opt(stdinfo), seed_opt(stdinfo);
    stdinfo->add_option("--model", cfg.model_file, "Grid model JSON");
    stdinfo->add_option("--m", cfg.m, "Grid size of a random model");
    stdinfo->add_option("--rows", cfg.rows, "Output dimension of a random model");

    auto* batch = app.add_subcommand("batch", "Run a JSON batch of experiments");
    batch->add_option("--config", cfg.batch_file, "Batch config")->required();

    std::vector<const char*> argv{"ibcsim"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "ibcsim: " << e.what() << '\n';
        return 2;
    }

    cfg.command = app.get_subcommands().front()->get_name();
    try {
        if (cfg.command == "batch") return run_batch(cfg.batch_file, out, err);
        emit(cfg, dispatch(cfg), out);
        return 0;
    } catch (const ConfigError& e) {
        err << "ibcsim: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "ibcsim: " << e.what() << '\n';
        return 1;
    }
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    return run_one(args, out, err);
}

} // namespace ibc::cli
