#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ibc/cli.hpp"
#include "ibc/io.hpp"

using namespace ibc;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path temp_dir()
{
    const auto p = fs::temp_directory_path() / ("ibcsim_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
    fs::create_directories(p);
    return p;
}

std::string write_file(const fs::path& p, const std::string& text)
{
    std::ofstream(p) << text;
    return p.string();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string c;
        while (std::getline(ls, c, ',')) cells.push_back(c);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

} // namespace

TEST(Format, Numbers)
{
    EXPECT_EQ(format_number(0.5), "0.5");
    EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
    EXPECT_EQ(format_number(1e-20), "1e-20");
    EXPECT_EQ(format_number(0.0), "0");
    EXPECT_EQ(format_number(-0.0), "0");
    EXPECT_EQ(format_number(std::nan("")), "nan");
    EXPECT_EQ(format_number(12345678.0), "12345678");
}

TEST(Parse, Lists)
{
    EXPECT_EQ(parse_index_list("1,2,4"), (std::vector<std::size_t>{1, 2, 4}));
    EXPECT_TRUE(parse_index_list("").empty());
    EXPECT_THROW(parse_index_list("1,,2"), ConfigError);
    EXPECT_THROW(parse_index_list("1,-2"), ConfigError);
    EXPECT_EQ(parse_real_list("0.5,-1e-3"), (std::vector<double>{0.5, -1e-3}));
    EXPECT_THROW(parse_real_list("0.5x"), ConfigError);
}

TEST(Parse, SpectrumSpec)
{
    const auto s = parse_spectrum_spec("power-law:p=1:m=64");
    EXPECT_EQ(s.size(), 64u);
    EXPECT_DOUBLE_EQ(s.sigma(4), 0.25);
    EXPECT_EQ(parse_spectrum_spec("explicit:2,2,1").values(), (std::vector<double>{2, 2, 1}));
    EXPECT_THROW(parse_spectrum_spec("power-law:p=1"), ConfigError);
    EXPECT_THROW(parse_spectrum_spec("gaussian:p=1:m=3"), ConfigError);
    EXPECT_THROW(parse_spectrum_spec("power-law:p=x:m=3"), ConfigError);
}

TEST(Json, ProblemDocuments)
{
    const auto d = problem_from_json(Json::parse(R"({"kind":"power-law","p":2,"m":3})"));
    EXPECT_DOUBLE_EQ(d.spectrum().sigma(2), 0.25);
    const auto m = problem_from_json(Json::parse(R"({"kind":"matrix","matrix":[[2,0],[0,1]],"weights":[1,0.5]})"));
    EXPECT_NEAR(m.spectrum().sigma(1), 2.0, 1e-12);
    EXPECT_NEAR(m.spectrum().sigma(2), 2.0, 1e-12);
    EXPECT_THROW(problem_from_json(Json::parse(R"({"kind":"matrix","matrix":[[1,2],[3]]})")), ConfigError);
    EXPECT_THROW(problem_from_json(Json::parse(R"({"kind":"power-law","m":3})")), ConfigError);
    EXPECT_THROW(problem_from_json(Json::parse(R"({"kind":"power-law","p":"one","m":3})")), ConfigError);
}

TEST(Json, RoundTrips)
{
    const SymbolicFunctional l({{2.0, 1.5}, {-1.0, 1.0}}, {{3, 0.25}});
    EXPECT_EQ(functional_from_json(to_json(l)), l);
    EXPECT_THROW(functional_from_json(Json::parse(R"({"finite":{"0":1}})")), ConfigError);

    InformationMap info;
    info.append((Vector(2) << 1, 2).finished());
    info.append((Vector(2) << 3, 4).finished());
    const auto back = information_from_json(to_json(info));
    EXPECT_EQ(back.as_matrix(2), info.as_matrix(2));
    EXPECT_THROW(information_from_json(Json::parse("[[1,2],[3]]")), ConfigError);

    const auto model = random_grid_model(4, 2, 3);
    const auto again = grid_model_from_json(to_json(model));
    EXPECT_EQ(again.grid, model.grid);
    EXPECT_EQ(again.gram, model.gram);
    EXPECT_EQ(again.s, model.s);
}

TEST(Cli, SandwichExample)
{
    const auto r = run({"sandwich", "--spectrum", "power-law:p=1:m=64", "--n", "1,2,4", "--format", "csv"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"n", "lower", "closed_form_avg", "mc_avg", "mc_se", "upper"}));
    const double expect_lower[] = {0.125, 0.0625, 0.03125};
    const double expect_upper[] = {0.5, 1.0 / 3.0, 0.2};
    for (int i = 0; i < 3; ++i) {
        EXPECT_DOUBLE_EQ(std::stod(rows[i + 1][1]), expect_lower[i]);
        EXPECT_NEAR(std::stod(rows[i + 1][5]), expect_upper[i], 1e-12);
        EXPECT_EQ(rows[i + 1][3], "");
    }
}

TEST(Cli, WidthExamples)
{
    const auto r = run({"width", "--m", "2", "--n", "1", "--restarts", "50", "--seed", "7"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_NEAR(std::stod(rows[1][2]), 0.70711, 1e-5);
    EXPECT_NEAR(std::stod(rows[1][3]), 0.70711, 1e-5);

    const auto big = run({"width", "--m", "12", "--n", "1"});
    EXPECT_EQ(big.code, 1);
    EXPECT_NE(big.err.find("exact width limited to m ≤ 10"), std::string::npos);
    EXPECT_EQ(std::count(big.err.begin(), big.err.end(), '\n'), 1);
}

TEST(Cli, ExitCodes)
{
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"nosuch"}).code, 2);
    EXPECT_EQ(run({"spectrum"}).code, 2);
    EXPECT_EQ(run({"spectrum", "--spectrum", "power-law:p=1:m=4", "--n", "2,1"}).code, 2);
    EXPECT_EQ(run({"avgcase", "--spectrum", "power-law:p=1:m=4"}).code, 2);
    EXPECT_EQ(run({"spectrum", "--spectrum", "power-law:p=1:m=4", "--format", "xml"}).code, 2);
    EXPECT_EQ(run({"spectrum", "--spectrum", "power-law:p=-1:m=4"}).code, 1);
    EXPECT_EQ(run({"sandwich", "--spectrum", "power-law:p=1:m=7", "--n", "2"}).code, 1);
    EXPECT_EQ(run({"radius", "--problem", "/nonexistent/problem.json"}).code, 2);
}

TEST(Cli, SpectrumAndRadius)
{
    const auto s = run({"spectrum", "--spectrum", "explicit:3,2,1"});
    ASSERT_EQ(s.code, 0) << s.err;
    EXPECT_EQ(s.out, "n,worst_case_error\n0,3\n1,2\n2,1\n");

    const auto dir = temp_dir();
    const auto info = write_file(dir / "info.json", "[[1,0,0]]");
    const auto r = run({"radius", "--spectrum", "explicit:3,2,1", "--info", info});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[1][1], "2");
}

TEST(Cli, JsonFormat)
{
    const auto r = run({"separation", "--m", "4", "--n", "0,1,4", "--reps", "200", "--seed", "1", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = Json::parse(r.out);
    ASSERT_EQ(doc.at("rows").size(), 3u);
    EXPECT_DOUBLE_EQ(doc["rows"][0]["wc_floor"].get<double>(), 0.5);
    EXPECT_TRUE(doc["rows"][0]["ran_rmse"].is_null());
}

TEST(Cli, OutputFileAndEnvironmentDirectory)
{
    const auto dir = temp_dir();
    const auto file = (dir / "out.csv").string();
    ASSERT_EQ(run({"spectrum", "--spectrum", "explicit:1", "-o", file}).code, 0);
    std::ifstream in(file);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str(), "n,worst_case_error\n0,1\n");

    const auto envdir = dir / "env";
    fs::create_directories(envdir);
    ::setenv(cli::kOutputDirEnv, envdir.c_str(), 1);
    const auto r = run({"spectrum", "--spectrum", "explicit:1"});
    ::unsetenv(cli::kOutputDirEnv);
    EXPECT_EQ(r.out, "");
    EXPECT_TRUE(fs::exists(envdir / "spectrum.csv"));
}

TEST(Cli, BatchRunsEveryExperiment)
{
    const auto dir = temp_dir();
    const auto a = (dir / "a.csv").string();
    const auto b = (dir / "b.csv").string();
    const Json cfg = {{"experiments",
                       {{{"command", "spectrum"}, {"spectrum", "explicit:2,1"}, {"output", a}},
                        {{"command", "mcnorm"}, {"m", 4}, {"l1", 0.5}, {"n", {4, 16}}, {"reps", 200}, {"seed", 3},
                         {"output", b}}}}};
    const auto path = write_file(dir / "batch.json", cfg.dump());
    const auto r = run({"batch", "--config", path});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(fs::exists(a));
    std::ifstream in(b);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(parse_csv(ss.str()).size(), 3u);

    const auto bad = write_file(dir / "bad.json", R"({"experiments":[{"spectrum":"explicit:1"}]})");
    EXPECT_EQ(run({"batch", "--config", bad}).code, 2);
}

TEST(Cli, TransformAndStdinfo)
{
    const auto dir = temp_dir();
    const auto f = write_file(dir / "f.json", R"([{"terms":[{"p":2,"alpha":1}]}])");
    const auto t = run({"transform", "--functionals", f, "--dims", "16,64"});
    ASSERT_EQ(t.code, 0) << t.err;
    const auto rows = parse_csv(t.out);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"d", "r_original", "r_transformed", "gap"}));

    const auto s = run({"stdinfo", "--m", "5", "--rows", "2", "--seed", "4", "--n", "0,1,5"});
    ASSERT_EQ(s.code, 0) << s.err;
    const auto srows = parse_csv(s.out);
    ASSERT_EQ(srows.size(), 4u);
    EXPECT_EQ(srows[3][1], "0");
}

TEST(Cli, DeterministicBytes)
{
    const std::vector<std::vector<std::string>> cmds{
        {"avgcase", "--spectrum", "power-law:p=1:m=8", "--samples", "2000", "--seed", "5"},
        {"mcnorm", "--x", "0.1,-0.2,0.3", "--n", "4,16", "--reps", "300", "--seed", "5"},
        {"width", "--m", "4", "--restarts", "2", "--seed", "5"},
    };
    for (const auto& c : cmds) {
        const auto a = run(c), b = run(c);
        ASSERT_EQ(a.code, 0) << a.err;
        EXPECT_EQ(a.out, b.out);
    }
}
