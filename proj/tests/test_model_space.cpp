#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "ibc/io.hpp"
#include "ibc/model_space.hpp"

using namespace ibc;

namespace {

SymbolicFunctional power(double p, double alpha = 1.0) { return SymbolicFunctional({{p, alpha}}); }
SymbolicFunctional finite(std::map<std::size_t, double> f) { return SymbolicFunctional({}, std::move(f)); }

const ModelSpace q1(1.0);

} // namespace

TEST(SymbolicFunctional, Canonical)
{
    const SymbolicFunctional l({{0.0, 1.0}, {2.0, 3.0}, {0.0, -1.0}, {1.0, 2.0}}, {{3, 0.0}, {1, 4.0}});
    ASSERT_EQ(l.terms().size(), 2u);
    EXPECT_EQ(l.terms()[0], (PowerTerm{2.0, 3.0}));
    EXPECT_EQ(l.terms()[1], (PowerTerm{1.0, 2.0}));
    EXPECT_EQ(l.finite_part().size(), 1u);
    EXPECT_DOUBLE_EQ(l.coefficient(1), 3.0 + 2.0 + 4.0);
    EXPECT_DOUBLE_EQ(l.coefficient(2), 12.0 + 4.0);
    EXPECT_TRUE((power(1) - power(1)).is_zero());
    EXPECT_THROW(l.coefficient(0), std::invalid_argument);
    EXPECT_THROW(finite({{0, 1.0}}), std::invalid_argument);
}

TEST(Continuity, Examples)
{
    EXPECT_EQ(classify_continuity(power(0), q1), Continuity::continuous);
    EXPECT_EQ(classify_continuity(power(1), q1), Continuity::discontinuous);
    EXPECT_EQ(classify_continuity(power(0.5), q1), Continuity::discontinuous);
    EXPECT_EQ(classify_continuity(power(0.4999), q1), Continuity::continuous);
    EXPECT_EQ(classify_continuity(finite({{5, 1e6}}), q1), Continuity::continuous);
    EXPECT_EQ(classify_continuity(SymbolicFunctional{}, q1), Continuity::continuous);
}

TEST(Continuity, DualNormSeriesAgreesWithVerdict)
{
    // Partial sums of Σ cᵢ² i^{-2q}: bounded families settle, unbounded keep growing.
    for (double p : {-1.0, 0.0, 0.3, 0.5, 1.0}) {
        const auto l = power(p);
        double s1 = 0.0, s2 = 0.0;
        for (std::size_t i = 1; i <= 200000; ++i) {
            const double c = l.coefficient(i);
            const double term = c * c / (static_cast<double>(i) * static_cast<double>(i));
            (i <= 2000 ? s1 : s2) += term;
        }
        const bool grows = s2 > 0.5 * s1;
        EXPECT_EQ(grows, classify_continuity(l, q1) == Continuity::discontinuous) << p;
    }
}

TEST(Restricted, Examples)
{
    const auto l1 = power(2);
    const auto l2s = power(-1);
    const std::vector<SymbolicFunctional> prior{l1};

    const auto v = classify_continuity_restricted(l1 + l2s, prior, q1);
    EXPECT_EQ(v.verdict, Continuity::continuous);
    ASSERT_EQ(v.coefficients.size(), 1u);
    EXPECT_NEAR(v.coefficients[0], -1.0, 1e-14);

    EXPECT_EQ(classify_continuity_restricted(power(1), {}, q1).verdict, Continuity::discontinuous);
    EXPECT_EQ(classify_continuity_restricted(power(1.5), prior, q1).verdict, Continuity::discontinuous);
    EXPECT_TRUE(classify_continuity_restricted(power(1.5), prior, q1).coefficients.empty());
}

TEST(Restricted, MinimalNormTieBreak)
{
    // Two priors sharing exponent 1: a₁ + 2a₂ = −1, min-norm solution (−1/5, −2/5).
    const std::vector<SymbolicFunctional> prior{power(1), power(1, 2.0)};
    const auto v = classify_continuity_restricted(power(1), prior, q1);
    ASSERT_EQ(v.verdict, Continuity::continuous);
    EXPECT_NEAR(v.coefficients[0], -0.2, 1e-12);
    EXPECT_NEAR(v.coefficients[1], -0.4, 1e-12);
}

TEST(Transform, Examples)
{
    const std::vector<SymbolicFunctional> single{power(1)};
    const auto t1 = transform_information(single, q1);
    ASSERT_EQ(t1.output.size(), 1u);
    EXPECT_TRUE(t1.output[0].is_zero());
    EXPECT_EQ(t1.steps[0].verdict, Continuity::discontinuous);

    const std::vector<SymbolicFunctional> cont{power(0, 2.0) + finite({{4, 1.0}})};
    const auto t2 = transform_information(cont, q1);
    EXPECT_EQ(t2.output[0], cont[0]);

    const auto l1 = power(2);
    const auto l2s = power(-1);
    const auto l3s = finite({{3, 1.0}});
    const std::vector<SymbolicFunctional> enc{l1, l1 + l2s, l1 + l3s};
    const auto t3 = transform_information(enc, q1);
    ASSERT_EQ(t3.output.size(), 3u);
    EXPECT_TRUE(t3.output[0].is_zero());
    EXPECT_EQ(t3.output[1], l2s);
    EXPECT_EQ(t3.output[2], l3s);
    EXPECT_EQ(t3.steps[1].extension, (std::vector<double>{-1.0}));
    EXPECT_EQ(t3.steps[2].extension, (std::vector<double>{-1.0, 0.0}));
}

TEST(Transform, EmitsContinuousAndReexpandsExactly)
{
    const std::vector<SymbolicFunctional> info{
        power(1.5) + power(0.7, -2.0), power(2), power(0),
        power(1.5, 2.0) + power(0.7, -4.0) + power(2, 3.0) + finite({{2, 1.0}}),
        power(0.7) + power(-0.5), power(3)};
    const auto t = transform_information(info, q1);
    ASSERT_EQ(t.steps.size(), info.size());
    for (std::size_t k = 0; k < info.size(); ++k) {
        EXPECT_EQ(classify_continuity(t.output[k], q1), Continuity::continuous) << k;
        if (t.steps[k].verdict == Continuity::discontinuous) {
            EXPECT_TRUE(t.output[k].is_zero());
            continue;
        }
        SymbolicFunctional expand = info[k];
        for (std::size_t j = 0; j < k; ++j) expand = expand + info[j].scaled(t.steps[k].extension[j]);
        const auto diff = expand - t.output[k];
        for (const auto& term : diff.terms()) EXPECT_LE(std::abs(term.coefficient), 1e-10) << k;
        EXPECT_TRUE(diff.finite_part().empty());
    }
    // Step 3 is 2·L₁ + 3·L₂ plus bounded parts; step 4 cannot cancel 0.7 without 1.5.
    EXPECT_EQ(t.steps[3].verdict, Continuity::continuous);
    EXPECT_EQ(t.steps[4].verdict, Continuity::discontinuous);
    EXPECT_EQ(t.steps[5].verdict, Continuity::discontinuous);
}

TEST(Ladder, SingleDiscontinuousGapDecreases)
{
    const std::vector<SymbolicFunctional> info{power(2)};
    const std::vector<std::size_t> dims{16, 64, 256};
    const auto rungs = truncated_radius_ladder(info, q1, dims);
    ASSERT_EQ(rungs.size(), 3u);
    for (std::size_t i = 0; i < rungs.size(); ++i) {
        EXPECT_NEAR(rungs[i].radius_transformed, 1.0, 1e-12);
        EXPECT_LE(rungs[i].radius_original, rungs[i].radius_transformed + 1e-12);
        if (i) EXPECT_LT(rungs[i].gap(), rungs[i - 1].gap());
    }
}

TEST(Ladder, AllContinuousHasNoGap)
{
    const std::vector<SymbolicFunctional> info{power(0), finite({{2, 1.0}}), power(-1, 3.0)};
    const std::vector<std::size_t> dims{16, 64, 256};
    for (const auto& r : truncated_radius_ladder(info, q1, dims)) EXPECT_LE(std::abs(r.gap()), 1e-9);
}

TEST(Ladder, EncodingMatchesItsRecombination)
{
    // At finite d the truncated L₁ still carries information, so r(N_d) < r(N*_d);
    // what holds exactly is invariance under the recombination (L₁, L₂ − L₁, L₃ − L₁).
    const auto l1 = power(2);
    const std::vector<SymbolicFunctional> enc{l1, l1 + power(-1), l1 + finite({{3, 1.0}})};
    const std::vector<SymbolicFunctional> rec{l1, power(-1), finite({{3, 1.0}})};
    for (std::size_t d : {16u, 64u, 256u}) {
        const auto problem = q1.truncated_problem(d);
        const double a = radius_nonadaptive(problem, truncate_information(enc, d)).radius;
        const double b = radius_nonadaptive(problem, truncate_information(rec, d)).radius;
        EXPECT_NEAR(a, b, 1e-9);
    }
    const std::vector<std::size_t> dims{16, 64, 256};
    const auto rungs = truncated_radius_ladder(enc, q1, dims);
    for (std::size_t i = 1; i < rungs.size(); ++i) EXPECT_LT(rungs[i].gap(), rungs[i - 1].gap());
    EXPECT_LT(rungs.back().gap(), 1e-5);
}

TEST(Ladder, Errors)
{
    const std::vector<SymbolicFunctional> info{power(2)};
    const std::vector<std::size_t> bad{64, 16};
    EXPECT_THROW(truncated_radius_ladder(info, q1, bad), std::invalid_argument);
    EXPECT_THROW(ModelSpace(0.0), std::invalid_argument);
}

TEST(Ladder, FixtureSuite)
{
    const Json doc = read_json_file(IBC_FIXTURE_DIR "/transform_fixtures.json");
    const ModelSpace space(doc.at("q").get<double>());
    const auto dims = doc.at("dims").get<std::vector<std::size_t>>();
    ASSERT_GE(doc.at("fixtures").size(), 6u);
    for (const auto& fx : doc.at("fixtures")) {
        const auto name = fx.at("name").get<std::string>();
        std::vector<SymbolicFunctional> info;
        for (const auto& f : fx.at("functionals")) info.push_back(functional_from_json(f));

        const auto trace = transform_information(info, space);
        const auto zeroed = fx.at("expected_zeroed").get<std::vector<bool>>();
        for (std::size_t k = 0; k < info.size(); ++k) {
            EXPECT_EQ(trace.output[k].is_zero(), zeroed[k]) << name << " step " << k;
            EXPECT_EQ(classify_continuity(trace.output[k], space), Continuity::continuous) << name;
        }
        if (fx.contains("expected_output"))
            for (std::size_t k = 0; k < info.size(); ++k)
                EXPECT_EQ(trace.output[k], functional_from_json(fx.at("expected_output")[k])) << name;

        const auto rungs = truncated_radius_ladder(info, space, dims);
        for (std::size_t i = 0; i < rungs.size(); ++i) {
            EXPECT_LE(rungs[i].radius_original, rungs[i].radius_transformed + 1e-12) << name;
            if (i) EXPECT_LE(rungs[i].gap(), rungs[i - 1].gap() + 1e-12) << name;
        }
        EXPECT_LE(rungs.back().gap(), fx.at("max_final_gap_ratio").get<double>() * rungs.back().radius_transformed)
            << name;
    }
}
