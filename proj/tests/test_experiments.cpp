// SPDX-License-Identifier: Apache-2.0
//
// ewsr-gap: expected weighted sum rate vs. massive-MIMO surrogate gap analysis
// Copyright (C) 2026 The ewsr-gap authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "ewsr/experiments.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <string>

using namespace ewsr;

namespace
{
std::size_t column(const ExperimentResult &r, const std::string &name)
{
    for (std::size_t i = 0; i < r.columns.size(); ++i)
        if (r.columns[i] == name)
            return i;
    ADD_FAILURE() << "no column " << name;
    return 0;
}

double num(const ExperimentResult &r, std::size_t row, const std::string &name)
{
    return std::stod(r.rows.at(row).at(column(r, name)));
}

RunOptions quick(std::size_t n = 4000, unsigned workers = 0)
{
    RunOptions o;
    o.n_samples = n;
    o.seed = 5;
    o.workers = workers;
    return o;
}

const std::string demo = std::string(EWSR_SOURCE_DIR) + "/scenarios/demo_2cell_4user.json";
} // namespace

TEST(Csv, LayoutAndFormatting)
{
    ExperimentResult r;
    r.columns = {"a", "b"};
    r.rows = {{"1", "x"}};
    r.metadata = {{"command", "t"}};
    EXPECT_EQ(r.data_csv(), "a,b\n1,x\n");
    EXPECT_EQ(r.to_csv(), "# {\"command\":\"t\"}\na,b\n1,x\n");
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
    EXPECT_EQ(format_number(INFINITY), "inf");
    EXPECT_THROW(r.write("/nonexistent/dir/out.csv"), io_error);
}

TEST(Fig1, Schema)
{
    Fig1Options o;
    o.tx_antennas = {2};
    o.snr_db = {0.0, 10.0};
    o.run = quick();
    const auto r = cmd_fig1(o);
    EXPECT_EQ(r.columns, (std::vector<std::string>{"M", "snr_db", "rho", "gap_exact", "gap_mc", "gap_mc_std_error",
                                                   "n_samples", "gamma_inf"}));
    ASSERT_EQ(r.rows.size(), 2u);
    EXPECT_EQ(r.rows[0][column(r, "n_samples")], "4000");
    EXPECT_EQ(r.metadata["command"], "fig1");
    EXPECT_EQ(r.metadata["seed"], 5);
    EXPECT_TRUE(r.metadata.contains("timestamp"));
    EXPECT_TRUE(r.metadata.contains("version"));
}

TEST(Fig1, DefaultGrid)
{
    const auto g = default_fig1_snr_db();
    EXPECT_EQ(g.front(), -10.0);
    EXPECT_EQ(g.back(), 50.0);
    EXPECT_EQ(g.size(), 31u);
}

TEST(Fig1, CurveShape)
{
    Fig1Options o;
    o.tx_antennas = {1, 2, 4, 8, 16};
    o.snr_db = {-40, -20, 0, 20, 40, 60};
    o.run = quick(20000);
    const auto r = cmd_fig1(o);
    for (std::size_t i = 0; i < r.rows.size(); ++i)
    {
        if (num(r, i, "snr_db") == -40.0)
        {
            EXPECT_LT(num(r, i, "gap_exact"), 1e-3);
        }
        if (num(r, i, "M") == 1.0 && num(r, i, "snr_db") == 60.0)
        {
            EXPECT_NEAR(num(r, i, "gap_exact"), euler_gamma(), 1e-3);
        }
        if (i > 0 && num(r, i, "M") == num(r, i - 1, "M"))
        {
            EXPECT_GE(num(r, i, "gap_exact"), num(r, i - 1, "gap_exact"));
        }
        EXPECT_LE(num(r, i, "gap_exact"), num(r, i, "gamma_inf") + 1e-9);
        EXPECT_NEAR(num(r, i, "gap_mc"), num(r, i, "gap_exact"), 3.5 * num(r, i, "gap_mc_std_error") + 1e-12);
    }
}

TEST(Fig1, BitsScaleValues)
{
    Fig1Options o;
    o.tx_antennas = {2};
    o.snr_db = {20.0};
    o.run = quick();
    const auto nats = cmd_fig1(o);
    o.run.bits = true;
    const auto bits = cmd_fig1(o);
    EXPECT_NEAR(num(bits, 0, "gap_exact"), num(nats, 0, "gap_exact") / std::numbers::ln2, 1e-11);
    EXPECT_EQ(bits.metadata["units"], "bits");
    EXPECT_EQ(num(bits, 0, "rho"), num(nats, 0, "rho"));
}

TEST(Fig1, Errors)
{
    Fig1Options o;
    o.snr_db = {10.0, 0.0};
    EXPECT_THROW(cmd_fig1(o), domain_error);
    o.snr_db = {0.0};
    o.tx_antennas = {0};
    EXPECT_THROW(cmd_fig1(o), domain_error);
}

TEST(Fig2, IdentityMisoRowsNearClosedForm)
{
    Fig2Options o;
    o.tx_antennas = {4, 16};
    o.rx_antennas = 1;
    o.rho = 1000.0;
    o.cov.kind = CovarianceProfile::Identity{};
    o.run = quick(40000);
    const auto r = cmd_fig2(o);
    for (std::size_t i = 0; i < r.rows.size(); ++i)
    {
        const std::size_t M = static_cast<std::size_t>(num(r, i, "M"));
        // finite-SNR truth from quadrature, then the infinite-SNR line slightly above it
        const double exact = std::log1p(1000.0 * M) - exact_e_log_miso_iid(M, 1000.0);
        EXPECT_NEAR(num(r, i, "gap_mc"), exact, 3.0 * num(r, i, "gap_mc_std_error"));
        EXPECT_NEAR(num(r, i, "gamma_inf"), gamma_inf_miso_iid(M), 1e-11);
        EXPECT_NEAR(exact, gamma_inf_miso_iid(M), 0.01);
    }
}

TEST(Fig2, ExponentialProfile)
{
    CovarianceProfile p;
    const auto C = p.build(4);
    EXPECT_EQ(C(0, 0), cplx(1.0, 0.0));
    EXPECT_EQ(C(0, 2), cplx(0.25, 0.0));
    EXPECT_NEAR(C.trace().real(), 4.0, 1e-15);
    EXPECT_EQ(p.describe()["profile"], "exponential");

    const auto q = CovarianceProfile::from_json({{"profile", "exponential"}, {"r", 0.9}});
    EXPECT_NEAR(q.build(2)(0, 1).real(), 0.9, 1e-15);
    EXPECT_THROW(CovarianceProfile::from_json({{"profile", "exponential"}, {"r", 1.5}}), parse_error);
    EXPECT_THROW(CovarianceProfile::from_json({{"profile", "toeplitz"}}), parse_error);
    const auto e = CovarianceProfile::from_json({{"matrix", {{1.0, 0.0}, {0.0, 2.0}}}});
    EXPECT_EQ(e.build(2)(1, 1), cplx(2.0, 0.0));
    EXPECT_THROW(e.build(3), domain_error);
}

TEST(Fig2, RelativeErrorShrinksWithAntennas)
{
    Fig2Options o;
    o.tx_antennas = {8, 32};
    o.run = quick(20000);
    const auto r = cmd_fig2(o);
    EXPECT_GT(num(r, 0, "rel_error"), num(r, 1, "rel_error"));
    EXPECT_GT(num(r, 0, "gap_mc"), num(r, 1, "gap_mc"));
    EXPECT_EQ(r.rows[0][column(r, "gamma_inf")], ""); // no closed form for correlated MIMO
}

TEST(Sandwich, DeterministicScenarioCollapses)
{
    IbcScenario s;
    s.bs_antennas = {2};
    s.power_budgets = {2.0};
    s.users = {{0, 1, 1, 1.0}, {0, 1, 1, 1.0}};
    s.links = {ChannelDistribution(ComplexMatrix{{1.0, 0.5}}, ComplexMatrix(2, 2)),
               ChannelDistribution(ComplexMatrix{{0.2, cplx(0.0, 1.0)}}, ComplexMatrix(2, 2))};
    const auto r = sandwich_report(s, scaled_identity_precoders(s), GammaMethod::automatic, quick());
    const std::size_t total = r.rows.size() - 1;
    EXPECT_EQ(r.rows[total][0], "total");
    EXPECT_EQ(num(r, total, "lower"), num(r, total, "ewsr"));
    EXPECT_EQ(num(r, total, "upper"), num(r, total, "ewsr"));
    EXPECT_TRUE(r.ok);
}

TEST(Sandwich, ZeroWeightsGiveZeros)
{
    auto doc = load_scenario_document(demo);
    for (auto &u : doc.scenario.users)
        u.weight = 0.0;
    const auto r = sandwich_report(doc.scenario, *doc.precoders, GammaMethod::automatic, quick());
    for (std::size_t i = 0; i < r.rows.size(); ++i)
        for (const char *c : {"esei", "ewsr", "ewsr_std_error", "lower", "upper"})
            EXPECT_EQ(num(r, i, c), 0.0) << i << " " << c;
    EXPECT_TRUE(r.ok);
}

TEST(Sandwich, DemoScenarioContained)
{
    SandwichCmdOptions o;
    o.scenario_path = demo;
    o.run = quick(20000);
    const auto r = cmd_sandwich(o);
    EXPECT_TRUE(r.ok);
    EXPECT_EQ(r.rows.back()[column(r, "contained")], "true");
    o.identity_precoders = true;
    EXPECT_TRUE(cmd_sandwich(o).ok);
}

TEST(Sandwich, MissingPrecoders)
{
    const auto path = std::filesystem::temp_directory_path() / "ewsr_no_precoders.json";
    auto doc = load_scenario_document(demo);
    save_scenario(path.string(), doc.scenario);
    SandwichCmdOptions o;
    o.scenario_path = path.string();
    o.run = quick();
    EXPECT_THROW(cmd_sandwich(o), validation_error);
    o.identity_precoders = true;
    EXPECT_NO_THROW(cmd_sandwich(o));
    std::filesystem::remove(path);
}

TEST(Verify, SuitesPass)
{
    EXPECT_THROW(parse_verify_suite("bogus"), domain_error);
    const auto r = cmd_verify(VerifySuite::all, quick(5000));
    EXPECT_TRUE(r.ok) << r.data_csv();
    bool theorems = false, oracles = false;
    for (const auto &row : r.rows)
    {
        theorems = theorems || row[0] == "theorems";
        oracles = oracles || row[0] == "oracles";
    }
    EXPECT_TRUE(theorems && oracles);
    const auto t = cmd_verify(VerifySuite::theorems, quick(5000));
    for (const auto &row : t.rows)
        EXPECT_EQ(row[0], "theorems");
}

TEST(Determinism, DataRowsIgnoreWorkerCount)
{
    Fig1Options f1;
    f1.tx_antennas = {1, 3};
    f1.snr_db = {0.0, 20.0};
    Fig2Options f2;
    f2.tx_antennas = {4, 6};
    f2.rx_antennas = 2;
    SandwichCmdOptions sw;
    sw.scenario_path = demo;
    std::string a[4], b[4];
    for (int pass = 0; pass < 2; ++pass)
    {
        const RunOptions run = quick(5000, pass == 0 ? 1u : 3u);
        auto &out = pass == 0 ? a : b;
        f1.run = f2.run = sw.run = run;
        out[0] = cmd_fig1(f1).data_csv();
        out[1] = cmd_fig2(f2).data_csv();
        out[2] = cmd_sandwich(sw).data_csv();
        out[3] = cmd_verify(VerifySuite::all, run).data_csv();
    }
    for (int i = 0; i < 4; ++i)
        EXPECT_EQ(a[i], b[i]) << i;
}

TEST(RandomScenario, Shape)
{
    for (std::uint64_t i = 0; i < 50; ++i)
    {
        RngStream rng(1, StreamFamily::scenario, i);
        const auto d = random_zero_mean_scenario(rng);
        EXPECT_GE(d.scenario.cells(), 1u);
        EXPECT_LE(d.scenario.cells(), 2u);
        EXPECT_GE(d.scenario.num_users(), 2u);
        EXPECT_LE(d.scenario.num_users(), 4u);
        for (std::size_t j = 0; j < d.scenario.cells(); ++j)
            EXPECT_NEAR(d.precoders.bs_power(d.scenario, j), 10.0, 1e-9);
        for (const auto &l : d.scenario.links)
            EXPECT_EQ(l.mean.max_abs(), 0.0);
    }
}
