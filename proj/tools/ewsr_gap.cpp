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

// ewsr-gap command line tool.
//
//   ewsr-gap fig1     [--tx-antennas 1,2,4] [--snr-db -10:50:2] ...
//   ewsr-gap fig2     [--tx-antennas 8,16] [--rx-antennas 4] [--rho 1000] [--cov file.json] ...
//   ewsr-gap sandwich SCENARIO.json [--identity-precoders] [--method auto] ...
//   ewsr-gap verify   [theorems|oracles|all]
//
// Exit codes: 0 ok, 1 a checked property failed, 2 usage or input error.

#include "ewsr/ewsr.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace
{

// "lo:hi:step" (inclusive) or a comma-separated list.
std::vector<double> parse_snr_grid(const std::string &text)
{
    std::vector<double> out;
    if (text.find(':') != std::string::npos)
    {
        double lo = 0, hi = 0, step = 0;
        char c1 = 0, c2 = 0;
        std::istringstream in(text);
        if (!(in >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || !(in >> std::ws).eof())
            throw ewsr::domain_error("bad SNR range '" + text + "', expected lo:hi:step");
        if (!(step > 0.0) || hi < lo)
            throw ewsr::domain_error("SNR range needs step > 0 and hi >= lo");
        const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
        for (std::size_t i = 0; i <= n; ++i)
            out.push_back(lo + step * static_cast<double>(i));
        return out;
    }
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ','))
    {
        try
        {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size())
                throw std::invalid_argument(item);
        }
        catch (const std::logic_error &)
        {
            throw ewsr::domain_error("bad SNR value '" + item + "'");
        }
    }
    if (out.empty())
        throw ewsr::domain_error("empty SNR list");
    return out;
}

void add_run_options(CLI::App *cmd, ewsr::RunOptions &run, std::string &out)
{
    cmd->add_option("--samples", run.n_samples, "Monte-Carlo samples")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 40));
    cmd->add_option("--seed", run.seed, "random seed");
    cmd->add_option("--workers", run.workers, "worker threads (0: all cores)");
    cmd->add_option("--out", out, "output CSV path (default: stdout)");
    cmd->add_flag("--bits", run.bits, "report rates and gaps in bits");
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Expected weighted sum rate vs. massive-MIMO surrogate: gap experiments"};
    app.set_version_flag("--version", std::string(ewsr::version));
    app.require_subcommand(1);

    std::string out;

    ewsr::Fig1Options f1;
    std::string f1_snr;
    auto *fig1 = app.add_subcommand("fig1", "MISO i.i.d. gap against SNR");
    add_run_options(fig1, f1.run, out);
    fig1->add_option("--tx-antennas", f1.tx_antennas, "transmit antenna counts")->delimiter(',');
    fig1->add_option("--snr-db", f1_snr, "SNR grid in dB, lo:hi:step or a list");

    ewsr::Fig2Options f2;
    std::string f2_cov;
    auto *fig2 = app.add_subcommand("fig2", "Taylor approximation against the Monte-Carlo gap, correlated MIMO");
    add_run_options(fig2, f2.run, out);
    fig2->add_option("--tx-antennas", f2.tx_antennas, "transmit antenna counts")->delimiter(',');
    fig2->add_option("--rx-antennas", f2.rx_antennas, "receive antennas")->check(CLI::PositiveNumber);
    fig2->add_option("--rho", f2.rho, "linear SNR")->check(CLI::NonNegativeNumber);
    fig2->add_option("--cov", f2_cov, "covariance profile JSON");

    ewsr::SandwichCmdOptions sw;
    std::string sw_method = "auto";
    auto *sandwich = app.add_subcommand("sandwich", "EWSR against the surrogate sandwich bounds");
    add_run_options(sandwich, sw.run, out);
    sandwich->add_option("scenario", sw.scenario_path, "scenario JSON")->required();
    sandwich->add_flag("--identity-precoders", sw.identity_precoders, "use scaled identity precoders");
    sandwich->add_option("--method", sw_method, "gap method: auto, closed-form, taylor, monte-carlo-high-snr");

    ewsr::RunOptions vr;
    vr.n_samples = 20000;
    std::string suite = "all";
    auto *verify = app.add_subcommand("verify", "run the property suites");
    add_run_options(verify, vr, out);
    verify->add_option("suite", suite, "theorems, oracles or all");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    ewsr::ExperimentResult result;
    try
    {
        if (*fig1)
        {
            if (!f1_snr.empty())
                f1.snr_db = parse_snr_grid(f1_snr);
            result = ewsr::cmd_fig1(f1);
        }
        else if (*fig2)
        {
            if (!f2_cov.empty())
                f2.cov = ewsr::CovarianceProfile::load(f2_cov);
            result = ewsr::cmd_fig2(f2);
        }
        else if (*sandwich)
        {
            sw.method = ewsr::parse_gamma_method(sw_method);
            result = ewsr::cmd_sandwich(sw);
        }
        else
        {
            result = ewsr::cmd_verify(ewsr::parse_verify_suite(suite), vr);
        }
        result.write(out);
    }
    catch (const ewsr::error &e)
    {
        std::cerr << "ewsr-gap: " << e.what() << '\n';
        return 2;
    }
    return result.ok ? 0 : 1;
}
