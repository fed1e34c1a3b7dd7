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

#ifndef EWSR_SCENARIO_IO_HPP
#define EWSR_SCENARIO_IO_HPP

// Scenario JSON documents. Layout (see README for the full schema):
//
//   {
//     "cells":         [ {"bs_antennas": 4}, ... ],
//     "power_budgets": [ 10.0, ... ],
//     "users":  [ {"serving_bs": 0, "rx_antennas": 1, "streams": 1,
//                  "weight": 1.0, "precoder": MATRIX}, ... ],
//     "links":  [ {"user": 0, "bs": 0, "mean": MATRIX, "cov": MATRIX | number}, ... ],
//     "seed":   42
//   }
//
// MATRIX is an array of rows; an entry is [re, im] or a bare real number.
// A numeric "cov" s stands for s * I; an omitted "mean" is zero. "streams"
// defaults to rx_antennas and "weight" to 1. Precoders are optional but must
// then be given for every user.

#include "ewsr/channel.hpp"
#include "ewsr/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

namespace ewsr
{

struct ScenarioDocument
{
    IbcScenario scenario;
    std::optional<PrecoderSet> precoders;
};

namespace detail
{
using json = nlohmann::json;

inline const json &require_field(const json &obj, const char *key, const std::string &path)
{
    if (!obj.is_object())
        throw parse_error("expected an object", 0, path);
    const auto it = obj.find(key);
    if (it == obj.end())
        throw parse_error(std::string("missing field '") + key + "'", 0, path);
    return *it;
}

inline double as_number(const json &v, const std::string &path)
{
    if (!v.is_number())
        throw parse_error("expected a number", 0, path);
    return v.get<double>();
}

inline std::size_t as_count(const json &v, const std::string &path)
{
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw parse_error("expected a nonnegative integer", 0, path);
    return v.get<std::size_t>();
}

inline cplx as_complex(const json &v, const std::string &path)
{
    if (v.is_number())
        return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    throw parse_error("expected [re, im] or a real number", 0, path);
}

inline ComplexMatrix as_matrix(const json &v, const std::string &path)
{
    if (!v.is_array() || v.empty())
        throw parse_error("expected a non-empty array of rows", 0, path);
    const std::size_t rows = v.size();
    std::size_t cols = 0;
    std::vector<cplx> entries;
    for (std::size_t r = 0; r < rows; ++r)
    {
        const std::string rp = path + "[" + std::to_string(r) + "]";
        if (!v[r].is_array())
            throw parse_error("expected a row array", 0, rp);
        if (r == 0)
            cols = v[r].size();
        else if (v[r].size() != cols)
            throw parse_error("ragged matrix rows", 0, rp);
        for (std::size_t c = 0; c < cols; ++c)
            entries.push_back(as_complex(v[r][c], rp + "[" + std::to_string(c) + "]"));
    }
    return ComplexMatrix(rows, cols, std::move(entries));
}

inline json matrix_to_json(const ComplexMatrix &A)
{
    json rows = json::array();
    for (std::size_t r = 0; r < A.rows(); ++r)
    {
        json row = json::array();
        for (std::size_t c = 0; c < A.cols(); ++c)
            row.push_back(json::array({A(r, c).real(), A(r, c).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::size_t line_of_byte(const std::string &text, std::size_t byte)
{
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}
} // namespace detail

inline ScenarioDocument parse_scenario(const std::string &text)
{
    using detail::json;
    json doc;
    try
    {
        doc = json::parse(text);
    }
    catch (const nlohmann::json::parse_error &e)
    {
        throw parse_error(e.what(), detail::line_of_byte(text, e.byte == 0 ? 0 : e.byte - 1), "");
    }

    ScenarioDocument out;
    IbcScenario &s = out.scenario;

    const json &cells = detail::require_field(doc, "cells", "$");
    if (!cells.is_array())
        throw parse_error("expected an array", 0, "$.cells");
    for (std::size_t j = 0; j < cells.size(); ++j)
    {
        const std::string p = "$.cells[" + std::to_string(j) + "]";
        s.bs_antennas.push_back(detail::as_count(detail::require_field(cells[j], "bs_antennas", p), p + ".bs_antennas"));
    }

    const json &budgets = detail::require_field(doc, "power_budgets", "$");
    if (!budgets.is_array())
        throw parse_error("expected an array", 0, "$.power_budgets");
    for (std::size_t j = 0; j < budgets.size(); ++j)
        s.power_budgets.push_back(detail::as_number(budgets[j], "$.power_budgets[" + std::to_string(j) + "]"));

    const json &users = detail::require_field(doc, "users", "$");
    if (!users.is_array())
        throw parse_error("expected an array", 0, "$.users");
    std::size_t with_precoder = 0;
    PrecoderSet precoders;
    for (std::size_t k = 0; k < users.size(); ++k)
    {
        const std::string p = "$.users[" + std::to_string(k) + "]";
        const json &u = users[k];
        UserConfig cfg;
        cfg.serving_bs = detail::as_count(detail::require_field(u, "serving_bs", p), p + ".serving_bs");
        cfg.rx_antennas = detail::as_count(detail::require_field(u, "rx_antennas", p), p + ".rx_antennas");
        cfg.streams = u.contains("streams") ? detail::as_count(u["streams"], p + ".streams") : cfg.rx_antennas;
        cfg.weight = u.contains("weight") ? detail::as_number(u["weight"], p + ".weight") : 1.0;
        s.users.push_back(cfg);
        if (u.contains("precoder"))
        {
            ++with_precoder;
            precoders.g.push_back(detail::as_matrix(u["precoder"], p + ".precoder"));
        }
    }
    if (with_precoder != 0 && with_precoder != users.size())
        throw parse_error("precoder given for some users but not all", 0, "$.users");

    // Sizes must be known before links can be placed.
    if (s.bs_antennas.empty() || s.users.empty())
        s.validate();

    const json &links = detail::require_field(doc, "links", "$");
    if (!links.is_array())
        throw parse_error("expected an array", 0, "$.links");
    std::vector<std::optional<ChannelDistribution>> placed(s.num_users() * s.cells());
    for (std::size_t l = 0; l < links.size(); ++l)
    {
        const std::string p = "$.links[" + std::to_string(l) + "]";
        const json &e = links[l];
        const std::size_t k = detail::as_count(detail::require_field(e, "user", p), p + ".user");
        const std::size_t j = detail::as_count(detail::require_field(e, "bs", p), p + ".bs");
        if (k >= s.num_users() || j >= s.cells())
            throw validation_error(p + ": link refers to a missing user or cell");
        if (placed[k * s.cells() + j])
            throw validation_error(p + ": duplicate link (" + std::to_string(k) + ", " + std::to_string(j) + ")");
        const std::size_t N = s.users[k].rx_antennas, M = s.bs_antennas[j];

        const json &cj = detail::require_field(e, "cov", p);
        ComplexMatrix cov = cj.is_number() ? ComplexMatrix::identity(M) * cj.get<double>()
                                           : detail::as_matrix(cj, p + ".cov");
        ComplexMatrix mean = e.contains("mean") ? detail::as_matrix(e["mean"], p + ".mean") : ComplexMatrix(N, M);
        if (mean.rows() != N || mean.cols() != M || cov.rows() != M || cov.cols() != M)
            throw validation_error(p + ": link (" + std::to_string(k) + ", " + std::to_string(j) + ") must be " +
                                   std::to_string(N) + "x" + std::to_string(M));
        try
        {
            placed[k * s.cells() + j] = ChannelDistribution(std::move(mean), std::move(cov));
        }
        catch (const error &ex)
        {
            throw validation_error(p + ": " + ex.what());
        }
    }
    for (std::size_t i = 0; i < placed.size(); ++i)
    {
        if (!placed[i])
            throw validation_error("missing link (" + std::to_string(i / s.cells()) + ", " +
                                   std::to_string(i % s.cells()) + ")");
        s.links.push_back(std::move(*placed[i]));
    }

    if (doc.contains("seed"))
    {
        if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer())
            throw parse_error("expected an integer", 0, "$.seed");
        s.seed = doc["seed"].get<std::uint64_t>();
    }

    s.validate();
    if (with_precoder)
    {
        precoders.validate(s);
        out.precoders = std::move(precoders);
    }
    return out;
}

inline ScenarioDocument load_scenario_document(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw io_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

inline IbcScenario load_scenario(const std::string &path) { return load_scenario_document(path).scenario; }

inline std::string dump_scenario(const IbcScenario &s, const std::optional<PrecoderSet> &precoders = std::nullopt)
{
    using detail::json;
    json doc;
    doc["cells"] = json::array();
    for (auto m : s.bs_antennas)
        doc["cells"].push_back({{"bs_antennas", m}});
    doc["power_budgets"] = s.power_budgets;
    doc["users"] = json::array();
    for (std::size_t k = 0; k < s.num_users(); ++k)
    {
        const auto &u = s.users[k];
        json ju = {{"serving_bs", u.serving_bs}, {"rx_antennas", u.rx_antennas}, {"streams", u.streams}, {"weight", u.weight}};
        if (precoders)
            ju["precoder"] = detail::matrix_to_json(precoders->g.at(k));
        doc["users"].push_back(std::move(ju));
    }
    doc["links"] = json::array();
    for (std::size_t k = 0; k < s.num_users(); ++k)
        for (std::size_t j = 0; j < s.cells(); ++j)
            doc["links"].push_back({{"user", k},
                                    {"bs", j},
                                    {"mean", detail::matrix_to_json(s.link(k, j).mean)},
                                    {"cov", detail::matrix_to_json(s.link(k, j).cov_t)}});
    if (s.seed)
        doc["seed"] = *s.seed;
    return doc.dump(2) + "\n";
}

inline void save_scenario(const std::string &path, const IbcScenario &s,
                          const std::optional<PrecoderSet> &precoders = std::nullopt)
{
    std::ofstream out(path);
    if (!out)
        throw io_error("cannot write " + path);
    out << dump_scenario(s, precoders);
    if (!out)
        throw io_error("write failed for " + path);
}

} // namespace ewsr

#endif // EWSR_SCENARIO_IO_HPP
