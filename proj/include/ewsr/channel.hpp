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

#ifndef EWSR_CHANNEL_HPP
#define EWSR_CHANNEL_HPP

// Gaussian partial-CSIT channel model and the multi-cell scenario description.
//
// A link from BS j to user k is H = Hbar + W C^{1/2}, W with i.i.d. CN(0,1)
// entries, so each row of H - Hbar has covariance C (the transmit-side
// covariance) and E (H-Hbar)(H-Hbar)^H = tr(C) I.

#include "ewsr/error.hpp"
#include "ewsr/linalg.hpp"
#include "ewsr/random.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ewsr
{

struct ChannelDistribution
{
    ComplexMatrix mean;  // N_r x M
    ComplexMatrix cov_t; // M x M, Hermitian PSD

    ChannelDistribution() = default;

    ChannelDistribution(ComplexMatrix mean_, ComplexMatrix cov_)
        : mean(std::move(mean_)), cov_t(std::move(cov_))
    {
        validate();
    }

    // Zero-mean link with covariance scale * I.
    static ChannelDistribution isotropic(std::size_t rx, std::size_t tx, double scale = 1.0)
    {
        return {ComplexMatrix(rx, tx), ComplexMatrix::identity(tx) * scale};
    }

    std::size_t rx() const noexcept { return mean.rows(); }
    std::size_t tx() const noexcept { return mean.cols(); }

    void validate() const
    {
        if (!cov_t.is_square())
            throw dimension_mismatch("transmit covariance must be square");
        if (mean.cols() != cov_t.rows())
            throw dimension_mismatch("mean has " + std::to_string(mean.cols()) + " columns but covariance is " +
                                     std::to_string(cov_t.rows()) + "x" + std::to_string(cov_t.cols()));
        require_hermitian(cov_t);
        require_psd(cov_t);
    }
};

// Draws H = mean + W sqrt(cov_t) with the square root computed once.
class ChannelSampler
{
public:
    ChannelSampler() = default;

    explicit ChannelSampler(const ChannelDistribution &dist)
        : mean_(dist.mean), sqrt_cov_(hermitian_sqrt(dist.cov_t)),
          deterministic_(dist.cov_t.max_abs() == 0.0) {}

    ComplexMatrix sample(RngStream &rng) const
    {
        if (deterministic_)
            return mean_;
        ComplexMatrix H = rng.complex_normal_matrix(mean_.rows(), mean_.cols()) * sqrt_cov_;
        H += mean_;
        return H;
    }

    const ComplexMatrix &mean() const noexcept { return mean_; }
    const ComplexMatrix &sqrt_cov() const noexcept { return sqrt_cov_; }
    bool deterministic() const noexcept { return deterministic_; }

private:
    ComplexMatrix mean_;
    ComplexMatrix sqrt_cov_;
    bool deterministic_ = true;
};

inline ComplexMatrix sample_channel(const ChannelDistribution &dist, RngStream &rng)
{
    return ChannelSampler(dist).sample(rng);
}

// E[H Q H^H] = Hbar Q Hbar^H + tr(Q C_t) I
inline ComplexMatrix expected_gram(const ChannelDistribution &dist, const ComplexMatrix &Q)
{
    if (!Q.is_square() || Q.rows() != dist.tx())
        throw dimension_mismatch("Q must be " + std::to_string(dist.tx()) + "x" + std::to_string(dist.tx()));
    ComplexMatrix G = sandwich(dist.mean, Q);
    const double t = (Q * dist.cov_t).trace().real();
    for (std::size_t i = 0; i < G.rows(); ++i)
        G(i, i) += t;
    return G;
}

struct UserConfig
{
    std::size_t serving_bs = 0;
    std::size_t rx_antennas = 1;
    std::size_t streams = 1;
    double weight = 1.0;

    friend bool operator==(const UserConfig &, const UserConfig &) = default;
};

struct IbcScenario
{
    std::vector<std::size_t> bs_antennas; // M_j, one per cell
    std::vector<UserConfig> users;
    std::vector<double> power_budgets; // P_j
    std::vector<ChannelDistribution> links; // user-major: links[k * cells() + j]
    std::optional<std::uint64_t> seed;

    std::size_t cells() const noexcept { return bs_antennas.size(); }
    std::size_t num_users() const noexcept { return users.size(); }

    const ChannelDistribution &link(std::size_t k, std::size_t j) const
    {
        if (k >= num_users() || j >= cells())
            throw index_out_of_range("link (" + std::to_string(k) + ", " + std::to_string(j) + ")");
        return links[k * cells() + j];
    }

    std::size_t total_tx() const noexcept
    {
        std::size_t m = 0;
        for (auto a : bs_antennas)
            m += a;
        return m;
    }

    std::size_t tx_offset(std::size_t j) const noexcept
    {
        std::size_t m = 0;
        for (std::size_t i = 0; i < j; ++i)
            m += bs_antennas[i];
        return m;
    }

    void validate() const
    {
        if (bs_antennas.empty())
            throw validation_error("scenario needs at least one cell");
        if (power_budgets.size() != cells())
            throw validation_error("power_budgets has " + std::to_string(power_budgets.size()) + " entries for " +
                                   std::to_string(cells()) + " cells");
        for (std::size_t j = 0; j < cells(); ++j)
        {
            if (bs_antennas[j] == 0)
                throw validation_error("cell " + std::to_string(j) + " has no antennas");
            if (!(power_budgets[j] > 0.0) || !std::isfinite(power_budgets[j]))
                throw validation_error("power budget of cell " + std::to_string(j) + " must be positive");
        }
        if (users.empty())
            throw validation_error("scenario needs at least one user");
        for (std::size_t k = 0; k < num_users(); ++k)
        {
            const auto &u = users[k];
            const std::string who = "user " + std::to_string(k) + ": ";
            if (u.serving_bs >= cells())
                throw validation_error(who + "serving_bs out of range");
            if (u.rx_antennas == 0)
                throw validation_error(who + "rx antennas must be positive");
            if (u.streams == 0)
                throw validation_error(who + "streams must be positive");
            if (u.streams > u.rx_antennas)
                throw validation_error(who + "streams exceed rx antennas");
            if (u.streams > bs_antennas[u.serving_bs])
                throw validation_error(who + "streams exceed tx antennas");
            if (!(u.weight >= 0.0) || !std::isfinite(u.weight))
                throw validation_error(who + "rate weight must be finite and nonnegative");
        }
        if (links.size() != num_users() * cells())
            throw validation_error("expected " + std::to_string(num_users() * cells()) + " links, got " +
                                   std::to_string(links.size()));
        for (std::size_t k = 0; k < num_users(); ++k)
            for (std::size_t j = 0; j < cells(); ++j)
            {
                const auto &l = link(k, j);
                if (l.rx() != users[k].rx_antennas || l.tx() != bs_antennas[j])
                    throw validation_error("link (" + std::to_string(k) + ", " + std::to_string(j) + ") must be " +
                                           std::to_string(users[k].rx_antennas) + "x" +
                                           std::to_string(bs_antennas[j]));
            }
    }

    // True when every link is deterministic (zero covariance).
    bool deterministic() const noexcept
    {
        for (const auto &l : links)
            if (l.cov_t.max_abs() != 0.0)
                return false;
        return true;
    }
};

struct PrecoderSet
{
    std::vector<ComplexMatrix> g; // G_k, M_{b_k} x d_k

    ComplexMatrix covariance(std::size_t k) const { return gram(g.at(k)); } // Q_k = G_k G_k^H

    double bs_power(const IbcScenario &s, std::size_t j) const
    {
        double p = 0.0;
        for (std::size_t k = 0; k < s.num_users(); ++k)
            if (s.users[k].serving_bs == j)
                p += g[k].frobenius_norm() * g[k].frobenius_norm();
        return p;
    }

    void validate(const IbcScenario &s) const
    {
        if (g.size() != s.num_users())
            throw validation_error("expected " + std::to_string(s.num_users()) + " precoders, got " +
                                   std::to_string(g.size()));
        for (std::size_t k = 0; k < g.size(); ++k)
        {
            const auto &u = s.users[k];
            if (g[k].rows() != s.bs_antennas[u.serving_bs] || g[k].cols() != u.streams)
                throw validation_error("precoder " + std::to_string(k) + " must be " +
                                       std::to_string(s.bs_antennas[u.serving_bs]) + "x" + std::to_string(u.streams));
        }
        for (std::size_t j = 0; j < s.cells(); ++j)
            if (bs_power(s, j) > s.power_budgets[j] + 1e-9)
                throw validation_error("precoders of cell " + std::to_string(j) + " exceed the power budget");
    }
};

// G_k = a_j [I_{d_k}; 0] with a_j chosen so each BS spends exactly its budget.
inline PrecoderSet scaled_identity_precoders(const IbcScenario &s)
{
    std::vector<std::size_t> streams_at(s.cells(), 0);
    for (const auto &u : s.users)
        streams_at[u.serving_bs] += u.streams;
    PrecoderSet p;
    for (const auto &u : s.users)
    {
        const std::size_t M = s.bs_antennas[u.serving_bs];
        const double a = std::sqrt(s.power_budgets[u.serving_bs] / static_cast<double>(streams_at[u.serving_bs]));
        ComplexMatrix G(M, u.streams);
        for (std::size_t i = 0; i < u.streams; ++i)
            G(i, i) = a;
        p.g.push_back(std::move(G));
    }
    return p;
}

// Everything user k sees, stacked over base stations in index order:
// H_k = [H_{k,0} ... H_{k,C-1}] = mean + W cov^{1/2}. `q` is block-diagonal with
// block j = sum_{i: b_i = j} Q_i; `q_bar` drops user k's own Q_k from its block.
struct StackedUserView
{
    ComplexMatrix mean;  // N_k x sum_j M_j
    ComplexMatrix cov;   // block-diagonal C_{t,k,j}
    ComplexMatrix q;     // block-diagonal transmit covariance of all users
    ComplexMatrix q_bar; // interference-only version
    double weight = 0.0;
};

inline StackedUserView stack_user(const IbcScenario &s, const PrecoderSet &p, std::size_t k)
{
    if (k >= s.num_users())
        throw index_out_of_range("user " + std::to_string(k) + " of " + std::to_string(s.num_users()));
    const std::size_t C = s.cells();
    std::vector<ComplexMatrix> means, covs, q_blocks, qbar_blocks;
    for (std::size_t j = 0; j < C; ++j)
    {
        means.push_back(s.link(k, j).mean);
        covs.push_back(s.link(k, j).cov_t);
        q_blocks.emplace_back(s.bs_antennas[j], s.bs_antennas[j]);
        qbar_blocks.emplace_back(s.bs_antennas[j], s.bs_antennas[j]);
    }
    for (std::size_t i = 0; i < s.num_users(); ++i)
    {
        const std::size_t j = s.users[i].serving_bs;
        const ComplexMatrix Qi = p.covariance(i);
        q_blocks[j] += Qi;
        if (i != k)
            qbar_blocks[j] += Qi;
    }
    StackedUserView v;
    v.mean = hconcat(means);
    v.cov = block_diagonal(covs);
    v.q = block_diagonal(q_blocks);
    v.q_bar = block_diagonal(qbar_blocks);
    v.weight = s.users[k].weight;
    return v;
}

} // namespace ewsr

#endif // EWSR_CHANNEL_HPP
