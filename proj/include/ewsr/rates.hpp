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

#ifndef EWSR_RATES_HPP
#define EWSR_RATES_HPP

// Weighted sum rate objectives. With the per-user stacked channel H_k and the
// block-diagonal transmit covariances Q (all users) and Qbar_k (all but k):
//
//   WSR      = sum_k u_k ( ln|I + H_k Q H_k^H| - ln|I + H_k Qbar_k H_k^H| )
//   EWSR     = E[WSR]
//   ESEI-WSR = sum_k u_k ( ln|I + E H_k Q H_k^H| - ln|I + E H_k Qbar_k H_k^H| )
//
// and  ESEI - sum u_k Gamma_k(inf) <= EWSR <= ESEI + sum u_k Gammabar_k(inf).
// All rates are in nats.

#include "ewsr/channel.hpp"
#include "ewsr/error.hpp"
#include "ewsr/gap.hpp"
#include "ewsr/linalg.hpp"
#include "ewsr/montecarlo.hpp"
#include "ewsr/oracle.hpp"
#include "ewsr/random.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ewsr
{

// Scenario with per-user stacked views and per-link samplers prepared once.
class PreparedScenario
{
public:
    PreparedScenario(const IbcScenario &s, const PrecoderSet &p) : cells_(s.cells())
    {
        s.validate();
        p.validate(s);
        for (std::size_t k = 0; k < s.num_users(); ++k)
        {
            views_.push_back(stack_user(s, p, k));
            for (std::size_t j = 0; j < s.cells(); ++j)
                samplers_.emplace_back(s.link(k, j));
        }
    }

    std::size_t num_users() const noexcept { return views_.size(); }
    const StackedUserView &view(std::size_t k) const { return views_.at(k); }

    ComplexMatrix sample_stacked(std::size_t k, RngStream &rng) const
    {
        std::vector<ComplexMatrix> blocks;
        blocks.reserve(cells_);
        for (std::size_t j = 0; j < cells_; ++j)
            blocks.push_back(samplers_[k * cells_ + j].sample(rng));
        return hconcat(blocks);
    }

private:
    std::size_t cells_;
    std::vector<StackedUserView> views_;
    std::vector<ChannelSampler> samplers_;
};

// (ln|I + H Q H^H|, ln|I + H Qbar H^H|) for one user.
inline std::pair<double, double> user_log_dets(const StackedUserView &v, const ComplexMatrix &H)
{
    return {logdet_identity_plus(sandwich(H, v.q)), logdet_identity_plus(sandwich(H, v.q_bar))};
}

inline double wsr_realization(const PreparedScenario &ps, std::span<const ComplexMatrix> channels)
{
    if (channels.size() != ps.num_users())
        throw dimension_mismatch("one stacked channel per user expected");
    double total = 0.0;
    for (std::size_t k = 0; k < ps.num_users(); ++k)
    {
        const auto &v = ps.view(k);
        if (channels[k].rows() != v.mean.rows() || channels[k].cols() != v.mean.cols())
            throw dimension_mismatch("stacked channel of user " + std::to_string(k) + " has the wrong shape");
        const auto [a, b] = user_log_dets(v, channels[k]);
        total += v.weight * (a - b);
    }
    return total;
}

inline double wsr_realization(const IbcScenario &s, const PrecoderSet &p, std::span<const ComplexMatrix> channels)
{
    return wsr_realization(PreparedScenario(s, p), channels);
}

struct EwsrEstimate
{
    MonteCarloEstimate total;                  // EWSR
    std::vector<MonteCarloEstimate> rate;      // per user, unweighted E[ln|R_k| - ln|Rbar_k|]
    std::vector<MonteCarloEstimate> ln_r;      // E ln|I + H_k Q H_k^H|
    std::vector<MonteCarloEstimate> ln_r_bar;  // E ln|I + H_k Qbar_k H_k^H|
};

// Sample i draws every user's channel from stream (seed, ewsr, i); the same draw
// feeds both log-det terms of a user.
inline EwsrEstimate ewsr_monte_carlo_detailed(const IbcScenario &s, const PrecoderSet &p, const McOptions &opt)
{
    if (opt.n_samples < 2)
        throw domain_error("need at least 2 samples");
    const PreparedScenario ps(s, p);
    const std::size_t K = ps.num_users();
    auto m = run_monte_carlo(opt.n_samples, 1 + 3 * K, opt.workers, [&](std::size_t i, std::span<double> out) {
        RngStream rng(opt.seed, StreamFamily::ewsr, i);
        double total = 0.0;
        for (std::size_t k = 0; k < K; ++k)
        {
            const auto &v = ps.view(k);
            const auto [a, b] = user_log_dets(v, ps.sample_stacked(k, rng));
            total += v.weight * (a - b);
            out[1 + 3 * k] = a - b;
            out[2 + 3 * k] = a;
            out[3 + 3 * k] = b;
        }
        out[0] = total;
    });
    EwsrEstimate e;
    e.total = to_estimate(m[0], opt.seed);
    for (std::size_t k = 0; k < K; ++k)
    {
        e.rate.push_back(to_estimate(m[1 + 3 * k], opt.seed));
        e.ln_r.push_back(to_estimate(m[2 + 3 * k], opt.seed));
        e.ln_r_bar.push_back(to_estimate(m[3 + 3 * k], opt.seed));
    }
    return e;
}

inline MonteCarloEstimate ewsr_monte_carlo(const IbcScenario &s, const PrecoderSet &p, const McOptions &opt)
{
    return ewsr_monte_carlo_detailed(s, p, opt).total;
}

struct EseiTerms
{
    double ln_r = 0.0;     // ln|I + E H_k Q H_k^H|
    double ln_r_bar = 0.0; // ln|I + E H_k Qbar_k H_k^H|
};

inline std::vector<EseiTerms> esei_terms(const PreparedScenario &ps)
{
    std::vector<EseiTerms> t;
    for (std::size_t k = 0; k < ps.num_users(); ++k)
    {
        const auto &v = ps.view(k);
        const ChannelDistribution stacked{v.mean, v.cov};
        t.push_back({logdet_identity_plus(expected_gram(stacked, v.q)),
                     logdet_identity_plus(expected_gram(stacked, v.q_bar))});
    }
    return t;
}

inline double esei_wsr(const IbcScenario &s, const PrecoderSet &p)
{
    const PreparedScenario ps(s, p);
    const auto t = esei_terms(ps);
    double total = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k)
        total += ps.view(k).weight * (t[k].ln_r - t[k].ln_r_bar);
    return total;
}

enum class GammaMethod
{
    automatic,
    closed_form,
    taylor,
    monte_carlo_high_snr,
    skipped, // zero rate weight, the term does not enter the bound
};

inline std::string_view to_string(GammaMethod m) noexcept
{
    switch (m)
    {
    case GammaMethod::automatic: return "auto";
    case GammaMethod::closed_form: return "closed-form";
    case GammaMethod::taylor: return "taylor";
    case GammaMethod::monte_carlo_high_snr: return "monte-carlo-high-snr";
    case GammaMethod::skipped: return "skipped";
    }
    return "?";
}

inline GammaMethod parse_gamma_method(std::string_view s)
{
    for (auto m : {GammaMethod::automatic, GammaMethod::closed_form, GammaMethod::taylor,
                   GammaMethod::monte_carlo_high_snr})
        if (s == to_string(m))
            return m;
    throw domain_error("unknown gamma method '" + std::string(s) + "'");
}

struct GammaInfinity
{
    double value = 0.0;
    GammaMethod method = GammaMethod::closed_form;
};

// Whitened spec of one log-det term: H Q^{1/2} has mean Hbar Q^{1/2} and row
// covariance Q^{1/2} C Q^{1/2}, so H Q H^H has the law of H' H'^H.
inline GapSpec effective_gap_spec(const StackedUserView &v, const ComplexMatrix &Q)
{
    const ComplexMatrix Qh = hermitian_sqrt(Q);
    ComplexMatrix cov = Qh * v.cov * Qh;
    for (std::size_t r = 0; r < cov.rows(); ++r)
    {
        cov(r, r) = cplx(cov(r, r).real(), 0.0);
        for (std::size_t c = r + 1; c < cov.cols(); ++c)
        {
            const cplx m = 0.5 * (cov(r, c) + std::conj(cov(c, r)));
            cov(r, c) = m;
            cov(c, r) = std::conj(m);
        }
    }
    return {v.mean * Qh, std::move(cov)};
}

// Closed-form Gamma(inf) where one exists:
//  - deterministic channel: 0
//  - zero-mean MISO: i.i.d. formula when the nonzero eigenvalues coincide, the
//    distinct-eigenvalue formula when they are well separated, and the
//    hypoexponential quadrature for anything in between
//  - zero-mean MIMO: i.i.d. formula with M = rank; infinite when rank < N.
// Returns nullopt otherwise.
inline std::optional<double> gamma_inf_closed_form(const GapSpec &spec)
{
    if (spec.cov.max_abs() == 0.0)
        return 0.0;
    if (!spec.is_zero_mean())
        return std::nullopt;
    const auto eig = hermitian_eig(spec.cov).eigenvalues;
    const double floor = 1e-10 * eig.front();
    std::vector<double> nz;
    for (double l : eig)
        if (l > floor)
            nz.push_back(l);
    const std::size_t p = nz.size(), N = spec.rx();
    const bool all_equal = (nz.front() - nz.back()) <= distinct_rel_gap * nz.front();

    if (N == 1)
    {
        if (all_equal)
            return gamma_inf_miso_iid(p);
        const EigenSpectrum es(nz);
        if (es.min_relative_gap() > distinct_rel_gap)
            return gamma_inf_miso_corr(es);
        return gamma_inf_miso_quadrature(nz);
    }
    if (p < N)
        return std::numeric_limits<double>::infinity();
    if (all_equal)
        return gamma_inf_mimo_iid(p, N);
    return std::nullopt;
}

inline GammaInfinity gamma_infinity(const GapSpec &spec, GammaMethod method, const McOptions &mc)
{
    switch (method)
    {
    case GammaMethod::closed_form:
        if (auto v = gamma_inf_closed_form(spec))
            return {*v, GammaMethod::closed_form};
        throw unsupported_case("no closed-form infinite-SNR gap for non-zero-mean or correlated MIMO terms");
    case GammaMethod::taylor:
        if (spec.cov.max_abs() == 0.0)
            return {0.0, GammaMethod::taylor};
        if (!spec.is_zero_mean())
            throw unsupported_case("the infinite-SNR Taylor gap is defined for zero-mean terms");
        return {taylor_gamma2_inf_zero_mean(spec.cov, spec.rx()), GammaMethod::taylor};
    case GammaMethod::monte_carlo_high_snr:
        return {gamma_rho(spec, infinite_snr, mc).value, GammaMethod::monte_carlo_high_snr};
    case GammaMethod::automatic:
        if (auto v = gamma_inf_closed_form(spec))
            return {*v, GammaMethod::closed_form};
        if (spec.is_zero_mean())
            return gamma_infinity(spec, GammaMethod::taylor, mc);
        return gamma_infinity(spec, GammaMethod::monte_carlo_high_snr, mc);
    case GammaMethod::skipped:
        return {0.0, GammaMethod::skipped};
    }
    throw domain_error("bad gamma method");
}

struct SandwichBound
{
    double lower = 0.0;
    double upper = 0.0;
    double esei_value = 0.0;
    std::vector<double> esei_per_user;       // u_k (ln|E R_k| - ln|E Rbar_k|)
    std::vector<double> per_user_gamma_k;    // Gamma_k(inf), unweighted
    std::vector<double> per_user_gamma_kbar; // Gammabar_k(inf), unweighted
    std::vector<GammaMethod> method_gamma_k;
    std::vector<GammaMethod> method_gamma_kbar;
};

struct SandwichOptions
{
    GammaMethod method = GammaMethod::automatic;
    McOptions mc{100000, 1, 0}; // only used by the high-SNR Monte-Carlo route
};

inline SandwichBound sandwich_bounds(const IbcScenario &s, const PrecoderSet &p, const SandwichOptions &opt = {})
{
    const PreparedScenario ps(s, p);
    const auto terms = esei_terms(ps);
    SandwichBound b;
    double lower_slack = 0.0, upper_slack = 0.0;
    for (std::size_t k = 0; k < ps.num_users(); ++k)
    {
        const auto &v = ps.view(k);
        const double u = v.weight;
        b.esei_per_user.push_back(u * (terms[k].ln_r - terms[k].ln_r_bar));
        b.esei_value += b.esei_per_user.back();
        if (u == 0.0)
        {
            b.per_user_gamma_k.push_back(0.0);
            b.per_user_gamma_kbar.push_back(0.0);
            b.method_gamma_k.push_back(GammaMethod::skipped);
            b.method_gamma_kbar.push_back(GammaMethod::skipped);
            continue;
        }
        McOptions mc = opt.mc;
        mc.seed = opt.mc.seed + 2 * k;
        const auto gk = gamma_infinity(effective_gap_spec(v, v.q), opt.method, mc);
        mc.seed += 1;
        const auto gkb = gamma_infinity(effective_gap_spec(v, v.q_bar), opt.method, mc);
        b.per_user_gamma_k.push_back(gk.value);
        b.per_user_gamma_kbar.push_back(gkb.value);
        b.method_gamma_k.push_back(gk.method);
        b.method_gamma_kbar.push_back(gkb.method);
        lower_slack += u * gk.value;
        upper_slack += u * gkb.value;
    }
    b.lower = b.esei_value - lower_slack;
    b.upper = b.esei_value + upper_slack;
    return b;
}

} // namespace ewsr

#endif // EWSR_RATES_HPP
