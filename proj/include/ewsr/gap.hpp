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

#ifndef EWSR_GAP_HPP
#define EWSR_GAP_HPP

// The per-term gap between the surrogate and the expected rate,
//
//     Gamma(rho) = ln|I + rho E[H H^H]| - E ln|I + rho H H^H|,   H ~ CN(mean, cov),
//
// which is nonnegative (Jensen) and nondecreasing in rho. This header holds the
// Monte-Carlo estimator, the infinite-SNR closed forms for the MISO i.i.d.,
// MISO correlated and zero-mean MIMO i.i.d. cases, and the second-order Taylor
// approximation Gamma_2.

#include "ewsr/channel.hpp"
#include "ewsr/error.hpp"
#include "ewsr/linalg.hpp"
#include "ewsr/montecarlo.hpp"
#include "ewsr/random.hpp"
#include "ewsr/special.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace ewsr
{

// SNR standing in for rho = infinity in Monte-Carlo cross-checks; the residual
// Gamma(inf) - Gamma(rho) is O(1/rho).
inline constexpr double infinite_snr = 1e6;

// Effective pair (mean, cov) of a single log-det term: rows of H - mean are
// i.i.d. CN(0, cov).
struct GapSpec
{
    ComplexMatrix mean; // N x M, may be zero
    ComplexMatrix cov;  // M x M Hermitian PSD

    GapSpec() = default;

    GapSpec(ComplexMatrix mean_, ComplexMatrix cov_) : mean(std::move(mean_)), cov(std::move(cov_))
    {
        if (!cov.is_square() || mean.cols() != cov.rows())
            throw dimension_mismatch("gap spec mean is " + std::to_string(mean.rows()) + "x" +
                                     std::to_string(mean.cols()) + ", cov is " + std::to_string(cov.rows()) + "x" +
                                     std::to_string(cov.cols()));
        if (mean.rows() == 0 || cov.rows() == 0)
            throw dimension_mismatch("gap spec needs N, M >= 1");
        require_hermitian(cov);
        require_psd(cov);
    }

    // Zero-mean N x M spec with covariance cov.
    static GapSpec zero_mean(std::size_t N, ComplexMatrix cov)
    {
        const std::size_t M = cov.rows();
        return {ComplexMatrix(N, M), std::move(cov)};
    }

    std::size_t rx() const noexcept { return mean.rows(); }
    std::size_t tx() const noexcept { return mean.cols(); }
    bool is_zero_mean() const noexcept { return mean.max_abs() == 0.0; }

    // E[H H^H] = mean mean^H + tr(cov) I
    ComplexMatrix expected_gram() const
    {
        return ewsr::expected_gram(ChannelDistribution{mean, cov}, ComplexMatrix::identity(tx()));
    }
};

// Positive eigenvalues sorted in decreasing order.
struct EigenSpectrum
{
    std::vector<double> lambdas;
    bool trace_matches_tx = false; // sum(lambdas) == number of Tx antennas

    EigenSpectrum() = default;

    explicit EigenSpectrum(std::vector<double> values) : lambdas(std::move(values))
    {
        if (lambdas.empty())
            throw domain_error("spectrum needs at least one eigenvalue");
        for (double l : lambdas)
            if (!(l > 0.0) || !std::isfinite(l))
                throw domain_error("spectrum eigenvalues must be positive and finite");
        std::sort(lambdas.begin(), lambdas.end(), std::greater<>());
    }

    std::size_t size() const noexcept { return lambdas.size(); }
    double sum() const noexcept { return std::accumulate(lambdas.begin(), lambdas.end(), 0.0); }

    EigenSpectrum scaled_to_sum(double total) const
    {
        EigenSpectrum s = *this;
        const double f = total / sum();
        for (double &l : s.lambdas)
            l *= f;
        s.trace_matches_tx = true;
        return s;
    }

    // min_i (lambda_i - lambda_{i+1}) / lambda_i; infinity for a single value.
    double min_relative_gap() const noexcept
    {
        double g = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < lambdas.size(); ++i)
            g = std::min(g, (lambdas[i] - lambdas[i + 1]) / lambdas[i]);
        return g;
    }
};

// Below this relative eigenvalue gap the partial-fraction weights of the
// hyperexponential density are too ill-conditioned to use.
inline constexpr double distinct_rel_gap = 1e-6;

// Weights 1 / prod_{l != i} (1 - lambda_l / lambda_i); they sum to one.
inline std::vector<double> partial_fraction_weights(const EigenSpectrum &spec)
{
    if (spec.min_relative_gap() <= distinct_rel_gap)
        throw degenerate_spectrum("eigenvalues closer than relative gap " + std::to_string(distinct_rel_gap));
    std::vector<double> w(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i)
    {
        double prod = 1.0;
        for (std::size_t l = 0; l < spec.size(); ++l)
            if (l != i)
                prod *= 1.0 - spec.lambdas[l] / spec.lambdas[i];
        w[i] = 1.0 / prod;
    }
    return w;
}

// Draws H H^H for a gap spec.
class GapSampler
{
public:
    explicit GapSampler(const GapSpec &spec)
        : mean_(spec.mean), sqrt_cov_(hermitian_sqrt(spec.cov)), zero_mean_(spec.is_zero_mean()) {}

    ComplexMatrix sample_gram(RngStream &rng) const
    {
        ComplexMatrix H = rng.complex_normal_matrix(mean_.rows(), mean_.cols()) * sqrt_cov_;
        if (!zero_mean_)
            H += mean_;
        return gram(H);
    }

private:
    ComplexMatrix mean_;
    ComplexMatrix sqrt_cov_;
    bool zero_mean_;
};

namespace detail
{
inline double logdet_identity_plus_scaled(const ComplexMatrix &G, double rho)
{
    if (rho == 0.0)
        return 0.0;
    if (G.rows() == 1)
        return std::log1p(rho * G(0, 0).real());
    return logdet_identity_plus(G * rho);
}

inline void require_rho(double rho)
{
    if (!(rho >= 0.0) || !std::isfinite(rho))
        throw domain_error("SNR must be finite and nonnegative, got " + std::to_string(rho));
}
} // namespace detail

struct GapSweep
{
    std::vector<MonteCarloEstimate> points;
    // Standard error of points[i+1].value - points[i].value under common random numbers.
    std::vector<double> difference_std_error;
};

// Gamma(rho) over an ascending grid. Sample i always uses stream (seed, gap, i),
// so every grid point (and every later call with the same seed) shares draws.
inline GapSweep monotonicity_sweep(const GapSpec &spec, std::span<const double> rho_grid, const McOptions &opt)
{
    if (rho_grid.empty())
        throw domain_error("empty SNR grid");
    for (std::size_t i = 0; i < rho_grid.size(); ++i)
    {
        detail::require_rho(rho_grid[i]);
        if (i > 0 && rho_grid[i] < rho_grid[i - 1])
            throw domain_error("SNR grid must be ascending");
    }
    if (opt.n_samples < 2)
        throw domain_error("need at least 2 samples");

    const std::size_t m = rho_grid.size();
    const ComplexMatrix EG = spec.expected_gram();
    std::vector<double> det_term(m);
    for (std::size_t j = 0; j < m; ++j)
        det_term[j] = detail::logdet_identity_plus_scaled(EG, rho_grid[j]);

    const GapSampler sampler(spec);
    const std::size_t n_out = 2 * m - 1;
    auto moments = run_monte_carlo(opt.n_samples, n_out, opt.workers, [&](std::size_t i, std::span<double> out) {
        RngStream rng(opt.seed, StreamFamily::gap, i);
        const ComplexMatrix G = sampler.sample_gram(rng);
        for (std::size_t j = 0; j < m; ++j)
            out[j] = det_term[j] - detail::logdet_identity_plus_scaled(G, rho_grid[j]);
        for (std::size_t j = 0; j + 1 < m; ++j)
            out[m + j] = out[j + 1] - out[j];
    });

    GapSweep sweep;
    for (std::size_t j = 0; j < m; ++j)
        sweep.points.push_back(to_estimate(moments[j], opt.seed, rho_grid[j]));
    for (std::size_t j = 0; j + 1 < m; ++j)
        sweep.difference_std_error.push_back(moments[m + j].std_error());
    return sweep;
}

inline MonteCarloEstimate gamma_rho(const GapSpec &spec, double rho, const McOptions &opt)
{
    const double grid[] = {rho};
    return monotonicity_sweep(spec, grid, opt).points.front();
}

// MISO i.i.d. (h ~ CN(0, I_M)): Gamma(inf) = gamma + ln M - H_{M-1}.
inline double gamma_inf_miso_iid(std::uint64_t M)
{
    if (M == 0)
        throw domain_error("need M >= 1 transmit antennas");
    const double h = M > 1 ? harmonic(M - 1) : 0.0;
    return euler_gamma() + std::log(static_cast<double>(M)) - h;
}

// MISO with transmit correlation of distinct nonzero eigenvalues lambda:
// Gamma(inf) = gamma - (sum_i w_i ln lambda_i - ln sum_i lambda_i).
inline double gamma_inf_miso_corr(const EigenSpectrum &spec)
{
    const auto w = partial_fraction_weights(spec);
    double s = 0.0;
    for (std::size_t i = 0; i < spec.size(); ++i)
        s += w[i] * std::log(spec.lambdas[i]);
    return euler_gamma() - (s - std::log(spec.sum()));
}

// Zero-mean i.i.d. MIMO, M >= N: Gamma(inf) = sum_{i=1}^{N} (gamma + ln M - H_{M-i}).
inline double gamma_inf_mimo_iid(std::uint64_t M, std::uint64_t N)
{
    if (N == 0 || M == 0)
        throw domain_error("need M, N >= 1");
    if (N > M)
        throw domain_error("zero-mean i.i.d. MIMO closed form needs M >= N");
    const double lnM = std::log(static_cast<double>(M));
    double s = 0.0;
    for (std::uint64_t i = 1; i <= N; ++i)
        s += euler_gamma() + lnM - (M - i > 0 ? harmonic(M - i) : 0.0);
    return s;
}

// Second-order Taylor approximation of Gamma(rho):
//
//   Gamma_2 = rho^2/2 * E tr(X^{-1} D X^{-1} D),  D = H H^H - E H H^H,  X = I + rho E H H^H
//           = rho^2/2 * [ tr(X^{-1})^2 tr(C^2) + 2 tr(X^{-1}) tr(Hbar^H X^{-1} Hbar C) ]
//
// from the fourth-order moments of a circular Gaussian H = Hbar + W C^{1/2}.
inline double taylor_gamma2(const GapSpec &spec, double rho)
{
    detail::require_rho(rho);
    if (rho == 0.0)
        return 0.0;
    ComplexMatrix X = spec.expected_gram() * rho;
    for (std::size_t i = 0; i < X.rows(); ++i)
        X(i, i) += 1.0;
    const ComplexMatrix A = inverse_hpd(X);
    const double trA = A.trace().real();
    const double frob = spec.cov.frobenius_norm();
    double value = trA * trA * frob * frob;
    if (!spec.is_zero_mean())
    {
        const ComplexMatrix B = spec.mean.adjoint() * A * spec.mean * spec.cov;
        value += 2.0 * trA * B.trace().real();
    }
    return 0.5 * rho * rho * value;
}

// Zero-mean infinite-SNR limit (N^2/2) tr(C^2) / tr(C)^2.
inline double taylor_gamma2_inf_zero_mean(const ComplexMatrix &C, std::size_t N)
{
    require_hermitian(C);
    const double tr = C.trace().real();
    if (!(tr > 0.0))
        throw domain_error("covariance trace must be positive");
    const double f = C.frobenius_norm();
    const double n = static_cast<double>(N);
    return 0.5 * n * n * f * f / (tr * tr);
}

} // namespace ewsr

#endif // EWSR_GAP_HPP
