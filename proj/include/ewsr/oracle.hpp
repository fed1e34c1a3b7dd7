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

#ifndef EWSR_ORACLE_HPP
#define EWSR_ORACLE_HPP

// Reference evaluators kept independent of the Monte-Carlo estimators:
// exact expected MISO rates by quadrature and exponential integrals, a
// Bartlett-decomposition Wishart sampler, and a plain single-threaded gap
// estimator.

#include "ewsr/error.hpp"
#include "ewsr/gap.hpp"
#include "ewsr/linalg.hpp"
#include "ewsr/montecarlo.hpp"
#include "ewsr/random.hpp"
#include "ewsr/special.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace ewsr
{

// E ln(1 + rho x), x ~ Gamma(M, 1) (x = ||h||^2, h ~ CN(0, I_M)).
//
// The density is integrated against ln(1 + rho x) on [0, 1] and [1, inf)
// separately, each with the same Gauss-Laguerre rule: x = e^{-s} on the first
// piece, x = 1 + y on the second. Near x = 0 the log has a kink on scale
// 1/rho that a single Laguerre rule resolves only at O(1/n); in the s variable
// it becomes a smooth step.
inline double exact_e_log_miso_iid(std::uint64_t M, double rho, const QuadratureRule &rule = default_laguerre_rule())
{
    if (M == 0)
        throw domain_error("need M >= 1");
    if (!(rho >= 0.0) || !std::isfinite(rho))
        throw domain_error("SNR must be finite and nonnegative");
    if (rho == 0.0)
        return 0.0;
    const double m1 = static_cast<double>(M - 1);
    const double lgM = std::lgamma(static_cast<double>(M));
    double near = 0.0, far = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    {
        const double s = rule.nodes[i];
        const double lw = rule.log_weights[i];
        // [0,1]: dx = e^{-s} ds, density x^{M-1} e^{-x} / (M-1)!
        const double x0 = std::exp(-s);
        near += std::exp(lw - m1 * s - x0 - lgM) * std::log1p(rho * x0);
        // [1,inf): e^{-x} = e^{-1} e^{-y}
        const double x1 = 1.0 + s;
        far += std::exp(lw - 1.0 + m1 * std::log(x1) - lgM) * std::log1p(rho * x1);
    }
    return near + far;
}

// E ln(1 + rho x) for x = sum_i lambda_i |h_i|^2 with distinct lambda: the
// hyperexponential density mixes exponentials with partial-fraction weights
// and E ln(1 + rho X) = e^{a} E1(a), a = 1/(rho lambda), for X ~ Exp(mean lambda).
inline double exact_e_log_miso_corr(const EigenSpectrum &spec, double rho)
{
    if (!(rho >= 0.0) || !std::isfinite(rho))
        throw domain_error("SNR must be finite and nonnegative");
    const auto w = partial_fraction_weights(spec);
    const double wsum = std::accumulate(w.begin(), w.end(), 0.0);
    if (std::abs(wsum - 1.0) > 1e-9)
        throw degenerate_spectrum("partial-fraction weights sum to " + std::to_string(wsum));
    if (rho == 0.0)
        return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < spec.size(); ++i)
        s += w[i] * exp_scaled_e1(1.0 / (rho * spec.lambdas[i]));
    return s;
}

namespace detail
{
// Trapezoid rule in s = ln t. Integrands below are analytic in the strip
// |Im s| < pi/2 and decay exponentially at both ends, so the error is
// ~ exp(-pi^2 / h).
template <class F>
double log_axis_trapezoid(F &&f, double lo, double hi, double h = 0.05)
{
    const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / h));
    const double step = (hi - lo) / static_cast<double>(n);
    double s = 0.5 * (f(lo) + f(hi));
    for (std::size_t i = 1; i < n; ++i)
        s += f(lo + step * static_cast<double>(i));
    return s * step;
}
} // namespace detail

// E ln(1 + rho sum_i lambda_i X_i), X_i ~ Exp(1) i.i.d., for any positive
// lambdas (repeated values allowed), via
//   ln(1 + y) = int_0^inf (1 - e^{-y t}) e^{-t} / t dt,  E e^{-lambda X t} = 1/(1 + lambda t).
// Pass rho = infinity for E ln(sum_i lambda_i X_i).
inline double e_log_hypoexp(std::span<const double> lambdas, double rho)
{
    if (lambdas.empty())
        throw domain_error("need at least one eigenvalue");
    for (double l : lambdas)
        if (!(l > 0.0) || !std::isfinite(l))
            throw domain_error("eigenvalues must be positive and finite");
    if (!(rho >= 0.0))
        throw domain_error("SNR must be nonnegative");
    if (rho == 0.0)
        return 0.0;

    // Normalise to unit mean eigenvalue; the scale moves into rho or the log.
    const double mean = std::accumulate(lambdas.begin(), lambdas.end(), 0.0) / static_cast<double>(lambdas.size());
    std::vector<double> l(lambdas.begin(), lambdas.end());
    for (double &v : l)
        v /= mean;
    const double lmin = *std::min_element(l.begin(), l.end());
    const double p = static_cast<double>(l.size());

    auto prod = [&](double t) {
        double r = 1.0;
        for (double v : l)
            r /= 1.0 + v * t;
        return r;
    };

    if (std::isinf(rho))
    {
        auto f = [&](double s) {
            const double t = std::exp(s);
            return std::exp(-t) - prod(t);
        };
        const double hi = 40.0 / p + std::log(1.0 / lmin) + 4.0;
        return std::log(mean) + detail::log_axis_trapezoid(f, -45.0, hi);
    }
    const double r = rho * mean;
    auto f = [&](double s) {
        const double t = std::exp(s);
        double q = 1.0;
        for (double v : l)
            q /= 1.0 + r * v * t;
        return (1.0 - q) * std::exp(-t);
    };
    const double lo = -45.0 - std::log(r * p + 1.0);
    return detail::log_axis_trapezoid(f, lo, 4.5);
}

// Gamma(inf) for zero-mean MISO with any nonzero eigenvalues:
// ln sum lambda - E ln(sum lambda_i X_i).
inline double gamma_inf_miso_quadrature(std::span<const double> lambdas)
{
    const double total = std::accumulate(lambdas.begin(), lambdas.end(), 0.0);
    return std::log(total) - e_log_hypoexp(lambdas, std::numeric_limits<double>::infinity());
}

// Cholesky factors of an N x N complex Wishart(M, I) Gram matrix H H^H = L D L^H.
struct BartlettFactors
{
    std::vector<double> d; // D_i ~ Gamma(M - i, 1), i = 0..N-1
    ComplexMatrix l;       // unit lower triangular

    ComplexMatrix gram() const
    {
        ComplexMatrix T = l;
        for (std::size_t r = 0; r < T.rows(); ++r)
            for (std::size_t c = 0; c <= r; ++c)
                T(r, c) *= std::sqrt(d[c]);
        return ewsr::gram(T);
    }

    double log_det() const
    {
        double s = 0.0;
        for (double v : d)
            s += std::log(v);
        return s;
    }
};

inline BartlettFactors bartlett_sample(std::uint64_t M, std::uint64_t N, RngStream &rng)
{
    if (N == 0 || M == 0)
        throw domain_error("need M, N >= 1");
    if (N > M)
        throw domain_error("Bartlett decomposition needs M >= N");
    BartlettFactors f;
    f.d.resize(N);
    f.l = ComplexMatrix::identity(N);
    for (std::size_t i = 0; i < N; ++i)
        f.d[i] = sample_gamma(static_cast<double>(M - i), rng);
    // L_{ij} sqrt(D_j) ~ CN(0,1) below the diagonal.
    for (std::size_t i = 1; i < N; ++i)
        for (std::size_t j = 0; j < i; ++j)
            f.l(i, j) = rng.complex_normal() / std::sqrt(f.d[j]);
    return f;
}

// Plain Gamma(rho) estimator: one sequential stream, log-dets from
// eigenvalues instead of Cholesky pivots, sums in long double. Shares no
// sampling or reduction code with gamma_rho.
inline MonteCarloEstimate brute_force_gap(const GapSpec &spec, double rho, std::size_t n_samples, std::uint64_t seed)
{
    if (!(rho >= 0.0) || !std::isfinite(rho))
        throw domain_error("SNR must be finite and nonnegative");
    if (n_samples < 2)
        throw domain_error("need at least 2 samples");

    auto logdet_eig = [](const ComplexMatrix &A) {
        double s = 0.0;
        for (double l : hermitian_eig(A).eigenvalues)
            s += std::log(l);
        return s;
    };
    const std::size_t N = spec.rx(), M = spec.tx();
    const ComplexMatrix I = ComplexMatrix::identity(N);

    ComplexMatrix EG = spec.mean * spec.mean.adjoint();
    const double trC = spec.cov.trace().real();
    for (std::size_t i = 0; i < N; ++i)
        EG(i, i) += trC;
    const double first = logdet_eig(I + EG * rho);

    const ComplexMatrix S = hermitian_sqrt(spec.cov);
    RngStream rng(seed, StreamFamily::brute_force, 0);
    long double sum = 0.0L, sum2 = 0.0L;
    for (std::size_t n = 0; n < n_samples; ++n)
    {
        ComplexMatrix W(N, M);
        for (std::size_t r = 0; r < N; ++r)
            for (std::size_t c = 0; c < M; ++c)
                W(r, c) = rng.complex_normal();
        const ComplexMatrix H = spec.mean + W * S;
        ComplexMatrix R = I + (H * H.adjoint()) * rho;
        for (std::size_t r = 0; r < N; ++r) // H H^H is Hermitian up to rounding
            for (std::size_t c = r + 1; c < N; ++c)
                R(c, r) = std::conj(R(r, c));
        const double g = first - logdet_eig(R);
        sum += g;
        sum2 += static_cast<long double>(g) * g;
    }
    const long double n = static_cast<long double>(n_samples);
    const long double mean = sum / n;
    const long double var = std::max(0.0L, (sum2 - n * mean * mean) / (n - 1.0L));
    return {static_cast<double>(mean), static_cast<double>(std::sqrt(var / n)), n_samples, seed, rho};
}

} // namespace ewsr

#endif // EWSR_ORACLE_HPP
