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

#ifndef EWSR_SPECIAL_HPP
#define EWSR_SPECIAL_HPP

#include "ewsr/error.hpp"
#include "ewsr/random.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace ewsr
{

inline constexpr double euler_gamma() noexcept { return 0.57721566490153286061; }

// H_M = sum_{k=1}^{M} 1/k, accumulated smallest term first.
inline double harmonic(std::uint64_t M)
{
    if (M == 0)
        throw domain_error("harmonic number needs M >= 1");
    long double s = 0.0L; // smallest terms first
    for (std::uint64_t k = M; k >= 1; --k)
        s += 1.0L / static_cast<long double>(k);
    return static_cast<double>(s);
}

// e^x E1(x) for x > 0. Power series below x = 1, modified Lentz continued
// fraction above; the scaled form stays finite for large x.
inline double exp_scaled_e1(double x)
{
    if (!(x > 0.0))
        throw domain_error("E1 needs x > 0, got " + std::to_string(x));
    constexpr double eps = 1e-16;
    if (x <= 1.0)
    {
        // E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)
        double sum = 0.0, term = 1.0;
        for (int k = 1; k < 200; ++k)
        {
            term *= -x / k;
            const double add = term / k;
            sum += add;
            if (std::abs(add) < eps * std::abs(sum))
                break;
        }
        return std::exp(x) * (-euler_gamma() - std::log(x) - sum);
    }
    // E1(x) = e^{-x} / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...)))
    constexpr double tiny = 1e-300;
    double b = x + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i)
    {
        const double a = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < eps)
            return h;
    }
    throw no_convergence("E1 continued fraction at x = " + std::to_string(x));
}

inline double exp_integral_e1(double x)
{
    if (!(x > 0.0))
        throw domain_error("E1 needs x > 0, got " + std::to_string(x));
    if (x > 745.0)
        return 0.0;
    return std::exp(-x) * exp_scaled_e1(x);
}

// Gauss rule for integrals of the form  int_0^inf f(x) e^{-x} dx.
struct QuadratureRule
{
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<double> log_weights; // weights of far nodes underflow for n > ~180

    double integrate(auto &&f) const
    {
        double s = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            s += weights[i] * f(nodes[i]);
        return s;
    }
};

// Nodes by Newton iteration on L_n from asymptotic starting guesses; the
// three-term recurrence is rescaled on the fly so log-weights stay exact where
// the weights themselves underflow.
inline QuadratureRule gauss_laguerre(std::size_t n)
{
    if (n < 1 || n > 256)
        throw domain_error("Gauss-Laguerre order must be in [1, 256], got " + std::to_string(n));
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    rule.log_weights.resize(n);

    // Recurrence in long double: in double its rounding floor (~1e-13 relative)
    // shows up in the weights.
    using real = long double;
    const real nl = static_cast<real>(n);
    real z = 0.0L, prev = 0.0L, prev2 = 0.0L;
    for (std::size_t i = 0; i < n; ++i)
    {
        if (i == 0)
            z = 3.0L / (1.0L + 2.4L * nl);
        else if (i == 1)
            z += 15.0L / (1.0L + 2.5L * nl);
        else
        {
            const real ai = static_cast<real>(i - 1);
            z += (1.0L + 2.55L * ai) / (1.9L * ai) * (z - prev2);
        }

        real p1 = 0.0L, p2 = 0.0L, pp = 0.0L, log_scale = 0.0L;
        bool converged = false;
        for (int it = 0; it < 100; ++it)
        {
            p1 = 1.0L;
            p2 = 0.0L;
            log_scale = 0.0L;
            for (std::size_t j = 1; j <= n; ++j)
            {
                const real p3 = p2;
                p2 = p1;
                const real jd = static_cast<real>(j);
                p1 = ((2.0L * jd - 1.0L - z) * p2 - (jd - 1.0L) * p3) / jd;
                if (std::abs(p1) > 1e100L)
                {
                    p1 *= 1e-100L;
                    p2 *= 1e-100L;
                    log_scale += 100.0L * std::log(10.0L);
                }
            }
            pp = (nl * p1 - nl * p2) / z;
            const real z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-15L * std::abs(z))
            {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw no_convergence("Gauss-Laguerre node " + std::to_string(i) + " of " + std::to_string(n));
        prev2 = prev;
        prev = z;
        rule.nodes[i] = static_cast<double>(z);
        // w = -1 / (n L_n'(z) L_{n-1}(z))
        const double lw = static_cast<double>(-(std::log(std::abs(pp * nl * p2)) + 2.0L * log_scale));
        rule.log_weights[i] = lw;
        rule.weights[i] = std::exp(lw);
    }
    return rule;
}

inline const QuadratureRule &default_laguerre_rule()
{
    static const QuadratureRule rule = gauss_laguerre(128);
    return rule;
}

// Gamma(shape, 1) by the Marsaglia-Tsang squeeze; shape < 1 boosted via
// Gamma(shape + 1) * U^{1/shape}.
inline double sample_gamma(double shape, RngStream &rng)
{
    if (!(shape > 0.0) || !std::isfinite(shape))
        throw domain_error("gamma shape must be positive, got " + std::to_string(shape));
    if (shape < 1.0)
    {
        const double g = sample_gamma(shape + 1.0, rng);
        return g * std::pow(rng.uniform(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;)
    {
        double x, v;
        do
        {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2)
            return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v)))
            return d * v;
    }
}

} // namespace ewsr

#endif // EWSR_SPECIAL_HPP
