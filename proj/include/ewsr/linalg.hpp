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

#ifndef EWSR_LINALG_HPP
#define EWSR_LINALG_HPP

// Small dense complex linear algebra: the products, factorizations and
// Hermitian spectral tools consumed by the rate and gap formulas.
// Matrices here are at most a few dozen rows, so everything is a plain
// O(n^3) kernel on row-major storage.

#include "ewsr/error.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ewsr
{

using cplx = std::complex<double>;

class ComplexMatrix
{
public:
    ComplexMatrix() = default;

    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, cplx(0.0, 0.0)) {}

    // Row-major entries; throws if the count does not match or an entry is not finite.
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries))
    {
        if (data_.size() != rows_ * cols_)
            throw dimension_mismatch("entry count " + std::to_string(data_.size()) + " does not match " +
                                     std::to_string(rows_) + "x" + std::to_string(cols_));
        for (const auto &z : data_)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                throw domain_error("matrix entries must be finite");
    }

    ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows)
        : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0)
    {
        data_.reserve(rows_ * cols_);
        for (const auto &r : rows)
        {
            if (r.size() != cols_)
                throw dimension_mismatch("ragged initializer list");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return ComplexMatrix(rows, cols); }

    static ComplexMatrix identity(std::size_t n)
    {
        ComplexMatrix I(n, n);
        for (std::size_t i = 0; i < n; ++i)
            I(i, i) = 1.0;
        return I;
    }

    static ComplexMatrix diagonal(std::span<const double> d)
    {
        ComplexMatrix D(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i)
            D(i, i) = d[i];
        return D;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }
    bool is_square() const noexcept { return rows_ == cols_; }

    cplx &operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    const cplx &operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<cplx> entries() noexcept { return data_; }
    std::span<const cplx> entries() const noexcept { return data_; }

    ComplexMatrix adjoint() const
    {
        ComplexMatrix A(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                A(c, r) = std::conj((*this)(r, c));
        return A;
    }

    ComplexMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const
    {
        if (r0 + nr > rows_ || c0 + nc > cols_)
            throw index_out_of_range("block exceeds matrix bounds");
        ComplexMatrix B(nr, nc);
        for (std::size_t r = 0; r < nr; ++r)
            for (std::size_t c = 0; c < nc; ++c)
                B(r, c) = (*this)(r0 + r, c0 + c);
        return B;
    }

    void set_block(std::size_t r0, std::size_t c0, const ComplexMatrix &B)
    {
        if (r0 + B.rows() > rows_ || c0 + B.cols() > cols_)
            throw index_out_of_range("block exceeds matrix bounds");
        for (std::size_t r = 0; r < B.rows(); ++r)
            for (std::size_t c = 0; c < B.cols(); ++c)
                (*this)(r0 + r, c0 + c) = B(r, c);
    }

    cplx trace() const
    {
        cplx t = 0.0;
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i)
            t += (*this)(i, i);
        return t;
    }

    double max_abs() const noexcept
    {
        double m = 0.0;
        for (const auto &z : data_)
            m = std::max(m, std::abs(z));
        return m;
    }

    double frobenius_norm() const noexcept
    {
        double s = 0.0;
        for (const auto &z : data_)
            s += std::norm(z);
        return std::sqrt(s);
    }

    ComplexMatrix &operator+=(const ComplexMatrix &B)
    {
        check_same_shape(B);
        for (std::size_t i = 0; i < data_.size(); ++i)
            data_[i] += B.data_[i];
        return *this;
    }

    ComplexMatrix &operator-=(const ComplexMatrix &B)
    {
        check_same_shape(B);
        for (std::size_t i = 0; i < data_.size(); ++i)
            data_[i] -= B.data_[i];
        return *this;
    }

    ComplexMatrix &operator*=(cplx s) noexcept
    {
        for (auto &z : data_)
            z *= s;
        return *this;
    }

    ComplexMatrix &operator*=(double s) noexcept
    {
        for (auto &z : data_)
            z *= s;
        return *this;
    }

    friend bool operator==(const ComplexMatrix &, const ComplexMatrix &) = default;

private:
    void check_same_shape(const ComplexMatrix &B) const
    {
        if (rows_ != B.rows_ || cols_ != B.cols_)
            throw dimension_mismatch(std::to_string(rows_) + "x" + std::to_string(cols_) + " vs " +
                                     std::to_string(B.rows_) + "x" + std::to_string(B.cols_));
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

inline ComplexMatrix operator+(ComplexMatrix A, const ComplexMatrix &B) { return A += B; }
inline ComplexMatrix operator-(ComplexMatrix A, const ComplexMatrix &B) { return A -= B; }
inline ComplexMatrix operator*(ComplexMatrix A, double s) { return A *= s; }
inline ComplexMatrix operator*(double s, ComplexMatrix A) { return A *= s; }
inline ComplexMatrix operator*(ComplexMatrix A, cplx s) { return A *= s; }
inline ComplexMatrix operator*(cplx s, ComplexMatrix A) { return A *= s; }

namespace detail
{
// (a.re + i a.im)(b.re + i b.im) accumulated without the NaN-recovery path of
// std::complex multiplication.
inline void mac(double &re, double &im, const cplx &a, const cplx &b) noexcept
{
    re += a.real() * b.real() - a.imag() * b.imag();
    im += a.real() * b.imag() + a.imag() * b.real();
}
inline void mac_conj(double &re, double &im, const cplx &a, const cplx &b) noexcept // a * conj(b)
{
    re += a.real() * b.real() + a.imag() * b.imag();
    im += a.imag() * b.real() - a.real() * b.imag();
}
} // namespace detail

inline ComplexMatrix operator*(const ComplexMatrix &A, const ComplexMatrix &B)
{
    if (A.cols() != B.rows())
        throw dimension_mismatch("product " + std::to_string(A.rows()) + "x" + std::to_string(A.cols()) + " * " +
                                 std::to_string(B.rows()) + "x" + std::to_string(B.cols()));
    ComplexMatrix C(A.rows(), B.cols());
    std::vector<double> re(B.cols()), im(B.cols());
    for (std::size_t r = 0; r < A.rows(); ++r)
    {
        std::fill(re.begin(), re.end(), 0.0);
        std::fill(im.begin(), im.end(), 0.0);
        for (std::size_t k = 0; k < A.cols(); ++k)
        {
            const cplx a = A(r, k);
            if (a == 0.0)
                continue;
            for (std::size_t c = 0; c < B.cols(); ++c)
                detail::mac(re[c], im[c], a, B(k, c));
        }
        for (std::size_t c = 0; c < B.cols(); ++c)
            C(r, c) = cplx(re[c], im[c]);
    }
    return C;
}

// A * B^H
inline ComplexMatrix multiply_adjoint(const ComplexMatrix &A, const ComplexMatrix &B)
{
    if (A.cols() != B.cols())
        throw dimension_mismatch("A*B^H needs equal column counts");
    ComplexMatrix C(A.rows(), B.rows());
    for (std::size_t r = 0; r < A.rows(); ++r)
        for (std::size_t c = 0; c < B.rows(); ++c)
        {
            double re = 0.0, im = 0.0;
            for (std::size_t k = 0; k < A.cols(); ++k)
                detail::mac_conj(re, im, A(r, k), B(c, k));
            C(r, c) = cplx(re, im);
        }
    return C;
}

// A * A^H, filled from the upper triangle so the result is exactly Hermitian.
inline ComplexMatrix gram(const ComplexMatrix &A)
{
    ComplexMatrix G(A.rows(), A.rows());
    for (std::size_t r = 0; r < A.rows(); ++r)
        for (std::size_t c = r; c < A.rows(); ++c)
        {
            double re = 0.0, im = 0.0;
            for (std::size_t k = 0; k < A.cols(); ++k)
                detail::mac_conj(re, im, A(r, k), A(c, k));
            G(r, c) = cplx(re, r == c ? 0.0 : im);
            G(c, r) = std::conj(G(r, c));
        }
    return G;
}

// A * Q * A^H for Hermitian Q, symmetrized.
inline ComplexMatrix sandwich(const ComplexMatrix &A, const ComplexMatrix &Q)
{
    ComplexMatrix S = multiply_adjoint(A * Q, A);
    for (std::size_t r = 0; r < S.rows(); ++r)
    {
        S(r, r) = cplx(S(r, r).real(), 0.0);
        for (std::size_t c = r + 1; c < S.cols(); ++c)
        {
            const cplx m = 0.5 * (S(r, c) + std::conj(S(c, r)));
            S(r, c) = m;
            S(c, r) = std::conj(m);
        }
    }
    return S;
}

// Horizontal concatenation [A_0 A_1 ...]; all blocks share the row count.
inline ComplexMatrix hconcat(std::span<const ComplexMatrix> blocks)
{
    if (blocks.empty())
        return {};
    std::size_t cols = 0;
    for (const auto &b : blocks)
    {
        if (b.rows() != blocks[0].rows())
            throw dimension_mismatch("hconcat needs equal row counts");
        cols += b.cols();
    }
    ComplexMatrix H(blocks[0].rows(), cols);
    std::size_t c0 = 0;
    for (const auto &b : blocks)
    {
        H.set_block(0, c0, b);
        c0 += b.cols();
    }
    return H;
}

inline ComplexMatrix block_diagonal(std::span<const ComplexMatrix> blocks)
{
    std::size_t rows = 0, cols = 0;
    for (const auto &b : blocks)
    {
        rows += b.rows();
        cols += b.cols();
    }
    ComplexMatrix D(rows, cols);
    std::size_t r0 = 0, c0 = 0;
    for (const auto &b : blocks)
    {
        D.set_block(r0, c0, b);
        r0 += b.rows();
        c0 += b.cols();
    }
    return D;
}

// max |A - A^H|
inline double hermitian_deviation(const ComplexMatrix &A)
{
    if (!A.is_square())
        throw dimension_mismatch("matrix is not square");
    double d = 0.0;
    for (std::size_t r = 0; r < A.rows(); ++r)
        for (std::size_t c = r; c < A.cols(); ++c)
            d = std::max(d, std::abs(A(r, c) - std::conj(A(c, r))));
    return d;
}

// Hermitian tolerance is relative to the largest entry.
inline constexpr double hermitian_rel_tol = 1e-10;

inline void require_hermitian(const ComplexMatrix &A)
{
    const double dev = hermitian_deviation(A);
    if (dev > hermitian_rel_tol * A.max_abs())
        throw not_hermitian("max|A - A^H| = " + std::to_string(dev));
}

// Lower-triangular L with A = L L^H.
inline ComplexMatrix cholesky_lower(const ComplexMatrix &A)
{
    require_hermitian(A);
    const std::size_t n = A.rows();
    ComplexMatrix L(n, n);
    for (std::size_t j = 0; j < n; ++j)
    {
        double pivot = A(j, j).real();
        for (std::size_t k = 0; k < j; ++k)
            pivot -= std::norm(L(j, k));
        if (!(pivot > 0.0))
            throw not_positive_definite("pivot " + std::to_string(j) + " = " + std::to_string(pivot));
        const double ljj = std::sqrt(pivot);
        L(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i)
        {
            double re = A(i, j).real(), im = A(i, j).imag();
            for (std::size_t k = 0; k < j; ++k)
            {
                // subtract L(i,k) * conj(L(j,k))
                const cplx &a = L(i, k), &b = L(j, k);
                re -= a.real() * b.real() + a.imag() * b.imag();
                im -= a.imag() * b.real() - a.real() * b.imag();
            }
            L(i, j) = cplx(re / ljj, im / ljj);
        }
    }
    return L;
}

// ln det A for Hermitian positive-definite A, as the sum of log Cholesky pivots.
inline double logdet_hpd(const ComplexMatrix &A)
{
    if (A.rows() == 1 && A.cols() == 1)
    {
        if (A(0, 0).imag() != 0.0 && std::abs(A(0, 0).imag()) > hermitian_rel_tol * std::abs(A(0, 0)))
            throw not_hermitian("1x1 matrix with imaginary diagonal");
        if (!(A(0, 0).real() > 0.0))
            throw not_positive_definite("pivot 0 = " + std::to_string(A(0, 0).real()));
        return std::log(A(0, 0).real());
    }
    const ComplexMatrix L = cholesky_lower(A);
    double s = 0.0;
    for (std::size_t i = 0; i < L.rows(); ++i)
        s += std::log(L(i, i).real());
    return 2.0 * s;
}

// ln det(I + A) for Hermitian PSD A, the form every rate term takes.
inline double logdet_identity_plus(const ComplexMatrix &A)
{
    ComplexMatrix B = A;
    for (std::size_t i = 0; i < B.rows(); ++i)
        B(i, i) += 1.0;
    return logdet_hpd(B);
}

inline ComplexMatrix inverse_hpd(const ComplexMatrix &A)
{
    const ComplexMatrix L = cholesky_lower(A);
    const std::size_t n = L.rows();
    // L^{-1} by forward substitution, then A^{-1} = L^{-H} L^{-1}.
    ComplexMatrix Linv(n, n);
    for (std::size_t c = 0; c < n; ++c)
    {
        Linv(c, c) = 1.0 / L(c, c).real();
        for (std::size_t r = c + 1; r < n; ++r)
        {
            cplx s = 0.0;
            for (std::size_t k = c; k < r; ++k)
                s += L(r, k) * Linv(k, c);
            Linv(r, c) = -s / L(r, r).real();
        }
    }
    ComplexMatrix inv = Linv.adjoint() * Linv;
    for (std::size_t r = 0; r < n; ++r)
    {
        inv(r, r) = cplx(inv(r, r).real(), 0.0);
        for (std::size_t c = r + 1; c < n; ++c)
            inv(c, r) = std::conj(inv(r, c));
    }
    return inv;
}

struct HermitianSpectrum
{
    std::vector<double> eigenvalues; // descending
    ComplexMatrix eigenvectors;      // columns, unitary
};

// Cyclic Jacobi for Hermitian matrices. Each rotation first removes the phase of
// the pivot entry, then applies the classical real Jacobi rotation.
inline HermitianSpectrum hermitian_eig(const ComplexMatrix &input, int max_sweeps = 100)
{
    require_hermitian(input);
    const std::size_t n = input.rows();
    ComplexMatrix A = input;
    for (std::size_t i = 0; i < n; ++i)
        A(i, i) = cplx(A(i, i).real(), 0.0);
    ComplexMatrix V = ComplexMatrix::identity(n);

    const double scale = std::max(A.frobenius_norm(), std::numeric_limits<double>::min());
    const double eps = std::numeric_limits<double>::epsilon();

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = r + 1; c < n; ++c)
                s += std::norm(A(r, c));
        return std::sqrt(2.0 * s);
    };

    int sweep = 0;
    while (n > 1 && off_norm() > eps * scale)
    {
        if (++sweep > max_sweeps)
            throw no_convergence("Jacobi did not converge after " + std::to_string(max_sweeps) + " sweeps");
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
            {
                const cplx b = A(p, q);
                const double babs = std::abs(b);
                if (babs <= eps * eps * scale)
                {
                    A(p, q) = A(q, p) = 0.0;
                    continue;
                }
                const double app = A(p, p).real(), aqq = A(q, q).real();
                const double zeta = (aqq - app) / (2.0 * babs);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(zeta * zeta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const cplx ph = std::conj(b) / babs; // e^{-i phi}
                // U restricted to (p,q): [[c, s], [-s ph, c ph]]
                const cplx upp = c, upq = s, uqp = -s * ph, uqq = c * ph;

                for (std::size_t k = 0; k < n; ++k) // columns
                {
                    const cplx akp = A(k, p), akq = A(k, q);
                    A(k, p) = akp * upp + akq * uqp;
                    A(k, q) = akp * upq + akq * uqq;
                }
                for (std::size_t k = 0; k < n; ++k) // rows
                {
                    const cplx apk = A(p, k), aqk = A(q, k);
                    A(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
                    A(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
                }
                A(p, q) = A(q, p) = 0.0;
                A(p, p) = app - t * babs;
                A(q, q) = aqq + t * babs;
                for (std::size_t k = 0; k < n; ++k)
                {
                    const cplx vkp = V(k, p), vkq = V(k, q);
                    V(k, p) = vkp * upp + vkq * uqp;
                    V(k, q) = vkp * upq + vkq * uqq;
                }
            }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return A(a, a).real() > A(b, b).real(); });

    HermitianSpectrum out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j)
    {
        out.eigenvalues[j] = A(order[j], order[j]).real();
        for (std::size_t k = 0; k < n; ++k)
            out.eigenvectors(k, j) = V(k, order[j]);
    }
    return out;
}

// V diag(f(lambda)) V^H
template <class F>
ComplexMatrix spectral_map(const HermitianSpectrum &spec, F &&f)
{
    const std::size_t n = spec.eigenvalues.size();
    ComplexMatrix S(n, n);
    for (std::size_t j = 0; j < n; ++j)
    {
        const double fj = f(spec.eigenvalues[j]);
        if (fj == 0.0)
            continue;
        for (std::size_t r = 0; r < n; ++r)
        {
            const cplx vr = spec.eigenvectors(r, j) * fj;
            for (std::size_t c = r; c < n; ++c)
                S(r, c) += vr * std::conj(spec.eigenvectors(c, j));
        }
    }
    for (std::size_t r = 0; r < n; ++r)
    {
        S(r, r) = cplx(S(r, r).real(), 0.0);
        for (std::size_t c = r + 1; c < n; ++c)
            S(c, r) = std::conj(S(r, c));
    }
    return S;
}

inline constexpr double psd_rel_tol = 1e-10;

// Hermitian PSD square root; eigenvalues down to -psd_rel_tol*max|C| are clamped to zero.
inline ComplexMatrix hermitian_sqrt(const ComplexMatrix &C)
{
    const auto spec = hermitian_eig(C);
    const double floor = -psd_rel_tol * C.max_abs();
    for (double l : spec.eigenvalues)
        if (l < floor)
            throw indefinite_matrix("eigenvalue " + std::to_string(l));
    return spectral_map(spec, [](double l) { return l > 0.0 ? std::sqrt(l) : 0.0; });
}

// Throws unless C is Hermitian PSD within tolerance.
inline void require_psd(const ComplexMatrix &C)
{
    if (C.empty())
        return;
    const auto spec = hermitian_eig(C);
    if (spec.eigenvalues.back() < -psd_rel_tol * C.max_abs())
        throw indefinite_matrix("eigenvalue " + std::to_string(spec.eigenvalues.back()));
}

} // namespace ewsr

#endif // EWSR_LINALG_HPP
