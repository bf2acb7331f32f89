#pragma once

/**
 * @file matrix.hpp
 * @brief Dense rational matrices: characteristic polynomial and the
 *        M-matrix leading-minors test.
 *
 * Two exact primitives back the spectral certification:
 *   - charpoly() via Faddeev-LeVerrier (rational, division only by small
 *     integers),
 *   - leading_minors_positive(s): all leading principal minors of sI - M
 *     are positive. For a nonnegative M this is the Z-matrix/M-matrix
 *     criterion and holds if and only if rho(M) < s.
 */

#include <cstdint>
#include <vector>

#include "rotor/polynomial.hpp"
#include "rotor/rational.hpp"

namespace rotor {

class RatMatrix {
public:
    RatMatrix() : n_(0) {}
    explicit RatMatrix(std::size_t n) : n_(n), a_(n * n, Rat(0)) {}

    static RatMatrix identity(std::size_t n) {
        RatMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Rat(1);
        return m;
    }

    std::size_t size() const { return n_; }
    Rat& at(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    const Rat& at(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    bool nonnegative() const {
        for (const Rat& v : a_) {
            if (v.is_negative()) return false;
        }
        return true;
    }

    Rat trace() const {
        Rat t(0);
        for (std::size_t i = 0; i < n_; ++i) t += at(i, i);
        return t;
    }

    Rat row_sum(std::size_t i) const {
        Rat s(0);
        for (std::size_t j = 0; j < n_; ++j) s += at(i, j);
        return s;
    }

    Rat max_row_sum() const {
        Rat m(0);
        for (std::size_t i = 0; i < n_; ++i) {
            Rat s = row_sum(i);
            if (s > m) m = s;
        }
        return m;
    }

    RatMatrix operator*(const RatMatrix& o) const {
        RatMatrix r(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t k = 0; k < n_; ++k) {
                const Rat& aik = at(i, k);
                if (aik.is_zero()) continue;
                for (std::size_t j = 0; j < n_; ++j) {
                    r.at(i, j) += aik * o.at(k, j);
                }
            }
        }
        return r;
    }

    bool operator==(const RatMatrix&) const = default;

    /// Monic characteristic polynomial det(tI - M), coefficients from the
    /// constant term up (degree n).
    std::vector<Rat> charpoly() const {
        const std::size_t n = n_;
        std::vector<Rat> c(n + 1, Rat(0));
        c[n] = Rat(1);
        RatMatrix b = identity(n);
        Rat ck(1);
        for (std::size_t k = 1; k <= n; ++k) {
            // b <- M * (b + c_{k-1} I), c_k = -tr(b)/k
            RatMatrix t = b;
            if (k > 1) {
                for (std::size_t i = 0; i < n; ++i) t.at(i, i) += ck;
            }
            b = (*this) * t;
            ck = -b.trace() / Rat(static_cast<std::int64_t>(k));
            c[n - k] = ck;
        }
        return c;
    }

private:
    std::size_t n_;
    std::vector<Rat> a_;
};

namespace detail {

/// All leading principal minors of the rational matrix A are > 0, via
/// fraction-free Bareiss elimination on the denominator-cleared integer
/// matrix (positive scaling preserves minor signs). Early-exits on the
/// first non-positive minor.
inline bool leading_minors_positive(const RatMatrix& A) {
    const std::size_t n = A.size();
    if (n == 0) return true;
    std::int64_t denom = 1;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) denom = lcm_checked(denom, A.at(i, j).den());
    }
    std::vector<int128> m(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const Rat& v = A.at(i, j);
            m[i * n + j] = mul_checked(int128(v.num()), int128(denom / v.den()));
        }
    }
    // Bareiss: after step k the pivot m[k][k] equals the (k+1)-st leading
    // principal minor of the scaled matrix.
    int128 prev = 1;
    for (std::size_t k = 0; k < n; ++k) {
        if (m[k * n + k] <= 0) return false;
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                int128 num = sub_checked(mul_checked(m[i * n + j], m[k * n + k]),
                                         mul_checked(m[i * n + k], m[k * n + j]));
                m[i * n + j] = num / prev; // exact division (Bareiss)
            }
        }
        prev = m[k * n + k];
    }
    return true;
}

} // namespace detail

/// Exact test rho(M) < s for a nonnegative square matrix and rational s.
inline bool rho_less_than(const RatMatrix& M, const Rat& s) {
    RatMatrix A(M.size());
    for (std::size_t i = 0; i < M.size(); ++i) {
        for (std::size_t j = 0; j < M.size(); ++j) {
            A.at(i, j) = (i == j ? s - M.at(i, j) : -M.at(i, j));
        }
    }
    return detail::leading_minors_positive(A);
}

} // namespace rotor
