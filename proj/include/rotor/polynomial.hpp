#pragma once

/**
 * @file polynomial.hpp
 * @brief Integer polynomials with 128-bit coefficients and Sturm chains.
 *
 * Enough exact univariate machinery to count distinct real roots of a
 * characteristic polynomial in an interval: primitive pseudo-remainder
 * sequences (with positive multipliers only, so sign information survives),
 * sign variation counts at rational points, and synthetic deflation at
 * t = 1. Coefficient arithmetic is overflow-checked 128-bit; matrices of
 * the size this library produces (K <= 6 with small denominators) stay far
 * below the limit.
 */

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rotor/rational.hpp"

namespace rotor {

namespace detail {

inline int128 mul_checked(int128 a, int128 b) {
    int128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("polynomial coefficient overflow (mul)");
    return r;
}

inline int128 add_checked(int128 a, int128 b) {
    int128 r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("polynomial coefficient overflow (add)");
    return r;
}

inline int128 sub_checked(int128 a, int128 b) {
    int128 r;
    if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("polynomial coefficient overflow (sub)");
    return r;
}

} // namespace detail

/// Dense integer polynomial, coefficients from the constant term up.
class IPoly {
public:
    IPoly() = default;
    explicit IPoly(std::vector<int128> coeffs) : c_(std::move(coeffs)) { trim(); }

    static IPoly constant(int128 v) { return IPoly(std::vector<int128>{v}); }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    int128 lead() const { return c_.back(); }
    int128 coeff(int k) const {
        return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[static_cast<std::size_t>(k)] : int128(0);
    }
    const std::vector<int128>& coeffs() const { return c_; }

    IPoly derivative() const {
        if (c_.size() <= 1) return IPoly();
        std::vector<int128> d(c_.size() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k) {
            d[k - 1] = detail::mul_checked(c_[k], int128(k));
        }
        return IPoly(std::move(d));
    }

    /// Divides out the integer content (gcd of coefficients), keeping the
    /// sign of the leading coefficient.
    IPoly primitive() const {
        if (is_zero()) return IPoly();
        int128 g = 0;
        for (int128 v : c_) g = detail::gcd128(g, v);
        std::vector<int128> out(c_);
        for (int128& v : out) v /= g;
        return IPoly(std::move(out));
    }

    IPoly negated() const {
        std::vector<int128> out(c_);
        for (int128& v : out) v = -v;
        return IPoly(std::move(out));
    }

    /// Sign of the value at the rational point p/q (q > 0): evaluates the
    /// homogenized form sum c_k p^k q^(n-k) exactly.
    int sign_at(std::int64_t p, std::int64_t q) const {
        if (q <= 0) throw std::domain_error("sign_at needs a positive denominator");
        if (is_zero()) return 0;
        const int n = degree();
        // Horner on the homogenized polynomial: acc = sum_k c_k p^k q^(n-k)
        int128 acc = 0;
        for (int k = n; k >= 0; --k) {
            acc = detail::mul_checked(acc, int128(p));
            acc = detail::add_checked(acc, detail::mul_checked(coeff(k), pow_checked(q, n - k)));
        }
        return acc > 0 ? 1 : (acc < 0 ? -1 : 0);
    }

    int sign_at(const Rat& x) const { return sign_at(x.num(), x.den()); }

    /// Synthetic division by (t - 1). Returns the quotient; throws unless
    /// 1 is a root.
    IPoly deflate_at_one() const {
        if (is_zero() || sign_at(1, 1) != 0) throw std::logic_error("deflate_at_one: 1 is not a root");
        const int n = degree();
        std::vector<int128> q(static_cast<std::size_t>(n));
        int128 carry = 0;
        for (int k = n; k >= 1; --k) {
            carry = detail::add_checked(carry, coeff(k));
            q[static_cast<std::size_t>(k - 1)] = carry;
        }
        return IPoly(std::move(q));
    }

private:
    static int128 pow_checked(std::int64_t base, int e) {
        int128 r = 1;
        for (int i = 0; i < e; ++i) r = detail::mul_checked(r, int128(base));
        return r;
    }

    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    std::vector<int128> c_;
};

/// Remainder of f modulo g up to a positive scalar factor. Only positive
/// multipliers are applied, so the sign pattern needed by Sturm's theorem is
/// preserved.
inline IPoly positive_prem(const IPoly& f, const IPoly& g) {
    if (g.is_zero()) throw std::domain_error("positive_prem: division by zero polynomial");
    IPoly r = f;
    const int dg = g.degree();
    const int128 lg = g.lead();
    const int128 alg = lg < 0 ? -lg : lg;
    const int sg = lg < 0 ? -1 : 1;
    while (!r.is_zero() && r.degree() >= dg) {
        const int shift = r.degree() - dg;
        const int128 cr = r.lead();
        std::vector<int128> out(static_cast<std::size_t>(r.degree()), 0);
        // out = r*|lg| - sgn(lg)*cr * t^shift * g   (leading terms cancel)
        for (int k = 0; k < r.degree(); ++k) {
            out[static_cast<std::size_t>(k)] = detail::mul_checked(r.coeff(k), alg);
        }
        for (int k = 0; k < dg; ++k) {
            int128 sub = detail::mul_checked(int128(sg), detail::mul_checked(cr, g.coeff(k)));
            out[static_cast<std::size_t>(k + shift)] =
                detail::sub_checked(out[static_cast<std::size_t>(k + shift)], sub);
        }
        r = IPoly(std::move(out)).primitive();
    }
    return r;
}

/// Sturm chain of f: s0 = f, s1 = f', s_{k+1} = -rem(s_{k-1}, s_k), all made
/// primitive. Counts distinct real roots via sign variations.
class SturmChain {
public:
    explicit SturmChain(const IPoly& f) {
        IPoly a = f.primitive();
        IPoly b = a.derivative().primitive();
        chain_.push_back(a);
        while (!b.is_zero()) {
            chain_.push_back(b);
            IPoly r = positive_prem(a, b).negated().primitive();
            a = std::move(b);
            b = std::move(r);
        }
    }

    int variations_at(const Rat& x) const {
        int count = 0;
        int prev = 0;
        for (const IPoly& p : chain_) {
            int s = p.sign_at(x);
            if (s == 0) continue;
            if (prev != 0 && s != prev) ++count;
            prev = s;
        }
        return count;
    }

    /// Number of distinct real roots in (a, b]; requires f(a) != 0 and
    /// f(b) != 0.
    int count_roots(const Rat& a, const Rat& b) const {
        if (chain_.empty() || chain_.front().is_zero()) return 0;
        if (chain_.front().sign_at(a) == 0 || chain_.front().sign_at(b) == 0) {
            throw std::logic_error("sturm count with a root at an endpoint");
        }
        return variations_at(a) - variations_at(b);
    }

private:
    std::vector<IPoly> chain_;
};

/// Clears denominators of a rational polynomial (coefficients from the
/// constant term up) into an integer polynomial with the same roots.
inline IPoly scale_to_integer(const std::vector<Rat>& coeffs) {
    std::int64_t denom = 1;
    for (const Rat& c : coeffs) denom = lcm_checked(denom, c.den());
    std::vector<int128> out(coeffs.size());
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        out[k] = detail::mul_checked(int128(coeffs[k].num()), int128(denom / coeffs[k].den()));
    }
    return IPoly(std::move(out));
}

} // namespace rotor
