#pragma once

/**
 * @file rational.hpp
 * @brief Exact rational arithmetic on checked 64-bit integers.
 *
 * Every intermediate product is carried out in 128 bits and reduced by gcd
 * before being stored back into 64 bits. A result that does not fit after
 * reduction throws std::overflow_error instead of wrapping silently; the
 * classification routines in this library must never return a verdict that
 * was computed with wrapped integers.
 */

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rotor {

using int128 = __int128;

namespace detail {

inline int128 abs128(int128 x) { return x < 0 ? -x : x; }

inline int128 gcd128(int128 a, int128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline std::int64_t narrow128(int128 v, const char* what) {
    if (v > int128(INT64_MAX) || v < int128(INT64_MIN)) {
        throw std::overflow_error(std::string("rational overflow in ") + what);
    }
    return static_cast<std::int64_t>(v);
}

} // namespace detail

class Rat {
public:
    constexpr Rat() : num_(0), den_(1) {}
    Rat(std::int64_t n) : num_(n), den_(1) {}
    Rat(std::int64_t n, std::int64_t d) { assign(n, d); }

    static Rat from128(int128 n, int128 d, const char* what = "from128") {
        if (d == 0) throw std::domain_error("rational with zero denominator");
        if (d < 0) { n = -n; d = -d; }
        int128 g = detail::gcd128(n, d);
        if (g > 1) { n /= g; d /= g; }
        Rat r;
        r.num_ = detail::narrow128(n, what);
        r.den_ = detail::narrow128(d, what);
        return r;
    }

    /// Parses "p", "-p" or "p/q".
    static Rat parse(std::string_view text) {
        auto slash = text.find('/');
        auto to_i64 = [](std::string_view s) -> std::int64_t {
            if (s.empty()) throw std::invalid_argument("empty rational component");
            std::size_t pos = 0;
            long long v = 0;
            bool neg = false;
            if (s[pos] == '+' || s[pos] == '-') { neg = s[pos] == '-'; ++pos; }
            if (pos == s.size()) throw std::invalid_argument("malformed rational");
            for (; pos < s.size(); ++pos) {
                if (s[pos] < '0' || s[pos] > '9') throw std::invalid_argument("malformed rational");
                v = v * 10 + (s[pos] - '0');
                if (v < 0) throw std::overflow_error("rational literal too large");
            }
            return neg ? -v : v;
        };
        if (slash == std::string_view::npos) return Rat(to_i64(text));
        return Rat(to_i64(text.substr(0, slash)), to_i64(text.substr(slash + 1)));
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    bool is_zero() const { return num_ == 0; }
    bool is_negative() const { return num_ < 0; }
    bool is_integer() const { return den_ == 1; }
    int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    std::string to_string() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    friend Rat operator+(const Rat& a, const Rat& b) {
        return from128(int128(a.num_) * b.den_ + int128(b.num_) * a.den_,
                       int128(a.den_) * b.den_, "+");
    }
    friend Rat operator-(const Rat& a, const Rat& b) {
        return from128(int128(a.num_) * b.den_ - int128(b.num_) * a.den_,
                       int128(a.den_) * b.den_, "-");
    }
    friend Rat operator*(const Rat& a, const Rat& b) {
        return from128(int128(a.num_) * b.num_, int128(a.den_) * b.den_, "*");
    }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.num_ == 0) throw std::domain_error("rational division by zero");
        return from128(int128(a.num_) * b.den_, int128(a.den_) * b.num_, "/");
    }
    Rat operator-() const {
        Rat r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }
    Rat& operator+=(const Rat& o) { return *this = *this + o; }
    Rat& operator-=(const Rat& o) { return *this = *this - o; }
    Rat& operator*=(const Rat& o) { return *this = *this * o; }
    Rat& operator/=(const Rat& o) { return *this = *this / o; }

    friend bool operator==(const Rat& a, const Rat& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
        int128 lhs = int128(a.num_) * b.den_;
        int128 rhs = int128(b.num_) * a.den_;
        if (lhs < rhs) return std::strong_ordering::less;
        if (lhs > rhs) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

private:
    void assign(std::int64_t n, std::int64_t d) {
        if (d == 0) throw std::domain_error("rational with zero denominator");
        if (d < 0) {
            if (n == INT64_MIN || d == INT64_MIN) {
                *this = from128(-int128(n), -int128(d), "assign");
                return;
            }
            n = -n;
            d = -d;
        }
        std::int64_t g = std::gcd(n < 0 ? -(n == INT64_MIN ? n + 1 : n) : n, d);
        if (g > 1) { n /= g; d /= g; }
        num_ = n;
        den_ = d;
    }

    std::int64_t num_;
    std::int64_t den_;
};

/// Least common multiple of two positive 64-bit integers, overflow-checked.
inline std::int64_t lcm_checked(std::int64_t a, std::int64_t b) {
    if (a <= 0 || b <= 0) throw std::domain_error("lcm of non-positive values");
    int128 l = int128(a) / std::gcd(a, b) * b;
    return detail::narrow128(l, "lcm");
}

/// Exact comparison of sqrt(d) with a rational q, for d >= 0.
/// Returns -1, 0 or +1 for sqrt(d) <, =, > q.
inline int compare_sqrt(const Rat& d, const Rat& q) {
    if (d.is_negative()) throw std::domain_error("compare_sqrt of negative radicand");
    if (q.is_negative()) return d.is_zero() && q.is_zero() ? 0 : 1;
    // both sides non-negative: compare d with q^2
    int128 lhs = int128(d.num()) * q.den() * q.den();
    int128 rhs = int128(q.num()) * q.num() * d.den();
    if (lhs < rhs) return -1;
    if (lhs > rhs) return 1;
    return 0;
}

} // namespace rotor
