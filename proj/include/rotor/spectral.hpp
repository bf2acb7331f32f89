#pragma once

/**
 * @file spectral.hpp
 * @brief Certified Perron root enclosures for nonnegative rational matrices.
 *
 * The spectral radius of a nonnegative matrix is its largest real
 * eigenvalue, i.e. the largest real root of the characteristic polynomial.
 * The verdict rho > 1 vs rho <= 1 is decided exactly:
 *
 *   - multiplicity of the root t = 1 by synthetic deflation,
 *   - number of distinct roots in (1, B] by a Sturm chain (B beats the max
 *     row sum, which bounds rho),
 *   - cross-checked against the M-matrix criterion: all leading principal
 *     minors of sI - M positive  <=>  rho < s.
 *
 * The numeric enclosure is produced by bisecting the exact M-matrix test,
 * so [lo, hi] is certified at every step; rho = 1 and rho = 0 are returned
 * as exact point enclosures. Verdicts never rest on floating point.
 */

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "rotor/matrix.hpp"
#include "rotor/polynomial.hpp"
#include "rotor/rational.hpp"

namespace rotor {

struct RhoCertificate {
    Rat lo;
    Rat hi;
    bool greater_than_one = false;
    bool exactly_one = false;
    int multiplicity_at_one = 0;
    int roots_above_one = 0;
    bool refined_to_tol = true;

    const char* verdict() const { return greater_than_one ? "gt1" : "le1"; }
};

/// Uncertified floating-point estimate by power iteration, for cross-checks
/// and report output. Iterates M + I (the Perron root shifts by exactly 1
/// and the shift removes periodic oscillation), then subtracts the shift.
inline double power_iteration_estimate(const RatMatrix& M, int iterations = 2000) {
    const std::size_t n = M.size();
    if (n == 0) return 0.0;
    std::vector<double> a(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            a[i * n + j] = M.at(i, j).to_double() + (i == j ? 1.0 : 0.0);
        }
    }
    std::vector<double> x(n, 1.0), y(n);
    double est = 0.0;
    for (int it = 0; it < iterations; ++it) {
        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += a[i * n + j] * x[j];
            y[i] = s;
            norm += s;
        }
        if (norm <= 0.0) return 0.0;
        double prev = 0.0;
        for (double v : x) prev += v;
        est = norm / prev;
        for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / norm * static_cast<double>(n);
    }
    return est - 1.0;
}

/// Exact closed form for a 2x2 matrix: rho = b + sqrt(D) with
/// b = tr/2 and D = tr^2/4 - det (D >= 0 for nonnegative matrices).
struct QuadraticRoot {
    Rat base;
    Rat disc;
    double value() const { return base.to_double() + std::sqrt(disc.to_double()); }
    /// Exact comparison of b + sqrt(D) with a rational q.
    int compare(const Rat& q) const { return compare_sqrt(disc, q - base); }
};

inline std::optional<QuadraticRoot> closed_form_rho(const RatMatrix& M) {
    if (M.size() == 1) return QuadraticRoot{M.at(0, 0), Rat(0)};
    if (M.size() != 2) return std::nullopt;
    Rat tr = M.trace();
    Rat det = M.at(0, 0) * M.at(1, 1) - M.at(0, 1) * M.at(1, 0);
    Rat b = tr / Rat(2);
    Rat D = b * b - det;
    if (D.is_negative()) throw std::logic_error("nonnegative 2x2 with complex spectrum");
    return QuadraticRoot{b, D};
}

inline RhoCertificate certify_spectral_radius(const RatMatrix& M, const Rat& tol) {
    if (M.size() == 0) throw std::invalid_argument("spectral radius of an empty matrix");
    if (!M.nonnegative()) throw std::domain_error("spectral radius certification requires a nonnegative matrix");
    if (!(tol > Rat(0))) throw std::invalid_argument("tolerance must be positive");

    RhoCertificate cert;
    const std::vector<Rat> cp = M.charpoly();
    IPoly f = scale_to_integer(cp);

    while (!f.is_zero() && f.degree() > 0 && f.sign_at(1, 1) == 0) {
        f = f.deflate_at_one();
        ++cert.multiplicity_at_one;
    }

    const Rat rowmax = M.max_row_sum();
    const Rat upper = rowmax + Rat(1); // rho <= max row sum < upper
    if (f.degree() > 0) {
        SturmChain chain(f);
        cert.roots_above_one = chain.count_roots(Rat(1), upper);
    }
    cert.greater_than_one = cert.roots_above_one > 0;
    cert.exactly_one = !cert.greater_than_one && cert.multiplicity_at_one > 0;

    // independent route: the M-matrix minors criterion at s = 1
    const bool strictly_below_one = rho_less_than(M, Rat(1));
    if (strictly_below_one != (!cert.greater_than_one && !cert.exactly_one)) {
        throw std::logic_error("spectral certification mismatch between Sturm and minors routes");
    }
    // independent route for 1x1 and 2x2: trace/determinant closed form
    if (auto q = closed_form_rho(M)) {
        const int c = q->compare(Rat(1));
        if ((c > 0) != cert.greater_than_one || (c == 0) != cert.exactly_one) {
            throw std::logic_error("spectral certification mismatch with the closed form");
        }
    }

    if (cert.exactly_one) {
        cert.lo = cert.hi = Rat(1);
        return cert;
    }
    bool zero_spectrum = true;
    for (std::size_t k = 0; k + 1 < cp.size(); ++k) {
        if (!cp[k].is_zero()) zero_spectrum = false;
    }
    if (zero_spectrum) { // charpoly t^K: nilpotent, rho = 0 exactly
        cert.lo = cert.hi = Rat(0);
        return cert;
    }

    Rat lo = cert.greater_than_one ? Rat(1) : Rat(0);
    Rat hi = cert.greater_than_one ? upper : Rat(1);
    while (hi - lo > tol) {
        Rat mid = (lo + hi) / Rat(2);
        bool below;
        try {
            below = rho_less_than(M, mid);
        } catch (const std::overflow_error&) {
            cert.refined_to_tol = false; // enclosure stays certified, just wider
            break;
        }
        if (below) hi = mid;
        else lo = mid;
    }
    cert.lo = lo;
    cert.hi = hi;
    return cert;
}

} // namespace rotor
