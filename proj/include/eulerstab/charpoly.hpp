#pragma once

// Exact-recurrence evaluation of the characteristic polynomials of the
// tridiagonal class blocks and their cyclic counterpart, plus the analytic
// lower-bound certificate and certified root bracketing.
//
// Values are tracked as (mantissa, base-2 exponent) pairs: the recurrences
// underflow/overflow doubles long before n ~ 3000, and only signs and root
// locations are needed by the certificates.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "eulerstab/errors.hpp"
#include "eulerstab/lattice.hpp"

namespace eulerstab {

struct ScaledReal {
    double m = 0.0;        // mantissa in [0.5, 1) by magnitude; 0 for zero
    std::int64_t e2 = 0;   // value = m * 2^e2

    static ScaledReal of(double v) {
        ScaledReal s;
        if (v != 0.0) {
            int ex = 0;
            s.m = std::frexp(v, &ex);
            s.e2 = ex;
        }
        return s;
    }

    int sign() const { return (m > 0.0) - (m < 0.0); }
    bool is_zero() const { return m == 0.0; }

    // Saturates to +-inf / 0 outside double range.
    double value() const {
        const std::int64_t e = std::clamp<std::int64_t>(e2, -2200, 2200);
        return std::ldexp(m, static_cast<int>(e));
    }
};

inline ScaledReal operator*(const ScaledReal& a, const ScaledReal& b) {
    if (a.is_zero() || b.is_zero()) return {};
    ScaledReal r;
    int ex = 0;
    r.m = std::frexp(a.m * b.m, &ex);
    r.e2 = a.e2 + b.e2 + ex;
    return r;
}

inline ScaledReal operator+(const ScaledReal& a, const ScaledReal& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.e2 - b.e2 > 80) return a;
    if (b.e2 - a.e2 > 80) return b;
    const std::int64_t e0 = std::max(a.e2, b.e2);
    const double s = std::ldexp(a.m, static_cast<int>(a.e2 - e0)) +
                     std::ldexp(b.m, static_cast<int>(b.e2 - e0));
    if (s == 0.0) return {};
    ScaledReal r;
    int ex = 0;
    r.m = std::frexp(s, &ex);
    r.e2 = e0 + ex;
    return r;
}

// General coefficient set (a_0, ..., a_{n-1}); cyclic sequences come from
// wrapped classes and then have odd length.
struct CoefficientSequence {
    std::vector<double> a;
    bool cyclic = false;

    std::int64_t size() const { return static_cast<std::int64_t>(a.size()); }
};

namespace detail {
inline void check_range(const CoefficientSequence& seq, std::int64_t alpha, std::int64_t beta) {
    if (alpha < 0 || beta < alpha || beta >= seq.size())
        throw std::invalid_argument("charpoly: index range must satisfy 0 <= alpha <= beta <= n-1");
}
} // namespace detail

// det(xI - T) for the tridiagonal block with superdiagonal a_{alpha+1}..a_beta
// and subdiagonal -a_alpha..-a_{beta-1}, by the three-term recurrence
// D_j = x D_{j-1} + a a' D_{j-2} with D_0 = 1, D_1 = x (size 1 block is (0)).
inline ScaledReal t_eval_scaled(const CoefficientSequence& seq, std::int64_t alpha,
                                std::int64_t beta, double x) {
    detail::check_range(seq, alpha, beta);
    const ScaledReal xs = ScaledReal::of(x);
    ScaledReal prev2 = ScaledReal::of(1.0); // size 0
    ScaledReal prev = xs;                   // size 1
    for (std::int64_t j = 2; j <= beta - alpha + 1; ++j) {
        const double w = seq.a[static_cast<std::size_t>(alpha + j - 1)] *
                         seq.a[static_cast<std::size_t>(alpha + j - 2)];
        const ScaledReal cur = xs * prev + ScaledReal::of(w) * prev2;
        prev2 = prev;
        prev = cur;
    }
    return prev;
}

inline double t_eval(const CoefficientSequence& seq, std::int64_t alpha, std::int64_t beta, double x) {
    return t_eval_scaled(seq, alpha, beta, x).value();
}

// Same polynomial evaluated by expansion from the other corner; used to
// cross-check the recurrence direction.
inline ScaledReal t_eval_scaled_reverse(const CoefficientSequence& seq, std::int64_t alpha,
                                        std::int64_t beta, double x) {
    detail::check_range(seq, alpha, beta);
    const ScaledReal xs = ScaledReal::of(x);
    ScaledReal prev2 = ScaledReal::of(1.0);
    ScaledReal prev = xs;
    for (std::int64_t j = 2; j <= beta - alpha + 1; ++j) {
        const double w = seq.a[static_cast<std::size_t>(beta - j + 1)] *
                         seq.a[static_cast<std::size_t>(beta - j + 2)];
        const ScaledReal cur = xs * prev + ScaledReal::of(w) * prev2;
        prev2 = prev;
        prev = cur;
    }
    return prev;
}

// Closed form of the constant term: prod a_k when beta-alpha is odd, else 0.
inline ScaledReal t_at_zero_scaled(const CoefficientSequence& seq, std::int64_t alpha, std::int64_t beta) {
    detail::check_range(seq, alpha, beta);
    if ((beta - alpha) % 2 == 0) return {};
    ScaledReal prod = ScaledReal::of(1.0);
    for (std::int64_t k = alpha; k <= beta; ++k) prod = prod * ScaledReal::of(seq.a[static_cast<std::size_t>(k)]);
    return prod;
}

inline double t_at_zero(const CoefficientSequence& seq, std::int64_t alpha, std::int64_t beta) {
    return t_at_zero_scaled(seq, alpha, beta).value();
}

// Closed form of the derivative at zero: 0 when beta-alpha is odd, else the
// sum over even offsets of the products skipping one entry.
inline ScaledReal dt_at_zero_scaled(const CoefficientSequence& seq, std::int64_t alpha, std::int64_t beta) {
    detail::check_range(seq, alpha, beta);
    if ((beta - alpha) % 2 == 1) return {};
    const std::int64_t n = beta - alpha + 1;
    std::vector<ScaledReal> pre(static_cast<std::size_t>(n) + 1), suf(static_cast<std::size_t>(n) + 1);
    pre[0] = ScaledReal::of(1.0);
    for (std::int64_t i = 0; i < n; ++i)
        pre[static_cast<std::size_t>(i + 1)] =
            pre[static_cast<std::size_t>(i)] * ScaledReal::of(seq.a[static_cast<std::size_t>(alpha + i)]);
    suf[static_cast<std::size_t>(n)] = ScaledReal::of(1.0);
    for (std::int64_t i = n - 1; i >= 0; --i)
        suf[static_cast<std::size_t>(i)] =
            suf[static_cast<std::size_t>(i + 1)] * ScaledReal::of(seq.a[static_cast<std::size_t>(alpha + i)]);
    ScaledReal sum;
    for (std::int64_t skip = 0; skip < n; skip += 2)
        sum = sum + pre[static_cast<std::size_t>(skip)] * suf[static_cast<std::size_t>(skip + 1)];
    return sum;
}

inline double dt_at_zero(const CoefficientSequence& seq, std::int64_t alpha, std::int64_t beta) {
    return dt_at_zero_scaled(seq, alpha, beta).value();
}

// det(xI - A') for the cyclic matrix (tridiagonal plus corner entries),
// expanded by minors along the last row: T_0^{n-1} + a_0 a_{n-1} T_1^{n-2}.
inline ScaledReal a_eval_scaled(const CoefficientSequence& seq, double x) {
    if (!seq.cyclic) throw std::invalid_argument("a_eval: sequence must be cyclic");
    const std::int64_t n = seq.size();
    if (n < 3 || n % 2 == 0) throw std::invalid_argument("a_eval: cyclic length must be odd and >= 3");
    const ScaledReal corner = ScaledReal::of(seq.a.front() * seq.a.back());
    return t_eval_scaled(seq, 0, n - 1, x) + corner * t_eval_scaled(seq, 1, n - 2, x);
}

inline double a_eval(const CoefficientSequence& seq, double x) {
    return a_eval_scaled(seq, x).value();
}

// Linear coefficient of the cyclic characteristic polynomial:
// sum_k prod_{j != k} a_j (the (n-1)-st elementary symmetric polynomial).
inline ScaledReal a_derivative_at_zero(const CoefficientSequence& seq) {
    if (!seq.cyclic) throw std::invalid_argument("a_derivative_at_zero: sequence must be cyclic");
    const std::int64_t n = seq.size();
    std::vector<ScaledReal> pre(static_cast<std::size_t>(n) + 1), suf(static_cast<std::size_t>(n) + 1);
    pre[0] = ScaledReal::of(1.0);
    for (std::int64_t i = 0; i < n; ++i)
        pre[static_cast<std::size_t>(i + 1)] =
            pre[static_cast<std::size_t>(i)] * ScaledReal::of(seq.a[static_cast<std::size_t>(i)]);
    suf[static_cast<std::size_t>(n)] = ScaledReal::of(1.0);
    for (std::int64_t i = n - 1; i >= 0; --i)
        suf[static_cast<std::size_t>(i)] =
            suf[static_cast<std::size_t>(i + 1)] * ScaledReal::of(seq.a[static_cast<std::size_t>(i)]);
    ScaledReal sum;
    for (std::int64_t k = 0; k < n; ++k)
        sum = sum + pre[static_cast<std::size_t>(k)] * suf[static_cast<std::size_t>(k + 1)];
    return sum;
}

enum class BoundSide { front, back };

// lambda-dagger = sqrt(-rho_1 (rho_0 + rho_2)) (front) or the mirrored
// sqrt(-rho_{n-1} (rho_0 + rho_{n-2})) (back), on a rho sequence rooted so
// that index 0 is the disc mode. Absent unless strictly positive.
inline std::optional<double> lower_bound_lambda(const std::vector<double>& rho_rooted, BoundSide side) {
    const std::size_t n = rho_rooted.size();
    if (n < 3) return std::nullopt;
    const double radicand = side == BoundSide::front
                                ? -rho_rooted[1] * (rho_rooted[0] + rho_rooted[2])
                                : -rho_rooted[n - 1] * (rho_rooted[0] + rho_rooted[n - 2]);
    if (!(radicand > 0.0)) return std::nullopt;
    return std::sqrt(radicand);
}

// The larger of the two one-sided bounds, when any is valid.
inline std::optional<double> best_lower_bound(const std::vector<double>& rho_rooted) {
    const auto f = lower_bound_lambda(rho_rooted, BoundSide::front);
    const auto b = lower_bound_lambda(rho_rooted, BoundSide::back);
    if (f && b) return std::max(*f, *b);
    return f ? f : b;
}

namespace detail {

// Index of the unique negative entry; the certificates require exactly one.
inline std::size_t disc_index(const std::vector<double>& rho) {
    std::size_t idx = rho.size();
    std::size_t negatives = 0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        if (rho[i] < 0.0) {
            idx = i;
            ++negatives;
        }
    }
    if (negatives != 1)
        throw std::invalid_argument("charpoly certificate: rho must have exactly one negative entry");
    return idx;
}

inline std::vector<double> rooted(const std::vector<double>& rho, std::size_t disc) {
    std::vector<double> out(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) out[i] = rho[(disc + i) % rho.size()];
    return out;
}

} // namespace detail

// Characteristic polynomial of the class matrix built from rho in its natural
// order: the open tridiagonal chain for the plain truncation, the cyclic
// matrix for the wrapped one.
inline ScaledReal class_char_eval(const std::vector<double>& rho, TruncationKind kind, double x) {
    if (kind == TruncationKind::galerkin) {
        CoefficientSequence seq{rho, false};
        return t_eval_scaled(seq, 0, seq.size() - 1, x);
    }
    CoefficientSequence seq{rho, true};
    return a_eval_scaled(seq, x);
}

// The lower-bound lemmas: the characteristic polynomial is strictly negative
// at lambda-dagger, so a real eigenvalue above the bound exists.
inline bool certify_negative_at_bound(const std::vector<double>& rho, TruncationKind kind) {
    const std::size_t disc = detail::disc_index(rho);
    const auto bound = best_lower_bound(detail::rooted(rho, disc));
    if (!bound) throw std::invalid_argument("certify_negative_at_bound: no valid lambda-dagger");
    return class_char_eval(rho, kind, *bound).sign() < 0;
}

struct RootBracket {
    double lo = 0.0;
    double hi = 0.0;
    double root = 0.0;
};

// Bisection on the sign of the characteristic polynomial, starting from the
// certified-negative lambda-dagger and doubling (capped at the Gershgorin
// radius, beyond which no real root exists) until the sign turns.
inline RootBracket bracket_real_root(const std::vector<double>& rho, TruncationKind kind) {
    const std::size_t n = rho.size();
    const std::size_t disc = detail::disc_index(rho);
    const auto bound = best_lower_bound(detail::rooted(rho, disc));
    if (!bound) throw std::invalid_argument("bracket_real_root: no valid lambda-dagger");

    const auto sign_at = [&](double x) { return class_char_eval(rho, kind, x).sign(); };
    if (sign_at(*bound) >= 0)
        throw NumericalError("bracket_real_root: polynomial not negative at lambda-dagger");

    double gershgorin = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        if (kind == TruncationKind::zeitlin) {
            row = std::abs(rho[(i + n - 1) % n]) + std::abs(rho[(i + 1) % n]);
        } else {
            if (i > 0) row += std::abs(rho[i - 1]);
            if (i + 1 < n) row += std::abs(rho[i + 1]);
        }
        gershgorin = std::max(gershgorin, row);
    }

    double lo = *bound;
    double hi = lo;
    for (int iter = 0;; ++iter) {
        hi = std::min(hi * 2.0, gershgorin);
        if (sign_at(hi) >= 0) break;
        if (hi >= gershgorin || iter > 64)
            throw NumericalError("bracket_real_root: no sign change up to the Gershgorin radius");
    }

    const double initial_hi = hi;
    for (int iter = 0; hi - lo > 1e-12 && iter < 256; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (sign_at(mid) < 0)
            lo = mid;
        else
            hi = mid;
    }
    return {*bound, initial_hi, 0.5 * (lo + hi)};
}

} // namespace eulerstab
