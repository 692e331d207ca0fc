#pragma once

// Integer-lattice geometry for the truncated vorticity equations: the mode
// domain [-N,N]^2, modular wrapping, classes a + k*p, the unstable disc
// |x| < |p|, and the admissible grid sizes for the wrapped truncation.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "eulerstab/errors.hpp"

namespace eulerstab {

struct LatticeVector {
    std::int64_t x = 0;
    std::int64_t y = 0;

    friend bool operator==(const LatticeVector&, const LatticeVector&) = default;
    friend auto operator<=>(const LatticeVector&, const LatticeVector&) = default;

    LatticeVector operator+(const LatticeVector& o) const { return {x + o.x, y + o.y}; }
    LatticeVector operator-(const LatticeVector& o) const { return {x - o.x, y - o.y}; }
    LatticeVector operator-() const { return {-x, -y}; }
    LatticeVector operator*(std::int64_t s) const { return {x * s, y * s}; }
};

inline std::int64_t cross(const LatticeVector& u, const LatticeVector& v) {
    return u.x * v.y - u.y * v.x;
}

inline std::int64_t norm_sq(const LatticeVector& v) { return v.x * v.x + v.y * v.y; }

inline std::string to_string(const LatticeVector& v) {
    return "(" + std::to_string(v.x) + "," + std::to_string(v.y) + ")";
}

enum class TruncationKind { galerkin, zeitlin };

inline std::string to_string(TruncationKind kind) {
    return kind == TruncationKind::galerkin ? "galerkin" : "zeitlin";
}

// Mode domain D = [-N,N]^2 with grid spacing epsilon = 2*pi/(2N+1).
class Domain {
  public:
    explicit Domain(std::int64_t n_max) : n_max_(n_max) {
        if (n_max < 1 || n_max > 100000)
            throw std::invalid_argument("Domain: N must be in [1, 1e5], got " + std::to_string(n_max));
    }

    std::int64_t n_max() const { return n_max_; }
    std::int64_t modulus() const { return 2 * n_max_ + 1; }
    std::int64_t point_count() const { return modulus() * modulus(); }
    double epsilon() const { return 2.0 * std::numbers::pi / static_cast<double>(modulus()); }

    bool contains(const LatticeVector& v) const {
        return v.x >= -n_max_ && v.x <= n_max_ && v.y >= -n_max_ && v.y <= n_max_;
    }

    // Row-major index of a point of D, x major, in [-N,N] per component.
    std::size_t index(const LatticeVector& v) const {
        return static_cast<std::size_t>((v.x + n_max_) * modulus() + (v.y + n_max_));
    }

    friend bool operator==(const Domain&, const Domain&) = default;

  private:
    std::int64_t n_max_;
};

// Symmetric remainder: result in [-(m-1)/2, (m-1)/2] for odd m.
inline std::int64_t mod_symmetric(std::int64_t v, std::int64_t m) {
    std::int64_t r = v % m;
    const std::int64_t half = (m - 1) / 2;
    if (r > half) r -= m;
    if (r < -half) r += m;
    return r;
}

// Unique representative of k modulo (2N+1)*Z^2 inside D. Idempotent.
inline LatticeVector wrap(const LatticeVector& k, const Domain& domain) {
    const std::int64_t m = domain.modulus();
    return {mod_symmetric(k.x, m), mod_symmetric(k.y, m)};
}

// D_p = { x in Z^2 : |x| < |p| }, boundary excluded. Lexicographically sorted.
inline std::vector<LatticeVector> unstable_disc(const LatticeVector& p) {
    if (p == LatticeVector{0, 0}) throw std::invalid_argument("unstable_disc: p must be nonzero");
    const std::int64_t r2 = norm_sq(p);
    const std::int64_t r = static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<double>(r2)))) + 1;
    std::vector<LatticeVector> pts;
    for (std::int64_t x = -r; x <= r; ++x)
        for (std::int64_t y = -r; y <= r; ++y)
            if (x * x + y * y < r2) pts.push_back({x, y});
    return pts;
}

// rho = 1/|p|^2 - 1/|mode|^2. Negative exactly when the mode is interior to D_p.
inline double rho_value(const LatticeVector& mode, const LatticeVector& p) {
    if (p == LatticeVector{0, 0}) throw std::invalid_argument("rho_value: p must be nonzero");
    const std::int64_t m2 = norm_sq(mode);
    if (m2 == 0)
        throw DegenerateClassError("rho evaluated at the zero mode; alpha == 0 classes must be skipped");
    return 1.0 / static_cast<double>(norm_sq(p)) - 1.0 / static_cast<double>(m2);
}

// One decoupled subsystem of the linearisation: the ordered modes a + k*p
// (wrapped back into D for the sine-bracket truncation).
struct ClassDescriptor {
    LatticeVector leader;
    LatticeVector p;
    TruncationKind kind = TruncationKind::galerkin;
    Domain domain{1};
    std::vector<LatticeVector> modes;
    // galerkin only: modes run from leader - m1*p to leader + m2*p
    std::int64_t m1 = 0;
    std::int64_t m2 = 0;

    std::int64_t size() const { return static_cast<std::int64_t>(modes.size()); }
};

inline ClassDescriptor enumerate_class(const LatticeVector& a, const LatticeVector& p,
                                       const Domain& domain, TruncationKind kind) {
    if (p == LatticeVector{0, 0}) throw std::invalid_argument("enumerate_class: p must be nonzero");
    if (!domain.contains(a))
        throw std::invalid_argument("enumerate_class: leader " + to_string(a) + " outside the domain");

    ClassDescriptor desc{a, p, kind, domain, {}, 0, 0};
    if (kind == TruncationKind::galerkin) {
        while (domain.contains(a - p * (desc.m1 + 1))) ++desc.m1;
        while (domain.contains(a + p * (desc.m2 + 1))) ++desc.m2;
        desc.modes.reserve(static_cast<std::size_t>(desc.m1 + desc.m2 + 1));
        for (std::int64_t k = -desc.m1; k <= desc.m2; ++k) desc.modes.push_back(a + p * k);
    } else {
        LatticeVector cur = a;
        do {
            desc.modes.push_back(cur);
            cur = wrap(cur + p, domain);
        } while (cur != a);
        const std::int64_t kappa = std::gcd(std::abs(p.x), std::abs(p.y));
        const std::int64_t expected = domain.modulus() / std::gcd(domain.modulus(), kappa);
        if (desc.size() != expected)
            throw std::logic_error("enumerate_class: wrapped orbit size " + std::to_string(desc.size()) +
                                   " != " + std::to_string(expected));
    }
    return desc;
}

inline double rho(const LatticeVector& a, std::int64_t k, const LatticeVector& p,
                  const Domain& domain, TruncationKind kind) {
    const LatticeVector raw = a + p * k;
    return rho_value(kind == TruncationKind::zeitlin ? wrap(raw, domain) : raw, p);
}

inline std::vector<double> rho_list(const ClassDescriptor& desc) {
    std::vector<double> out;
    out.reserve(desc.modes.size());
    for (const auto& m : desc.modes) out.push_back(rho_value(m, desc.p));
    return out;
}

// Class prefactor: Gamma * (a x p) for the plain truncation, the sine-deformed
// analogue for the wrapped one. Exactly zero when the cross product vanishes
// (mod 2N+1 in the wrapped case), so zero classes are detectable by ==.
inline double alpha_coefficient(const LatticeVector& a, const LatticeVector& p, double gamma,
                                const Domain& domain, TruncationKind kind) {
    const std::int64_t c = cross(a, p);
    if (kind == TruncationKind::galerkin) {
        return c == 0 ? 0.0 : gamma * static_cast<double>(c);
    }
    const std::int64_t r = mod_symmetric(c, domain.modulus());
    if (r == 0) return 0.0;
    const double eps = domain.epsilon();
    return gamma * std::sin(eps * static_cast<double>(r)) / eps;
}

// One leader per class such that the enumerated classes partition D.
// First-seen representative in a lexicographic sweep of D.
inline std::vector<LatticeVector> canonical_leaders(const LatticeVector& p, const Domain& domain,
                                                    TruncationKind kind) {
    if (p == LatticeVector{0, 0}) throw std::invalid_argument("canonical_leaders: p must be nonzero");
    std::vector<char> visited(static_cast<std::size_t>(domain.point_count()), 0);
    std::vector<LatticeVector> leaders;
    for (std::int64_t x = -domain.n_max(); x <= domain.n_max(); ++x) {
        for (std::int64_t y = -domain.n_max(); y <= domain.n_max(); ++y) {
            const LatticeVector v{x, y};
            if (visited[domain.index(v)]) continue;
            const ClassDescriptor desc = enumerate_class(v, p, domain, kind);
            for (const auto& m : desc.modes) visited[domain.index(m)] = 1;
            leaders.push_back(v);
        }
    }
    return leaders;
}

// Grid size N = ((2*n_tilde+1)*kappa - 1)/2. Above the threshold
// n_tilde > (2|p|^2 - kappa)/(2 kappa), equivalently N >= |p|^2, no two
// non-consecutive modes of a wrapped class can lie inside the unstable disc.
inline std::int64_t admissible_n(const LatticeVector& p, std::int64_t n_tilde) {
    if (p == LatticeVector{0, 0}) throw std::invalid_argument("admissible_n: p must be nonzero");
    if (n_tilde < 1) throw std::invalid_argument("admissible_n: n_tilde must be positive");
    const std::int64_t kappa = std::gcd(std::abs(p.x), std::abs(p.y));
    if (kappa % 2 == 0)
        throw std::invalid_argument("admissible_n: no admissible N exists for even gcd(p1,p2)");
    return ((2 * n_tilde + 1) * kappa - 1) / 2;
}

// True when a domain size is one of the admissible values for p.
inline bool is_admissible_n(const LatticeVector& p, std::int64_t n) {
    if (p == LatticeVector{0, 0}) return false;
    const std::int64_t kappa = std::gcd(std::abs(p.x), std::abs(p.y));
    if (kappa % 2 == 0) return false;
    if ((2 * n + 1) % kappa != 0) return false;
    return n >= norm_sq(p); // N > (2|p|^2 - 1)/2 for integer N
}

} // namespace eulerstab
