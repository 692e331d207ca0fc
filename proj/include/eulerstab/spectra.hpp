#pragma once

// Per-class spectra: dense eigenvalues, their classification into zero /
// imaginary / real pairs / complex quadruplets, the stability-case taxonomy
// driven by the rho sign pattern, the reality predicates behind the analytic
// lower bound, and the eigenvector decay analysis.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "eulerstab/charpoly.hpp"
#include "eulerstab/eig.hpp"
#include "eulerstab/errors.hpp"
#include "eulerstab/lattice.hpp"
#include "eulerstab/truncation.hpp"

namespace eulerstab {

enum class StabilityCase { zero_alpha, stable, case_i, case_ii, case_iii };

inline std::string to_string(StabilityCase c) {
    switch (c) {
        case StabilityCase::zero_alpha: return "zero_alpha";
        case StabilityCase::stable: return "stable";
        case StabilityCase::case_i: return "case_i";
        case StabilityCase::case_ii: return "case_ii";
        default: return "case_iii";
    }
}

struct Classification {
    std::int64_t zero = 0;
    std::int64_t imaginary = 0;
    std::int64_t real_pairs = 0;
    std::int64_t quadruplets = 0;

    std::int64_t total() const { return zero + imaginary + 2 * real_pairs + 4 * quadruplets; }
    std::int64_t nonimaginary() const { return 2 * real_pairs + 4 * quadruplets; }
    friend bool operator==(const Classification&, const Classification&) = default;
};

// Labels against threshold tol_rel * scale, then groups reals into +- pairs
// and complex eigenvalues into (+-, conj) quadruplets. Grouping failure means
// eigensolver trouble or a wrong tolerance and is an error, never silent.
inline Classification classify(const std::vector<std::complex<double>>& spectrum, double scale,
                               double tol_rel = 1e-8) {
    if (scale <= 0.0)
        for (const auto& z : spectrum) scale = std::max(scale, std::abs(z));
    const double tol = std::max(tol_rel * scale, 1e-300);

    Classification counts;
    std::vector<double> reals;
    std::vector<std::complex<double>> complexes;
    for (const auto& z : spectrum) {
        if (std::abs(z) <= tol)
            ++counts.zero;
        else if (std::abs(z.real()) <= tol)
            ++counts.imaginary;
        else if (std::abs(z.imag()) <= tol)
            reals.push_back(z.real());
        else
            complexes.push_back(z);
    }

    // +- pairing of the reals.
    std::vector<double> pos, neg;
    for (double r : reals) (r > 0 ? pos : neg).push_back(std::abs(r));
    std::sort(pos.begin(), pos.end());
    std::sort(neg.begin(), neg.end());
    if (pos.size() != neg.size())
        throw NumericalError("classify: real eigenvalues do not pair under negation");
    for (std::size_t i = 0; i < pos.size(); ++i)
        if (std::abs(pos[i] - neg[i]) > 2.0 * tol)
            throw NumericalError("classify: unpaired real eigenvalue beyond tolerance");
    counts.real_pairs = static_cast<std::int64_t>(pos.size());

    // Quadruplet grouping: match each first-quadrant member with its orbit
    // under conjugation and negation, nearest first.
    std::vector<std::complex<double>> firsts, rest;
    for (const auto& z : complexes) (z.real() > 0 && z.imag() > 0 ? firsts : rest).push_back(z);
    std::sort(firsts.begin(), firsts.end(), [](const auto& l, const auto& r) {
        return l.real() != r.real() ? l.real() < r.real() : l.imag() < r.imag();
    });
    for (const auto& z : firsts) {
        for (const std::complex<double> want :
             {std::conj(z), -z, -std::conj(z)}) {
            auto best = rest.end();
            double best_d = 2.0 * tol;
            for (auto it = rest.begin(); it != rest.end(); ++it) {
                const double d = std::abs(*it - want);
                if (d <= best_d) {
                    best_d = d;
                    best = it;
                }
            }
            if (best == rest.end())
                throw NumericalError("classify: complex eigenvalue quadruplet incomplete");
            rest.erase(best);
        }
        ++counts.quadruplets;
    }
    if (!rest.empty()) throw NumericalError("classify: leftover complex eigenvalues after grouping");
    return counts;
}

// Case taxonomy from the rho sign pattern: no disc modes (stable), one
// (case i), two consecutive (case ii), non-consecutive (case iii; a wrap
// artifact that cannot occur without wrapping).
inline StabilityCase stability_case(const ClassDescriptor& desc, const std::vector<double>& rho,
                                    double alpha) {
    if (alpha == 0.0) return StabilityCase::zero_alpha;
    std::vector<std::size_t> negatives;
    for (std::size_t i = 0; i < rho.size(); ++i)
        if (rho[i] < 0.0) negatives.push_back(i);
    if (negatives.empty()) return StabilityCase::stable;
    if (negatives.size() == 1) return StabilityCase::case_i;
    const std::size_t n = rho.size();
    if (negatives.size() == 2) {
        const std::size_t gap = negatives[1] - negatives[0];
        const bool consecutive = gap == 1 || (desc.kind == TruncationKind::zeitlin && gap == n - 1);
        if (consecutive) return StabilityCase::case_ii;
    }
    if (desc.kind == TruncationKind::galerkin)
        throw std::logic_error("stability_case: non-consecutive disc modes in an unwrapped class");
    return StabilityCase::case_iii;
}

namespace detail {
// Untruncated rho along the line a + k p; -inf marks the zero mode.
inline double rho_unbounded(const LatticeVector& mode, const LatticeVector& p) {
    const std::int64_t m2 = norm_sq(mode);
    if (m2 == 0) return -std::numeric_limits<double>::infinity();
    return 1.0 / static_cast<double>(norm_sq(p)) - 1.0 / static_cast<double>(m2);
}
} // namespace detail

// a sits in the lens: inside the disc with both neighbours not interior
// (boundary points count as outside).
inline bool lens_condition(const LatticeVector& a, const LatticeVector& p) {
    if (p == LatticeVector{0, 0}) throw std::invalid_argument("lens_condition: p must be nonzero");
    return detail::rho_unbounded(a, p) < 0.0 && detail::rho_unbounded(a + p, p) >= 0.0 &&
           detail::rho_unbounded(a - p, p) >= 0.0;
}

// Reality of lambda-dagger in the untruncated rho formula: strict lens
// membership together with rho_0 + rho_2 < 0 on at least one side.
inline bool reality_condition(const LatticeVector& a, const LatticeVector& p) {
    if (p == LatticeVector{0, 0}) throw std::invalid_argument("reality_condition: p must be nonzero");
    const double r0 = detail::rho_unbounded(a, p);
    if (!(r0 < 0.0) || !(detail::rho_unbounded(a + p, p) > 0.0) ||
        !(detail::rho_unbounded(a - p, p) > 0.0))
        return false;
    return r0 + detail::rho_unbounded(a + p * 2, p) < 0.0 ||
           r0 + detail::rho_unbounded(a - p * 2, p) < 0.0;
}

// Sufficient geometric version: |a| < (sqrt(3)-1)|p| with |a +- p| > |p|.
inline bool reality_sufficient(const LatticeVector& a, const LatticeVector& p) {
    if (p == LatticeVector{0, 0}) throw std::invalid_argument("reality_sufficient: p must be nonzero");
    const double ratio = std::sqrt(static_cast<double>(norm_sq(a)) / static_cast<double>(norm_sq(p)));
    return ratio < std::sqrt(3.0) - 1.0 && norm_sq(a + p) > norm_sq(p) && norm_sq(a - p) > norm_sq(p);
}

// First lattice point of the open disc satisfying the reality condition.
// Absent exactly for the small exceptional p.
inline std::optional<LatticeVector> find_case_i_leader(const LatticeVector& p) {
    if (p == LatticeVector{0, 0}) throw std::invalid_argument("find_case_i_leader: p must be nonzero");
    for (const auto& a : unstable_disc(p)) {
        if (a == LatticeVector{0, 0}) continue;
        if (reality_condition(a, p)) return a;
    }
    return std::nullopt;
}

struct Certificates {
    double lambda_dagger = 0.0;         // bound for the unscaled class matrix A
    double bracketed_root = 0.0;        // bisection root of the characteristic polynomial
    double lambda_dagger_scaled = 0.0;  // bound * |alpha|
    double bracketed_root_scaled = 0.0; // root * |alpha|
};

struct ClassSpectrum {
    ClassDescriptor descriptor;
    double gamma = 0.0;
    double alpha = 0.0;
    StabilityCase stability = StabilityCase::zero_alpha;
    std::vector<std::complex<double>> eigenvalues;          // of alpha * A
    std::vector<std::complex<double>> eigenvalues_unscaled; // of A (empty when alpha == 0)
    Classification classification;
    std::optional<Certificates> certificates;
};

// Largest real eigenvalue (threshold tol on |Im|), if any.
inline std::optional<double> max_real_eigenvalue(const std::vector<std::complex<double>>& spectrum,
                                                 double tol_rel = 1e-8) {
    double radius = 0.0;
    for (const auto& z : spectrum) radius = std::max(radius, std::abs(z));
    const double tol = std::max(tol_rel * radius, 1e-300);
    std::optional<double> best;
    for (const auto& z : spectrum)
        if (std::abs(z.imag()) <= tol && z.real() > tol && (!best || z.real() > *best)) best = z.real();
    return best;
}

// Full per-class analysis: eigenvalues of alpha A, classification, and for
// case (i) with a valid lambda-dagger the certified bound and bracketed root.
inline ClassSpectrum analyze_class(const ClassDescriptor& desc, double gamma, double tol_rel = 1e-8) {
    ClassSpectrum out;
    out.descriptor = desc;
    out.gamma = gamma;
    out.alpha = alpha_coefficient(desc.leader, desc.p, gamma, desc.domain, desc.kind);

    if (out.alpha == 0.0) {
        out.stability = StabilityCase::zero_alpha;
        out.eigenvalues.assign(static_cast<std::size_t>(desc.size()), {0.0, 0.0});
        out.classification.zero = desc.size();
        return out;
    }

    const ClassMatrix cm = class_matrix(desc, gamma);
    out.stability = stability_case(desc, cm.rho, out.alpha);
    out.eigenvalues_unscaled = eigenvalues(cm.entries);
    out.eigenvalues = out.eigenvalues_unscaled;
    for (auto& z : out.eigenvalues) z *= out.alpha;

    double radius = 0.0;
    for (const auto& z : out.eigenvalues) radius = std::max(radius, std::abs(z));
    out.classification = classify(out.eigenvalues, radius, tol_rel);

    if (out.stability == StabilityCase::case_i) {
        const std::size_t disc =
            static_cast<std::size_t>(std::min_element(cm.rho.begin(), cm.rho.end()) - cm.rho.begin());
        std::vector<double> rooted(cm.rho.size());
        for (std::size_t i = 0; i < cm.rho.size(); ++i) rooted[i] = cm.rho[(disc + i) % cm.rho.size()];
        if (const auto bound = best_lower_bound(rooted)) {
            if (!certify_negative_at_bound(cm.rho, desc.kind))
                throw NumericalError("analyze_class: certificate polynomial not negative at the bound");
            const RootBracket bracket = bracket_real_root(cm.rho, desc.kind);
            const auto lam = max_real_eigenvalue(out.eigenvalues_unscaled, tol_rel);
            if (!lam || *lam < *bound - 1e-9)
                throw NumericalError("analyze_class: dense real eigenvalue below the certified bound");
            out.certificates = Certificates{*bound, bracket.root, *bound * std::abs(out.alpha),
                                            bracket.root * std::abs(out.alpha)};
        }
    }
    return out;
}

struct DecayAnalysis {
    double lambda = 0.0;
    double mu1 = 0.0; // |mu1| < 1
    double mu2 = 0.0; // mu1 * mu2 = -1
    double tail_ratio_error = 0.0;
    double hamiltonian_residual = 0.0;
};

// Decay of the eigenvector of a real eigenvalue: consecutive ratios on the
// decaying tail against the root mu1 of mu^2 - lambda |p|^2 mu - 1 = 0, and
// the invariant H(v) = sum rho_k v_k^2 = 0.
//
// The measurement window sits a quarter turn after the disc mode: past the
// transient where rho has not settled, before the antipodal meeting point of
// the two decaying branches (and, for the wrapped classes, away from the
// array seam appearing there).
inline DecayAnalysis eigenvector_decay(const ClassMatrix& cm, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("eigenvector_decay: lambda must be a positive real eigenvalue");
    const std::int64_t n = cm.size();
    if (n < 41) throw std::invalid_argument("eigenvector_decay: class too small for tail asymptotics");

    const Eigen::VectorXd v = real_eigenvector(cm.entries, lambda); // unit norm

    DecayAnalysis out;
    out.lambda = lambda;
    const double lp2 = lambda * static_cast<double>(norm_sq(cm.descriptor.p));
    out.mu2 = 0.5 * (lp2 + std::sqrt(lp2 * lp2 + 4.0));
    out.mu1 = -1.0 / out.mu2;

    double h = 0.0;
    for (std::int64_t i = 0; i < n; ++i)
        h += cm.rho[static_cast<std::size_t>(i)] * v(static_cast<Eigen::Index>(i)) * v(static_cast<Eigen::Index>(i));
    out.hamiltonian_residual = std::abs(h); // v has unit norm

    const std::int64_t disc =
        std::min_element(cm.rho.begin(), cm.rho.end()) - cm.rho.begin();
    const bool cyclic = cm.descriptor.kind == TruncationKind::zeitlin;
    const std::int64_t run = cyclic ? n : n - 1 - disc;
    if (run < 16)
        throw std::invalid_argument("eigenvector_decay: disc mode too close to the chain end");
    const std::int64_t lo = run / 8, hi = 3 * run / 8;

    double worst = 0.0;
    for (std::int64_t off = lo; off < hi; ++off) {
        const std::int64_t i = cyclic ? (disc + off) % n : disc + off;
        const std::int64_t j = cyclic ? (i + 1) % n : i + 1;
        if (j >= n) break;
        const double denom = std::abs(v(static_cast<Eigen::Index>(i)));
        if (denom < 1e-280) continue;
        const double ratio = std::abs(v(static_cast<Eigen::Index>(j))) / denom;
        worst = std::max(worst, std::abs(ratio - std::abs(out.mu1)) / std::abs(out.mu1));
    }
    out.tail_ratio_error = worst;
    return out;
}

} // namespace eulerstab
