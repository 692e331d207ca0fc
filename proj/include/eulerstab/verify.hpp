#pragma once

// Built-in verification: quick structural checks (seconds) and the full
// figure-level reproductions (minutes). Each check reports pass/fail with a
// short detail line; any failure is a verification failure at the CLI.

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "eulerstab/charpoly.hpp"
#include "eulerstab/density.hpp"
#include "eulerstab/ensemble.hpp"
#include "eulerstab/spectra.hpp"
#include "eulerstab/truncation.hpp"

namespace eulerstab {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

namespace verify_detail {

inline double char_poly_det(const Matrix& m, double x) {
    Matrix shifted = -m;
    shifted.diagonal().array() += x;
    return shifted.partialPivLu().determinant();
}

// Greedy nearest matching; (re, im) sorting is unstable under the
// rounding-level real parts of imaginary eigenvalues.
inline double spectrum_distance(const std::vector<std::complex<double>>& a,
                                std::vector<std::complex<double>> b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (const auto& z : a) {
        std::size_t best = b.size();
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < b.size(); ++j) {
            const double d = std::abs(b[j] - z);
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        worst = std::max(worst, best_d);
        b.erase(b.begin() + static_cast<std::ptrdiff_t>(best));
    }
    return worst;
}

inline CheckResult check(const std::string& name, bool ok, const std::string& detail = "") {
    return {name, ok, detail};
}

inline CheckResult wrap_congruence() {
    std::mt19937_64 rng(11);
    const Domain d(17);
    std::uniform_int_distribution<std::int64_t> u(-2000, 2000);
    for (int i = 0; i < 10000; ++i) {
        const LatticeVector k{u(rng), u(rng)};
        const LatticeVector w = wrap(k, d);
        const bool ok = d.contains(w) && (k.x - w.x) % d.modulus() == 0 &&
                        (k.y - w.y) % d.modulus() == 0 && wrap(w, d) == w;
        if (!ok) return check("wrap congruence/idempotence", false, "failed at " + to_string(k));
    }
    return check("wrap congruence/idempotence", true);
}

inline CheckResult rho_sign_criterion() {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<std::int64_t> pc(-4, 4), ac(-10, 10);
    int tried = 0;
    while (tried < 100) {
        const LatticeVector p{pc(rng), pc(rng)};
        if (p == LatticeVector{0, 0}) continue;
        const Domain d(10 + static_cast<std::int64_t>(tried % 7));
        const LatticeVector a{ac(rng), ac(rng)};
        if (!d.contains(a)) continue;
        const auto desc = enumerate_class(a, p, d, tried % 2 ? TruncationKind::zeitlin
                                                             : TruncationKind::galerkin);
        bool has_zero_mode = false;
        for (const auto& m : desc.modes) has_zero_mode |= (m == LatticeVector{0, 0});
        if (has_zero_mode) continue;
        ++tried;
        const auto rho = rho_list(desc);
        const std::int64_t p2 = norm_sq(p);
        for (std::size_t i = 0; i < rho.size(); ++i) {
            const bool interior = norm_sq(desc.modes[i]) < p2;
            if ((rho[i] < 0.0) != interior)
                return check("rho sign equals disc membership", false,
                             "mode " + to_string(desc.modes[i]) + " p " + to_string(p));
        }
    }
    return check("rho sign equals disc membership", true);
}

inline CheckResult recurrence_vs_determinant() {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0), arg(-3.0, 3.0);
    for (int rep = 0; rep < 20; ++rep) {
        const std::int64_t n = 3 + static_cast<std::int64_t>(rep % 5) * 2;
        CoefficientSequence seq;
        for (std::int64_t i = 0; i < n; ++i) seq.a.push_back(coeff(rng));
        seq.cyclic = true;
        Matrix m = Matrix::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            m(i, (i + 1) % n) += seq.a[static_cast<std::size_t>((i + 1) % n)];
            m(i, (i + n - 1) % n) -= seq.a[static_cast<std::size_t>((i + n - 1) % n)];
        }
        for (int k = 0; k < 5; ++k) {
            const double x = arg(rng);
            const double mine = a_eval(seq, x);
            const double det = char_poly_det(m, x);
            if (std::abs(mine - det) > 1e-10 * std::max(1.0, std::abs(det)))
                return check("cyclic recurrence matches determinant", false,
                             "n=" + std::to_string(n) + " x=" + std::to_string(x));
        }
    }
    return check("cyclic recurrence matches determinant", true);
}

inline CheckResult closed_forms_vs_finite_differences() {
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> coeff(0.2, 2.0);
    for (int rep = 0; rep < 25; ++rep) {
        const std::int64_t n = 3 + rep % 6;
        CoefficientSequence seq;
        for (std::int64_t i = 0; i < n; ++i) seq.a.push_back(coeff(rng) * (i == 0 ? -1.0 : 1.0));
        const double h = 1e-6;
        const double fd =
            (t_eval(seq, 0, n - 1, h) - t_eval(seq, 0, n - 1, -h)) / (2.0 * h);
        const double closed = dt_at_zero(seq, 0, n - 1);
        if (std::abs(fd - closed) > 1e-8 * std::max(1.0, std::abs(closed)))
            return check("derivative closed form matches finite differences", false,
                         "n=" + std::to_string(n));
        if (std::abs(t_eval(seq, 0, n - 1, 0.0) - t_at_zero(seq, 0, n - 1)) > 1e-12)
            return check("derivative closed form matches finite differences", false, "value at 0");
    }
    return check("derivative closed form matches finite differences", true);
}

inline CheckResult circulant_closed_form() {
    for (std::int64_t n = 3; n <= 31; n += 2) {
        const LatticeVector p{2, 1};
        std::vector<double> rho(static_cast<std::size_t>(n), 1.0 / static_cast<double>(norm_sq(p)));
        Matrix m = Matrix::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            m(i, (i + 1) % n) += rho[static_cast<std::size_t>((i + 1) % n)];
            m(i, (i + n - 1) % n) -= rho[static_cast<std::size_t>((i + n - 1) % n)];
        }
        if (spectrum_distance(eigenvalues(m), circulant_spectrum(n, p)) > 1e-10)
            return check("circulant spectrum closed form", false, "n=" + std::to_string(n));
    }
    return check("circulant spectrum closed form", true);
}

inline CheckResult block_diagonalization_small() {
    for (const TruncationKind kind : {TruncationKind::galerkin, TruncationKind::zeitlin}) {
        const LatticeVector p{1, 1};
        const Domain d(2);
        const double gamma = 1.0;
        auto full = eigenvalues(full_jacobian(p, gamma, d, kind));
        std::vector<std::complex<double>> merged;
        for (const auto& leader : canonical_leaders(p, d, kind)) {
            const auto desc = enumerate_class(leader, p, d, kind);
            const auto cs = analyze_class(desc, gamma);
            bool has_zero_mode = false;
            for (const auto& m : desc.modes) has_zero_mode |= (m == LatticeVector{0, 0});
            auto evs = cs.eigenvalues;
            if (has_zero_mode) evs.pop_back(); // the zero mode is not a variable of the full system
            merged.insert(merged.end(), evs.begin(), evs.end());
        }
        if (spectrum_distance(full, merged) > 1e-9)
            return check("class decomposition matches full operator", false, to_string(kind));
    }
    return check("class decomposition matches full operator", true);
}

inline CheckResult stable_disc_with_negative_control() {
    const LatticeVector p{3, 1};
    const Domain d(12);
    const auto desc = enumerate_class({1, 5}, p, d, TruncationKind::zeitlin);
    const auto rho = rho_list(desc);
    for (double r : rho)
        if (r < 0.0) return check("stable disc plus negative control", false, "fixture not stable");
    ClassMatrix cm = class_matrix(desc, 0.5);
    double max_re = 0.0;
    for (const auto& z : eigenvalues(cm.entries)) max_re = std::max(max_re, std::abs(z.real()));
    if (max_re > 1e-9 * cm.entries.norm())
        return check("stable disc plus negative control", false, "stable class has real part");

    // Negative control: flipping one rho sign must break the skew similarity
    // and the check harness must notice.
    ClassMatrix perturbed = cm;
    const Eigen::Index mid = static_cast<Eigen::Index>(cm.size() / 2);
    for (Eigen::Index i = 0; i < cm.entries.rows(); ++i) {
        perturbed.entries(i, mid) = -perturbed.entries(i, mid);
    }
    double max_re_perturbed = 0.0;
    for (const auto& z : eigenvalues(perturbed.entries))
        max_re_perturbed = std::max(max_re_perturbed, std::abs(z.real()));
    if (max_re_perturbed <= 1e-9 * perturbed.entries.norm())
        return check("stable disc plus negative control", false,
                     "perturbed fixture not detected as unstable");
    return check("stable disc plus negative control", true);
}

inline CheckResult partition_property() {
    std::mt19937_64 rng(15);
    std::uniform_int_distribution<std::int64_t> pc(-3, 3);
    int tried = 0;
    while (tried < 8) {
        const LatticeVector p{pc(rng), pc(rng)};
        if (p == LatticeVector{0, 0}) continue;
        ++tried;
        const Domain d(6);
        for (const TruncationKind kind : {TruncationKind::galerkin, TruncationKind::zeitlin}) {
            std::int64_t covered = 0;
            for (const auto& leader : canonical_leaders(p, d, kind))
                covered += enumerate_class(leader, p, d, kind).size();
            if (covered != d.point_count())
                return check("canonical classes partition the domain", false,
                             to_string(p) + " " + to_string(kind));
        }
    }
    return check("canonical classes partition the domain", true);
}

inline CheckResult fig3_ensemble() {
    EnsembleConfig cfg;
    cfg.p = {5, 3};
    cfg.gamma = 0.5;
    cfg.domain = Domain(200);
    cfg.kind = TruncationKind::zeitlin;
    cfg.fast = true;
    const EnsembleReport r = run_ensemble(cfg);
    std::ostringstream os;
    os << "interior=" << r.census.interior_points << " lens=" << r.census.lens_points
       << " nonimaginary=" << r.counts.nonimaginary << " real=" << r.counts.real
       << " complex=" << r.counts.complex_count;
    const bool ok = r.census.interior_points == 100 && r.census.lens_points == 24 &&
                    r.counts.nonimaginary == 200 && r.counts.real == 56 &&
                    r.counts.complex_count == 144;
    return check("p=(5,3) ensemble census and counts", ok, os.str());
}

inline CheckResult quadruplet_p11() {
    const Domain d(101);
    const auto desc = enumerate_class({0, 1}, {1, 1}, d, TruncationKind::zeitlin);
    const auto cs = analyze_class(desc, 1.0);
    double best_re = 0.0, best_im = 0.0, best = -1.0;
    for (const auto& z : cs.eigenvalues)
        if (z.real() > 0 && z.imag() > 0 && z.real() > best) {
            best = z.real();
            best_re = z.real();
            best_im = z.imag();
        }
    std::ostringstream os;
    os << "quadruplet " << best_re << " + " << best_im << "i";
    const bool ok = std::abs(best_re - 0.24822) < 5e-3 && std::abs(best_im - 0.35172) < 5e-3;
    return check("p=(1,1) complex quadruplet", ok, os.str());
}

inline CheckResult certificate_chain() {
    for (const std::int64_t n : {19, 39}) {
        const auto desc = enumerate_class({1, -2}, {3, 1}, Domain(n), TruncationKind::zeitlin);
        const auto cs = analyze_class(desc, 0.5);
        if (!cs.certificates) return check("lower-bound certificate chain", false, "no certificate");
        const auto lam = max_real_eigenvalue(cs.eigenvalues_unscaled);
        if (!lam || *lam <= cs.certificates->lambda_dagger)
            return check("lower-bound certificate chain", false, "eigenvalue below bound");
        if (std::abs(*lam - cs.certificates->bracketed_root) > 1e-8)
            return check("lower-bound certificate chain", false, "bisection disagrees with dense");
    }
    return check("lower-bound certificate chain", true);
}

} // namespace verify_detail

inline std::vector<CheckResult> run_verification(bool full) {
    using namespace verify_detail;
    std::vector<CheckResult> results;
    results.push_back(wrap_congruence());
    results.push_back(rho_sign_criterion());
    results.push_back(recurrence_vs_determinant());
    results.push_back(closed_forms_vs_finite_differences());
    results.push_back(circulant_closed_form());
    results.push_back(block_diagonalization_small());
    results.push_back(stable_disc_with_negative_control());
    results.push_back(partition_property());
    if (full) {
        results.push_back(fig3_ensemble());
        results.push_back(quadruplet_p11());
        results.push_back(certificate_chain());
    }
    return results;
}

} // namespace eulerstab
