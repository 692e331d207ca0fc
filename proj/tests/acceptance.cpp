// Acceptance suite: one check per shipped claim, each printed as a single
// PASS/FAIL line with its measured quantities. Exit status is the number of
// failed checks.

#include <chrono>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "eulerstab/charpoly.hpp"
#include "eulerstab/density.hpp"
#include "eulerstab/ensemble.hpp"
#include "eulerstab/spectra.hpp"
#include "eulerstab/truncation.hpp"

using namespace eulerstab;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail, double seconds) {
    std::printf("%s  criterion %d: %s  [%s]  (%.1fs)\n", ok ? "PASS" : "FAIL", id, name.c_str(),
                detail.c_str(), seconds);
    std::fflush(stdout);
    if (!ok) ++failures;
}

void run(int id, const std::string& name, const std::function<bool(std::string&)>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(id, name, ok, detail, secs);
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// Greedy nearest matching of two spectra; stable against rounding-level real
// parts that shuffle a plain (re, im) sort.
double spectrum_distance(const std::vector<std::complex<double>>& a,
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

double lu_char_poly(const Matrix& m, double x) {
    Matrix shifted = -m;
    shifted.diagonal().array() += x;
    return shifted.partialPivLu().determinant();
}

// ---------------------------------------------------------------------------

bool ensemble_census(std::string& detail) {
    EnsembleConfig cfg;
    cfg.p = {5, 3};
    cfg.gamma = 0.5;
    cfg.domain = Domain(200);
    cfg.kind = TruncationKind::zeitlin;
    cfg.fast = true;
    const EnsembleReport r = run_ensemble(cfg);
    std::ostringstream os;
    os << "interior=" << r.census.interior_points << " nonimaginary=" << r.counts.nonimaginary
       << " real=" << r.counts.real << " complex=" << r.counts.complex_count
       << " lens=" << r.census.lens_points;
    detail = os.str();
    return r.census.interior_points == 100 && r.counts.nonimaginary == 200 &&
           r.counts.real == 56 && r.counts.complex_count == 144 && r.census.lens_points == 24;
}

std::complex<double> quadrant_quadruplet(const ClassSpectrum& cs) {
    std::complex<double> best{0.0, 0.0};
    for (const auto& z : cs.eigenvalues)
        if (z.real() > 0 && z.imag() > 0 && z.real() > best.real()) best = z;
    return best;
}

bool quadruplet_value(std::string& detail) {
    const std::complex<double> paper{0.24822, 0.35172};
    const auto at = [&](std::int64_t n) {
        const auto desc = enumerate_class({0, 1}, {1, 1}, Domain(n), TruncationKind::zeitlin);
        return quadrant_quadruplet(analyze_class(desc, 1.0));
    };
    const std::complex<double> z201 = at(201);
    const std::complex<double> z101 = at(101);
    std::ostringstream os;
    os << "lambda(201)=" << z201.real() << "+" << z201.imag() << "i"
       << " |err201|=" << std::abs(z201 - paper) << " |err101|=" << std::abs(z101 - paper);
    detail = os.str();
    return close(z201.real(), paper.real(), 2e-3) && close(z201.imag(), paper.imag(), 2e-3) &&
           std::abs(z201 - paper) < std::abs(z101 - paper);
}

bool lower_bound_certificate(std::string& detail) {
    const LatticeVector p{3, 1}, a{1, -2};
    const double want_bound = 0.028988;
    std::ostringstream os;
    bool ok = true;

    const auto check_one = [&](std::int64_t n, TruncationKind kind) {
        const auto desc = enumerate_class(a, p, Domain(n), kind);
        const ClassMatrix cm = class_matrix(desc, 0.5);
        const std::size_t disc = static_cast<std::size_t>(
            std::min_element(cm.rho.begin(), cm.rho.end()) - cm.rho.begin());
        std::vector<double> rooted(cm.rho.size());
        for (std::size_t i = 0; i < cm.rho.size(); ++i)
            rooted[i] = cm.rho[(disc + i) % cm.rho.size()];
        const auto bound = best_lower_bound(rooted);
        if (!bound || !close(*bound, want_bound, 1e-6)) {
            ok = false;
            os << " bound-mismatch(N=" << n << ")";
            return;
        }
        const auto lam = max_real_eigenvalue(eigenvalues(cm.entries));
        const RootBracket bracket = bracket_real_root(cm.rho, kind);
        if (!lam || *lam <= *bound || !close(bracket.root, *lam, 1e-8)) {
            ok = false;
            os << " eigenvalue-or-root-mismatch(N=" << n << ")";
        }
    };
    for (const std::int64_t n : {19, 39, 79}) check_one(n, TruncationKind::zeitlin);
    for (const std::int64_t n : {20, 40, 80}) check_one(n, TruncationKind::galerkin);
    os << " lambda_dagger=" << std::sqrt(7.0 / 8330.0);
    detail = os.str();
    return ok;
}

bool stable_disc_sampling(std::string& detail) {
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<std::int64_t> ac(-25, 25);
    const std::vector<LatticeVector> ps{{3, 1}, {5, 3}, {4, 1}};
    int collected = 0;
    double worst = 0.0;
    while (collected < 200) {
        const LatticeVector p = ps[static_cast<std::size_t>(collected) % ps.size()];
        std::uniform_int_distribution<std::int64_t> nn(norm_sq(p), norm_sq(p) + 25);
        const Domain d(nn(rng));
        const LatticeVector a{ac(rng), ac(rng)};
        if (!d.contains(a)) continue;
        const TruncationKind kind = collected % 2 ? TruncationKind::zeitlin : TruncationKind::galerkin;
        const auto desc = enumerate_class(a, p, d, kind);
        if (std::any_of(desc.modes.begin(), desc.modes.end(),
                        [](const LatticeVector& m) { return m == LatticeVector{0, 0}; }))
            continue;
        const ClassMatrix cm = class_matrix(desc, 0.5);
        if (cm.alpha == 0.0) continue;
        if (std::any_of(cm.rho.begin(), cm.rho.end(), [](double r) { return r < 0.0; })) continue;
        ++collected;
        const Matrix scaled = cm.alpha * cm.entries;
        double max_re = 0.0;
        for (const auto& z : eigenvalues(scaled)) max_re = std::max(max_re, std::abs(z.real()));
        worst = std::max(worst, max_re / scaled.norm());
        if (max_re > 1e-9 * scaled.norm()) {
            detail = "violation for a=" + to_string(a) + " p=" + to_string(p);
            return false;
        }
    }
    std::ostringstream os;
    os << "200 classes, worst |Re|/||alpha A|| = " << worst;
    detail = os.str();
    return true;
}

bool block_diagonalization(std::string& detail) {
    double worst = 0.0;
    for (const TruncationKind kind : {TruncationKind::galerkin, TruncationKind::zeitlin}) {
        for (const LatticeVector p : {LatticeVector{1, 0}, LatticeVector{1, 1}, LatticeVector{2, 1}}) {
            for (std::int64_t n = 2; n <= 4; ++n) {
                const Domain d(n);
                // classes with a boundary mode carry a defective zero whose
                // QR scatter grows like sqrt(eps ||A||); keep ||A|| small so
                // the scatter sits below the 1e-9 gate while the decoupling
                // signal stays eight orders above it
                const double gamma = 0.1;
                const auto full = eigenvalues(full_jacobian(p, gamma, d, kind));
                std::vector<std::complex<double>> merged;
                for (const auto& leader : canonical_leaders(p, d, kind)) {
                    const auto desc = enumerate_class(leader, p, d, kind);
                    auto evs = analyze_class(desc, gamma).eigenvalues;
                    if (std::any_of(desc.modes.begin(), desc.modes.end(),
                                    [](const LatticeVector& m) { return m == LatticeVector{0, 0}; }))
                        evs.pop_back();
                    merged.insert(merged.end(), evs.begin(), evs.end());
                }
                if (merged.size() != full.size()) {
                    detail = "dimension mismatch";
                    return false;
                }
                worst = std::max(worst, spectrum_distance(full, merged));
            }
        }
    }
    std::ostringstream os;
    os << "worst multiset deviation = " << worst;
    detail = os.str();
    return worst < 1e-9;
}

bool recurrence_oracles(std::string& detail) {
    std::mt19937_64 rng(102);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0), arg(-3.0, 3.0);
    double worst_rel = 0.0, worst_fd = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const std::int64_t n = 2 + rep % 8; // sizes 2..9
        CoefficientSequence seq;
        for (std::int64_t i = 0; i < n; ++i) {
            double v = coeff(rng);
            if (std::abs(v) < 0.05) v = 0.05;
            seq.a.push_back(v);
        }
        Matrix chain = Matrix::Zero(n, n);
        for (Eigen::Index i = 0; i + 1 < n; ++i) {
            chain(i, i + 1) = seq.a[static_cast<std::size_t>(i + 1)];
            chain(i + 1, i) = -seq.a[static_cast<std::size_t>(i)];
        }
        const double x = arg(rng);
        const double det = lu_char_poly(chain, x);
        const double mine = t_eval(seq, 0, n - 1, x);
        worst_rel = std::max(worst_rel,
                             std::abs(mine - det) / std::max({1.0, std::abs(det), std::abs(mine)}));
        if (n >= 3 && n % 2 == 1) {
            Matrix cyc = chain;
            cyc(0, n - 1) -= seq.a[static_cast<std::size_t>(n - 1)];
            cyc(n - 1, 0) += seq.a[0];
            seq.cyclic = true;
            const double det_c = lu_char_poly(cyc, x);
            const double mine_c = a_eval(seq, x);
            worst_rel = std::max(
                worst_rel, std::abs(mine_c - det_c) / std::max({1.0, std::abs(det_c), std::abs(mine_c)}));
            seq.cyclic = false;
        }

        const double h = 1e-6;
        const double fd = (t_eval(seq, 0, n - 1, h) - t_eval(seq, 0, n - 1, -h)) / (2.0 * h);
        const double closed = dt_at_zero(seq, 0, n - 1);
        worst_fd = std::max(worst_fd, std::abs(fd - closed) / std::max(1.0, std::abs(closed)));
        if (std::abs(t_eval(seq, 0, n - 1, 0.0) - t_at_zero(seq, 0, n - 1)) > 1e-12)
            worst_fd = 1.0;
    }
    std::ostringstream os;
    os << "worst det rel err = " << worst_rel << ", worst d/dx err = " << worst_fd;
    detail = os.str();
    return worst_rel <= 1e-10 && worst_fd <= 1e-8;
}

bool circulant_and_density(std::string& detail) {
    const LatticeVector p{3, 1}, a{1, -2};
    // closed form vs dense solve
    double worst_circ = 0.0;
    for (std::int64_t n = 3; n <= 101; n += 2) {
        std::vector<double> rho(static_cast<std::size_t>(n), 1.0 / static_cast<double>(norm_sq(p)));
        Matrix m = Matrix::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            m(i, (i + 1) % n) += rho[static_cast<std::size_t>((i + 1) % n)];
            m(i, (i + n - 1) % n) -= rho[static_cast<std::size_t>((i + n - 1) % n)];
        }
        worst_circ = std::max(worst_circ, spectrum_distance(eigenvalues(m), circulant_spectrum(n, p)));
    }
    if (worst_circ >= 1e-10) {
        detail = "circulant deviation " + std::to_string(worst_circ);
        return false;
    }

    // figure-scale density comparison at N=1000
    const double gamma = 0.5;
    const auto desc = enumerate_class(a, p, Domain(1000), TruncationKind::zeitlin);
    const ClassSpectrum cs = analyze_class(desc, gamma);
    const DensityModel model = density_model(a, p, gamma);
    const Histogram h = empirical_density(cs, 40);

    const double f0 = density_f(0.0, p, model.alpha);
    double sup = 0.0;
    for (std::size_t b = 1; b + 1 < h.centers.size(); ++b)
        sup = std::max(sup, std::abs(h.density[b] - density_f(h.centers[b], p, model.alpha)));

    double max_im = 0.0;
    for (const auto& z : cs.eigenvalues) max_im = std::max(max_im, std::abs(z.imag()));
    const double support_gap = std::abs(max_im - model.support_abs) / model.support_abs;

    std::ostringstream os;
    os << "circ=" << worst_circ << " sup_norm=" << sup << " (limit " << 0.15 * f0 << ")"
       << " support_gap=" << support_gap;
    detail = os.str();
    return sup < 0.15 * f0 && support_gap < 0.01;
}

bool eigenvector_decay_check(std::string& detail) {
    const auto desc = enumerate_class({1, -2}, {3, 1}, Domain(100), TruncationKind::zeitlin);
    const ClassMatrix cm = class_matrix(desc, 0.5);
    const auto lam = max_real_eigenvalue(eigenvalues(cm.entries));
    if (!lam) {
        detail = "no real eigenvalue";
        return false;
    }
    const DecayAnalysis decay = eigenvector_decay(cm, *lam);
    std::ostringstream os;
    os << "residual=" << decay.hamiltonian_residual << " tail_err=" << decay.tail_ratio_error
       << " mu1=" << decay.mu1;
    detail = os.str();
    return decay.hamiltonian_residual <= 1e-8 && decay.tail_ratio_error <= 0.05;
}

bool exception_audit(std::string& detail) {
    const auto canon = [](LatticeVector p) {
        p.x = std::abs(p.x);
        p.y = std::abs(p.y);
        if (p.x < p.y) std::swap(p.x, p.y);
        return p;
    };
    const std::vector<LatticeVector> exceptions{{1, 0}, {1, 1}, {2, 1}};
    int scanned = 0;
    for (std::int64_t px = -12; px <= 12; ++px) {
        for (std::int64_t py = -12; py <= 12; ++py) {
            const LatticeVector p{px, py};
            if (p == LatticeVector{0, 0} || norm_sq(p) > 144) continue;
            ++scanned;
            const bool absent = !find_case_i_leader(p).has_value();
            const bool expected_absent =
                std::find(exceptions.begin(), exceptions.end(), canon(p)) != exceptions.end();
            if (absent != expected_absent) {
                detail = "mismatch at p=" + to_string(p);
                return false;
            }
        }
    }
    detail = "scanned " + std::to_string(scanned) + " values of p";
    return true;
}

} // namespace

int main() {
    std::printf("acceptance suite\n");
    run(1, "p=(5,3) N=200 ensemble counts and censuses", ensemble_census);
    run(2, "p=(1,1) quadruplet near the reference value", quadruplet_value);
    run(3, "lambda-dagger certificates across truncation sizes", lower_bound_certificate);
    run(4, "stable classes stay on the imaginary axis", stable_disc_sampling);
    run(5, "class decomposition equals the full spectrum", block_diagonalization);
    run(6, "recurrences match determinant and derivative oracles", recurrence_oracles);
    run(7, "circulant closed form and figure-scale density", circulant_and_density);
    run(8, "eigenvector decay of the certified eigenvalue", eigenvector_decay_check);
    run(9, "case-(i) leader existence audit over |p| <= 12", exception_audit);
    if (failures == 0)
        std::printf("all acceptance criteria passed\n");
    else
        std::printf("%d acceptance criteria FAILED\n", failures);
    return failures;
}
