#pragma once

// Sweep over all canonical classes of one equilibrium: per-class spectra and
// cases, the unstable-disc census, and aggregated eigenvalue-type counts.
// Classes are independent, so the sweep runs on a work queue of threads with
// results written into per-class slots; aggregation order is fixed.

#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "eulerstab/lattice.hpp"
#include "eulerstab/spectra.hpp"

namespace eulerstab {

struct EnsembleConfig {
    LatticeVector p;
    double gamma = 0.5;
    Domain domain{1};
    TruncationKind kind = TruncationKind::zeitlin;
    double tol_rel = 1e-8;
    bool fast = false; // skip dense solves of provably stable classes
    int threads = 0;   // 0: hardware concurrency
};

struct ClassRecord {
    LatticeVector leader;
    std::int64_t size = 0;
    double alpha = 0.0;
    StabilityCase stability = StabilityCase::zero_alpha;
    bool solved = false;
    Classification classification; // valid when solved or alpha == 0
    std::optional<Certificates> certificates;
};

struct DiscCensus {
    std::int64_t interior_points = 0; // |D_p \ {0}|
    std::int64_t lens_points = 0;     // interior nonzero points with rho_0 < 0, rho_{+-1} > 0
};

inline DiscCensus disc_census(const LatticeVector& p) {
    DiscCensus census;
    for (const auto& a : unstable_disc(p)) {
        if (a == LatticeVector{0, 0}) continue;
        ++census.interior_points;
        if (lens_condition(a, p)) ++census.lens_points;
    }
    return census;
}

struct EnsembleCounts {
    std::int64_t zero = 0;
    std::int64_t imaginary = 0;
    std::int64_t real = 0;          // eigenvalues in real pairs
    std::int64_t complex_count = 0; // eigenvalues in quadruplets
    std::int64_t nonimaginary = 0;
    std::int64_t unsolved_modes = 0; // modes of skipped stable classes
};

struct EnsembleReport {
    EnsembleConfig config;
    DiscCensus census;
    std::vector<ClassRecord> classes;
    EnsembleCounts counts;
    // (eigenvalue of alpha A, class leader) for every solved class
    std::vector<std::pair<std::complex<double>, LatticeVector>> eigenvalues;
};

inline EnsembleReport run_ensemble(const EnsembleConfig& cfg) {
    EnsembleReport report;
    report.config = cfg;
    report.census = disc_census(cfg.p);

    const auto leaders = canonical_leaders(cfg.p, cfg.domain, cfg.kind);
    report.classes.resize(leaders.size());
    std::vector<std::vector<std::complex<double>>> spectra(leaders.size());

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : hw;

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    const auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= leaders.size()) return;
            try {
                const ClassDescriptor desc = enumerate_class(leaders[i], cfg.p, cfg.domain, cfg.kind);
                ClassRecord& rec = report.classes[i];
                rec.leader = leaders[i];
                rec.size = desc.size();
                rec.alpha = alpha_coefficient(desc.leader, desc.p, cfg.gamma, desc.domain, desc.kind);

                if (rec.alpha == 0.0) {
                    rec.stability = StabilityCase::zero_alpha;
                    rec.classification.zero = desc.size();
                    rec.solved = true; // exact without a dense solve
                    spectra[i].assign(static_cast<std::size_t>(desc.size()), {0.0, 0.0});
                    continue;
                }

                const auto rho = rho_list(desc);
                rec.stability = stability_case(desc, rho, rec.alpha);
                if (cfg.fast && rec.stability == StabilityCase::stable) continue; // no hyperbolic part

                const ClassSpectrum cs = analyze_class(desc, cfg.gamma, cfg.tol_rel);
                rec.classification = cs.classification;
                rec.certificates = cs.certificates;
                rec.solved = true;
                spectra[i] = cs.eigenvalues;
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    for (std::size_t i = 0; i < leaders.size(); ++i) {
        const ClassRecord& rec = report.classes[i];
        if (!rec.solved) {
            report.counts.unsolved_modes += rec.size;
            continue;
        }
        report.counts.zero += rec.classification.zero;
        report.counts.imaginary += rec.classification.imaginary;
        report.counts.real += 2 * rec.classification.real_pairs;
        report.counts.complex_count += 4 * rec.classification.quadruplets;
        for (const auto& z : spectra[i]) report.eigenvalues.emplace_back(z, rec.leader);
    }
    report.counts.nonimaginary = report.counts.real + report.counts.complex_count;

    std::sort(report.eigenvalues.begin(), report.eigenvalues.end(), [](const auto& l, const auto& r) {
        if (l.first.real() != r.first.real()) return l.first.real() < r.first.real();
        if (l.first.imag() != r.first.imag()) return l.first.imag() < r.first.imag();
        return l.second < r.second;
    });
    return report;
}

} // namespace eulerstab
