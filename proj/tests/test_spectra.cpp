#include <doctest.h>

#include <random>

#include "eulerstab/spectra.hpp"
#include "oracles.hpp"

using namespace eulerstab;

TEST_CASE("classify: plain examples") {
    const Classification c =
        classify({{0.1, 0.0}, {-0.1, 0.0}, {0.0, 2.0}, {0.0, -2.0}}, 1.0);
    CHECK(c.real_pairs == 1);
    CHECK(c.imaginary == 2);
    CHECK(c.zero == 0);
    CHECK(c.quadruplets == 0);
    CHECK(c.total() == 4);

    const Classification q = classify(
        {{0.3, 0.4}, {0.3, -0.4}, {-0.3, 0.4}, {-0.3, -0.4}, {0.0, 0.0}}, 1.0);
    CHECK(q.quadruplets == 1);
    CHECK(q.zero == 1);

    CHECK_THROWS_AS(classify({{0.1, 0.0}, {-0.2, 0.0}}, 1.0), NumericalError);
    CHECK_THROWS_AS(classify({{0.3, 0.4}, {0.3, -0.4}, {-0.3, 0.4}}, 1.0), NumericalError);
}

TEST_CASE("stability cases from the rho pattern") {
    const LatticeVector p{3, 1};

    const auto stable_desc = enumerate_class({1, 5}, p, Domain(12), TruncationKind::zeitlin);
    CHECK(stability_case(stable_desc, rho_list(stable_desc), 1.0) == StabilityCase::stable);

    const auto case1 = enumerate_class({1, -2}, p, Domain(19), TruncationKind::zeitlin);
    CHECK(stability_case(case1, rho_list(case1), 1.0) == StabilityCase::case_i);

    // two consecutive disc modes: a=(1,0) and a-p=(-1,-1) for p=(2,1)
    const auto case2 = enumerate_class({1, 0}, {2, 1}, Domain(15), TruncationKind::zeitlin);
    CHECK(stability_case(case2, rho_list(case2), 1.0) == StabilityCase::case_ii);

    // wrap re-entry for p=(6,2): the class of (1,6) meets the disc again at (-2,5)
    const auto case3 = enumerate_class({1, 6}, {6, 2}, Domain(20), TruncationKind::zeitlin);
    CHECK(stability_case(case3, rho_list(case3), 1.0) == StabilityCase::case_iii);

    CHECK(stability_case(case1, rho_list(case1), 0.0) == StabilityCase::zero_alpha);

    // non-consecutive negatives cannot happen without wrapping
    ClassDescriptor fake = case1;
    fake.kind = TruncationKind::galerkin;
    std::vector<double> bad(7, 0.1);
    bad[1] = -0.1;
    bad[4] = -0.1;
    CHECK_THROWS_AS(stability_case(fake, bad, 1.0), std::logic_error);
}

TEST_CASE("reality condition: the small-p table and its failures") {
    CHECK(reality_condition({1, -2}, {4, 1}));
    CHECK(reality_condition({1, -1}, {3, 3}));
    CHECK(reality_condition({1, -2}, {3, 2}));
    CHECK(reality_condition({1, -2}, {3, 1}));
    CHECK(reality_condition({0, 2}, {3, 0}));
    CHECK(reality_condition({1, -1}, {2, 2}));

    CHECK_FALSE(reality_condition({0, 1}, {1, 1}));
    CHECK_FALSE(reality_condition({0, 0}, {2, 1}));
    CHECK_FALSE(reality_condition({1, 0}, {1, 0}));

    // the sufficient geometric condition implies the full condition
    for (std::int64_t ax = -6; ax <= 6; ++ax)
        for (std::int64_t ay = -6; ay <= 6; ++ay)
            for (const LatticeVector p : {LatticeVector{4, 1}, LatticeVector{5, 3}})
                if (reality_sufficient({ax, ay}, p)) CHECK(reality_condition({ax, ay}, p));
}

TEST_CASE("case-(i) leader search") {
    CHECK_FALSE(find_case_i_leader({1, 0}).has_value());
    CHECK_FALSE(find_case_i_leader({1, 1}).has_value());
    CHECK_FALSE(find_case_i_leader({1, 2}).has_value());
    CHECK_FALSE(find_case_i_leader({2, 1}).has_value());
    CHECK_FALSE(find_case_i_leader({0, 1}).has_value());

    const auto a32 = find_case_i_leader({3, 2});
    REQUIRE(a32.has_value());
    CHECK(reality_condition(*a32, {3, 2}));

    // guaranteed beyond |p| ~ 4.57
    for (std::int64_t px = 1; px <= 8; ++px)
        for (std::int64_t py = 0; py <= px; ++py) {
            const LatticeVector p{px, py};
            if (static_cast<double>(norm_sq(p)) <= 4.57 * 4.57) continue;
            CHECK(find_case_i_leader(p).has_value());
        }
}

TEST_CASE("analyze_class: stable class is purely imaginary") {
    const auto desc = enumerate_class({1, 5}, {3, 1}, Domain(12), TruncationKind::zeitlin);
    const ClassSpectrum cs = analyze_class(desc, 0.5);
    CHECK(cs.stability == StabilityCase::stable);
    CHECK(cs.classification.real_pairs == 0);
    CHECK(cs.classification.quadruplets == 0);
    CHECK(cs.classification.total() == desc.size());
}

TEST_CASE("analyze_class: zero class gives only zero eigenvalues") {
    const auto desc = enumerate_class({0, 0}, {2, 1}, Domain(6), TruncationKind::zeitlin);
    const ClassSpectrum cs = analyze_class(desc, 0.5);
    CHECK(cs.stability == StabilityCase::zero_alpha);
    CHECK(cs.alpha == 0.0);
    CHECK(cs.classification.zero == desc.size());
    for (const auto& z : cs.eigenvalues) CHECK(z == std::complex<double>(0.0, 0.0));
}

TEST_CASE("analyze_class: case (i) carries certificates and one real pair") {
    const auto desc = enumerate_class({0, 3}, {3, 1}, Domain(30), TruncationKind::zeitlin);
    const ClassSpectrum cs = analyze_class(desc, 0.5);
    CHECK(cs.stability == StabilityCase::case_i);
    CHECK(cs.classification.real_pairs == 1);
    CHECK(cs.classification.quadruplets == 0);
    CHECK_FALSE(cs.certificates.has_value()); // reality fails for a=(0,3)

    const auto desc2 = enumerate_class({1, -2}, {3, 1}, Domain(30), TruncationKind::zeitlin);
    const ClassSpectrum cs2 = analyze_class(desc2, 0.5);
    CHECK(cs2.stability == StabilityCase::case_i);
    REQUIRE(cs2.certificates.has_value());
    CHECK(cs2.certificates->lambda_dagger ==
          doctest::Approx(std::sqrt(7.0 / 8330.0)).epsilon(1e-12));
    const auto lam = max_real_eigenvalue(cs2.eigenvalues_unscaled);
    REQUIRE(lam.has_value());
    CHECK(*lam > cs2.certificates->lambda_dagger);
    CHECK(cs2.certificates->bracketed_root == doctest::Approx(*lam).epsilon(1e-8));
    CHECK(cs2.certificates->lambda_dagger_scaled ==
          doctest::Approx(cs2.certificates->lambda_dagger * std::abs(cs2.alpha)).epsilon(1e-14));
}

TEST_CASE("spectral symmetry and leader-negation symmetry") {
    std::mt19937_64 rng(61);
    std::uniform_int_distribution<std::int64_t> pc(-3, 3), ac(-8, 8);
    int tried = 0;
    while (tried < 30) {
        const LatticeVector p{pc(rng), pc(rng)};
        if (p == LatticeVector{0, 0}) continue;
        const Domain d(8);
        const LatticeVector a{ac(rng), ac(rng)};
        const TruncationKind kind = tried % 2 ? TruncationKind::zeitlin : TruncationKind::galerkin;
        const auto desc = enumerate_class(a, p, d, kind);
        if (std::any_of(desc.modes.begin(), desc.modes.end(),
                        [](const LatticeVector& m) { return m == LatticeVector{0, 0}; }))
            continue;
        ++tried;
        const ClassSpectrum cs = analyze_class(desc, 0.5);

        // closure under negation and conjugation
        std::vector<std::complex<double>> negated, conjugated;
        for (const auto& z : cs.eigenvalues) {
            negated.push_back(-z);
            conjugated.push_back(std::conj(z));
        }
        CHECK(oracles::multiset_distance(cs.eigenvalues, negated) < 1e-9);
        CHECK(oracles::multiset_distance(cs.eigenvalues, conjugated) < 1e-9);

        // the class led by -a generates the same eigenvalues
        const auto desc_neg = enumerate_class(wrap(-a, d), p, d, kind);
        const ClassSpectrum cs_neg = analyze_class(desc_neg, 0.5);
        CHECK(oracles::multiset_distance(cs.eigenvalues, cs_neg.eigenvalues) < 1e-9);
    }
}

TEST_CASE("stable disc: random classes off the disc stay on the imaginary axis") {
    std::mt19937_64 rng(62);
    std::uniform_int_distribution<std::int64_t> ac(-20, 20);
    const std::vector<LatticeVector> ps{{3, 1}, {5, 3}, {4, 1}};
    int collected = 0;
    while (collected < 40) {
        const LatticeVector p = ps[static_cast<std::size_t>(collected) % ps.size()];
        std::uniform_int_distribution<std::int64_t> nn(norm_sq(p), norm_sq(p) + 20);
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
        CHECK(max_re <= 1e-9 * scaled.norm());
    }
}

TEST_CASE("eigenvector decay for the certified real eigenvalue") {
    const auto desc = enumerate_class({1, -2}, {3, 1}, Domain(100), TruncationKind::zeitlin);
    const ClassMatrix cm = class_matrix(desc, 0.5);
    const auto lam = max_real_eigenvalue(eigenvalues(cm.entries));
    REQUIRE(lam.has_value());

    const DecayAnalysis decay = eigenvector_decay(cm, *lam);
    CHECK(decay.mu1 * decay.mu2 == -1.0);
    CHECK(std::abs(decay.mu1) < 1.0);
    CHECK(std::abs(decay.mu2) > 1.0);
    CHECK(decay.hamiltonian_residual <= 1e-8);
    CHECK(decay.tail_ratio_error < 0.05);

    CHECK_THROWS_AS(eigenvector_decay(cm, *lam + 0.5), NumericalError);
    CHECK_THROWS_AS(eigenvector_decay(cm, -1.0), std::invalid_argument);
}

TEST_CASE("eigenvector decay on the unwrapped chain") {
    const auto desc = enumerate_class({1, -2}, {3, 1}, Domain(100), TruncationKind::galerkin);
    const ClassMatrix cm = class_matrix(desc, 0.5);
    const auto lam = max_real_eigenvalue(eigenvalues(cm.entries));
    REQUIRE(lam.has_value());
    const DecayAnalysis decay = eigenvector_decay(cm, *lam);
    CHECK(decay.hamiltonian_residual <= 1e-8);
    CHECK(decay.tail_ratio_error < 0.15);
}
