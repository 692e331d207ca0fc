#pragma once

// Large-N model of the stable part of a class spectrum: the circulant
// approximation rho_k -> 1/|p|^2 with its closed-form eigenvalues, the
// essential-spectrum interval i[-|beta|, |beta|], and the arcsine density
// compared against empirical histograms.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "eulerstab/lattice.hpp"
#include "eulerstab/spectra.hpp"

namespace eulerstab {

struct DensityModel {
    LatticeVector p;
    LatticeVector a;
    double gamma = 0.0;
    double alpha = 0.0;       // Gamma * (a x p)
    double beta = 0.0;        // 2 alpha / |p|^2
    double support_abs = 0.0; // spectrum support i[-|beta|, |beta|]
};

inline DensityModel density_model(const LatticeVector& a, const LatticeVector& p, double gamma) {
    if (p == LatticeVector{0, 0}) throw std::invalid_argument("density_model: p must be nonzero");
    DensityModel m;
    m.p = p;
    m.a = a;
    m.gamma = gamma;
    m.alpha = gamma * static_cast<double>(cross(a, p));
    m.beta = 2.0 * m.alpha / static_cast<double>(norm_sq(p));
    m.support_abs = std::abs(m.beta);
    return m;
}

// Eigenvalues of the circulant limit matrix: lambda_j = (2i/|p|^2) sin(2 pi j / n).
inline std::vector<std::complex<double>> circulant_spectrum(std::int64_t n, const LatticeVector& p) {
    if (n < 3 || n % 2 == 0) throw std::invalid_argument("circulant_spectrum: n must be odd and >= 3");
    if (p == LatticeVector{0, 0}) throw std::invalid_argument("circulant_spectrum: p must be nonzero");
    const double c = 2.0 / static_cast<double>(norm_sq(p));
    std::vector<std::complex<double>> out;
    out.reserve(static_cast<std::size_t>(n));
    for (std::int64_t j = 0; j < n; ++j)
        out.emplace_back(0.0, c * std::sin(2.0 * std::numbers::pi * static_cast<double>(j) /
                                           static_cast<double>(n)));
    return out;
}

// Arcsine density F(x) = |p|^2 / (pi sqrt(4 alpha^2 - |p|^4 x^2)) of the
// imaginary parts, defined on the open support |x| < 2|alpha|/|p|^2.
inline double density_f(double x, const LatticeVector& p, double alpha) {
    if (p == LatticeVector{0, 0}) throw std::invalid_argument("density_f: p must be nonzero");
    const double p2 = static_cast<double>(norm_sq(p));
    if (!(std::abs(x) < 2.0 * std::abs(alpha) / p2))
        throw std::domain_error("density_f: x outside the open support");
    return p2 / (std::numbers::pi * std::sqrt(4.0 * alpha * alpha - p2 * p2 * x * x));
}

struct Histogram {
    std::vector<double> centers;
    std::vector<double> density; // normalized: sum(density) * bin_width == 1
    double bin_width = 0.0;
    double support_abs = 0.0;
    std::int64_t binned = 0;
};

// Normalized histogram of Im(lambda) over [-|beta|, |beta|] for the
// eigenvalues classified imaginary (zeros and hyperbolic ones excluded).
// The rare value marginally outside the support is clamped to an edge bin.
inline Histogram empirical_density(const ClassSpectrum& spectrum, std::int64_t bins,
                                   double tol_rel = 1e-8) {
    if (bins < 1) throw std::invalid_argument("empirical_density: bins must be positive");
    const DensityModel model = density_model(spectrum.descriptor.leader, spectrum.descriptor.p, spectrum.gamma);
    if (model.support_abs == 0.0)
        throw std::invalid_argument("empirical_density: zero class has empty support");

    double radius = 0.0;
    for (const auto& z : spectrum.eigenvalues) radius = std::max(radius, std::abs(z));
    const double tol = std::max(tol_rel * radius, 1e-300);

    Histogram h;
    h.support_abs = model.support_abs;
    h.bin_width = 2.0 * model.support_abs / static_cast<double>(bins);
    h.centers.resize(static_cast<std::size_t>(bins));
    h.density.assign(static_cast<std::size_t>(bins), 0.0);
    for (std::int64_t b = 0; b < bins; ++b)
        h.centers[static_cast<std::size_t>(b)] =
            -model.support_abs + (static_cast<double>(b) + 0.5) * h.bin_width;

    std::vector<std::int64_t> counts(static_cast<std::size_t>(bins), 0);
    for (const auto& z : spectrum.eigenvalues) {
        if (std::abs(z) <= tol || std::abs(z.real()) > tol) continue; // imaginary only
        auto b = static_cast<std::int64_t>(std::floor((z.imag() + model.support_abs) / h.bin_width));
        b = std::clamp<std::int64_t>(b, 0, bins - 1);
        ++counts[static_cast<std::size_t>(b)];
        ++h.binned;
    }
    if (h.binned > 0)
        for (std::int64_t b = 0; b < bins; ++b)
            h.density[static_cast<std::size_t>(b)] =
                static_cast<double>(counts[static_cast<std::size_t>(b)]) /
                (static_cast<double>(h.binned) * h.bin_width);
    return h;
}

} // namespace eulerstab
