#pragma once

// Dense nonsymmetric eigenvalue backend. Eigen's EigenSolver (balancing,
// Hessenberg reduction, shifted QR) provides the backward-stable black box;
// eigenvectors for known real eigenvalues come from inverse iteration.

#include <algorithm>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "eulerstab/errors.hpp"

namespace eulerstab {

using Matrix = Eigen::MatrixXd;

// All n eigenvalues, sorted by (Re, Im). Non-convergence is an explicit error.
inline std::vector<std::complex<double>> eigenvalues(const Matrix& a) {
    if (a.rows() == 0 || a.rows() != a.cols())
        throw std::invalid_argument("eigenvalues: matrix must be square and nonempty");
    if (!a.allFinite()) throw std::invalid_argument("eigenvalues: non-finite entries");

    std::vector<std::complex<double>> out;
    if (a.rows() == 1) {
        out.emplace_back(a(0, 0), 0.0);
        return out;
    }
    Eigen::EigenSolver<Matrix> solver(a, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw NumericalError("eigenvalues: QR iteration failed to converge");
    const auto& ev = solver.eigenvalues();
    out.assign(ev.data(), ev.data() + ev.size());
    std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) {
        return l.real() != r.real() ? l.real() < r.real() : l.imag() < r.imag();
    });
    return out;
}

// Unit eigenvector for a known real eigenvalue, by inverse iteration.
// Rejects lambda whose residual shows it is not an eigenvalue.
inline Eigen::VectorXd real_eigenvector(const Matrix& a, double lambda) {
    const auto n = a.rows();
    if (n == 0 || n != a.cols())
        throw std::invalid_argument("real_eigenvector: matrix must be square and nonempty");
    const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);

    std::mt19937_64 rng(0x5eedULL ^ static_cast<std::uint64_t>(n));
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = gauss(rng);
    x.normalize();

    double shift = lambda;
    for (int attempt = 0; attempt < 3; ++attempt) {
        Matrix b = a;
        b.diagonal().array() -= shift;
        Eigen::PartialPivLU<Matrix> lu(b);
        Eigen::VectorXd v = x;
        bool ok = true;
        for (int it = 0; it < 3; ++it) {
            v = lu.solve(v);
            if (!v.allFinite() || v.norm() == 0.0) {
                ok = false;
                break;
            }
            v.normalize();
        }
        if (ok) {
            const double residual = (a * v - lambda * v).norm();
            if (residual <= 1e-8 * scale * static_cast<double>(n)) return v;
        }
        // Exactly singular shift or stagnation: nudge and retry.
        shift = lambda * (1.0 + 1e-12 * (attempt + 1)) + 1e-300;
    }
    throw NumericalError("real_eigenvector: residual check failed; lambda is not an eigenvalue");
}

} // namespace eulerstab
