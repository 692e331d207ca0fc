#pragma once

// Truncated vorticity dynamics on D: the nonlinear vector fields of both
// truncations, the quadratic Hamiltonian, the equilibrium state, the full
// linearised operator over D \ {0}, and the per-class matrices A = J S.

#include <cmath>
#include <vector>

#include "eulerstab/eig.hpp"
#include "eulerstab/errors.hpp"
#include "eulerstab/lattice.hpp"

namespace eulerstab {

// Real coefficient vector over D. The class-real convention is used: class
// states are real and the conjugate pairing of +-k is not imposed, matching
// the real linear systems the classes decouple into. The (0,0) coefficient
// (mean vorticity) stays zero.
class ModeState {
  public:
    explicit ModeState(const Domain& domain)
        : domain_(domain), c_(static_cast<std::size_t>(domain.point_count()), 0.0) {}

    const Domain& domain() const { return domain_; }

    double at(const LatticeVector& v) const { return c_[checked_index(v)]; }
    void set(const LatticeVector& v, double value) {
        if (v == LatticeVector{0, 0} && value != 0.0)
            throw std::invalid_argument("ModeState: the mean-vorticity coefficient (0,0) must stay zero");
        c_[checked_index(v)] = value;
    }

    std::vector<double>& raw() { return c_; }
    const std::vector<double>& raw() const { return c_; }

  private:
    std::size_t checked_index(const LatticeVector& v) const {
        if (!domain_.contains(v)) throw std::out_of_range("ModeState: mode " + to_string(v) + " outside D");
        return domain_.index(v);
    }

    Domain domain_;
    std::vector<double> c_;
};

// Equilibrium 2*Gamma*cos(p.x): coefficients Gamma at +-p, zero elsewhere.
struct Equilibrium {
    LatticeVector p;
    double gamma = 0.0;
};

inline ModeState equilibrium_state(const Equilibrium& eq, const Domain& domain) {
    if (eq.p == LatticeVector{0, 0} || !domain.contains(eq.p))
        throw std::invalid_argument("equilibrium_state: p must be a nonzero mode of D");
    ModeState s(domain);
    s.set(eq.p, eq.gamma);
    s.set(-eq.p, eq.gamma);
    return s;
}

// d(omega_k)/dt of the truncated nonlinear system. The plain truncation drops
// every out-of-domain mode; the wrapped one uses sin(eps k x l)/eps weights
// and the wrapped target index.
inline ModeState vector_field(const ModeState& state, TruncationKind kind) {
    const Domain& d = state.domain();
    const std::int64_t n = d.n_max();
    const std::int64_t m = d.modulus();
    const double eps = d.epsilon();
    ModeState out(d);

    // Gather the nonzero sum modes l once; the double loop is O(M^2) and only
    // used at oracle scale.
    std::vector<LatticeVector> active;
    for (std::int64_t lx = -n; lx <= n; ++lx)
        for (std::int64_t ly = -n; ly <= n; ++ly) {
            const LatticeVector l{lx, ly};
            if (l == LatticeVector{0, 0}) continue;
            if (state.at(-l) != 0.0) active.push_back(l);
        }

    for (std::int64_t kx = -n; kx <= n; ++kx) {
        for (std::int64_t ky = -n; ky <= n; ++ky) {
            const LatticeVector k{kx, ky};
            if (k == LatticeVector{0, 0}) continue;
            double acc = 0.0;
            for (const auto& l : active) {
                const double w = state.at(-l) / static_cast<double>(norm_sq(l));
                if (kind == TruncationKind::galerkin) {
                    const LatticeVector target = k + l;
                    if (!d.contains(target)) continue;
                    const std::int64_t c = cross(k, l);
                    if (c == 0) continue;
                    acc += static_cast<double>(c) * w * state.at(target);
                } else {
                    const std::int64_t c = mod_symmetric(cross(k, l), m);
                    if (c == 0) continue;
                    acc += std::sin(eps * static_cast<double>(c)) / eps * w * state.at(wrap(k + l, d));
                }
            }
            out.set(k, acc);
        }
    }
    return out;
}

// H = 1/2 sum_{k in D\0} omega_k omega_{-k} / |k|^2.
inline double hamiltonian(const ModeState& state) {
    const std::int64_t n = state.domain().n_max();
    double h = 0.0;
    for (std::int64_t x = -n; x <= n; ++x)
        for (std::int64_t y = -n; y <= n; ++y) {
            const LatticeVector k{x, y};
            if (k == LatticeVector{0, 0}) continue;
            h += 0.5 * state.at(k) * state.at(-k) / static_cast<double>(norm_sq(k));
        }
    return h;
}

// Classical fourth-order one-step method; conservation smoke tests only.
template <class Field>
ModeState integrate_rk4(ModeState state, Field&& field, double dt, int steps) {
    const auto axpy = [](ModeState base, const ModeState& dir, double s) {
        for (std::size_t i = 0; i < base.raw().size(); ++i) base.raw()[i] += s * dir.raw()[i];
        return base;
    };
    for (int step = 0; step < steps; ++step) {
        const ModeState k1 = field(state);
        const ModeState k2 = field(axpy(state, k1, dt / 2.0));
        const ModeState k3 = field(axpy(state, k2, dt / 2.0));
        const ModeState k4 = field(axpy(state, k3, dt));
        for (std::size_t i = 0; i < state.raw().size(); ++i)
            state.raw()[i] += dt / 6.0 * (k1.raw()[i] + 2.0 * k2.raw()[i] + 2.0 * k3.raw()[i] + k4.raw()[i]);
    }
    return state;
}

inline ModeState integrate_rk4(const ModeState& state, TruncationKind kind, double dt, int steps) {
    return integrate_rk4(state, [kind](const ModeState& s) { return vector_field(s, kind); }, dt, steps);
}

// Lexicographic basis of D \ {0} for the full linearised operator.
inline std::vector<LatticeVector> mode_basis(const Domain& domain) {
    std::vector<LatticeVector> basis;
    basis.reserve(static_cast<std::size_t>(domain.point_count() - 1));
    for (std::int64_t x = -domain.n_max(); x <= domain.n_max(); ++x)
        for (std::int64_t y = -domain.n_max(); y <= domain.n_max(); ++y)
            if (!(x == 0 && y == 0)) basis.push_back({x, y});
    return basis;
}

// Jacobian of the truncated vector field at the equilibrium, over D \ {0}.
// Row k couples only to k +- p (wrapped for the sine bracket), with weight
// Gamma (1/|p|^2 - 1/|k +- p|^2) (k x p) and its sine-deformed analogue.
inline Matrix full_jacobian(const LatticeVector& p, double gamma, const Domain& domain,
                            TruncationKind kind) {
    if (p == LatticeVector{0, 0} || !domain.contains(p))
        throw std::invalid_argument("full_jacobian: p must be a nonzero mode of D");
    const auto basis = mode_basis(domain);
    std::vector<std::int64_t> col(static_cast<std::size_t>(domain.point_count()), -1);
    for (std::size_t i = 0; i < basis.size(); ++i) col[domain.index(basis[i])] = static_cast<std::int64_t>(i);

    const double eps = domain.epsilon();
    const double p2 = static_cast<double>(norm_sq(p));
    Matrix jac = Matrix::Zero(static_cast<Eigen::Index>(basis.size()), static_cast<Eigen::Index>(basis.size()));

    for (std::size_t row = 0; row < basis.size(); ++row) {
        const LatticeVector& k = basis[row];
        double factor;
        if (kind == TruncationKind::galerkin) {
            factor = gamma * static_cast<double>(cross(k, p));
        } else {
            const std::int64_t c = mod_symmetric(cross(k, p), domain.modulus());
            factor = gamma * std::sin(eps * static_cast<double>(c)) / eps;
        }
        if (factor == 0.0) continue;

        for (const int sign : {+1, -1}) {
            LatticeVector target = k + p * sign;
            if (kind == TruncationKind::zeitlin) target = wrap(target, domain);
            if (!domain.contains(target)) continue;
            const std::int64_t j = col[domain.index(target)];
            if (j < 0) continue; // the zero mode is not a variable
            const double coeff = 1.0 / p2 - 1.0 / static_cast<double>(norm_sq(target));
            jac(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(j)) +=
                static_cast<double>(sign) * factor * coeff;
        }
    }
    return jac;
}

// Class matrix A with its J S factorisation: J the +-1 skew pattern (plus
// corner entries for the wrapped truncation), S = diag(rho).
struct ClassMatrix {
    ClassDescriptor descriptor;
    std::vector<double> rho;
    double alpha = 0.0;
    Matrix entries;
    Matrix j_skew;
    std::vector<double> s_diag;

    std::int64_t size() const { return descriptor.size(); }
};

inline ClassMatrix class_matrix(const ClassDescriptor& desc, double gamma) {
    ClassMatrix cm;
    cm.descriptor = desc;
    cm.rho = rho_list(desc);
    cm.alpha = alpha_coefficient(desc.leader, desc.p, gamma, desc.domain, desc.kind);
    cm.s_diag = cm.rho;

    const auto n = static_cast<Eigen::Index>(desc.size());
    cm.entries = Matrix::Zero(n, n);
    cm.j_skew = Matrix::Zero(n, n);
    const bool cyclic = desc.kind == TruncationKind::zeitlin;
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index up = i + 1 < n ? i + 1 : (cyclic ? 0 : -1);
        const Eigen::Index down = i > 0 ? i - 1 : (cyclic ? n - 1 : -1);
        if (up >= 0 && up != i) {
            cm.j_skew(i, up) += 1.0;
            cm.entries(i, up) += cm.rho[static_cast<std::size_t>(up)];
        }
        if (down >= 0 && down != i) {
            cm.j_skew(i, down) -= 1.0;
            cm.entries(i, down) -= cm.rho[static_cast<std::size_t>(down)];
        }
    }
    return cm;
}

} // namespace eulerstab
