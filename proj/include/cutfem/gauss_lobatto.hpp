#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace cutfem {

// Legendre P_n and derivative at x (three-term recurrence).
template <typename Real> std::pair<Real, Real> legendre(int n, Real x) {
    Real p0 = 1, p1 = x;
    if (n == 0) return {p0, Real(0)};
    for (int k = 2; k <= n; ++k) {
        Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    Real dp = n * (x * p1 - p0) / (x * x - 1);
    return {p1, dp};
}

// Gauss-Lobatto points: the p+1 zeros of (1-x^2) L_p'(x), sorted ascending.
template <typename Real> std::vector<Real> gauss_lobatto_nodes(int p) {
    if (p < 1) throw std::invalid_argument("gauss_lobatto_nodes: p >= 1");
    std::vector<Real> x(p + 1);
    x[0] = -1;
    x[p] = 1;
    for (int k = 1; k < p; ++k) {
        // interior nodes are the extrema of L_p; Chebyshev-like initial guess
        Real xi = -std::cos(M_PI * (k + 0.25) / p - 3.0 / (8.0 * p * M_PI * (k + 0.25)));
        for (int it = 0; it < 200; ++it) {
            auto [P, dP] = legendre<Real>(p, xi);
            // f = L_p'; f' = L_p'' from the Legendre ODE
            Real f = dP;
            Real fp = (2 * xi * dP - Real(p) * (p + 1) * P) / (1 - xi * xi);
            Real dx = f / fp;
            xi -= dx;
            if (std::abs(dx) < std::numeric_limits<Real>::epsilon() * 4) break;
        }
        x[k] = xi;
    }
    // enforce exact symmetry
    for (int k = 0; k <= p / 2; ++k) {
        Real s = (x[k] - x[p - k]) / 2;
        x[k] = s;
        x[p - k] = -s;
    }
    if (p % 2 == 0) x[p / 2] = 0;
    return x;
}

// Gauss-Lobatto-Legendre quadrature weights (exact for degree 2p-1).
template <typename Real> std::vector<Real> gauss_lobatto_weights(const std::vector<Real>& x) {
    int p = int(x.size()) - 1;
    std::vector<Real> w(p + 1);
    for (int k = 0; k <= p; ++k) {
        auto [P, dP] = legendre<Real>(p, x[k]);
        w[k] = Real(2) / (Real(p) * (p + 1) * P * P);
    }
    return w;
}

// Barycentric Lagrange basis on a fixed node set.
template <typename Real> class lagrange_1d {
  public:
    explicit lagrange_1d(std::vector<Real> nodes) : x_(std::move(nodes)) {
        int n = int(x_.size());
        wb_.assign(n, Real(1));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (j != i) wb_[i] /= (x_[i] - x_[j]);
        // differentiation matrix
        D_.assign(size_t(n) * n, Real(0));
        for (int i = 0; i < n; ++i) {
            Real acc = 0;
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                Real d = (wb_[j] / wb_[i]) / (x_[i] - x_[j]);
                D_[size_t(i) * n + j] = d;
                acc += d;
            }
            D_[size_t(i) * n + i] = -acc;
        }
    }

    int count() const { return int(x_.size()); }
    const std::vector<Real>& nodes() const { return x_; }
    Real diff_matrix(int i, int j) const { return D_[size_t(i) * count() + j]; }

    // values of all basis functions at x
    void values(Real x, std::vector<Real>& out) const {
        int n = count();
        out.assign(n, Real(0));
        for (int i = 0; i < n; ++i)
            if (x == x_[i]) {
                out[i] = 1;
                return;
            }
        Real s = 0;
        for (int i = 0; i < n; ++i) s += wb_[i] / (x - x_[i]);
        for (int i = 0; i < n; ++i) out[i] = (wb_[i] / (x - x_[i])) / s;
    }

    // derivatives of all basis functions at x
    void derivatives(Real x, std::vector<Real>& out) const {
        int n = count();
        out.assign(n, Real(0));
        for (int i = 0; i < n; ++i)
            if (x == x_[i]) {
                for (int j = 0; j < n; ++j) out[j] = diff_matrix(i, j);
                return;
            }
        Real s = 0, s2 = 0;
        std::vector<Real> u(n);
        for (int i = 0; i < n; ++i) {
            u[i] = wb_[i] / (x - x_[i]);
            s += u[i];
            s2 += u[i] / (x - x_[i]);
        }
        for (int j = 0; j < n; ++j) {
            Real lj = u[j] / s;
            out[j] = lj * (s2 / s - Real(1) / (x - x_[j]));
        }
    }

  private:
    std::vector<Real> x_;
    std::vector<Real> wb_;
    std::vector<Real> D_;
};

} // namespace cutfem
