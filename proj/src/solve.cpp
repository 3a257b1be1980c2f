#include "cutfem/solve.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <random>

namespace cutfem {

Eigen::VectorXd solve_linear(const Eigen::SparseMatrix<double>& A_lower, const Eigen::VectorXd& b,
                             double* residual_out) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower> ldlt;
    ldlt.compute(A_lower);
    if (ldlt.info() != Eigen::Success)
        throw factorization_failure("solve_linear: LDLT factorization failed (matrix not SPD?)");
    Eigen::VectorXd x = ldlt.solve(b);
    Eigen::VectorXd r = A_lower.selfadjointView<Eigen::Lower>() * x - b;
    double rel = b.norm() > 0 ? r.norm() / b.norm() : r.norm();
    if (residual_out) *residual_out = rel;
    return x;
}

Eigen::VectorXd solve_linear(const assembled_system& sys, double* residual_out) {
    return solve_linear(sys.A_lower, sys.b, residual_out);
}

template <typename Real>
std::vector<Real> jacobi_eigenvalues(std::vector<Real> A, int n, Real tol_factor) {
    auto at = [&](int i, int j) -> Real& { return A[size_t(i) * n + j]; };
    Real eps = std::numeric_limits<Real>::epsilon() * tol_factor;
    Real normA = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) normA = std::max(normA, std::abs(at(i, j)));
    for (int sweep = 0; sweep < 100; ++sweep) {
        Real off = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off = std::max(off, std::abs(at(i, j)));
        if (off <= eps * normA) break;
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) {
                Real apq = at(p, q);
                if (std::abs(apq) <= eps * normA * Real(1e-3)) continue;
                Real theta = (at(q, q) - at(p, p)) / (2 * apq);
                Real t = (theta >= 0 ? Real(1) : Real(-1)) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1));
                Real c = 1 / std::sqrt(t * t + 1), s = t * c;
                for (int k = 0; k < n; ++k) {
                    Real akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    Real apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
    }
    std::vector<Real> ev(n);
    for (int i = 0; i < n; ++i) ev[i] = at(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

template std::vector<double> jacobi_eigenvalues<double>(std::vector<double>, int, double);
template std::vector<long double> jacobi_eigenvalues<long double>(std::vector<long double>, int,
                                                                  long double);

spectral_report condition_number_dense(const Eigen::MatrixXd& A) {
    if (A.rows() != A.cols()) throw std::invalid_argument("condition_number_dense: square matrix required");
    if (A.rows() > 4000) throw std::invalid_argument("condition_number_dense: dimension above 4000");
    spectral_report rep;
    rep.method = "dense";
    rep.dimension = A.rows();
    int n = int(A.rows());
    if (n <= 256) {
        // long double Jacobi: condition numbers stay trustworthy deep past 1e12
        std::vector<long double> M(size_t(n) * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) M[size_t(i) * n + j] = (long double)(0.5 * (A(i, j) + A(j, i)));
        auto ev = jacobi_eigenvalues<long double>(std::move(M), n);
        rep.lambda_min = double(ev.front());
        rep.lambda_max = double(ev.back());
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
        rep.lambda_min = es.eigenvalues().minCoeff();
        rep.lambda_max = es.eigenvalues().maxCoeff();
        // residual of the extremal pairs
        int imin, imax;
        es.eigenvalues().minCoeff(&imin);
        es.eigenvalues().maxCoeff(&imax);
        double nA = A.norm();
        for (int k : {imin, imax}) {
            Eigen::VectorXd v = es.eigenvectors().col(k);
            rep.residual = std::max(rep.residual, (A * v - es.eigenvalues()[k] * v).norm() / nA);
        }
    }
    rep.kappa = rep.lambda_max / rep.lambda_min;
    return rep;
}

namespace {

// Lanczos extremal eigenvalue with full reorthogonalization.
template <class Op>
std::pair<double, double> lanczos_extremes(const Op& op, long n, double tol, int max_iters) {
    std::mt19937 rng(12345);
    std::normal_distribution<double> gauss;
    Eigen::VectorXd q(n);
    for (long i = 0; i < n; ++i) q[i] = gauss(rng);
    q.normalize();
    std::vector<Eigen::VectorXd> Q{q};
    std::vector<double> alpha, beta;
    double lo_prev = 0, hi_prev = 0;
    for (int it = 0; it < max_iters; ++it) {
        Eigen::VectorXd w = op(Q.back());
        double a = Q.back().dot(w);
        alpha.push_back(a);
        w -= a * Q.back();
        if (Q.size() > 1) w -= beta.back() * Q[Q.size() - 2];
        for (const auto& qk : Q) w -= qk.dot(w) * qk; // full reorthogonalization
        double b = w.norm();
        int m = int(alpha.size());
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            T(i, i) = alpha[i];
            if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta.size() > size_t(i) ? beta[i] : 0.0;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
        if (it > 4) {
            double dlo = std::abs(lo - lo_prev) / std::max(1e-300, std::abs(lo));
            double dhi = std::abs(hi - hi_prev) / std::max(1e-300, std::abs(hi));
            if (std::max(dlo, dhi) < tol && b > 0) return {lo, hi};
        }
        lo_prev = lo;
        hi_prev = hi;
        if (b < 1e-14 * std::abs(hi)) return {lo, hi}; // invariant subspace found
        beta.push_back(b);
        Q.push_back(w / b);
        if (long(Q.size()) > std::min<long>(n, max_iters)) return {lo, hi};
    }
    throw convergence_failure("lanczos_extremes: iteration budget exceeded");
}

} // namespace

spectral_report condition_number_iterative(const Eigen::SparseMatrix<double>& A_lower, double tol,
                                           int max_iters) {
    spectral_report rep;
    rep.method = "iterative";
    rep.dimension = A_lower.rows();
    long n = A_lower.rows();

    auto mul = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
        return A_lower.selfadjointView<Eigen::Lower>() * v;
    };
    auto [lo_unused, hi] = lanczos_extremes(mul, n, tol, max_iters);
    (void)lo_unused;
    rep.lambda_max = hi;

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower> ldlt;
    ldlt.compute(A_lower);
    if (ldlt.info() != Eigen::Success)
        throw factorization_failure("condition_number_iterative: factorization failed");
    auto inv = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return ldlt.solve(v); };
    auto [lo2, hi2] = lanczos_extremes(inv, n, tol, max_iters);
    (void)lo2;
    rep.lambda_min = 1.0 / hi2;
    rep.kappa = rep.lambda_max / rep.lambda_min;
    return rep;
}

} // namespace cutfem
