#pragma once
#include <cmath>
#include <cstddef>
#include <vector>

#include "osilp/errors.hpp"

// Small dense linear algebra on std::vector<double>. Everything here is
// plain scalar loops on purpose: summation order is part of the output
// contract (bit-identical reruns), so no BLAS and no reassociation.

namespace osilp {

using Vec = std::vector<double>;

struct Mat {
    int rows = 0, cols = 0;
    std::vector<double> a;  // row-major

    Mat() = default;
    Mat(int r, int c, double fill = 0.0) : rows(r), cols(c), a(static_cast<size_t>(r) * c, fill) {}

    double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    const double* row(int i) const { return a.data() + static_cast<size_t>(i) * cols; }
    double* row(int i) { return a.data() + static_cast<size_t>(i) * cols; }
};

inline double dot(const Vec& u, const Vec& v) {
    if (u.size() != v.size()) throw dim_error("dot: size mismatch");
    double s = 0.0;
    for (size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return s;
}

inline double dot(const double* u, const double* v, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += u[i] * v[i];
    return s;
}

inline double norm2(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

inline double norm_inf(const Vec& v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::fabs(x));
    return s;
}

inline double norm2_pos(const Vec& v) {  // || v^+ ||_2
    double s = 0.0;
    for (double x : v)
        if (x > 0.0) s += x * x;
    return std::sqrt(s);
}

inline void axpy(double alpha, const Vec& x, Vec& y) {
    if (x.size() != y.size()) throw dim_error("axpy: size mismatch");
    for (size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline double vmin(const Vec& v) {
    double s = v.empty() ? 0.0 : v[0];
    for (double x : v) s = std::min(s, x);
    return s;
}

inline double vmax(const Vec& v) {
    double s = v.empty() ? 0.0 : v[0];
    for (double x : v) s = std::max(s, x);
    return s;
}

inline bool all_finite(const Vec& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

// Solve A x = rhs by Gaussian elimination with partial pivoting.
// A is destroyed. Returns false when the matrix is numerically singular.
inline bool solve_inplace(Mat& A, Vec& rhs) {
    const int n = A.rows;
    if (A.cols != n || static_cast<int>(rhs.size()) != n) throw dim_error("solve_inplace: not square");
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::fabs(A(k, k));
        for (int i = k + 1; i < n; ++i) {
            double v = std::fabs(A(i, k));
            if (v > best) { best = v; piv = i; }
        }
        if (best < 1e-13) return false;
        if (piv != k) {
            for (int j = k; j < n; ++j) std::swap(A(k, j), A(piv, j));
            std::swap(rhs[k], rhs[piv]);
        }
        const double inv = 1.0 / A(k, k);
        for (int i = k + 1; i < n; ++i) {
            double f = A(i, k) * inv;
            if (f == 0.0) continue;
            A(i, k) = 0.0;
            for (int j = k + 1; j < n; ++j) A(i, j) -= f * A(k, j);
            rhs[i] -= f * rhs[k];
        }
    }
    for (int k = n - 1; k >= 0; --k) {
        double s = rhs[k];
        for (int j = k + 1; j < n; ++j) s -= A(k, j) * rhs[j];
        rhs[k] = s / A(k, k);
    }
    return true;
}

// In-place Cholesky A = L L^T on the lower triangle. Returns false if A is
// not positive definite to working precision.
inline bool cholesky_inplace(Mat& A) {
    const int n = A.rows;
    if (A.cols != n) throw dim_error("cholesky: not square");
    for (int j = 0; j < n; ++j) {
        double d = A(j, j);
        for (int k = 0; k < j; ++k) d -= A(j, k) * A(j, k);
        if (d <= 0.0 || !std::isfinite(d)) return false;
        const double l = std::sqrt(d);
        A(j, j) = l;
        for (int i = j + 1; i < n; ++i) {
            double s = A(i, j);
            for (int k = 0; k < j; ++k) s -= A(i, k) * A(j, k);
            A(i, j) = s / l;
        }
    }
    return true;
}

// Solve L L^T x = rhs given the factor from cholesky_inplace.
inline void cholesky_solve(const Mat& L, Vec& rhs) {
    const int n = L.rows;
    for (int i = 0; i < n; ++i) {
        double s = rhs[i];
        for (int k = 0; k < i; ++k) s -= L(i, k) * rhs[k];
        rhs[i] = s / L(i, i);
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = rhs[i];
        for (int k = i + 1; k < n; ++k) s -= L(k, i) * rhs[k];
        rhs[i] = s / L(i, i);
    }
}

}  // namespace osilp
