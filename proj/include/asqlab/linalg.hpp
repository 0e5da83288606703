#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "asqlab/errors.hpp"

// Dense helpers for the ellipsoid computations. Dimensions stay tiny (the
// geometry module works in R^2..R^4), so plain Gauss elimination and cyclic
// Jacobi sweeps are both adequate and easy to audit.

namespace asqlab {

struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> a; // row-major

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

    double& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    double at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }

    Matrix transpose() const {
        Matrix t(cols, rows);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
        return t;
    }

    Matrix operator*(const Matrix& o) const {
        if (cols != o.rows) throw InternalError("matrix product: shape mismatch");
        Matrix r(rows, o.cols);
        for (int i = 0; i < rows; ++i)
            for (int k = 0; k < cols; ++k) {
                double v = at(i, k);
                if (v == 0.0) continue;
                for (int j = 0; j < o.cols; ++j) r.at(i, j) += v * o.at(k, j);
            }
        return r;
    }

    std::vector<double> mul(const std::vector<double>& v) const {
        if (static_cast<int>(v.size()) != cols) throw InternalError("matvec: shape mismatch");
        std::vector<double> r(static_cast<std::size_t>(rows), 0.0);
        for (int i = 0; i < rows; ++i) {
            double s = 0.0;
            for (int j = 0; j < cols; ++j) s += at(i, j) * v[static_cast<std::size_t>(j)];
            r[static_cast<std::size_t>(i)] = s;
        }
        return r;
    }
};

inline double dot(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline double norm2(const std::vector<double>& x) { return std::sqrt(dot(x, x)); }

// Gauss-Jordan with partial pivoting; returns the inverse. Throws when a
// pivot underflows, which callers treat as a rank failure.
inline Matrix inverse(Matrix m) {
    if (m.rows != m.cols) throw InternalError("inverse: matrix not square");
    int n = m.rows;
    Matrix inv = Matrix::identity(n);
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(m.at(r, col)) > std::abs(m.at(piv, col))) piv = r;
        if (std::abs(m.at(piv, col)) < 1e-14)
            throw InputError("singular matrix: points do not span the space");
        if (piv != col)
            for (int j = 0; j < n; ++j) {
                std::swap(m.at(piv, j), m.at(col, j));
                std::swap(inv.at(piv, j), inv.at(col, j));
            }
        double d = m.at(col, col);
        for (int j = 0; j < n; ++j) {
            m.at(col, j) /= d;
            inv.at(col, j) /= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            double f = m.at(r, col);
            if (f == 0.0) continue;
            for (int j = 0; j < n; ++j) {
                m.at(r, j) -= f * m.at(col, j);
                inv.at(r, j) -= f * inv.at(col, j);
            }
        }
    }
    return inv;
}

inline std::vector<double> solve(Matrix m, std::vector<double> b) {
    if (m.rows != m.cols || static_cast<int>(b.size()) != m.rows)
        throw InternalError("solve: shape mismatch");
    int n = m.rows;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(m.at(r, col)) > std::abs(m.at(piv, col))) piv = r;
        if (std::abs(m.at(piv, col)) < 1e-14)
            throw InputError("singular matrix: points do not span the space");
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(m.at(piv, j), m.at(col, j));
            std::swap(b[static_cast<std::size_t>(piv)], b[static_cast<std::size_t>(col)]);
        }
        for (int r = col + 1; r < n; ++r) {
            double f = m.at(r, col) / m.at(col, col);
            if (f == 0.0) continue;
            for (int j = col; j < n; ++j) m.at(r, j) -= f * m.at(col, j);
            b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(col)];
        }
    }
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[static_cast<std::size_t>(r)];
        for (int j = r + 1; j < n; ++j) s -= m.at(r, j) * x[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(r)] = s / m.at(r, r);
    }
    return x;
}

inline double determinant(Matrix m) {
    if (m.rows != m.cols) throw InternalError("determinant: matrix not square");
    int n = m.rows;
    double det = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(m.at(r, col)) > std::abs(m.at(piv, col))) piv = r;
        if (std::abs(m.at(piv, col)) == 0.0) return 0.0;
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(m.at(piv, j), m.at(col, j));
            det = -det;
        }
        det *= m.at(col, col);
        for (int r = col + 1; r < n; ++r) {
            double f = m.at(r, col) / m.at(col, col);
            for (int j = col; j < n; ++j) m.at(r, j) -= f * m.at(col, j);
        }
    }
    return det;
}

struct EigenSym {
    std::vector<double> values; // ascending
    Matrix vectors;             // column i pairs with values[i]
};

// Cyclic Jacobi: rotates away the largest off-diagonal entries until the
// off-diagonal mass is negligible. Input must be symmetric.
inline EigenSym jacobi_eigensym(Matrix m, double tol = 1e-13, int max_sweeps = 100) {
    if (m.rows != m.cols) throw InternalError("eigensym: matrix not square");
    int n = m.rows;
    Matrix v = Matrix::identity(n);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += m.at(i, j) * m.at(i, j);
        if (off < tol * tol) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(m.at(p, q)) < 1e-300) continue;
                double theta = (m.at(q, q) - m.at(p, p)) / (2.0 * m.at(p, q));
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int i = 0; i < n; ++i) {
                    double mip = m.at(i, p), miq = m.at(i, q);
                    m.at(i, p) = c * mip - s * miq;
                    m.at(i, q) = s * mip + c * miq;
                }
                for (int i = 0; i < n; ++i) {
                    double mpi = m.at(p, i), mqi = m.at(q, i);
                    m.at(p, i) = c * mpi - s * mqi;
                    m.at(q, i) = s * mpi + c * mqi;
                }
                for (int i = 0; i < n; ++i) {
                    double vip = v.at(i, p), viq = v.at(i, q);
                    v.at(i, p) = c * vip - s * viq;
                    v.at(i, q) = s * vip + c * viq;
                }
            }
    }
    EigenSym e;
    e.values.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) e.values[static_cast<std::size_t>(i)] = m.at(i, i);
    // sort ascending, permuting columns alongside
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        return e.values[static_cast<std::size_t>(x)] < e.values[static_cast<std::size_t>(y)];
    });
    EigenSym out;
    out.values.resize(static_cast<std::size_t>(n));
    out.vectors = Matrix(n, n);
    for (int c = 0; c < n; ++c) {
        int src = order[static_cast<std::size_t>(c)];
        out.values[static_cast<std::size_t>(c)] = e.values[static_cast<std::size_t>(src)];
        for (int r = 0; r < n; ++r) out.vectors.at(r, c) = v.at(r, src);
    }
    return out;
}

// Q^{-1/2} for symmetric positive definite Q: maps the Euclidean sphere
// onto the boundary of {x : x'Qx <= 1}.
inline Matrix sym_inv_sqrt(const Matrix& q) {
    EigenSym e = jacobi_eigensym(q);
    int n = q.rows;
    Matrix d(n, n);
    for (int i = 0; i < n; ++i) {
        double lam = e.values[static_cast<std::size_t>(i)];
        if (lam <= 0.0) throw InputError("matrix not positive definite");
        d.at(i, i) = 1.0 / std::sqrt(lam);
    }
    return e.vectors * d * e.vectors.transpose();
}

} // namespace asqlab
