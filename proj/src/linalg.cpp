#include "virasoro/linalg.hpp"

#include <stdexcept>

namespace vir {

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

bool Matrix::is_zero() const {
    for (const auto& x : a)
        if (sgn(x) != 0) return false;
    return true;
}

Matrix Matrix::transpose() const {
    Matrix t(cols, rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix operator*(const Matrix& x, const Matrix& y) {
    if (x.cols != y.rows) throw std::invalid_argument("matrix shape mismatch in product");
    Matrix r(x.rows, y.cols);
    Scalar t;
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const Scalar& xik = x(i, k);
            if (sgn(xik) == 0) continue;
            for (int j = 0; j < y.cols; ++j) {
                const Scalar& ykj = y(k, j);
                if (sgn(ykj) == 0) continue;
                t = xik * ykj;
                r(i, j) += t;
            }
        }
    return r;
}

Matrix operator+(const Matrix& x, const Matrix& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw std::invalid_argument("matrix shape mismatch in sum");
    Matrix r = x;
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] += y.a[i];
    return r;
}

Matrix operator-(const Matrix& x, const Matrix& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw std::invalid_argument("matrix shape mismatch in difference");
    Matrix r = x;
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] -= y.a[i];
    return r;
}

Matrix operator*(const Scalar& k, const Matrix& x) {
    Matrix r = x;
    for (auto& v : r.a) v *= k;
    return r;
}

bool operator==(const Matrix& x, const Matrix& y) {
    return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
}

std::vector<int> rref(Matrix& m) {
    std::vector<int> piv;
    int r = 0;
    for (int c = 0; c < m.cols && r < m.rows; ++c) {
        int p = -1;
        for (int i = r; i < m.rows; ++i)
            if (sgn(m(i, c)) != 0) {
                p = i;
                break;
            }
        if (p < 0) continue;
        if (p != r)
            for (int j = 0; j < m.cols; ++j) std::swap(m(p, j), m(r, j));
        Scalar inv = 1 / m(r, c);
        for (int j = c; j < m.cols; ++j) m(r, j) *= inv;
        for (int i = 0; i < m.rows; ++i) {
            if (i == r || sgn(m(i, c)) == 0) continue;
            Scalar f = m(i, c);
            for (int j = c; j < m.cols; ++j)
                if (sgn(m(r, j)) != 0) m(i, j) -= f * m(r, j);
        }
        piv.push_back(c);
        ++r;
    }
    return piv;
}

int rank(Matrix m) { return static_cast<int>(rref(m).size()); }

Scalar determinant(Matrix m) {
    if (m.rows != m.cols) throw std::invalid_argument("determinant of non-square matrix");
    int n = m.rows;
    Scalar det = 1;
    for (int c = 0; c < n; ++c) {
        int p = -1;
        for (int i = c; i < n; ++i)
            if (sgn(m(i, c)) != 0) {
                p = i;
                break;
            }
        if (p < 0) return 0;
        if (p != c) {
            for (int j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
            det = -det;
        }
        det *= m(c, c);
        for (int i = c + 1; i < n; ++i) {
            if (sgn(m(i, c)) == 0) continue;
            Scalar f = m(i, c) / m(c, c);
            for (int j = c; j < n; ++j) m(i, j) -= f * m(c, j);
        }
    }
    return det;
}

std::vector<std::vector<Scalar>> kernel(const Matrix& m0) {
    Matrix m = m0;
    auto piv = rref(m);
    std::vector<bool> is_piv(m.cols, false);
    for (int c : piv) is_piv[c] = true;
    std::vector<std::vector<Scalar>> out;
    for (int f = 0; f < m.cols; ++f) {
        if (is_piv[f]) continue;
        std::vector<Scalar> v(m.cols);
        v[f] = 1;
        for (size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m(static_cast<int>(r), f);
        out.push_back(std::move(v));
    }
    return out;
}

std::optional<std::vector<Scalar>> solve(const Matrix& m0, const std::vector<Scalar>& b) {
    Matrix aug(m0.rows, m0.cols + 1);
    for (int i = 0; i < m0.rows; ++i) {
        for (int j = 0; j < m0.cols; ++j) aug(i, j) = m0(i, j);
        aug(i, m0.cols) = b[i];
    }
    auto piv = rref(aug);
    if (!piv.empty() && piv.back() == m0.cols) return std::nullopt;
    std::vector<Scalar> x(m0.cols);
    for (size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug(static_cast<int>(r), m0.cols);
    return x;
}

std::optional<Matrix> inverse(const Matrix& m0) {
    if (m0.rows != m0.cols) return std::nullopt;
    int n = m0.rows;
    Matrix aug(n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug(i, j) = m0(i, j);
        aug(i, n + i) = 1;
    }
    auto piv = rref(aug);
    if (static_cast<int>(piv.size()) < n || (n > 0 && piv[n - 1] != n - 1)) return std::nullopt;
    Matrix inv(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
    return inv;
}

Matrix vstack(const Matrix& x, const Matrix& y) {
    if (x.rows == 0) return y;
    if (y.rows == 0) return x;
    if (x.cols != y.cols) throw std::invalid_argument("vstack column mismatch");
    Matrix r(x.rows + y.rows, x.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) r(i, j) = x(i, j);
    for (int i = 0; i < y.rows; ++i)
        for (int j = 0; j < y.cols; ++j) r(x.rows + i, j) = y(i, j);
    return r;
}

}  // namespace vir
