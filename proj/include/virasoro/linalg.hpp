#pragma once

#include "virasoro/scalar.hpp"

#include <optional>
#include <vector>

namespace vir {

struct Matrix {
    int rows = 0, cols = 0;
    std::vector<Scalar> a;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}
    static Matrix identity(int n);

    Scalar& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const Scalar& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    bool is_zero() const;
    Matrix transpose() const;

    friend Matrix operator*(const Matrix& x, const Matrix& y);
    friend Matrix operator+(const Matrix& x, const Matrix& y);
    friend Matrix operator-(const Matrix& x, const Matrix& y);
    friend Matrix operator*(const Scalar& k, const Matrix& x);
    friend bool operator==(const Matrix& x, const Matrix& y);
};

// reduced row echelon form in place; returns pivot columns
std::vector<int> rref(Matrix& m);
int rank(Matrix m);
Scalar determinant(Matrix m);
// basis of {x : m x = 0}, one column vector per entry
std::vector<std::vector<Scalar>> kernel(const Matrix& m);
// some solution of m x = b, or nullopt when inconsistent
std::optional<std::vector<Scalar>> solve(const Matrix& m, const std::vector<Scalar>& b);
std::optional<Matrix> inverse(const Matrix& m);
// stack rows of y under x
Matrix vstack(const Matrix& x, const Matrix& y);

}  // namespace vir
