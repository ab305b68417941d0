#ifndef STEENWEB_LINALG_HPP
#define STEENWEB_LINALG_HPP

#include <optional>
#include <utility>
#include <vector>

#include "error.hpp"

namespace steenweb {

/* Dense row-major matrix over a field's value type. */
template <class T>
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<T> data;

    Matrix() = default;
    Matrix(int r, int c, const T& fill) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, fill) {}

    T& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    const T& operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

    friend bool operator==(const Matrix& a, const Matrix& b)
    {
        return a.rows == b.rows && a.cols == b.cols && a.data == b.data;
    }
};

template <class Field>
using FMatrix = Matrix<typename Field::value_type>;

template <class Field>
using Vec = std::vector<typename Field::value_type>;

template <class Field>
FMatrix<Field> zero_matrix(const Field& f, int r, int c)
{
    return FMatrix<Field>(r, c, f.zero());
}

template <class Field>
FMatrix<Field> identity_matrix(const Field& f, int n)
{
    auto m = zero_matrix(f, n, n);
    for (int i = 0; i < n; ++i)
        m(i, i) = f.one();
    return m;
}

template <class Field>
FMatrix<Field> multiply(const Field& f, const FMatrix<Field>& a, const FMatrix<Field>& b)
{
    ensure(a.cols == b.rows, "matrix shape mismatch");
    auto out = zero_matrix(f, a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k) {
            if (f.is_zero(a(i, k)))
                continue;
            for (int j = 0; j < b.cols; ++j)
                out(i, j) = f.add(out(i, j), f.mul(a(i, k), b(k, j)));
        }
    return out;
}

template <class Field>
Vec<Field> apply(const Field& f, const FMatrix<Field>& a, const Vec<Field>& v)
{
    ensure(static_cast<int>(v.size()) == a.cols, "vector length mismatch");
    Vec<Field> out(static_cast<std::size_t>(a.rows), f.zero());
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j)
            if (!f.is_zero(v[j]))
                out[i] = f.add(out[i], f.mul(a(i, j), v[j]));
    return out;
}

/* In-place reduced row echelon form; returns pivot columns. */
template <class Field>
std::vector<int> rref(const Field& f, FMatrix<Field>& m)
{
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < m.cols && row < m.rows; ++col) {
        int sel = -1;
        for (int r = row; r < m.rows; ++r)
            if (!f.is_zero(m(r, col))) {
                sel = r;
                break;
            }
        if (sel < 0)
            continue;
        if (sel != row)
            for (int c = 0; c < m.cols; ++c)
                std::swap(m(sel, c), m(row, c));
        const auto inv = f.inv(m(row, col));
        for (int c = col; c < m.cols; ++c)
            m(row, c) = f.mul(m(row, c), inv);
        for (int r = 0; r < m.rows; ++r) {
            if (r == row || f.is_zero(m(r, col)))
                continue;
            const auto factor = m(r, col);
            for (int c = col; c < m.cols; ++c)
                m(r, c) = f.sub(m(r, c), f.mul(factor, m(row, c)));
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

template <class Field>
int rank(const Field& f, FMatrix<Field> m)
{
    return static_cast<int>(rref(f, m).size());
}

/* Basis of {v : m v = 0}. */
template <class Field>
std::vector<Vec<Field>> nullspace(const Field& f, FMatrix<Field> m)
{
    const auto pivots = rref(f, m);
    std::vector<bool> is_pivot(static_cast<std::size_t>(m.cols), false);
    for (int c : pivots)
        is_pivot[c] = true;
    std::vector<Vec<Field>> basis;
    for (int free = 0; free < m.cols; ++free) {
        if (is_pivot[free])
            continue;
        Vec<Field> v(static_cast<std::size_t>(m.cols), f.zero());
        v[free] = f.one();
        for (std::size_t r = 0; r < pivots.size(); ++r)
            v[pivots[r]] = f.neg(m(static_cast<int>(r), free));
        basis.push_back(std::move(v));
    }
    return basis;
}

/* Some solution of m x = b, if one exists. */
template <class Field>
std::optional<Vec<Field>> solve(const Field& f, const FMatrix<Field>& m, const Vec<Field>& b)
{
    ensure(static_cast<int>(b.size()) == m.rows, "rhs length mismatch");
    auto aug = zero_matrix(f, m.rows, m.cols + 1);
    for (int r = 0; r < m.rows; ++r) {
        for (int c = 0; c < m.cols; ++c)
            aug(r, c) = m(r, c);
        aug(r, m.cols) = b[r];
    }
    const auto pivots = rref(f, aug);
    if (!pivots.empty() && pivots.back() == m.cols)
        return std::nullopt;
    Vec<Field> x(static_cast<std::size_t>(m.cols), f.zero());
    for (std::size_t r = 0; r < pivots.size(); ++r)
        x[pivots[r]] = aug(static_cast<int>(r), m.cols);
    return x;
}

template <class Field>
std::optional<FMatrix<Field>> inverse(const Field& f, const FMatrix<Field>& m)
{
    ensure(m.rows == m.cols, "inverse of a non-square matrix");
    const int n = m.rows;
    if (n == 0)
        return FMatrix<Field>();
    auto aug = zero_matrix(f, n, 2 * n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c)
            aug(r, c) = m(r, c);
        aug(r, n + r) = f.one();
    }
    const auto pivots = rref(f, aug);
    if (static_cast<int>(pivots.size()) < n || pivots[n - 1] != n - 1)
        return std::nullopt;
    auto out = zero_matrix(f, n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            out(r, c) = aug(r, n + c);
    return out;
}

} // namespace steenweb

#endif // STEENWEB_LINALG_HPP
