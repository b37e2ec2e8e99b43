#include "tauvar/klinalg.hpp"

#include "tauvar/errors.hpp"

namespace tauvar::klin {

Matrix zeros(const FieldPtr& f, std::size_t rows, std::size_t cols) { return Matrix(rows, Vector(cols, f->zero())); }

Matrix identity(const FieldPtr& f, std::size_t n) {
    Matrix m = zeros(f, n, n);
    for (std::size_t i = 0; i < n; ++i) m[i][i] = f->one();
    return m;
}

std::vector<std::size_t> rref(Matrix& a) {
    std::vector<std::size_t> pivots;
    if (a.empty()) return pivots;
    const std::size_t rows = a.size(), cols = a[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && a[p][c].is_zero()) ++p;
        if (p == rows) continue;
        std::swap(a[r], a[p]);
        const FieldElement inv = a[r][c].inverse();
        for (auto& x : a[r]) x *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c].is_zero()) continue;
            const FieldElement factor = a[i][c];
            for (std::size_t j = c; j < cols; ++j)
                if (!a[r][j].is_zero()) a[i][j] -= factor * a[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

std::size_t rank(Matrix a) { return rref(a).size(); }

Matrix nullspace(const FieldPtr& f, const Matrix& a0, std::size_t cols) {
    Matrix a = a0;
    const auto pivots = rref(a);
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivots) is_pivot[c] = true;
    Matrix out;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        Vector v(cols, f->zero());
        v[free] = f->one();
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a[r][free];
        out.push_back(std::move(v));
    }
    return out;
}

std::optional<Vector> solve(const FieldPtr& f, const Matrix& a, const Vector& b, std::size_t cols) {
    Matrix aug = a;
    for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
    const auto pivots = rref(aug);
    if (!pivots.empty() && pivots.back() == cols) return std::nullopt;
    Vector x(cols, f->zero());
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug[r][cols];
    return x;
}

Matrix multiply(const FieldPtr& f, const Matrix& a, const Matrix& b, std::size_t inner, std::size_t cols) {
    Matrix out = zeros(f, a.size(), cols);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < inner; ++k) {
            if (a[i][k].is_zero()) continue;
            for (std::size_t j = 0; j < cols; ++j)
                if (!b[k][j].is_zero()) out[i][j] += a[i][k] * b[k][j];
        }
    return out;
}

Vector apply(const FieldPtr& f, const Matrix& a, const Vector& x) {
    Vector out(a.size(), f->zero());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j)
            if (!a[i][j].is_zero() && !x[j].is_zero()) out[i] += a[i][j] * x[j];
    return out;
}

Matrix from_columns(const FieldPtr& f, const std::vector<Vector>& cols, std::size_t rows) {
    Matrix m = zeros(f, rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < rows; ++i) m[i][j] = cols[j][i];
    return m;
}

bool equal(const Matrix& a, const Matrix& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != b[i].size()) return false;
        for (std::size_t j = 0; j < a[i].size(); ++j)
            if (a[i][j] != b[i][j]) return false;
    }
    return true;
}

}  // namespace tauvar::klin
