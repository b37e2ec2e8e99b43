#include "tauvar/fplinalg.hpp"

namespace tauvar::smalllin {

std::vector<std::size_t> rref(const SmallField& f, Matrix& a) {
    std::vector<std::size_t> pivots;
    if (a.empty()) return pivots;
    const std::size_t cols = a[0].size();
    std::size_t row = 0;
    for (std::size_t c = 0; c < cols && row < a.size(); ++c) {
        std::size_t piv = row;
        while (piv < a.size() && a[piv][c] == 0) ++piv;
        if (piv == a.size()) continue;
        std::swap(a[piv], a[row]);
        const Digit inv = f.inv(a[row][c]);
        for (auto& x : a[row]) x = f.mul(x, inv);
        for (std::size_t r = 0; r < a.size(); ++r) {
            if (r == row || a[r][c] == 0) continue;
            const Digit factor = a[r][c];
            for (std::size_t j = c; j < cols; ++j)
                if (a[row][j] != 0) a[r][j] = f.sub(a[r][j], f.mul(factor, a[row][j]));
        }
        pivots.push_back(c);
        ++row;
    }
    return pivots;
}

std::size_t rank(const SmallField& f, Matrix a) { return rref(f, a).size(); }

Matrix nullspace(const SmallField& f, const Matrix& a, std::size_t cols) {
    Matrix m = a;
    for (auto& r : m) r.resize(cols, 0);
    const auto pivots = rref(f, m);
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivots) is_pivot[c] = true;
    Matrix basis;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<Digit> v(cols, 0);
        v[free] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = f.neg(m[i][free]);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<std::vector<Digit>> solve(const SmallField& f, const Matrix& a, const std::vector<Digit>& b,
                                        std::size_t cols) {
    Matrix m;
    m.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto row = a[i];
        row.resize(cols, 0);
        row.push_back(b[i]);
        m.push_back(std::move(row));
    }
    if (m.empty()) return std::vector<Digit>(cols, 0);
    const auto pivots = rref(f, m);
    if (!pivots.empty() && pivots.back() == cols) return std::nullopt;
    std::vector<Digit> x(cols, 0);
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = m[i][cols];
    return x;
}

Matrix transpose(const Matrix& a, std::size_t cols) {
    Matrix t(cols, std::vector<Digit>(a.size(), 0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < cols && j < a[i].size(); ++j) t[j][i] = a[i][j];
    return t;
}

}  // namespace tauvar::smalllin
