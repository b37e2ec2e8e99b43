#ifndef TAUVAR_TESTS_SUPPORT_HPP
#define TAUVAR_TESTS_SUPPORT_HPP

#include <random>

#include "tauvar/field.hpp"
#include "tauvar/ore.hpp"
#include "tauvar/orelat.hpp"

namespace tauvar::testing {

// Random element; function-field elements have small numerator and
// denominator degrees, perfect-closure elements a random level <= max_level.
inline FieldElement random_element(const FieldPtr& f, std::mt19937& rng, int max_deg = 2, unsigned max_level = 1) {
    if (f->is_finite()) {
        std::uniform_int_distribution<Digit> d(0, f->p() - 1);
        std::vector<Digit> c(f->degree_over_fp());
        for (auto& x : c) x = d(rng);
        return f->from_coeffs(c);
    }
    std::uniform_int_distribution<Digit> d(0, f->q() - 1);
    std::uniform_int_distribution<int> deg(0, max_deg);
    FqVec num(deg(rng) + 1), den(deg(rng) + 1);
    for (auto& x : num) x = d(rng);
    for (auto& x : den) x = d(rng);
    fqpoly::trim(den);
    if (den.empty()) den = {1};
    unsigned level = 0;
    if (f->kind() == FieldKind::PerfectClosure && max_level > 0)
        level = std::uniform_int_distribution<unsigned>(0, max_level)(rng);
    return f->from_fraction(num, den, level);
}

inline FieldElement random_nonzero(const FieldPtr& f, std::mt19937& rng, int max_deg = 2, unsigned max_level = 1) {
    while (true) {
        FieldElement x = random_element(f, rng, max_deg, max_level);
        if (!x.is_zero()) return x;
    }
}

// Elements of F_q, encoded as Digits, pushed into the backend.
inline FieldElement random_fq_element(const FieldPtr& f, std::mt19937& rng) {
    return f->from_fq(std::uniform_int_distribution<Digit>(0, f->q() - 1)(rng));
}

inline OrePoly random_ore(const FieldPtr& f, std::mt19937& rng, int max_deg, int coeff_deg = 1,
                          unsigned max_level = 1) {
    const int d = std::uniform_int_distribution<int>(-1, max_deg)(rng);
    std::vector<FieldElement> c;
    for (int i = 0; i <= d; ++i) c.push_back(random_element(f, rng, coeff_deg, max_level));
    return OrePoly(f, std::move(c));
}

inline OrePoly random_nonzero_ore(const FieldPtr& f, std::mt19937& rng, int max_deg, int coeff_deg = 1,
                                  unsigned max_level = 1) {
    while (true) {
        OrePoly p = random_ore(f, rng, max_deg, coeff_deg, max_level);
        if (!p.is_zero()) return p;
    }
}

inline OreMatrix random_matrix(const FieldPtr& f, std::mt19937& rng, std::size_t rows, std::size_t cols, int deg,
                               int coeff_deg = 1) {
    OreMatrix m(f, rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = random_ore(f, rng, deg, coeff_deg);
    return m;
}

// A random product of elementary matrices together with its inverse.
inline std::pair<OreMatrix, OreMatrix> random_unimodular(const FieldPtr& f, std::mt19937& rng, std::size_t n,
                                                         int steps, int deg, int coeff_deg = 0) {
    OreMatrix W = OreMatrix::identity(f, n), W_inv = OreMatrix::identity(f, n);
    if (n < 2) return {W, W_inv};
    std::uniform_int_distribution<std::size_t> idx(0, n - 1);
    for (int s = 0; s < steps; ++s) {
        const std::size_t i = idx(rng), j = idx(rng);
        if (i == j) continue;
        const OrePoly c = random_ore(f, rng, deg, coeff_deg);
        OreMatrix E = OreMatrix::identity(f, n), E_inv = OreMatrix::identity(f, n);
        E(i, j) = c;
        E_inv(i, j) = -c;
        W = E * W;
        W_inv = W_inv * E_inv;
    }
    return {W, W_inv};
}

}  // namespace tauvar::testing

#endif
