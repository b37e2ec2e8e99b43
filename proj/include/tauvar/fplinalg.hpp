#ifndef TAUVAR_FPLINALG_HPP
#define TAUVAR_FPLINALG_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "tauvar/fq.hpp"

namespace tauvar {

// Dense linear algebra over a SmallField (F_p when l = 1). Matrices are
// row-major vectors of rows.
namespace smalllin {

using Matrix = std::vector<std::vector<Digit>>;

// Reduced row echelon form in place; returns the pivot columns.
std::vector<std::size_t> rref(const SmallField& f, Matrix& a);
std::size_t rank(const SmallField& f, Matrix a);
// Basis of {x : a x = 0}, x of length cols.
Matrix nullspace(const SmallField& f, const Matrix& a, std::size_t cols);
// Some x with a x = b, or nullopt.
std::optional<std::vector<Digit>> solve(const SmallField& f, const Matrix& a, const std::vector<Digit>& b,
                                        std::size_t cols);
Matrix transpose(const Matrix& a, std::size_t cols);

}  // namespace smalllin
}  // namespace tauvar

#endif
