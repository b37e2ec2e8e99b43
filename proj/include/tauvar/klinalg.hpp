#ifndef TAUVAR_KLINALG_HPP
#define TAUVAR_KLINALG_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "tauvar/field.hpp"

namespace tauvar {

// Dense linear algebra over a coefficient backend K.
namespace klin {

using Vector = std::vector<FieldElement>;
using Matrix = std::vector<Vector>;

Matrix zeros(const FieldPtr& f, std::size_t rows, std::size_t cols);
Matrix identity(const FieldPtr& f, std::size_t n);
// Reduced row echelon form in place; returns the pivot columns.
std::vector<std::size_t> rref(Matrix& a);
std::size_t rank(Matrix a);
// Basis of {x : a x = 0} read off the reduced form (one vector per free column).
Matrix nullspace(const FieldPtr& f, const Matrix& a, std::size_t cols);
std::optional<Vector> solve(const FieldPtr& f, const Matrix& a, const Vector& b, std::size_t cols);
Matrix multiply(const FieldPtr& f, const Matrix& a, const Matrix& b, std::size_t inner, std::size_t cols);
Vector apply(const FieldPtr& f, const Matrix& a, const Vector& x);
// Columns given as vectors, assembled into a matrix with `rows` rows.
Matrix from_columns(const FieldPtr& f, const std::vector<Vector>& cols, std::size_t rows);
bool equal(const Matrix& a, const Matrix& b);

}  // namespace klin
}  // namespace tauvar

#endif
