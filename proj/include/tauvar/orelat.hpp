#ifndef TAUVAR_ORELAT_HPP
#define TAUVAR_ORELAT_HPP

#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "tauvar/ore.hpp"

namespace tauvar {

// A row vector over K{tau}; entry j is the polynomial applied to X_j.
using OreRow = std::vector<OrePoly>;

class OreMatrix {
   public:
    OreMatrix() = default;
    OreMatrix(FieldPtr field, std::size_t rows, std::size_t cols);
    OreMatrix(FieldPtr field, std::size_t cols, std::vector<OreRow> rows);

    static OreMatrix identity(const FieldPtr& field, std::size_t n);
    static OreMatrix diagonal(const FieldPtr& field, const std::vector<OrePoly>& d);

    const FieldPtr& field() const noexcept { return field_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    OrePoly& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const OrePoly& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
    OreRow row(std::size_t i) const;
    std::vector<OreRow> row_list() const;
    OreMatrix column_block(const std::vector<std::size_t>& cols) const;
    OreMatrix row_block(const std::vector<std::size_t>& rows) const;

    OreMatrix operator*(const OreMatrix& o) const;
    OreMatrix operator+(const OreMatrix& o) const;
    OreMatrix operator-(const OreMatrix& o) const;
    bool operator==(const OreMatrix& o) const;
    bool operator!=(const OreMatrix& o) const { return !(*this == o); }
    bool is_zero() const;
    bool is_identity() const;
    bool is_diagonal() const;

    // Stacks rows of `below` under this matrix.
    OreMatrix stacked(const OreMatrix& below) const;
    OreMatrix with_field(const FieldPtr& f) const;
    OreMatrix map(const Embedding& e) const;
    int max_degree() const;

    std::string to_string() const;

   private:
    FieldPtr field_;
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<OrePoly> a_;
};

OreRow zero_row(const FieldPtr& field, std::size_t n);
OreRow unit_row(const FieldPtr& field, std::size_t n, std::size_t j);
OreRow row_times(const OreRow& c, const OreMatrix& m);
OreRow row_add(const OreRow& a, const OreRow& b);
OreRow row_sub(const OreRow& a, const OreRow& b);
OreRow row_scale_left(const OrePoly& c, const OreRow& a);
bool row_is_zero(const OreRow& a);
std::string row_to_string(const OreRow& a);
OreRow row_with_field(const OreRow& a, const FieldPtr& f);

// The field both operands can be moved to: equal backends, or F_q(T) and its
// perfect closure (which yields the closure). MixedBackends otherwise.
FieldPtr common_field(const FieldPtr& a, const FieldPtr& b);

struct HermiteForm {
    OreMatrix H;                       // row echelon, monic pivots, zero rows last
    OreMatrix T_left;                  // H = T_left * L, unimodular
    std::vector<std::size_t> pivots;   // pivot column of each nonzero row
    std::size_t rank() const noexcept { return pivots.size(); }
};

// Left-division row reduction; works on every backend.
HermiteForm hermite(const OreMatrix& L);

struct DiagForm {
    OreMatrix U, D, V, U_inv, V_inv;
    std::size_t r = 0;     // nonzero diagonal entries, which come first
    bool lifted = false;   // F_q(T) input was moved to its perfect closure
};

// U L V = D with D diagonal; F_q(T) input is lifted to the perfect closure
// and pushed back when every coefficient lies in F_q(T) again.
DiagForm diagonalize(const OreMatrix& L);

// A finitely generated left K{tau}-submodule of Lambda_n, given by
// generator rows. Hermite and diagonal forms are cached lazily; copies
// share the cache.
class TauSubmodule {
   public:
    TauSubmodule(FieldPtr field, std::size_t n);
    explicit TauSubmodule(OreMatrix gens);
    TauSubmodule(FieldPtr field, std::size_t n, const std::vector<OreRow>& gens);

    static TauSubmodule full(const FieldPtr& field, std::size_t n);

    const FieldPtr& field() const noexcept { return gens_.field(); }
    std::size_t n() const noexcept { return gens_.cols(); }
    const OreMatrix& gens() const noexcept { return gens_; }

    const HermiteForm& hermite_form() const;
    const DiagForm& diag_form() const;
    // Nonzero Hermite rows: a left basis of the module.
    std::vector<OreRow> basis() const;
    bool is_zero_module() const { return hermite_form().rank() == 0; }

    // Remainder of f after reduction by the Hermite pivots (K-linear in f).
    OreRow reduce(const OreRow& f) const;
    bool contains(const OreRow& f) const;
    // c with c * gens = f, when f is a member.
    std::optional<OreRow> coefficients(const OreRow& f) const;

    TauSubmodule with_field(const FieldPtr& f) const;
    std::string to_string() const;

   private:
    struct Cache {
        std::once_flag hermite_once, diag_once;
        std::optional<HermiteForm> hermite;
        std::optional<DiagForm> diag;
    };
    OreMatrix gens_;
    std::shared_ptr<Cache> cache_;
};

// sub is contained in sup
bool module_contains(const TauSubmodule& sup, const TauSubmodule& sub);
bool module_equal(const TauSubmodule& a, const TauSubmodule& b);
// {c : c L = 0}
TauSubmodule left_kernel(const OreMatrix& L);
TauSubmodule intersect(const TauSubmodule& a, const TauSubmodule& b);
TauSubmodule module_sum(const TauSubmodule& a, const TauSubmodule& b);

struct RadicalResult {
    TauSubmodule module;
    bool lifted = false;
};
RadicalResult radical_with_flag(const TauSubmodule& m);
TauSubmodule radical(const TauSubmodule& m);

}  // namespace tauvar

#endif
