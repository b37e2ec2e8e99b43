#include "tauvar/orelat.hpp"

#include <algorithm>

#include "tauvar/errors.hpp"

namespace tauvar {

// ---------------------------------------------------------------- OreMatrix

OreMatrix::OreMatrix(FieldPtr field, std::size_t rows, std::size_t cols)
    : field_(std::move(field)), rows_(rows), cols_(cols), a_(rows * cols, OrePoly::zero(field_)) {}

OreMatrix::OreMatrix(FieldPtr field, std::size_t cols, std::vector<OreRow> rows)
    : field_(std::move(field)), rows_(rows.size()), cols_(cols) {
    a_.reserve(rows_ * cols_);
    for (auto& r : rows) {
        if (r.size() != cols_) throw DomainError("ragged Ore matrix");
        for (auto& e : r) {
            if (!e.field()->same_as(*field_)) throw MixedBackends("matrix entry from another backend");
            a_.push_back(std::move(e));
        }
    }
}

OreMatrix OreMatrix::identity(const FieldPtr& field, std::size_t n) {
    OreMatrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = OrePoly::one(field);
    return m;
}

OreMatrix OreMatrix::diagonal(const FieldPtr& field, const std::vector<OrePoly>& d) {
    OreMatrix m(field, d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

OreRow OreMatrix::row(std::size_t i) const {
    return OreRow(a_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                  a_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

std::vector<OreRow> OreMatrix::row_list() const {
    std::vector<OreRow> out;
    for (std::size_t i = 0; i < rows_; ++i) out.push_back(row(i));
    return out;
}

OreMatrix OreMatrix::column_block(const std::vector<std::size_t>& cols) const {
    OreMatrix m(field_, rows_, cols.size());
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) m(i, j) = (*this)(i, cols[j]);
    return m;
}

OreMatrix OreMatrix::row_block(const std::vector<std::size_t>& rows) const {
    OreMatrix m(field_, rows.size(), cols_);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(rows[i], j);
    return m;
}

OreMatrix OreMatrix::operator*(const OreMatrix& o) const {
    if (cols_ != o.rows_) throw DomainError("Ore matrix shapes do not compose");
    if (!field_->same_as(*o.field_)) throw MixedBackends();
    OreMatrix m(field_, rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const OrePoly& a = (*this)(i, k);
            if (a.is_zero()) continue;
            for (std::size_t j = 0; j < o.cols_; ++j)
                if (!o(k, j).is_zero()) m(i, j) += a * o(k, j);
        }
    return m;
}

OreMatrix OreMatrix::operator+(const OreMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DomainError("Ore matrix shapes differ");
    OreMatrix m = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] += o.a_[i];
    return m;
}

OreMatrix OreMatrix::operator-(const OreMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DomainError("Ore matrix shapes differ");
    OreMatrix m = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] -= o.a_[i];
    return m;
}

bool OreMatrix::operator==(const OreMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    for (std::size_t i = 0; i < a_.size(); ++i)
        if (a_[i] != o.a_[i]) return false;
    return true;
}

bool OreMatrix::is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](const OrePoly& p) { return p.is_zero(); });
}

bool OreMatrix::is_identity() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if (i == j ? !(*this)(i, j).is_one() : !(*this)(i, j).is_zero()) return false;
    return true;
}

bool OreMatrix::is_diagonal() const {
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if (i != j && !(*this)(i, j).is_zero()) return false;
    return true;
}

OreMatrix OreMatrix::stacked(const OreMatrix& below) const {
    if (cols_ != below.cols_) throw DomainError("cannot stack matrices with different widths");
    OreMatrix m(field_, rows_ + below.rows_, cols_);
    std::copy(a_.begin(), a_.end(), m.a_.begin());
    for (std::size_t i = 0; i < below.a_.size(); ++i) {
        if (!below.a_[i].field()->same_as(*field_)) throw MixedBackends();
        m.a_[a_.size() + i] = below.a_[i];
    }
    return m;
}

OreMatrix OreMatrix::with_field(const FieldPtr& f) const {
    if (f->same_as(*field_)) return *this;
    OreMatrix m(f, rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i].with_field(f);
    return m;
}

OreMatrix OreMatrix::map(const Embedding& e) const {
    OreMatrix m(e.target(), rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i].map(e);
    return m;
}

int OreMatrix::max_degree() const {
    int d = -1;
    for (const auto& p : a_) d = std::max(d, p.degree());
    return d;
}

std::string OreMatrix::to_string() const {
    std::string out = "[";
    for (std::size_t i = 0; i < rows_; ++i) {
        if (i) out += ", ";
        out += row_to_string(row(i));
    }
    return out + "]";
}

OreRow zero_row(const FieldPtr& field, std::size_t n) { return OreRow(n, OrePoly::zero(field)); }

OreRow unit_row(const FieldPtr& field, std::size_t n, std::size_t j) {
    OreRow r = zero_row(field, n);
    r[j] = OrePoly::one(field);
    return r;
}

OreRow row_times(const OreRow& c, const OreMatrix& m) {
    if (c.size() != m.rows()) throw DomainError("row length does not match the matrix");
    OreRow r = zero_row(m.field(), m.cols());
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (c[k].is_zero()) continue;
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!m(k, j).is_zero()) r[j] += c[k] * m(k, j);
    }
    return r;
}

OreRow row_add(const OreRow& a, const OreRow& b) {
    OreRow r = a;
    for (std::size_t j = 0; j < r.size(); ++j) r[j] += b[j];
    return r;
}

OreRow row_sub(const OreRow& a, const OreRow& b) {
    OreRow r = a;
    for (std::size_t j = 0; j < r.size(); ++j) r[j] -= b[j];
    return r;
}

OreRow row_scale_left(const OrePoly& c, const OreRow& a) {
    OreRow r;
    r.reserve(a.size());
    for (const auto& x : a) r.push_back(c * x);
    return r;
}

bool row_is_zero(const OreRow& a) {
    return std::all_of(a.begin(), a.end(), [](const OrePoly& p) { return p.is_zero(); });
}

std::string row_to_string(const OreRow& a) {
    std::string out = "[";
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (j) out += ", ";
        out += a[j].to_string();
    }
    return out + "]";
}

OreRow row_with_field(const OreRow& a, const FieldPtr& f) {
    OreRow r;
    r.reserve(a.size());
    for (const auto& x : a) r.push_back(x.with_field(f));
    return r;
}

FieldPtr common_field(const FieldPtr& a, const FieldPtr& b) {
    if (a->same_as(*b)) return a;
    if (a->is_function_field() && b->is_function_field() && a->q() == b->q())
        return a->kind() == FieldKind::PerfectClosure ? a : b;
    throw MixedBackends("operands over " + a->descriptor().to_string() + " and " + b->descriptor().to_string());
}

// ---------------------------------------------------------------- Hermite

namespace {

void add_row_multiple(OreMatrix& m, std::size_t target, const OrePoly& c, std::size_t source) {
    // row_target -= c * row_source
    for (std::size_t j = 0; j < m.cols(); ++j)
        if (!m(source, j).is_zero()) m(target, j) -= c * m(source, j);
}

void swap_rows(OreMatrix& m, std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

void swap_cols(OreMatrix& m, std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}

void scale_row(OreMatrix& m, std::size_t i, const FieldElement& c) {
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = m(i, j).scale_left(c);
}

}  // namespace

HermiteForm hermite(const OreMatrix& L) {
    HermiteForm hf{L, OreMatrix::identity(L.field(), L.rows()), {}};
    OreMatrix& H = hf.H;
    OreMatrix& T = hf.T_left;
    std::size_t r = 0;
    for (std::size_t c = 0; c < H.cols() && r < H.rows(); ++c) {
        while (true) {
            // row with the smallest nonzero degree in column c
            std::size_t best = H.rows();
            for (std::size_t i = r; i < H.rows(); ++i)
                if (!H(i, c).is_zero() && (best == H.rows() || H(i, c).degree() < H(best, c).degree())) best = i;
            if (best == H.rows()) break;
            swap_rows(H, r, best);
            swap_rows(T, r, best);
            bool clean = true;
            for (std::size_t i = r + 1; i < H.rows(); ++i) {
                if (H(i, c).is_zero()) continue;
                auto [quo, rem] = left_divmod(H(i, c), H(r, c));
                add_row_multiple(H, i, quo, r);
                add_row_multiple(T, i, quo, r);
                if (!rem.is_zero()) clean = false;
            }
            if (clean) break;
        }
        if (r >= H.rows() || H(r, c).is_zero()) continue;
        const FieldElement inv = H(r, c).lead().inverse();
        scale_row(H, r, inv);
        scale_row(T, r, inv);
        for (std::size_t i = 0; i < r; ++i) {
            if (H(i, c).degree() < H(r, c).degree()) continue;
            const OrePoly quo = left_divmod(H(i, c), H(r, c)).first;
            add_row_multiple(H, i, quo, r);
            add_row_multiple(T, i, quo, r);
        }
        hf.pivots.push_back(c);
        ++r;
    }
    return hf;
}

// ---------------------------------------------------------------- diagonal form

namespace {

bool all_level_zero(const OreMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            for (const auto& c : m(i, j).coeffs())
                if (c.level() != 0) return false;
    return true;
}

// row_i -= quo row_t on D and U, with the matching column update on U_inv
void row_op(DiagForm& d, std::size_t i, const OrePoly& quo, std::size_t t) {
    add_row_multiple(d.D, i, quo, t);
    add_row_multiple(d.U, i, quo, t);
    for (std::size_t k = 0; k < d.U_inv.rows(); ++k)
        if (!d.U_inv(k, i).is_zero()) d.U_inv(k, t) += d.U_inv(k, i) * quo;
}

// Row echelon form by left division only. Keeps coefficients on the input
// backend, so the column phase below mostly divides by units.
void row_echelon(DiagForm& d) {
    OreMatrix& D = d.D;
    std::size_t r = 0;
    for (std::size_t c = 0; c < D.cols() && r < D.rows(); ++c) {
        while (true) {
            std::size_t best = D.rows();
            for (std::size_t i = r; i < D.rows(); ++i)
                if (!D(i, c).is_zero() && (best == D.rows() || D(i, c).degree() < D(best, c).degree())) best = i;
            if (best == D.rows()) break;
            swap_rows(D, r, best);
            swap_rows(d.U, r, best);
            swap_cols(d.U_inv, r, best);
            bool clean = true;
            for (std::size_t i = r + 1; i < D.rows(); ++i) {
                if (D(i, c).is_zero()) continue;
                auto [quo, rem] = left_divmod(D(i, c), D(r, c));
                if (!quo.is_zero()) row_op(d, i, quo, r);
                if (!rem.is_zero()) clean = false;
            }
            if (clean) break;
        }
        if (!D(r, c).is_zero()) ++r;
    }
}

DiagForm diagonalize_capable(DiagForm d) {
    OreMatrix& D = d.D;
    const std::size_t m = D.rows(), n = D.cols();
    std::size_t t = 0;
    while (t < m && t < n) {
        // pivot: minimal degree, ties by (row, column)
        std::size_t pi = m, pj = n;
        for (std::size_t i = t; i < m; ++i)
            for (std::size_t j = t; j < n; ++j)
                if (!D(i, j).is_zero() && (pi == m || D(i, j).degree() < D(pi, pj).degree())) {
                    pi = i;
                    pj = j;
                }
        if (pi == m) break;
        swap_rows(D, t, pi);
        swap_rows(d.U, t, pi);
        swap_cols(d.U_inv, t, pi);
        swap_cols(D, t, pj);
        swap_cols(d.V, t, pj);
        swap_rows(d.V_inv, t, pj);
        bool clean = true;
        // column t by row operations: row_i -= quo row_t
        for (std::size_t i = t + 1; i < m && clean; ++i) {
            if (D(i, t).is_zero()) continue;
            auto [quo, rem] = left_divmod(D(i, t), D(t, t));
            if (!quo.is_zero()) row_op(d, i, quo, t);
            if (!rem.is_zero()) clean = false;
        }
        if (!clean) continue;
        // row t by column operations: col_j -= col_t quo
        for (std::size_t j = t + 1; j < n && clean; ++j) {
            if (D(t, j).is_zero()) continue;
            auto [quo, rem] = right_divmod(D(t, j), D(t, t));
            if (!quo.is_zero()) {
                for (std::size_t k = 0; k < m; ++k)
                    if (!D(k, t).is_zero()) D(k, j) -= D(k, t) * quo;
                for (std::size_t k = 0; k < n; ++k)
                    if (!d.V(k, t).is_zero()) d.V(k, j) -= d.V(k, t) * quo;
                // V_inv row t += quo V_inv row j
                for (std::size_t k = 0; k < n; ++k)
                    if (!d.V_inv(j, k).is_zero()) d.V_inv(t, k) += quo * d.V_inv(j, k);
            }
            if (!rem.is_zero()) clean = false;
        }
        if (!clean) continue;
        // make the pivot monic: row t scaled by c, U_inv column t by c^{-1} on the right
        const FieldElement c = D(t, t).lead().inverse();
        if (!c.is_one()) {
            scale_row(D, t, c);
            scale_row(d.U, t, c);
            const OrePoly cinv = OrePoly::constant(c.inverse());
            for (std::size_t k = 0; k < m; ++k)
                if (!d.U_inv(k, t).is_zero()) d.U_inv(k, t) = d.U_inv(k, t) * cinv;
        }
        ++t;
    }
    d.r = t;
    return d;
}

}  // namespace

namespace {

DiagForm start_form(const OreMatrix& L) {
    const FieldPtr& f = L.field();
    DiagForm d{OreMatrix::identity(f, L.rows()), L, OreMatrix::identity(f, L.cols()),
               OreMatrix::identity(f, L.rows()), OreMatrix::identity(f, L.cols()), 0, false};
    row_echelon(d);
    return d;
}

}  // namespace

DiagForm diagonalize(const OreMatrix& L) {
    if (L.field()->kind() != FieldKind::RationalFunctions) return diagonalize_capable(start_form(L));
    const FieldPtr down = L.field();
    const FieldPtr up = down->lifted();
    DiagForm e = start_form(L);
    e.U = e.U.with_field(up);
    e.D = e.D.with_field(up);
    e.V = e.V.with_field(up);
    e.U_inv = e.U_inv.with_field(up);
    e.V_inv = e.V_inv.with_field(up);
    DiagForm d = diagonalize_capable(std::move(e));
    d.lifted = true;
    if (all_level_zero(d.U) && all_level_zero(d.D) && all_level_zero(d.V) && all_level_zero(d.U_inv) &&
        all_level_zero(d.V_inv)) {
        d.U = d.U.with_field(down);
        d.D = d.D.with_field(down);
        d.V = d.V.with_field(down);
        d.U_inv = d.U_inv.with_field(down);
        d.V_inv = d.V_inv.with_field(down);
    }
    return d;
}

// ---------------------------------------------------------------- TauSubmodule

TauSubmodule::TauSubmodule(FieldPtr field, std::size_t n)
    : gens_(std::move(field), 0, n), cache_(std::make_shared<Cache>()) {}

TauSubmodule::TauSubmodule(OreMatrix gens) : gens_(std::move(gens)), cache_(std::make_shared<Cache>()) {}

TauSubmodule::TauSubmodule(FieldPtr field, std::size_t n, const std::vector<OreRow>& gens)
    : gens_(std::move(field), n, gens), cache_(std::make_shared<Cache>()) {}

TauSubmodule TauSubmodule::full(const FieldPtr& field, std::size_t n) {
    return TauSubmodule(OreMatrix::identity(field, n));
}

const HermiteForm& TauSubmodule::hermite_form() const {
    std::call_once(cache_->hermite_once, [this] { cache_->hermite = hermite(gens_); });
    return *cache_->hermite;
}

const DiagForm& TauSubmodule::diag_form() const {
    std::call_once(cache_->diag_once, [this] { cache_->diag = diagonalize(gens_); });
    return *cache_->diag;
}

std::vector<OreRow> TauSubmodule::basis() const {
    const auto& hf = hermite_form();
    std::vector<OreRow> out;
    for (std::size_t i = 0; i < hf.rank(); ++i) out.push_back(hf.H.row(i));
    return out;
}

namespace {

// Reduces f by the Hermite pivots; quotients go to coeffs (indexed by H row).
OreRow reduce_impl(const HermiteForm& hf, OreRow f, std::vector<OrePoly>* coeffs) {
    for (std::size_t r = 0; r < hf.rank(); ++r) {
        const std::size_t c = hf.pivots[r];
        if (f[c].is_zero() || f[c].degree() < hf.H(r, c).degree()) continue;
        const OrePoly quo = left_divmod(f[c], hf.H(r, c)).first;
        for (std::size_t j = 0; j < f.size(); ++j)
            if (!hf.H(r, j).is_zero()) f[j] -= quo * hf.H(r, j);
        if (coeffs) (*coeffs)[r] += quo;
    }
    return f;
}

}  // namespace

OreRow TauSubmodule::reduce(const OreRow& f) const {
    if (f.size() != n()) throw DomainError("row length does not match the ambient rank");
    if (f.empty()) return f;
    const FieldPtr cf = common_field(field(), f.front().field());
    if (!cf->same_as(*field())) return with_field(cf).reduce(row_with_field(f, cf));
    return reduce_impl(hermite_form(), row_with_field(f, cf), nullptr);
}

bool TauSubmodule::contains(const OreRow& f) const {
    if (n() == 0) return true;
    return row_is_zero(reduce(f));
}

std::optional<OreRow> TauSubmodule::coefficients(const OreRow& f) const {
    if (f.size() != n()) throw DomainError("row length does not match the ambient rank");
    if (n() > 0 && !f.front().field()->same_as(*field())) {
        const FieldPtr cf = common_field(field(), f.front().field());
        if (!cf->same_as(*field())) return with_field(cf).coefficients(row_with_field(f, cf));
    }
    const auto& hf = hermite_form();
    std::vector<OrePoly> q(hf.H.rows(), OrePoly::zero(field()));
    const OreRow rem = reduce_impl(hf, row_with_field(f, field()), &q);
    if (!row_is_zero(rem)) return std::nullopt;
    // f = q H = (q T_left) gens
    return row_times(q, hf.T_left);
}

TauSubmodule TauSubmodule::with_field(const FieldPtr& f) const {
    if (f->same_as(*field())) return *this;
    return TauSubmodule(gens_.with_field(f));
}

std::string TauSubmodule::to_string() const { return gens_.to_string(); }

bool module_contains(const TauSubmodule& sup, const TauSubmodule& sub) {
    if (sup.n() != sub.n()) throw DomainError("modules live in different ambient ranks");
    for (std::size_t i = 0; i < sub.gens().rows(); ++i)
        if (!sup.contains(sub.gens().row(i))) return false;
    return true;
}

bool module_equal(const TauSubmodule& a, const TauSubmodule& b) {
    return module_contains(a, b) && module_contains(b, a);
}

TauSubmodule left_kernel(const OreMatrix& L) {
    const auto hf = hermite(L);
    std::vector<OreRow> rows;
    for (std::size_t i = hf.rank(); i < L.rows(); ++i) rows.push_back(hf.T_left.row(i));
    return TauSubmodule(L.field(), L.rows(), rows);
}

TauSubmodule intersect(const TauSubmodule& a0, const TauSubmodule& b0) {
    if (a0.n() != b0.n()) throw DomainError("modules live in different ambient ranks");
    const FieldPtr f = common_field(a0.field(), b0.field());
    const TauSubmodule a = a0.with_field(f), b = b0.with_field(f);
    const OreMatrix& G1 = a.gens();
    const auto k = left_kernel(G1.stacked(b.gens()));
    std::vector<OreRow> rows;
    for (std::size_t i = 0; i < k.gens().rows(); ++i) {
        OreRow c = k.gens().row(i);
        c.resize(G1.rows(), OrePoly::zero(f));
        OreRow g = row_times(c, G1);
        if (!row_is_zero(g)) rows.push_back(std::move(g));
    }
    return TauSubmodule(f, a.n(), rows);
}

TauSubmodule module_sum(const TauSubmodule& a0, const TauSubmodule& b0) {
    if (a0.n() != b0.n()) throw DomainError("modules live in different ambient ranks");
    const FieldPtr f = common_field(a0.field(), b0.field());
    return TauSubmodule(a0.with_field(f).gens().stacked(b0.with_field(f).gens()));
}

RadicalResult radical_with_flag(const TauSubmodule& m) {
    const DiagForm& d = m.diag_form();
    // q-th roots may be needed even when the diagonal form came back down
    const FieldPtr f = d.D.field()->kind() == FieldKind::RationalFunctions ? d.D.field()->lifted() : d.D.field();
    std::vector<OreRow> rows;
    for (std::size_t i = 0; i < d.r; ++i) {
        const OrePoly q = d.D(i, i).with_field(f).separable_part().second;
        rows.push_back(row_scale_left(q, row_with_field(d.V_inv.row(i), f)));
    }
    OreMatrix gens(f, m.n(), rows);
    if (m.field()->kind() == FieldKind::RationalFunctions && all_level_zero(gens))
        gens = gens.with_field(m.field());
    return {TauSubmodule(std::move(gens)), d.lifted};
}

TauSubmodule radical(const TauSubmodule& m) { return radical_with_flag(m).module; }

}  // namespace tauvar
