#include "tauvar/qvar.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "tauvar/errors.hpp"

namespace tauvar {

namespace {

bool level_zero(const OrePoly& p) {
    for (const auto& c : p.coeffs())
        if (c.level() != 0) return false;
    return true;
}

bool level_zero(const OreMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!level_zero(m(i, j))) return false;
    return true;
}

OreMatrix ann_rows(const Canon& c) {
    const FieldPtr& f = c.W.field();
    std::vector<OreRow> rows;
    for (std::size_t i = 0; i < c.seps.size(); ++i) rows.push_back(row_scale_left(c.seps[i], c.W_inv.row(i)));
    return OreMatrix(f, c.W.cols(), rows);
}

Canon canon_with_field(const Canon& c, const FieldPtr& f) {
    Canon out{c.W.with_field(f), c.W_inv.with_field(f), {}};
    for (const auto& p : c.seps) out.seps.push_back(p.with_field(f));
    return out;
}

// Sorts the separable factors by (degree, coefficients) and permutes W
// and W_inv to match.
void sort_canon(Canon& c) {
    const std::size_t r = c.seps.size(), n = c.W.cols();
    std::vector<std::size_t> order(r);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return c.seps[a].compare(c.seps[b]) < 0; });
    for (std::size_t i = r; i < n; ++i) order.push_back(i);
    Canon s{OreMatrix(c.W.field(), n, n), OreMatrix(c.W.field(), n, n), {}};
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            s.W(i, k) = c.W(i, order[k]);
            s.W_inv(k, i) = c.W_inv(order[k], i);
        }
        if (k < r) s.seps.push_back(c.seps[order[k]]);
    }
    c = std::move(s);
}

void check_same_n(const QVariety& a, const QVariety& b) {
    if (a.n() != b.n()) throw DomainError("varieties live in different ambient spaces");
}

std::pair<QVariety, QVariety> coerce(const QVariety& a, const QVariety& b) {
    const FieldPtr f = common_field(a.field(), b.field());
    return {a.with_field(f), b.with_field(f)};
}

OreMatrix basis_matrix(const TauSubmodule& m) { return OreMatrix(m.field(), m.n(), m.basis()); }

}  // namespace

// ---------------------------------------------------------------- QVariety

QVariety QVariety::zeros(const TauSubmodule& s) {
    const FieldPtr base = s.field();
    const std::size_t n = s.n();
    const DiagForm& d = s.diag_form();
    const FieldPtr f = base->kind() == FieldKind::RationalFunctions ? base->lifted() : base;
    Canon c{d.V.with_field(f), d.V_inv.with_field(f), {}};
    for (std::size_t i = 0; i < d.r; ++i) c.seps.push_back(d.D(i, i).with_field(f).separable_part().second.monic());
    sort_canon(c);
    bool lifted = false;
    if (!f->same_as(*base)) {
        bool down = level_zero(c.W) && level_zero(c.W_inv);
        for (const auto& p : c.seps) down = down && level_zero(p);
        if (down) c = canon_with_field(c, base);
        else lifted = true;
    }
    TauSubmodule ann(ann_rows(c));
    if (ann.gens().rows() == 0) ann = TauSubmodule(c.W.field(), n);
    const bool radicalized = !module_contains(s.with_field(ann.field()), ann);
    return QVariety(std::move(ann), std::move(c), radicalized, lifted);
}

QVariety QVariety::full(const FieldPtr& field, std::size_t n) { return zeros(TauSubmodule(field, n)); }

QVariety QVariety::origin(const FieldPtr& field, std::size_t n) { return zeros(TauSubmodule::full(field, n)); }

QVariety QVariety::from_canon(Canon canon) {
    const std::size_t n = canon.W.cols();
    if (canon.W.rows() != n || canon.W_inv.rows() != n || canon.W_inv.cols() != n || canon.seps.size() > n)
        throw DomainError("canonical data has inconsistent shapes");
    if (!(canon.W * canon.W_inv).is_identity() || !(canon.W_inv * canon.W).is_identity())
        throw DomainError("W_inv does not invert W");
    for (const auto& p : canon.seps)
        if (!p.is_separable()) throw DomainError("factor " + p.to_string() + " is not separable");
    TauSubmodule ann(ann_rows(canon));
    return QVariety(std::move(ann), std::move(canon), false, false);
}

QVariety QVariety::with_field(const FieldPtr& f) const {
    if (f->same_as(*field())) return *this;
    return QVariety(ann_.with_field(f), canon_with_field(canon_, f), radicalized_,
                    lifted_ || f->kind() == FieldKind::PerfectClosure);
}

QVariety QVariety::map(const Embedding& e) const {
    if (!e.source()->same_as(*field())) throw MixedBackends("embedding does not start at the variety's backend");
    if (e.target()->same_as(*field())) return *this;
    Canon c{canon_.W.map(e), canon_.W_inv.map(e), {}};
    for (const auto& p : canon_.seps) c.seps.push_back(p.map(e));
    return QVariety(TauSubmodule(ann_.gens().map(e)), std::move(c), radicalized_, lifted_);
}

std::string QVariety::to_string() const {
    std::ostringstream os;
    os << "QVariety(n=" << n() << ", dim=" << dimension(*this) << ", finite_part_dim=" << finite_part_dim(*this)
       << ", seps=[";
    for (std::size_t i = 0; i < canon_.seps.size(); ++i) os << (i ? ", " : "") << canon_.seps[i].to_string();
    os << "])";
    return os.str();
}

TauSubmodule canonical_annihilator(const QVariety& f) {
    TauSubmodule m(ann_rows(f.canon()));
    if (m.gens().rows() == 0) return TauSubmodule(f.field(), f.n());
    return m;
}

// ---------------------------------------------------------------- points

FieldElement eval_row(const OreRow& g, const std::vector<FieldElement>& x) {
    if (g.size() != x.size()) throw DomainError("point has the wrong number of coordinates");
    if (x.empty()) throw DomainError("empty point");
    FieldElement s = x.front().field()->zero();
    for (std::size_t j = 0; j < g.size(); ++j)
        if (!g[j].is_zero()) s += g[j].eval(x[j]);
    return s;
}

QVariety variety_from_points(const FieldPtr& field, std::size_t n,
                             const std::vector<std::vector<FieldElement>>& points) {
    if (!field->is_finite()) throw CapabilityError("points can only be given over a finite backend");
    const std::uint32_t q = field->q();
    OreMatrix G = OreMatrix::identity(field, n);
    for (const auto& v : points) {
        if (v.size() != n) throw DomainError("point has the wrong number of coordinates");
        for (const auto& x : v)
            if (!x.field()->same_as(*field)) throw MixedBackends("point coordinate outside the given backend");
        // values of the current generators at v
        const std::size_t k = G.rows();
        std::vector<FieldElement> u(k);
        std::size_t pivot = k;
        for (std::size_t j = 0; j < k; ++j) {
            u[j] = eval_row(G.row(j), v);
            if (pivot == k && !u[j].is_zero()) pivot = j;
        }
        if (pivot == k) continue;
        // annihilator of F_q u in generator coordinates
        std::vector<OreRow> rows;
        const FieldElement ui_inv = u[pivot].inverse();
        for (std::size_t j = 0; j < k; ++j) {
            if (j == pivot) continue;
            OreRow r = unit_row(field, k, j);
            r[pivot] = OrePoly::constant(-(u[j] * ui_inv));
            rows.push_back(std::move(r));
        }
        OreRow e = zero_row(field, k);
        e[pivot] = OrePoly(field, {-u[pivot].pow(q - 1), field->one()});
        rows.push_back(std::move(e));
        std::vector<OreRow> next;
        for (const auto& r : rows) next.push_back(row_times(r, G));
        G = basis_matrix(TauSubmodule(field, n, next));
    }
    return zeros(TauSubmodule(G));
}

// ---------------------------------------------------------------- dimension

std::size_t dimension(const QVariety& f) { return f.n() - f.r(); }

std::size_t finite_part_dim(const QVariety& f) {
    std::size_t s = 0;
    for (const auto& p : f.canon().seps) s += static_cast<std::size_t>(p.degree());
    return s;
}

QVariety irreducible_component(const QVariety& f) {
    Canon c = f.canon();
    for (auto& p : c.seps) p = OrePoly::one(f.field());
    return QVariety::from_canon(std::move(c));
}

bool is_irreducible(const QVariety& f) { return finite_part_dim(f) == 0; }

QVariety sum(const QVariety& a0, const QVariety& b0) {
    check_same_n(a0, b0);
    auto [a, b] = coerce(a0, b0);
    return zeros(intersect(a.ann(), b.ann()));
}

QVariety intersection(const QVariety& a0, const QVariety& b0) {
    check_same_n(a0, b0);
    auto [a, b] = coerce(a0, b0);
    return zeros(module_sum(a.ann(), b.ann()));
}

QVariety product(const QVariety& a0, const QVariety& b0) {
    auto [a, b] = coerce(a0, b0);
    const FieldPtr f = a.field();
    const std::size_t n = a.n() + b.n();
    std::vector<OreRow> rows;
    for (const auto& g : a.ann().basis()) {
        OreRow r = g;
        r.resize(n, OrePoly::zero(f));
        rows.push_back(std::move(r));
    }
    for (const auto& g : b.ann().basis()) {
        OreRow r = zero_row(f, a.n());
        r.insert(r.end(), g.begin(), g.end());
        rows.push_back(std::move(r));
    }
    return zeros(TauSubmodule(f, n, rows));
}

bool is_subvariety(const QVariety& sub, const QVariety& sup) {
    check_same_n(sub, sup);
    auto [a, b] = coerce(sub, sup);
    return module_contains(a.ann(), b.ann());
}

bool same_variety(const QVariety& a0, const QVariety& b0) {
    check_same_n(a0, b0);
    auto [a, b] = coerce(a0, b0);
    return module_equal(a.ann(), b.ann());
}

// ---------------------------------------------------------------- tangent spaces

klin::Matrix linear_parts(const OreMatrix& m) {
    klin::Matrix out = klin::zeros(m.field(), m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j).linear_part();
    return out;
}

TangentSpace tangent_space(const QVariety& f) {
    const OreMatrix gens = basis_matrix(f.ann());
    return {f.field(), f.n(), klin::nullspace(f.field(), linear_parts(gens), f.n())};
}

// ---------------------------------------------------------------- morphisms

Morphism make_morphism(const QVariety& domain, const QVariety& codomain, const OreMatrix& L) {
    if (L.rows() != codomain.n() || L.cols() != domain.n())
        throw DomainError("matrix shape does not match the domain and codomain");
    const FieldPtr f = common_field(common_field(domain.field(), codomain.field()), L.field());
    Morphism psi{domain.with_field(f), codomain.with_field(f), L.with_field(f)};
    for (const auto& g : psi.codomain.ann().basis())
        if (!psi.domain.ann().contains(row_times(g, psi.L)))
            throw NotAMorphismInto("the map does not send the domain into the codomain: " + row_to_string(g) +
                                   " pulls back outside M(domain)");
    return psi;
}

OreMatrix morphism_to_module_map(const Morphism& psi) {
    std::vector<OreRow> rows;
    for (std::size_t i = 0; i < psi.L.rows(); ++i) rows.push_back(psi.domain.ann().reduce(psi.L.row(i)));
    return OreMatrix(psi.L.field(), psi.L.cols(), rows);
}

Morphism compose(const Morphism& psi, const Morphism& phi) {
    if (phi.codomain.n() != psi.domain.n()) throw DomainError("morphisms are not composable");
    const FieldPtr f = common_field(psi.L.field(), phi.L.field());
    return make_morphism(phi.domain, psi.codomain, psi.L.with_field(f) * phi.L.with_field(f));
}

Morphism addition_morphism(const QVariety& a, const QVariety& b) {
    check_same_n(a, b);
    const QVariety dom = product(a, b);
    const FieldPtr f = dom.field();
    const std::size_t n = a.n();
    OreMatrix L(f, n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) L(i, i) = L(i, n + i) = OrePoly::one(f);
    return make_morphism(dom, QVariety::full(f, n), L);
}

QVariety image(const Morphism& psi) {
    const FieldPtr f = psi.L.field();
    const std::size_t m = psi.L.rows();
    const OreMatrix A = basis_matrix(psi.domain.ann());
    const TauSubmodule k = left_kernel(psi.L.stacked(A));
    std::vector<OreRow> rows;
    for (std::size_t i = 0; i < k.gens().rows(); ++i) {
        OreRow g = k.gens().row(i);
        g.resize(m);
        if (!row_is_zero(g)) rows.push_back(std::move(g));
    }
    return zeros(TauSubmodule(f, m, rows));
}

QVariety image_by_points(const Morphism& psi) {
    const QVariety& F = psi.domain;
    const FieldPtr K = F.field();
    if (!K->is_finite())
        throw CapabilityError("the finite part cannot be enumerated over " + K->descriptor().to_string());
    const Canon& c = F.canon();
    const std::size_t n = F.n(), m = psi.L.rows(), r = F.r();
    const OreMatrix LW = psi.L * c.W;
    std::vector<std::size_t> free;
    for (std::size_t j = r; j < n; ++j) free.push_back(j);
    // irreducible part
    const QVariety irr = free.empty() ? QVariety::origin(K, m) : zeros(left_kernel(LW.column_block(free)));
    // finite part over a common splitting field
    unsigned ext = K->degree_over_fq();
    for (const auto& p : c.seps)
        if (p.degree() > 0) ext = std::lcm(ext, splitting_degree(p));
    const FieldPtr E = Field::extension(K->q(), ext);
    const Embedding e = Embedding::find(K, E);
    const OreMatrix LWe = LW.map(e);
    std::vector<std::vector<FieldElement>> pts;
    for (std::size_t i = 0; i < r; ++i) {
        if (c.seps[i].degree() <= 0) continue;
        for (const auto& x : kernel_in_extension(c.seps[i], ext).basis) {
            std::vector<FieldElement> y;
            for (std::size_t row = 0; row < m; ++row) y.push_back(LWe(row, i).eval(x));
            pts.push_back(std::move(y));
        }
    }
    return sum(irr.map(e), variety_from_points(E, m, pts));
}

QVariety preimage(const Morphism& psi, const QVariety& g0) {
    if (g0.n() != psi.L.rows()) throw DomainError("variety does not live in the codomain's ambient space");
    const FieldPtr f = common_field(psi.L.field(), g0.field());
    const QVariety g = g0.with_field(f);
    const OreMatrix L = psi.L.with_field(f);
    std::vector<OreRow> rows = psi.domain.with_field(f).ann().basis();
    for (const auto& h : g.ann().basis()) rows.push_back(row_times(h, L));
    return zeros(TauSubmodule(f, psi.domain.n(), rows));
}

QVariety kernel(const Morphism& psi) { return preimage(psi, QVariety::origin(psi.L.field(), psi.L.rows())); }

Quotient quotient(const QVariety& f0, const QVariety& h0) {
    check_same_n(f0, h0);
    auto [f, h] = coerce(f0, h0);
    if (!module_contains(h.ann(), f.ann())) throw NotASubvariety("the second variety is not contained in the first");
    const OreMatrix L = basis_matrix(h.ann());
    const Morphism to_ambient = make_morphism(f, QVariety::full(f.field(), L.rows()), L);
    QVariety Q = image(to_ambient);
    Morphism Pi = make_morphism(f, Q, L);
    return {std::move(Q), std::move(Pi)};
}

Morphism factor_through_quotient(const Quotient& q, const Morphism& psi) {
    if (psi.L.cols() != q.Pi.L.cols()) throw DomainError("morphism does not start at the quotient's source");
    const FieldPtr f = common_field(psi.L.field(), q.Pi.L.field());
    const TauSubmodule H(q.Pi.L.with_field(f));
    std::vector<OreRow> rows;
    for (std::size_t i = 0; i < psi.L.rows(); ++i) {
        auto c = H.coefficients(row_with_field(psi.L.row(i), f));
        if (!c) throw DomainError("the morphism does not vanish on the subvariety");
        rows.push_back(std::move(*c));
    }
    return make_morphism(q.Q, psi.codomain, OreMatrix(f, q.Pi.L.rows(), rows));
}

Differential differential(const Morphism& psi) {
    const FieldPtr f = psi.L.field();
    Differential d{linear_parts(psi.L), tangent_space(psi.domain), tangent_space(psi.codomain), {}};
    const klin::Matrix target = klin::from_columns(f, d.target.basis, d.target.n);
    std::vector<klin::Vector> cols;
    for (const auto& b : d.source.basis) {
        auto x = klin::solve(f, target, klin::apply(f, d.dL, b), d.target.dim());
        if (!x) throw InvariantViolation("differential leaves the tangent space of the codomain");
        cols.push_back(std::move(*x));
    }
    d.in_bases = klin::from_columns(f, cols, d.target.dim());
    return d;
}

bool is_separable(const Morphism& psi) {
    const QVariety img = image(psi);
    const FieldPtr f = img.field();
    const Morphism onto{psi.domain.with_field(f), img, psi.L.with_field(f)};
    const klin::Matrix dL = linear_parts(onto.L);
    std::vector<klin::Vector> cols;
    for (const auto& b : tangent_space(onto.domain).basis) cols.push_back(klin::apply(f, dL, b));
    return klin::rank(klin::from_columns(f, cols, img.n())) == dimension(img);
}

// ---------------------------------------------------------------- point spaces

namespace {

std::vector<Digit> padded(const FieldElement& x, std::size_t d) {
    std::vector<Digit> c = x.coords();
    c.resize(d, 0);
    return c;
}

std::vector<Digit> point_coords(const std::vector<FieldElement>& x, std::size_t d) {
    std::vector<Digit> out;
    for (const auto& v : x) {
        auto c = padded(v, d);
        out.insert(out.end(), c.begin(), c.end());
    }
    return out;
}

PointSpace span_of(const FieldPtr& e, std::size_t n, smalllin::Matrix rows) {
    const std::size_t cols = n * e->degree_over_fp();
    if (rows.empty()) return {e, n, {}};
    smalllin::rref(e->fp(), rows);
    while (!rows.empty() && std::all_of(rows.back().begin(), rows.back().end(), [](Digit v) { return v == 0; }))
        rows.pop_back();
    for (auto& r : rows) r.resize(cols, 0);
    return {e, n, std::move(rows)};
}

FieldElement fp_basis_element(const FieldPtr& e, std::size_t t) {
    std::vector<Digit> c(e->degree_over_fp(), 0);
    c[t] = 1;
    return e->from_coeffs(c);
}

void require_finite_extension(const QVariety& f, const FieldPtr& e) {
    if (!f.field()->is_finite() || !e->is_finite())
        throw CapabilityError("point spaces need finite backends");
}

}  // namespace

std::vector<FieldElement> PointSpace::point(const std::vector<Digit>& coords) const {
    const std::size_t d = field->degree_over_fp();
    std::vector<Digit> acc(n * d, 0);
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j < acc.size(); ++j)
            acc[j] = field->fp().add(acc[j], field->fp().mul(coords[i], basis[i][j]));
    std::vector<FieldElement> out;
    for (std::size_t k = 0; k < n; ++k)
        out.push_back(field->from_coeffs(std::vector<Digit>(acc.begin() + k * d, acc.begin() + (k + 1) * d)));
    return out;
}

PointSpace points_from_equations(const QVariety& f, const FieldPtr& e) {
    require_finite_extension(f, e);
    const Embedding emb = Embedding::find(f.field(), e);
    const auto gens = f.ann().basis();
    const std::size_t n = f.n(), d = e->degree_over_fp();
    // column (j, t): values of all generators at the point g^t e_j
    smalllin::Matrix a(gens.size() * d, std::vector<Digit>(n * d, 0));
    std::vector<OreRow> mapped;
    for (const auto& g : gens) {
        OreRow r;
        for (const auto& p : g) r.push_back(p.map(emb));
        mapped.push_back(std::move(r));
    }
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t t = 0; t < d; ++t) {
            const FieldElement x = fp_basis_element(e, t);
            for (std::size_t i = 0; i < mapped.size(); ++i) {
                const auto v = padded(mapped[i][j].eval(x), d);
                for (std::size_t s = 0; s < d; ++s) a[i * d + s][j * d + t] = v[s];
            }
        }
    return span_of(e, n, smalllin::nullspace(e->fp(), a, n * d));
}

PointSpace points_from_canon(const QVariety& f, const FieldPtr& e) {
    require_finite_extension(f, e);
    const FieldPtr K = f.field();
    const Embedding emb = Embedding::find(K, e);
    const Canon& c = f.canon();
    const std::size_t n = f.n(), d = e->degree_over_fp(), r = f.r();
    const unsigned ext = e->degree_over_fq();
    const OreMatrix W = c.W.map(emb);
    smalllin::Matrix rows;
    auto push_column = [&](std::size_t i, const FieldElement& x) {
        std::vector<FieldElement> pt;
        for (std::size_t k = 0; k < n; ++k) pt.push_back(W(k, i).eval(x));
        rows.push_back(point_coords(pt, d));
    };
    // F_p-basis of F_q inside E
    std::vector<FieldElement> fq_over_fp;
    for (Digit s = 0, w = 1; s < K->fq().l(); ++s, w = K->fq().mul(w, K->fq().generator()))
        fq_over_fp.push_back(e->from_fq(w));
    for (std::size_t i = 0; i < r; ++i) {
        if (c.seps[i].degree() <= 0) continue;
        for (const auto& x : kernel_in_extension(c.seps[i], ext).basis)
            for (const auto& w : fq_over_fp) push_column(i, x.with_field(e) * w);
    }
    for (std::size_t i = r; i < n; ++i)
        for (std::size_t t = 0; t < d; ++t) push_column(i, fp_basis_element(e, t));
    return span_of(e, n, std::move(rows));
}

bool same_points(const PointSpace& a, const PointSpace& b) {
    if (!a.field->same_as(*b.field) || a.n != b.n) return false;
    return a.basis == b.basis;
}

bool point_in(const PointSpace& s, const std::vector<FieldElement>& x) {
    smalllin::Matrix m = s.basis;
    m.push_back(point_coords(x, s.field->degree_over_fp()));
    return smalllin::rank(s.field->fp(), m) == s.basis.size();
}

}  // namespace tauvar
