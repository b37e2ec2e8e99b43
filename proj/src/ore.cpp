#include "tauvar/ore.hpp"

#include <algorithm>

#include "tauvar/errors.hpp"
#include "tauvar/fplinalg.hpp"

namespace tauvar {

OrePoly::OrePoly(FieldPtr field, std::vector<FieldElement> coeffs) : field_(std::move(field)), c_(std::move(coeffs)) {
    if (!field_) throw InvariantViolation("OrePoly without a field");
    for (const auto& c : c_)
        if (!c.field()->same_as(*field_)) throw MixedBackends("coefficient from another backend");
    trim();
}

OrePoly OrePoly::constant(const FieldElement& c) { return OrePoly(c.field(), {c}); }

OrePoly OrePoly::monomial(const FieldElement& c, unsigned k) {
    std::vector<FieldElement> v(k + 1, c.field()->zero());
    v[k] = c;
    return OrePoly(c.field(), std::move(v));
}

void OrePoly::trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

void OrePoly::check_same(const OrePoly& o) const {
    if (!field_->same_as(*o.field_))
        throw MixedBackends("Ore polynomials over " + field_->descriptor().to_string() + " and " +
                            o.field_->descriptor().to_string());
}

FieldElement OrePoly::coeff(std::size_t i) const { return i < c_.size() ? c_[i] : field_->zero(); }

OrePoly OrePoly::operator+(const OrePoly& o) const {
    check_same(o);
    std::vector<FieldElement> r(std::max(c_.size(), o.c_.size()), field_->zero());
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] = c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
    return OrePoly(field_, std::move(r));
}

OrePoly OrePoly::operator-() const {
    std::vector<FieldElement> r;
    r.reserve(c_.size());
    for (const auto& c : c_) r.push_back(-c);
    return OrePoly(field_, std::move(r));
}

OrePoly OrePoly::operator-(const OrePoly& o) const {
    check_same(o);
    std::vector<FieldElement> r(std::max(c_.size(), o.c_.size()), field_->zero());
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] = c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] -= o.c_[i];
    return OrePoly(field_, std::move(r));
}

OrePoly OrePoly::operator*(const OrePoly& o) const {
    check_same(o);
    if (c_.empty() || o.c_.empty()) return OrePoly(field_);
    std::vector<FieldElement> r(c_.size() + o.c_.size() - 1, field_->zero());
    // row i holds frobenius(Q_j, i)
    std::vector<FieldElement> twisted = o.c_;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (i > 0)
            for (auto& x : twisted) x = x.frobenius(1);
        if (c_[i].is_zero()) continue;
        for (std::size_t j = 0; j < twisted.size(); ++j)
            if (!twisted[j].is_zero()) r[i + j] += c_[i] * twisted[j];
    }
    return OrePoly(field_, std::move(r));
}

bool OrePoly::operator==(const OrePoly& o) const {
    check_same(o);
    if (c_.size() != o.c_.size()) return false;
    for (std::size_t i = 0; i < c_.size(); ++i)
        if (c_[i] != o.c_[i]) return false;
    return true;
}

OrePoly OrePoly::scale_left(const FieldElement& c) const {
    if (c.is_zero()) return OrePoly(field_);
    std::vector<FieldElement> r;
    r.reserve(c_.size());
    for (const auto& a : c_) r.push_back(c * a);
    return OrePoly(field_, std::move(r));
}

OrePoly OrePoly::monic() const {
    if (c_.empty() || c_.back().is_one()) return *this;
    return scale_left(c_.back().inverse());
}

OrePoly OrePoly::twist(int n) const {
    if (n == 0) return *this;
    std::vector<FieldElement> r;
    r.reserve(c_.size());
    for (const auto& a : c_)
        r.push_back(n > 0 ? a.frobenius(static_cast<unsigned>(n)) : a.inverse_frobenius(static_cast<unsigned>(-n)));
    return OrePoly(field_, std::move(r));
}

std::pair<unsigned, OrePoly> OrePoly::separable_part() const {
    if (c_.empty()) throw DomainError("the zero polynomial has no separable part");
    unsigned n = 0;
    while (c_[n].is_zero()) ++n;
    if (n == 0) return {0, *this};
    std::vector<FieldElement> upper(c_.begin() + n, c_.end());
    // tau^N Q = twist(Q, N) tau^N, so Q = twist(upper, -N)
    return {n, OrePoly(field_, std::move(upper)).twist(-static_cast<int>(n))};
}

FieldElement OrePoly::eval(const FieldElement& x) const {
    if (!x.field()->same_as(*field_)) throw MixedBackends("evaluation point from another backend");
    FieldElement r = field_->zero();
    FieldElement pw = x;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (i > 0) pw = pw.frobenius(1);
        if (!c_[i].is_zero()) r += c_[i] * pw;
    }
    return r;
}

OrePoly OrePoly::with_field(const FieldPtr& f) const {
    if (f->same_as(*field_)) return *this;
    std::vector<FieldElement> r;
    r.reserve(c_.size());
    for (const auto& a : c_) r.push_back(a.with_field(f));
    return OrePoly(f, std::move(r));
}

OrePoly OrePoly::map(const Embedding& e) const {
    std::vector<FieldElement> r;
    r.reserve(c_.size());
    for (const auto& a : c_) r.push_back(e(a));
    return OrePoly(e.target(), std::move(r));
}

int OrePoly::compare(const OrePoly& o) const {
    if (c_.size() != o.c_.size()) return c_.size() < o.c_.size() ? -1 : 1;
    for (std::size_t i = c_.size(); i-- > 0;)
        if (int c = c_[i].compare(o.c_[i])) return c;
    return 0;
}

std::string OrePoly::to_string() const {
    if (c_.empty()) return "0";
    std::string out;
    for (std::size_t i = c_.size(); i-- > 0;) {
        if (c_[i].is_zero()) continue;
        if (!out.empty()) out += " + ";
        const std::string term = "t^" + std::to_string(i);
        if (c_[i].is_one()) {
            out += term;
            continue;
        }
        std::string c = c_[i].to_string();
        if (c.find_first_of("+/*") != std::string::npos) c = "(" + c + ")";
        out += c + "*" + term;
    }
    return out;
}

std::pair<OrePoly, OrePoly> left_divmod(const OrePoly& f, const OrePoly& g) {
    if (g.is_zero()) throw DivisionByZero("left division by the zero Ore polynomial");
    const FieldPtr& field = f.field();
    if (!field->same_as(*g.field())) throw MixedBackends();
    const int e = g.degree();
    std::vector<FieldElement> rem = f.coeffs();
    std::vector<FieldElement> quo(std::max(0, f.degree() - e + 1), field->zero());
    // g twisted by each shift, computed on demand
    std::vector<OrePoly> shifted;
    shifted.push_back(g);
    for (int d = f.degree(); d >= e; --d) {
        if (rem[d].is_zero()) continue;
        const int s = d - e;
        while (static_cast<int>(shifted.size()) <= s) shifted.push_back(shifted.back().twist(1));
        const OrePoly& gs = shifted[s];
        const FieldElement c = rem[d] / gs.lead();
        quo[s] = c;
        for (int i = 0; i <= e; ++i)
            if (!gs.coeffs()[i].is_zero()) rem[s + i] -= c * gs.coeffs()[i];
    }
    rem.resize(std::max(0, std::min<int>(static_cast<int>(rem.size()), e)));
    return {OrePoly(field, std::move(quo)), OrePoly(field, std::move(rem))};
}

std::pair<OrePoly, OrePoly> right_divmod(const OrePoly& f, const OrePoly& g) {
    if (g.is_zero()) throw DivisionByZero("right division by the zero Ore polynomial");
    const FieldPtr& field = f.field();
    if (!field->same_as(*g.field())) throw MixedBackends();
    if (!field->has_inverse_frobenius()) throw CapabilityError("right division needs q-th roots (perfect closure)");
    const int e = g.degree();
    std::vector<FieldElement> rem = f.coeffs();
    std::vector<FieldElement> quo(std::max(0, f.degree() - e + 1), field->zero());
    const FieldElement lead_inv = g.lead().inverse();
    // g * c tau^s = sum_i g_i c^{q^i} tau^{i+s}
    for (int d = f.degree(); d >= e; --d) {
        if (rem[d].is_zero()) continue;
        const int s = d - e;
        const FieldElement c = (rem[d] * lead_inv).inverse_frobenius(static_cast<unsigned>(e));
        quo[s] = c;
        FieldElement cpow = c;
        for (int i = 0; i <= e; ++i) {
            if (i > 0) cpow = cpow.frobenius(1);
            if (!g.coeffs()[i].is_zero()) rem[s + i] -= g.coeffs()[i] * cpow;
        }
    }
    rem.resize(std::max(0, std::min<int>(static_cast<int>(rem.size()), e)));
    return {OrePoly(field, std::move(quo)), OrePoly(field, std::move(rem))};
}

OrePoly right_gcd(const OrePoly& f, const OrePoly& g) {
    if (f.is_zero() && g.is_zero()) throw DomainError("gcd of two zero polynomials");
    OrePoly a = f, b = g;
    while (!b.is_zero()) {
        OrePoly r = left_divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

OrePoly left_gcd(const OrePoly& f, const OrePoly& g) {
    if (f.is_zero() && g.is_zero()) throw DomainError("gcd of two zero polynomials");
    OrePoly a = f, b = g;
    while (!b.is_zero()) {
        OrePoly r = right_divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    // a = a0 * c with c^{...}: normalize by a right scalar so the lead is 1
    if (a.lead().is_one()) return a;
    const int d = a.degree();
    const FieldElement c = a.lead().inverse().inverse_frobenius(static_cast<unsigned>(d));
    return a * OrePoly::constant(c);
}

OrePoly left_lcm(const OrePoly& f, const OrePoly& g) {
    if (f.is_zero() || g.is_zero()) return OrePoly::zero(f.field());
    const FieldPtr& field = f.field();
    // r_i = s_i f + t_i g along the left-division chain
    OrePoly r0 = f, r1 = g;
    OrePoly s0 = OrePoly::one(field), s1 = OrePoly::zero(field);
    while (!r1.is_zero()) {
        auto [quo, rem] = left_divmod(r0, r1);
        OrePoly s2 = s0 - quo * s1;
        r0 = std::move(r1);
        r1 = std::move(rem);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    // s1 f + t1 g = 0 with s1 of minimal degree
    return (s1 * f).monic();
}

std::vector<FieldElement> fq_basis(const FieldPtr& f, const std::vector<FieldElement>& fp_span) {
    const unsigned l = f->descriptor().l;
    std::vector<FieldElement> w_pows;
    FieldElement w = f->from_fq(f->fq().generator()), cur = f->one();
    for (unsigned i = 0; i < l; ++i, cur = cur * w) w_pows.push_back(cur);
    std::vector<FieldElement> basis;
    smalllin::Matrix span;  // F_p-span of the F_q-span of basis
    for (const auto& v : fp_span) {
        smalllin::Matrix test = span;
        test.push_back(v.coords());
        if (smalllin::rank(f->fp(), test) == span.size()) continue;
        basis.push_back(v);
        for (const auto& wp : w_pows) span.push_back((wp * v).coords());
        // keep span a basis
        smalllin::rref(f->fp(), span);
        while (!span.empty() &&
               std::all_of(span.back().begin(), span.back().end(), [](Digit d) { return d == 0; }))
            span.pop_back();
    }
    return basis;
}

ExtensionKernel kernel_in_extension(const OrePoly& p, unsigned m) {
    const FieldPtr& src = p.field();
    if (!src->is_finite()) throw CapabilityError("kernels in extensions need a finite backend");
    if (m % src->degree_over_fq() != 0)
        throw DomainError("F_q^" + std::to_string(m) + " does not contain " + src->descriptor().to_string());
    const FieldPtr ext = Field::extension(src->q(), m);
    const OrePoly pe = p.map(Embedding::find(src, ext));
    const unsigned k = ext->degree_over_fp();
    // columns P(g^i) of the F_p-linear map x -> P(x)
    smalllin::Matrix rows(k, std::vector<Digit>(k, 0));
    FieldElement gi = ext->one();
    const FieldElement g = ext->generator();
    for (unsigned i = 0; i < k; ++i, gi = gi * g) {
        const auto img = pe.eval(gi).coords();
        for (unsigned j = 0; j < k; ++j) rows[j][i] = img[j];
    }
    std::vector<FieldElement> span;
    for (auto& v : smalllin::nullspace(ext->fp(), rows, k)) span.push_back(ext->from_coeffs(v));
    return {ext, fq_basis(ext, span)};
}

unsigned splitting_degree(const OrePoly& p, unsigned max_ext) {
    if (!p.is_separable()) throw DomainError("splitting search needs a separable Ore polynomial");
    if (!p.field()->is_finite()) throw CapabilityError("splitting fields need a finite backend");
    const unsigned m0 = p.field()->degree_over_fq();
    const FieldPtr& f = p.field();
    // x^{q^k} mod P(x) is the left remainder of tau^k by P, so the roots lie
    // in F_{q^M} exactly when that remainder is tau^0.
    OrePoly r = left_divmod(OrePoly::one(f), p).second;
    for (unsigned k = 1; k <= max_ext; ++k) {
        r = left_divmod(OrePoly::tau(f) * r, p).second;
        if (k % m0 == 0 && r.is_one()) return k;
    }
    throw NoSplittingFound("kernel of " + p.to_string() + " does not split in F_q^m for m <= " +
                           std::to_string(max_ext));
}

ExtensionKernel splitting_kernel(const OrePoly& p, unsigned max_ext) {
    auto k = kernel_in_extension(p, splitting_degree(p, max_ext));
    if (k.basis.size() != static_cast<std::size_t>(p.degree()))
        throw InvariantViolation("kernel dimension differs from the tau-degree in the splitting field");
    return k;
}

}  // namespace tauvar
