#include "tauvar/field.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "tauvar/errors.hpp"
#include "tauvar/fplinalg.hpp"

namespace tauvar {

std::string to_string(FieldKind kind) {
    switch (kind) {
        case FieldKind::PrimeField:
            return "PrimeField";
        case FieldKind::ExtField:
            return "ExtField";
        case FieldKind::RationalFunctions:
            return "RationalFunctions";
        case FieldKind::PerfectClosure:
            return "PerfectClosure";
    }
    return "?";
}

std::uint32_t FieldDescriptor::q() const noexcept {
    std::uint32_t q = 1;
    for (unsigned i = 0; i < l; ++i) q *= p;
    return q;
}

std::string FieldDescriptor::to_string() const {
    const std::string fq = "F_" + std::to_string(q());
    switch (kind) {
        case FieldKind::PrimeField:
            return fq;
        case FieldKind::ExtField:
            return "F_" + std::to_string(q()) + "^" + std::to_string(m);
        case FieldKind::RationalFunctions:
            return fq + "(T)";
        case FieldKind::PerfectClosure:
            return fq + "(T)^perf";
    }
    return fq;
}

namespace {

using Coords = std::vector<Digit>;

std::uint64_t checked_power(std::uint64_t base, unsigned e) {
    std::uint64_t r = 1;
    for (unsigned i = 0; i < e; ++i) {
        if (r > (std::uint64_t{1} << 40) / base) throw CapabilityError("exponent growth exceeds the supported range");
        r *= base;
    }
    return r;
}

// Inverse of a modulo f over F_p by the extended Euclidean algorithm.
FpPoly fp_inverse_mod(const FpPoly& a, const FpPoly& f, Digit p) {
    FpPoly r0 = f, r1 = a, s0{}, s1{1};
    fp::trim(r1);
    if (r1.empty()) throw DivisionByZero();
    while (!r1.empty()) {
        // polynomial quotient r0 / r1
        FpPoly quo;
        FpPoly rem = r0;
        const Digit lead_inv = fp::inv(r1.back(), p);
        if (rem.size() >= r1.size()) quo.assign(rem.size() - r1.size() + 1, 0);
        while (rem.size() >= r1.size() && !rem.empty()) {
            const std::size_t shift = rem.size() - r1.size();
            const Digit c = static_cast<Digit>(std::uint64_t(rem.back()) * lead_inv % p);
            quo[shift] = c;
            for (std::size_t i = 0; i < r1.size(); ++i)
                rem[shift + i] = static_cast<Digit>((rem[shift + i] + std::uint64_t(p - c) * r1[i]) % p);
            fp::trim(rem);
        }
        fp::trim(quo);
        FpPoly s2 = fp::sub(s0, fp::mul(quo, s1, p), p);
        r0 = std::move(r1);
        r1 = std::move(rem);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    if (r0.size() != 1) throw DivisionByZero("element is not invertible");
    const Digit c = fp::inv(r0[0], p);
    for (auto& x : s0) x = static_cast<Digit>(std::uint64_t(x) * c % p);
    return s0;
}

Coords padded(FpPoly a, std::size_t k) {
    a.resize(k, 0);
    return a;
}

int compare_vec_top_down(const std::vector<Digit>& a, const std::vector<Digit>& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (std::size_t i = a.size(); i-- > 0;)
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    return 0;
}

std::mutex& cache_mutex() {
    static std::mutex m;
    return m;
}

// Extension fields are expensive to set up (irreducible search, Frobenius
// matrix, root of the F_q modulus); they are immutable, so one instance per
// (q, m) is shared.
std::map<std::pair<std::uint32_t, unsigned>, FieldPtr>& extension_cache() {
    static std::map<std::pair<std::uint32_t, unsigned>, FieldPtr> cache;
    return cache;
}

// Polynomials with FieldElement coefficients, low degree first, trimmed.
namespace kpoly {

using Poly = std::vector<FieldElement>;

void trim(Poly& a) {
    while (!a.empty() && a.back().is_zero()) a.pop_back();
}

Poly mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    const auto& f = a[0].field();
    Poly r(a.size() + b.size() - 1, f->zero());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    trim(r);
    return r;
}

std::pair<Poly, Poly> divmod(Poly a, const Poly& b) {
    trim(a);
    if (b.empty()) throw DivisionByZero();
    if (a.size() < b.size()) return {{}, a};
    const auto& f = b[0].field();
    Poly quo(a.size() - b.size() + 1, f->zero());
    const FieldElement lead_inv = b.back().inverse();
    for (std::size_t k = a.size(); k-- >= b.size();) {
        if (a[k].is_zero()) continue;
        const std::size_t shift = k - (b.size() - 1);
        const FieldElement c = a[k] * lead_inv;
        quo[shift] = c;
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
    }
    a.resize(b.size() - 1);
    trim(a);
    trim(quo);
    return {quo, a};
}

Poly monic(Poly a) {
    trim(a);
    if (a.empty()) return a;
    const FieldElement inv = a.back().inverse();
    for (auto& c : a) c *= inv;
    return a;
}

Poly gcd(Poly a, Poly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return monic(std::move(a));
}

Poly powmod(Poly a, std::uint64_t e, const Poly& m) {
    const auto& f = m[0].field();
    Poly r = divmod(Poly{f->one()}, m).second;
    a = divmod(a, m).second;
    while (e) {
        if (e & 1) r = divmod(mul(r, a), m).second;
        e >>= 1;
        if (e) a = divmod(mul(a, a), m).second;
    }
    return r;
}

}  // namespace kpoly

void collect_roots(const kpoly::Poly& h, std::vector<FieldElement>& out) {
    const std::size_t d = h.size() - 1;
    if (d == 0) return;
    const auto& f = h[0].field();
    if (d == 1) {
        out.push_back(-(h[0] / h[1]));
        return;
    }
    const unsigned k = f->degree_over_fp();
    FieldElement beta = f->one();
    const FieldElement g = f->generator();
    // Trace splitting: the trace form is nondegenerate, so some beta in the
    // basis 1, g, ..., g^{k-1} separates any two distinct roots.
    for (unsigned j = 0; j < k; ++j, beta = beta * g) {
        kpoly::Poly u = kpoly::divmod(kpoly::Poly{f->zero(), beta}, h).second;
        kpoly::Poly trace = u;
        for (unsigned i = 1; i < k; ++i) {
            u = kpoly::powmod(u, f->p(), h);
            trace.resize(std::max(trace.size(), u.size()), f->zero());
            for (std::size_t t = 0; t < u.size(); ++t) trace[t] += u[t];
            kpoly::trim(trace);
        }
        for (Digit c = 0; c < f->p(); ++c) {
            kpoly::Poly shifted = trace;
            if (shifted.empty()) shifted.push_back(f->zero());
            shifted[0] -= f->from_int(c);
            kpoly::trim(shifted);
            const kpoly::Poly factor = kpoly::gcd(h, shifted);
            if (factor.size() > 1 && factor.size() < h.size()) {
                collect_roots(factor, out);
                collect_roots(kpoly::divmod(h, factor).first, out);
                return;
            }
        }
    }
    throw InvariantViolation("polynomial does not split into distinct linear factors");
}

}  // namespace

// ---------------------------------------------------------------- Field

Field::Field(FieldDescriptor d, std::shared_ptr<const SmallField> fq) : desc_(std::move(d)), fq_(std::move(fq)) {
    fp_ = fq_->l() == 1 ? fq_ : SmallField::make(fq_->p());
}

FieldPtr Field::prime(std::uint32_t p) {
    if (!is_prime(p)) throw DomainError("p must be prime, got " + std::to_string(p));
    return extension(p, 1);
}

FieldPtr Field::extension(std::uint32_t q, unsigned m) {
    if (m == 0) throw DomainError("extension degree must be positive");
    {
        std::lock_guard<std::mutex> lock(cache_mutex());
        auto it = extension_cache().find({q, m});
        if (it != extension_cache().end()) return it->second;
    }
    auto fq = SmallField::make(q);
    FieldDescriptor d;
    d.p = fq->p();
    d.l = fq->l();
    d.kind = (fq->l() == 1 && m == 1) ? FieldKind::PrimeField : FieldKind::ExtField;
    d.m = m;
    d.modulus = fp::first_irreducible(fq->p(), fq->l() * m);
    auto f = std::shared_ptr<Field>(new Field(std::move(d), std::move(fq)));
    f->init_finite();
    std::lock_guard<std::mutex> lock(cache_mutex());
    return extension_cache().emplace(std::make_pair(q, m), f).first->second;
}

FieldPtr Field::rational_functions(std::uint32_t q) {
    auto fq = SmallField::make(q);
    FieldDescriptor d;
    d.p = fq->p();
    d.l = fq->l();
    d.kind = FieldKind::RationalFunctions;
    return std::shared_ptr<Field>(new Field(std::move(d), std::move(fq)));
}

FieldPtr Field::perfect_closure(std::uint32_t q) {
    auto fq = SmallField::make(q);
    FieldDescriptor d;
    d.p = fq->p();
    d.l = fq->l();
    d.kind = FieldKind::PerfectClosure;
    return std::shared_ptr<Field>(new Field(std::move(d), std::move(fq)));
}

FieldPtr Field::lifted() const {
    if (desc_.kind == FieldKind::PerfectClosure) return shared_from_this();
    if (desc_.kind != FieldKind::RationalFunctions) throw CapabilityError("only F_q(T) lifts to its perfect closure");
    return perfect_closure(q());
}

FieldPtr Field::unlifted() const {
    if (desc_.kind == FieldKind::RationalFunctions) return shared_from_this();
    if (desc_.kind != FieldKind::PerfectClosure) throw CapabilityError("not a perfect closure");
    return rational_functions(q());
}

void Field::init_finite() {
    const Digit p = desc_.p;
    k_ = static_cast<unsigned>(desc_.modulus.size() - 1);
    frob_p_cols_.clear();
    for (unsigned i = 0; i < k_; ++i) {
        FpPoly gi(i + 1, 0);
        gi[i] = 1;
        frob_p_cols_.push_back(padded(fp::powmod(gi, p, desc_.modulus, p), k_));
    }
    const unsigned l = desc_.l;
    w_image_.assign(k_, 0);
    if (l == 1) {
        w_image_[0] = 1;
    } else if (desc_.m == 1) {
        // same modulus as F_q: w is g itself
        w_image_[1] = 1;
    } else {
        // The norm of h down to F_q lies in F_q^*; its powers eventually hit a
        // root of the F_q modulus once the norm generates F_q^*.
        const FpPoly& mod_fq = fq_->modulus();
        w_image_.clear();
        Coords h(k_, 0);
        h[0] = 1;
        for (unsigned attempt = 1; w_image_.empty(); ++attempt) {
            // h runs through 1 + g, 2 + g, ... , g^2, ...
            Digit a = attempt;
            for (unsigned i = 0; i < k_ && a; ++i, a /= desc_.p) h[i] = a % desc_.p;
            Coords norm = h, conj = h;
            for (unsigned j = 1; j < desc_.m; ++j) {
                for (unsigned s = 0; s < l; ++s) conj = fin_frob_p(conj);
                norm = fin_mul(norm, conj);
            }
            Coords z = norm;
            for (std::uint32_t j = 1; j < fq_->q() && w_image_.empty(); ++j, z = fin_mul(z, norm)) {
                // evaluate the F_q modulus (coefficients in F_p) at z
                Coords acc(k_, 0);
                for (std::size_t i = mod_fq.size(); i-- > 0;) {
                    acc = fin_mul(acc, z);
                    acc[0] = (acc[0] + mod_fq[i]) % desc_.p;
                }
                if (std::all_of(acc.begin(), acc.end(), [](Digit d) { return d == 0; })) w_image_ = z;
            }
            if (attempt > 100000) throw InvariantViolation("no root of the F_q modulus found");
        }
    }
    w_powers_.clear();
    Coords cur(k_, 0);
    cur[0] = 1;
    for (unsigned i = 0; i < l; ++i) {
        w_powers_.push_back(cur);
        cur = fin_mul(cur, w_image_);
    }
}

Coords Field::fin_mul(const Coords& a, const Coords& b) const {
    const std::uint64_t p = desc_.p;
    const unsigned k = k_;
    if (k == 1) return {static_cast<Digit>(std::uint64_t(a[0]) * b[0] % p)};
    // raw accumulation is safe: k * p^2 stays far below 2^64
    std::vector<std::uint64_t> acc(2 * k - 1, 0);
    for (unsigned i = 0; i < k; ++i) {
        const std::uint64_t ai = a[i];
        if (ai == 0) continue;
        std::uint64_t* out = acc.data() + i;
        for (unsigned j = 0; j < k; ++j) out[j] += ai * b[j];
    }
    const FpPoly& f = desc_.modulus;
    for (unsigned t = 2 * k - 1; t-- > k;) {
        const std::uint64_t c = acc[t] % p;
        if (c == 0) continue;
        const std::uint64_t neg = p - c;
        std::uint64_t* out = acc.data() + (t - k);
        for (unsigned j = 0; j < k; ++j) out[j] += neg * f[j];
    }
    Coords r(k);
    for (unsigned i = 0; i < k; ++i) r[i] = static_cast<Digit>(acc[i] % p);
    return r;
}

Coords Field::fin_inv(const Coords& a) const {
    FpPoly x = a;
    fp::trim(x);
    return padded(fp_inverse_mod(x, desc_.modulus, desc_.p), k_);
}

Coords Field::fin_frob_p(const Coords& a) const {
    const std::uint64_t p = desc_.p;
    std::vector<std::uint64_t> acc(k_, 0);
    for (unsigned i = 0; i < k_; ++i) {
        const std::uint64_t ai = a[i];
        if (ai == 0) continue;
        const auto& col = frob_p_cols_[i];
        for (unsigned j = 0; j < k_; ++j) acc[j] += ai * col[j];
    }
    Coords r(k_);
    for (unsigned j = 0; j < k_; ++j) r[j] = static_cast<Digit>(acc[j] % p);
    return r;
}

FieldElement Field::zero() const {
    if (is_finite()) return FieldElement(shared_from_this(), Coords(k_, 0), {}, 0);
    return FieldElement(shared_from_this(), {}, {1}, 0);
}

FieldElement Field::one() const { return from_fq(1); }

FieldElement Field::from_int(long long v) const { return from_fq(fq_->from_int(v)); }

FieldElement Field::from_fq(Digit c) const {
    if (c >= fq_->q()) throw DomainError("F_q element out of range");
    if (is_function_field()) {
        FqVec num;
        if (c != 0) num.push_back(c);
        return FieldElement(shared_from_this(), std::move(num), {1}, 0);
    }
    Coords r(k_, 0);
    if (c < desc_.p) {
        r[0] = c;
    } else {
        const auto digits = fq_->digits(c);
        for (unsigned i = 0; i < desc_.l; ++i)
            for (unsigned j = 0; j < k_; ++j)
                r[j] = static_cast<Digit>((r[j] + std::uint64_t(digits[i]) * w_powers_[i][j]) % desc_.p);
    }
    return FieldElement(shared_from_this(), std::move(r), {}, 0);
}

FieldElement Field::generator() const {
    if (!is_finite()) throw CapabilityError("g exists only in finite backends");
    Coords r(k_, 0);
    if (k_ == 1) {
        r[0] = desc_.modulus[0] == 0 ? 0 : (desc_.p - desc_.modulus[0]) % desc_.p;
    } else {
        r[1] = 1;
    }
    return FieldElement(shared_from_this(), std::move(r), {}, 0);
}

FieldElement Field::T() const {
    if (!is_function_field()) throw CapabilityError("T exists only in function-field backends");
    return FieldElement(shared_from_this(), {0, 1}, {1}, 0);
}

FieldElement Field::root_of_T(unsigned k) const {
    if (k == 0) return T();
    if (desc_.kind != FieldKind::PerfectClosure) throw CapabilityError("T^(1/q^k) requires the perfect closure");
    return FieldElement(shared_from_this(), {0, 1}, {1}, k);
}

FieldElement Field::from_coeffs(std::vector<Digit> coeffs) const {
    if (!is_finite()) throw CapabilityError("coordinate vectors apply to finite backends");
    FpPoly a = std::move(coeffs);
    for (auto& x : a) x %= desc_.p;
    fp::trim(a);
    a = fp::mod(std::move(a), desc_.modulus, desc_.p);
    return FieldElement(shared_from_this(), padded(std::move(a), k_), {}, 0);
}

FieldElement Field::from_fraction(FqVec num, FqVec den, unsigned level) const {
    if (!is_function_field()) throw CapabilityError("fractions apply to function-field backends");
    if (level > 0 && desc_.kind != FieldKind::PerfectClosure)
        throw CapabilityError("positive level requires the perfect closure");
    fqpoly::trim(num);
    fqpoly::trim(den);
    if (den.empty()) throw DivisionByZero();
    FieldElement e(shared_from_this(), std::move(num), std::move(den), level);
    e.normalize_fraction();
    e.normalize_level();
    return e;
}

// ---------------------------------------------------------------- FieldElement

void FieldElement::check_same(const FieldElement& o) const {
    if (!field_ || !o.field_) throw InvariantViolation("uninitialized field element");
    if (!field_->same_as(*o.field_))
        throw MixedBackends("operands belong to " + field_->descriptor().to_string() + " and " +
                            o.field_->descriptor().to_string());
}

void FieldElement::normalize_fraction() {
    const SmallField& f = field_->fq();
    fqpoly::trim(a_);
    fqpoly::trim(b_);
    if (a_.empty()) {
        b_ = {1};
        level_ = 0;
        return;
    }
    if (b_.size() > 1) {
        FqVec g = fqpoly::gcd(f, a_, b_);
        if (g.size() > 1) {
            a_ = fqpoly::exact_div(f, a_, g);
            b_ = fqpoly::exact_div(f, b_, g);
        }
    }
    if (b_.back() != 1) {
        const Digit inv = f.inv(b_.back());
        a_ = fqpoly::scale(f, a_, inv);
        b_ = fqpoly::scale(f, b_, inv);
    }
}

void FieldElement::normalize_level() {
    const std::uint64_t q = field_->q();
    while (level_ > 0 && fqpoly::is_inflated(a_, q) && fqpoly::is_inflated(b_, q)) {
        a_ = fqpoly::deflate(a_, q);
        b_ = fqpoly::deflate(b_, q);
        --level_;
    }
    if (a_.empty()) level_ = 0;
}

bool FieldElement::is_zero() const noexcept {
    if (field_ && field_->is_finite()) return std::all_of(a_.begin(), a_.end(), [](Digit d) { return d == 0; });
    return a_.empty();
}

bool FieldElement::is_one() const noexcept {
    if (field_ && field_->is_finite()) {
        if (a_.empty() || a_[0] != 1) return false;
        return std::all_of(a_.begin() + 1, a_.end(), [](Digit d) { return d == 0; });
    }
    return a_.size() == 1 && a_[0] == 1 && b_.size() == 1 && level_ == 0;
}

namespace {

// Brings a function-field payload from level `from` to level `to` >= from.
void lift_payload(FqVec& num, FqVec& den, unsigned from, unsigned to, std::uint32_t q) {
    if (to == from) return;
    const std::uint64_t k = checked_power(q, to - from);
    num = fqpoly::inflate(num, k);
    den = fqpoly::inflate(den, k);
}

}  // namespace

FieldElement FieldElement::operator+(const FieldElement& o) const {
    check_same(o);
    if (field_->is_finite()) {
        const Digit p = field_->p();
        Coords r(a_.size());
        for (std::size_t i = 0; i < r.size(); ++i) {
            const Digit s = a_[i] + o.a_[i];
            r[i] = s >= p ? s - p : s;
        }
        return FieldElement(field_, std::move(r), {}, 0);
    }
    if (o.a_.empty()) return *this;
    if (a_.empty()) return o;
    const SmallField& f = field_->fq();
    FqVec n1 = a_, d1 = b_, n2 = o.a_, d2 = o.b_;
    const unsigned level = std::max(level_, o.level_);
    lift_payload(n1, d1, level_, level, field_->q());
    lift_payload(n2, d2, o.level_, level, field_->q());
    FieldElement r(field_, {}, {}, level);
    if (d1 == d2) {
        r.a_ = fqpoly::add(f, n1, n2);
        r.b_ = std::move(d1);
    } else {
        const FqVec g = fqpoly::gcd(f, d1, d2);
        const FqVec d1g = fqpoly::exact_div(f, d1, g);
        const FqVec d2g = fqpoly::exact_div(f, d2, g);
        r.a_ = fqpoly::add(f, fqpoly::mul(f, n1, d2g), fqpoly::mul(f, n2, d1g));
        r.b_ = fqpoly::mul(f, d1g, d2);
    }
    r.normalize_fraction();
    r.normalize_level();
    return r;
}

FieldElement FieldElement::operator-() const {
    if (field_->is_finite()) {
        const Digit p = field_->p();
        Coords r(a_.size());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = a_[i] == 0 ? 0 : p - a_[i];
        return FieldElement(field_, std::move(r), {}, 0);
    }
    return FieldElement(field_, fqpoly::neg(field_->fq(), a_), b_, level_);
}

FieldElement FieldElement::operator-(const FieldElement& o) const { return *this + (-o); }

FieldElement FieldElement::operator*(const FieldElement& o) const {
    check_same(o);
    if (field_->is_finite()) return FieldElement(field_, field_->fin_mul(a_, o.a_), {}, 0);
    if (a_.empty()) return *this;
    if (o.a_.empty()) return o;
    const SmallField& f = field_->fq();
    FqVec n1 = a_, d1 = b_, n2 = o.a_, d2 = o.b_;
    const unsigned level = std::max(level_, o.level_);
    lift_payload(n1, d1, level_, level, field_->q());
    lift_payload(n2, d2, o.level_, level, field_->q());
    // cross-cancel so the product stays reduced
    const FqVec g1 = fqpoly::gcd(f, n1, d2);
    const FqVec g2 = fqpoly::gcd(f, n2, d1);
    if (g1.size() > 1) {
        n1 = fqpoly::exact_div(f, n1, g1);
        d2 = fqpoly::exact_div(f, d2, g1);
    }
    if (g2.size() > 1) {
        n2 = fqpoly::exact_div(f, n2, g2);
        d1 = fqpoly::exact_div(f, d1, g2);
    }
    FieldElement r(field_, fqpoly::mul(f, n1, n2), fqpoly::mul(f, d1, d2), level);
    if (r.b_.back() != 1) {
        const Digit inv = f.inv(r.b_.back());
        r.a_ = fqpoly::scale(f, r.a_, inv);
        r.b_ = fqpoly::scale(f, r.b_, inv);
    }
    r.normalize_level();
    return r;
}

FieldElement FieldElement::inverse() const {
    if (is_zero()) throw DivisionByZero();
    if (field_->is_finite()) return FieldElement(field_, field_->fin_inv(a_), {}, 0);
    const SmallField& f = field_->fq();
    const Digit inv = f.inv(a_.back());
    return FieldElement(field_, fqpoly::scale(f, b_, inv), fqpoly::scale(f, a_, inv), level_);
}

FieldElement FieldElement::operator/(const FieldElement& o) const {
    check_same(o);
    return *this * o.inverse();
}

FieldElement FieldElement::pow(std::uint64_t e) const {
    FieldElement r = field_->one(), b = *this;
    while (e) {
        if (e & 1) r *= b;
        e >>= 1;
        if (e) b *= b;
    }
    return r;
}

FieldElement FieldElement::frobenius(unsigned n) const {
    if (n == 0 || is_zero()) return *this;
    switch (field_->kind()) {
        case FieldKind::PrimeField:
            return *this;
        case FieldKind::ExtField: {
            const unsigned m = field_->degree_over_fq();
            const unsigned steps = (n % m) * field_->descriptor().l;
            Coords r = a_;
            for (unsigned i = 0; i < steps; ++i) r = field_->fin_frob_p(r);
            return FieldElement(field_, std::move(r), {}, 0);
        }
        case FieldKind::RationalFunctions: {
            const std::uint64_t k = checked_power(field_->q(), n);
            return FieldElement(field_, fqpoly::inflate(a_, k), fqpoly::inflate(b_, k), 0);
        }
        case FieldKind::PerfectClosure: {
            if (level_ >= n) return FieldElement(field_, a_, b_, level_ - n);
            const std::uint64_t k = checked_power(field_->q(), n - level_);
            return FieldElement(field_, fqpoly::inflate(a_, k), fqpoly::inflate(b_, k), 0);
        }
    }
    return *this;
}

FieldElement FieldElement::inverse_frobenius(unsigned n) const {
    switch (field_->kind()) {
        case FieldKind::PrimeField:
            return *this;
        case FieldKind::ExtField: {
            const unsigned m = field_->degree_over_fq();
            return frobenius((m - n % m) % m);
        }
        case FieldKind::RationalFunctions:
            throw CapabilityError("F_q(T) is not perfect: q-th roots need the perfect closure");
        case FieldKind::PerfectClosure: {
            if (n == 0 || is_zero()) return *this;
            FieldElement r(field_, a_, b_, level_ + n);
            r.normalize_level();
            return r;
        }
    }
    return *this;
}

bool FieldElement::operator==(const FieldElement& o) const {
    check_same(o);
    return a_ == o.a_ && b_ == o.b_ && level_ == o.level_;
}

int FieldElement::compare(const FieldElement& o) const {
    check_same(o);
    if (level_ != o.level_) return level_ < o.level_ ? -1 : 1;
    if (int c = compare_vec_top_down(a_, o.a_)) return c;
    return compare_vec_top_down(b_, o.b_);
}

FieldElement FieldElement::with_field(const FieldPtr& f) const {
    if (f->same_as(*field_)) return FieldElement(f, a_, b_, level_);
    if (!f->is_function_field() || !field_->is_function_field() || f->q() != field_->q())
        throw MixedBackends("cannot move " + field_->descriptor().to_string() + " element to " +
                            f->descriptor().to_string());
    if (f->kind() == FieldKind::RationalFunctions && level_ > 0)
        throw DomainError("element " + to_string() + " does not lie in F_q(T)");
    return FieldElement(f, a_, b_, level_);
}

bool FieldElement::in_fq() const {
    if (field_->is_function_field()) return level_ == 0 && b_.size() == 1 && a_.size() <= 1;
    return frobenius(1) == *this;
}

Digit FieldElement::to_fq() const {
    if (field_->is_function_field()) {
        if (!in_fq()) throw DomainError("element is not in F_q");
        return a_.empty() ? 0 : a_[0];
    }
    const auto& d = field_->descriptor();
    if (d.l == 1) {
        if (!std::all_of(a_.begin() + 1, a_.end(), [](Digit x) { return x == 0; }))
            throw DomainError("element is not in F_q");
        return a_[0];
    }
    // solve sum_i c_i w^i = x over F_p
    smalllin::Matrix m(field_->degree_over_fp(), std::vector<Digit>(d.l, 0));
    for (unsigned i = 0; i < d.l; ++i)
        for (unsigned j = 0; j < field_->degree_over_fp(); ++j) m[j][i] = field_->w_powers_[i][j];
    auto sol = smalllin::solve(field_->fp(), m, a_, d.l);
    if (!sol) throw DomainError("element is not in F_q");
    return field_->fq().from_digits(*sol);
}

std::string FieldElement::to_string() const {
    if (!field_) return "<null>";
    if (field_->is_finite()) {
        FpPoly a = a_;
        fp::trim(a);
        if (field_->degree_over_fp() == 1) return std::to_string(a.empty() ? 0 : a[0]);
        return fqpoly::render(field_->fp(), a, "g");
    }
    const SmallField& f = field_->fq();
    const std::string var = level_ == 0 ? "T" : "S{" + std::to_string(level_) + "}";
    std::string num = fqpoly::render(f, a_, var);
    if (b_.size() == 1) return num;
    const auto wrap = [](const std::string& s) {
        return s.find('+') != std::string::npos || s.find('*') != std::string::npos ? "(" + s + ")" : s;
    };
    return wrap(num) + "/" + wrap(fqpoly::render(f, b_, var));
}

FieldElement eval(const APoly& a, const FieldElement& x) {
    const auto& f = x.field();
    FieldElement r = f->zero();
    for (std::size_t i = a.coeffs().size(); i-- > 0;) r = r * x + f->from_fq(a.coeffs()[i]);
    return r;
}

// ---------------------------------------------------------------- Embedding

Embedding Embedding::identity(const FieldPtr& f) {
    Embedding e;
    e.src_ = e.dst_ = f;
    if (f->is_finite()) {
        for (unsigned i = 0; i < f->degree_over_fp(); ++i) {
            Coords c(f->degree_over_fp(), 0);
            c[i] = 1;
            e.images_.push_back(std::move(c));
        }
    }
    return e;
}

Embedding Embedding::find(const FieldPtr& source, const FieldPtr& target) {
    if (source->same_as(*target)) return identity(source);
    static std::mutex mutex;
    static std::map<std::pair<FieldDescriptor, FieldDescriptor>, Embedding> cache;
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find({source->descriptor(), target->descriptor()});
        if (it != cache.end()) return it->second;
    }
    Embedding e = search(source, target);
    std::lock_guard<std::mutex> lock(mutex);
    return cache.emplace(std::make_pair(source->descriptor(), target->descriptor()), e).first->second;
}

Embedding Embedding::search(const FieldPtr& source, const FieldPtr& target) {
    if (!source->is_finite() || !target->is_finite() || source->q() != target->q())
        throw CapabilityError("embeddings exist only between finite backends over the same F_q");
    const unsigned ks = source->degree_over_fp(), kt = target->degree_over_fp();
    if (kt % ks != 0)
        throw DomainError(source->descriptor().to_string() + " does not embed into " +
                          target->descriptor().to_string());
    std::vector<FieldElement> poly;
    for (Digit c : source->descriptor().modulus) poly.push_back(target->from_int(c));
    auto roots = split_roots(poly);
    std::sort(roots.begin(), roots.end(), [](const FieldElement& a, const FieldElement& b) { return a.compare(b) < 0; });
    const FieldElement w_src = source->from_fq(source->fq().generator());
    const FieldElement w_dst = target->from_fq(target->fq().generator());
    for (const auto& gamma : roots) {
        Embedding e;
        e.src_ = source;
        e.dst_ = target;
        FieldElement cur = target->one();
        for (unsigned i = 0; i < ks; ++i) {
            e.images_.push_back(cur.coords());
            cur = cur * gamma;
        }
        if (source->descriptor().l == 1 || e(w_src) == w_dst) return e;
    }
    throw InvariantViolation("no F_q-compatible embedding found");
}

FieldElement Embedding::operator()(const FieldElement& x) const {
    if (!x.field()->same_as(*src_)) throw MixedBackends("element is not in the embedding's source");
    if (src_ == dst_ || src_->same_as(*dst_)) return x;
    const Digit p = dst_->p();
    const unsigned kt = dst_->degree_over_fp();
    std::vector<std::uint64_t> acc(kt, 0);
    const auto& c = x.coords();
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] == 0) continue;
        for (unsigned j = 0; j < kt; ++j) acc[j] = (acc[j] + std::uint64_t(c[i]) * images_[i][j]) % p;
    }
    return dst_->from_coeffs(Coords(acc.begin(), acc.end()));
}

std::vector<FieldElement> split_roots(const std::vector<FieldElement>& poly) {
    kpoly::Poly h = poly;
    kpoly::trim(h);
    if (h.empty()) throw DomainError("the zero polynomial has every element as a root");
    if (!h[0].field()->is_finite()) throw CapabilityError("root splitting needs a finite backend");
    h = kpoly::monic(std::move(h));
    std::vector<FieldElement> out;
    collect_roots(h, out);
    return out;
}

}  // namespace tauvar
