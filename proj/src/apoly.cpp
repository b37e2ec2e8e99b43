#include "tauvar/apoly.hpp"

#include <algorithm>
#include <sstream>

#include "tauvar/errors.hpp"

namespace tauvar {
namespace fqpoly {

void trim(FqVec& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

int degree(const FqVec& a) { return static_cast<int>(a.size()) - 1; }

FqVec add(const SmallField& f, const FqVec& a, const FqVec& b) {
    const FqVec& big = a.size() >= b.size() ? a : b;
    const FqVec& small = a.size() >= b.size() ? b : a;
    FqVec r = big;
    for (std::size_t i = 0; i < small.size(); ++i) r[i] = f.add(r[i], small[i]);
    trim(r);
    return r;
}

FqVec neg(const SmallField& f, const FqVec& a) {
    FqVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = f.neg(a[i]);
    return r;
}

FqVec sub(const SmallField& f, const FqVec& a, const FqVec& b) {
    FqVec r(std::max(a.size(), b.size()), 0);
    std::copy(a.begin(), a.end(), r.begin());
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = f.sub(r[i], b[i]);
    trim(r);
    return r;
}

FqVec mul(const SmallField& f, const FqVec& a, const FqVec& b) {
    if (a.empty() || b.empty()) return {};
    const std::size_t n = a.size() + b.size() - 1;
    if (f.l() == 1) {
        const std::uint64_t p = f.p();
        std::vector<std::uint64_t> acc(n, 0);
        for (std::size_t i = 0; i < a.size(); ++i) {
            const std::uint64_t ai = a[i];
            if (ai == 0) continue;
            std::uint64_t* out = acc.data() + i;
            for (std::size_t j = 0; j < b.size(); ++j) out[j] += ai * b[j];
            // keep the accumulators far from overflow for large p
            if (p > 4096 && (i & 255) == 255)
                for (auto& x : acc) x %= p;
        }
        FqVec r(n);
        for (std::size_t i = 0; i < n; ++i) r[i] = static_cast<Digit>(acc[i] % p);
        trim(r);
        return r;
    }
    FqVec r(n, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = f.add(r[i + j], f.mul(a[i], b[j]));
    }
    trim(r);
    return r;
}

FqVec scale(const SmallField& f, const FqVec& a, Digit c) {
    if (c == 0) return {};
    FqVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = f.mul(a[i], c);
    return r;
}

std::pair<FqVec, FqVec> divmod(const SmallField& f, const FqVec& a, const FqVec& b) {
    if (b.empty()) throw DivisionByZero();
    if (a.size() < b.size()) return {{}, a};
    FqVec r = a;
    const std::size_t db = b.size() - 1;
    FqVec quo(a.size() - db, 0);
    const Digit lead_inv = f.inv(b.back());
    for (std::size_t k = a.size(); k-- > db;) {
        const Digit c = f.mul(r[k], lead_inv);
        if (c == 0) continue;
        const std::size_t shift = k - db;
        quo[shift] = c;
        for (std::size_t i = 0; i <= db; ++i) r[shift + i] = f.sub(r[shift + i], f.mul(c, b[i]));
    }
    r.resize(db);
    trim(r);
    trim(quo);
    return {quo, r};
}

FqVec exact_div(const SmallField& f, const FqVec& a, const FqVec& b) {
    auto [q, r] = divmod(f, a, b);
    if (!r.empty()) throw InvariantViolation("inexact polynomial division");
    return q;
}

FqVec monic(const SmallField& f, const FqVec& a) {
    if (a.empty() || a.back() == 1) return a;
    return scale(f, a, f.inv(a.back()));
}

FqVec gcd(const SmallField& f, FqVec a, FqVec b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        FqVec r = divmod(f, a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return monic(f, a);
}

FqVec powmod(const SmallField& f, FqVec a, std::uint64_t e, const FqVec& m) {
    FqVec r = divmod(f, FqVec{1}, m).second;
    a = divmod(f, a, m).second;
    while (e) {
        if (e & 1) r = divmod(f, mul(f, r, a), m).second;
        e >>= 1;
        if (e) a = divmod(f, mul(f, a, a), m).second;
    }
    return r;
}

FqVec inflate(const FqVec& a, std::uint64_t k) {
    if (a.empty() || k == 1) return a;
    FqVec r((a.size() - 1) * k + 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i * k] = a[i];
    return r;
}

bool is_inflated(const FqVec& a, std::uint64_t k) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0 && i % k != 0) return false;
    return true;
}

FqVec deflate(const FqVec& a, std::uint64_t k) {
    if (a.empty() || k == 1) return a;
    FqVec r((a.size() - 1) / k + 1, 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i * k];
    return r;
}

bool is_irreducible(const SmallField& f, const FqVec& a) {
    if (a.size() < 2) return false;
    const unsigned d = static_cast<unsigned>(a.size() - 1);
    if (d == 1) return true;
    const FqVec m = monic(f, a);
    const FqVec x{0, 1};
    std::vector<FqVec> orbit{divmod(f, x, m).second};
    for (unsigned j = 1; j <= d; ++j) orbit.push_back(powmod(f, orbit.back(), f.q(), m));
    if (orbit[d] != orbit[0]) return false;
    unsigned k = d;
    for (unsigned r = 2; r <= k; ++r) {
        if (k % r != 0) continue;
        while (k % r == 0) k /= r;
        if (gcd(f, m, sub(f, orbit[d / r], orbit[0])).size() != 1) return false;
    }
    return true;
}

std::string render_scalar(const SmallField& f, Digit c) {
    if (f.l() == 1 || c < f.p()) return std::to_string(c);
    const auto d = f.digits(c);
    std::string out;
    for (std::size_t i = d.size(); i-- > 0;) {
        if (d[i] == 0) continue;
        if (!out.empty()) out += "+";
        if (i == 0) {
            out += std::to_string(d[i]);
            continue;
        }
        if (d[i] != 1) out += std::to_string(d[i]) + "*";
        out += "w";
        if (i > 1) out += "^" + std::to_string(i);
    }
    return out;
}

std::string render(const SmallField& f, const FqVec& a, const std::string& var) {
    if (a.empty()) return "0";
    std::string out;
    for (std::size_t i = a.size(); i-- > 0;) {
        if (a[i] == 0) continue;
        if (!out.empty()) out += "+";
        std::string c = render_scalar(f, a[i]);
        const bool compound = c.find('+') != std::string::npos;
        if (i == 0) {
            out += c;
            continue;
        }
        if (a[i] != 1) out += (compound ? "(" + c + ")" : c) + "*";
        out += var;
        if (i > 1) out += "^" + std::to_string(i);
    }
    return out;
}

}  // namespace fqpoly

APoly::APoly(std::shared_ptr<const SmallField> field, FqVec coeffs) : field_(std::move(field)), c_(std::move(coeffs)) {
    fqpoly::trim(c_);
}

APoly APoly::T(std::shared_ptr<const SmallField> field) { return APoly(std::move(field), FqVec{0, 1}); }

APoly APoly::constant(std::shared_ptr<const SmallField> field, Digit c) { return APoly(std::move(field), FqVec{c}); }

APoly APoly::operator+(const APoly& o) const { return APoly(field_, fqpoly::add(*field_, c_, o.c_)); }
APoly APoly::operator-(const APoly& o) const { return APoly(field_, fqpoly::sub(*field_, c_, o.c_)); }
APoly APoly::operator-() const { return APoly(field_, fqpoly::neg(*field_, c_)); }
APoly APoly::operator*(const APoly& o) const { return APoly(field_, fqpoly::mul(*field_, c_, o.c_)); }

APoly APoly::pow(unsigned e) const {
    APoly r = constant(field_, 1), b = *this;
    while (e) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

APoly APoly::monic() const { return APoly(field_, fqpoly::monic(*field_, c_)); }

bool APoly::is_prime() const { return fqpoly::is_irreducible(*field_, c_); }

std::string APoly::to_string() const { return fqpoly::render(*field_, c_, "T"); }

bool APoly::operator<(const APoly& o) const noexcept {
    if (c_.size() != o.c_.size()) return c_.size() < o.c_.size();
    for (std::size_t i = c_.size(); i-- > 0;)
        if (c_[i] != o.c_[i]) return c_[i] < o.c_[i];
    return false;
}

std::pair<APoly, APoly> divmod(const APoly& a, const APoly& b) {
    auto [q, r] = fqpoly::divmod(*a.field(), a.coeffs(), b.coeffs());
    return {APoly(a.field(), std::move(q)), APoly(a.field(), std::move(r))};
}

APoly gcd(const APoly& a, const APoly& b) { return APoly(a.field(), fqpoly::gcd(*a.field(), a.coeffs(), b.coeffs())); }

namespace {

// Calls visit(poly) for every monic polynomial of degree d in canonical order.
template <class Visit>
bool for_each_monic(const std::shared_ptr<const SmallField>& field, int d, Visit&& visit) {
    FqVec c(static_cast<std::size_t>(d) + 1, 0);
    c[d] = 1;
    while (true) {
        if (!visit(APoly(field, c))) return false;
        int i = 0;
        while (i < d) {
            if (++c[i] < field->q()) break;
            c[i] = 0;
            ++i;
        }
        if (i == d) return true;
    }
}

}  // namespace

std::vector<APoly> primes_up_to_degree(const std::shared_ptr<const SmallField>& field, int max_degree) {
    std::vector<APoly> out;
    for (int d = 1; d <= max_degree; ++d)
        for_each_monic(field, d, [&](APoly a) {
            if (a.is_prime()) out.push_back(std::move(a));
            return true;
        });
    return out;
}

std::vector<APoly> first_primes(const std::shared_ptr<const SmallField>& field, std::size_t count) {
    std::vector<APoly> out;
    for (int d = 1; out.size() < count; ++d)
        for_each_monic(field, d, [&](APoly a) {
            if (a.is_prime()) out.push_back(std::move(a));
            return out.size() < count;
        });
    return out;
}

}  // namespace tauvar
