#include "tauvar/fq.hpp"

#include <algorithm>

#include "tauvar/errors.hpp"

namespace tauvar {

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::pair<Digit, unsigned> prime_power(std::uint64_t q) {
    if (q < 2) throw DomainError("q must be a prime power, got " + std::to_string(q));
    std::uint64_t p = 0;
    for (std::uint64_t d = 2; d * d <= q; ++d) {
        if (q % d == 0) {
            p = d;
            break;
        }
    }
    if (p == 0) return {static_cast<Digit>(q), 1};
    unsigned l = 0;
    while (q % p == 0) {
        q /= p;
        ++l;
    }
    if (q != 1) throw DomainError("q must be a prime power");
    return {static_cast<Digit>(p), l};
}

namespace fp {

void trim(FpPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

Digit inv(Digit a, Digit p) {
    if (a % p == 0) throw DivisionByZero();
    // Fermat; p is small
    std::uint64_t r = 1, b = a % p, e = p - 2;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return static_cast<Digit>(r);
}

FpPoly add(const FpPoly& a, const FpPoly& b, Digit p) {
    FpPoly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = (r[i] + b[i]) % p;
    trim(r);
    return r;
}

FpPoly sub(const FpPoly& a, const FpPoly& b, Digit p) {
    FpPoly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = (r[i] + p - b[i]) % p;
    trim(r);
    return r;
}

FpPoly mul(const FpPoly& a, const FpPoly& b, Digit p) {
    if (a.empty() || b.empty()) return {};
    std::vector<std::uint64_t> acc(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) acc[i + j] = (acc[i + j] + std::uint64_t(a[i]) * b[j]) % p;
    }
    FpPoly r(acc.begin(), acc.end());
    trim(r);
    return r;
}

FpPoly mod(FpPoly a, const FpPoly& f, Digit p) {
    if (f.empty()) throw DivisionByZero();
    const Digit lead_inv = inv(f.back(), p);
    const std::size_t df = f.size() - 1;
    while (a.size() > df) {
        const Digit c = static_cast<Digit>(std::uint64_t(a.back()) * lead_inv % p);
        const std::size_t shift = a.size() - 1 - df;
        if (c != 0)
            for (std::size_t i = 0; i <= df; ++i)
                a[shift + i] = static_cast<Digit>((a[shift + i] + std::uint64_t(p - c) * f[i]) % p);
        a.pop_back();
        trim(a);
    }
    trim(a);
    return a;
}

FpPoly mulmod(const FpPoly& a, const FpPoly& b, const FpPoly& f, Digit p) { return mod(mul(a, b, p), f, p); }

FpPoly powmod(FpPoly a, std::uint64_t e, const FpPoly& f, Digit p) {
    FpPoly r{1};
    r = mod(r, f, p);
    a = mod(std::move(a), f, p);
    while (e) {
        if (e & 1) r = mulmod(r, a, f, p);
        e >>= 1;
        if (e) a = mulmod(a, a, f, p);
    }
    return r;
}

FpPoly gcd(FpPoly a, FpPoly b, Digit p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        FpPoly r = mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        const Digit c = inv(a.back(), p);
        for (auto& x : a) x = static_cast<Digit>(std::uint64_t(x) * c % p);
    }
    return a;
}

bool is_irreducible(const FpPoly& f, Digit p) {
    if (f.size() < 2) return false;
    const unsigned k = static_cast<unsigned>(f.size() - 1);
    if (k == 1) return true;
    // Ben-Or: reducible f has a factor of degree j <= k/2, detected by
    // gcd(f, x^(p^j) - x); random reducible candidates usually fail early.
    const FpPoly x = mod(FpPoly{0, 1}, f, p);
    FpPoly xp = x;
    for (unsigned j = 1; j <= k / 2; ++j) {
        xp = powmod(xp, p, f, p);
        if (gcd(f, sub(xp, x, p), p).size() != 1) return false;
    }
    return true;
}

FpPoly first_irreducible(Digit p, unsigned k) {
    if (k == 0) throw DomainError("extension degree must be positive");
    FpPoly f(k + 1, 0);
    f[k] = 1;
    while (true) {
        if (is_irreducible(f, p)) return f;
        // next candidate: increment the base-p counter c_0 + c_1 p + ...
        unsigned i = 0;
        while (i < k) {
            if (++f[i] < p) break;
            f[i] = 0;
            ++i;
        }
        if (i == k) throw InvariantViolation("no irreducible polynomial found");
    }
}

}  // namespace fp

std::shared_ptr<const SmallField> SmallField::make(std::uint32_t q) {
    auto [p, l] = prime_power(q);
    if (q > kMaxOrder) throw CapabilityError("F_q with q > 65536 is not supported");
    return std::shared_ptr<const SmallField>(new SmallField(p, l));
}

SmallField::SmallField(Digit p, unsigned l) : p_(p), l_(l), q_(1) {
    for (unsigned i = 0; i < l; ++i) q_ *= p;
    modulus_ = fp::first_irreducible(p, l);
    if (l_ == 1) return;
    // log/exp tables from a primitive element found by search
    auto to_poly = [&](Digit a) {
        FpPoly r;
        while (a) {
            r.push_back(a % p_);
            a /= p_;
        }
        return r;
    };
    auto to_digit = [&](const FpPoly& a) {
        Digit r = 0;
        for (std::size_t i = a.size(); i-- > 0;) r = r * p_ + a[i];
        return r;
    };
    for (Digit cand = 2; cand < q_; ++cand) {
        const FpPoly g = to_poly(cand);
        std::vector<Digit> powers;
        powers.reserve(q_ - 1);
        FpPoly x{1};
        bool primitive = true;
        for (std::uint32_t i = 0; i < q_ - 1; ++i) {
            const Digit d = to_digit(x);
            if (i > 0 && d == 1) {
                primitive = false;
                break;
            }
            powers.push_back(d);
            x = fp::mulmod(x, g, modulus_, p_);
        }
        if (!primitive) continue;
        exp_.resize(2 * (q_ - 1));
        log_.assign(q_, 0);
        for (std::uint32_t i = 0; i < q_ - 1; ++i) {
            exp_[i] = exp_[i + q_ - 1] = powers[i];
            log_[powers[i]] = i;
        }
        return;
    }
    throw InvariantViolation("no primitive element found");
}

Digit SmallField::add_slow(Digit a, Digit b) const noexcept {
    Digit r = 0, scale = 1;
    while (a || b) {
        r += ((a % p_ + b % p_) % p_) * scale;
        a /= p_;
        b /= p_;
        scale *= p_;
    }
    return r;
}

Digit SmallField::neg_slow(Digit a) const noexcept {
    Digit r = 0, scale = 1;
    while (a) {
        r += ((p_ - a % p_) % p_) * scale;
        a /= p_;
        scale *= p_;
    }
    return r;
}

Digit SmallField::inv(Digit a) const {
    if (a == 0) throw DivisionByZero();
    if (l_ == 1) return fp::inv(a, p_);
    return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
}

Digit SmallField::pow(Digit a, std::uint64_t e) const noexcept {
    Digit r = 1;
    while (e) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

Digit SmallField::from_int(long long v) const noexcept {
    long long r = v % static_cast<long long>(p_);
    if (r < 0) r += p_;
    return static_cast<Digit>(r);
}

std::vector<Digit> SmallField::digits(Digit a) const {
    std::vector<Digit> d(l_, 0);
    for (unsigned i = 0; i < l_; ++i) {
        d[i] = a % p_;
        a /= p_;
    }
    return d;
}

Digit SmallField::from_digits(const std::vector<Digit>& d) const {
    Digit r = 0;
    for (std::size_t i = std::min<std::size_t>(d.size(), l_); i-- > 0;) r = r * p_ + d[i] % p_;
    return r;
}

}  // namespace tauvar
