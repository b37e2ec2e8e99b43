#ifndef TAUVAR_FQ_HPP
#define TAUVAR_FQ_HPP

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

namespace tauvar {

// An element of F_p, or the base-p encoding sum c_i p^i of an element
// sum c_i w^i of F_q.
using Digit = std::uint32_t;

// Dense polynomial over F_p, low degree first, no trailing zeros.
using FpPoly = std::vector<Digit>;

bool is_prime(std::uint64_t n);

// Returns (p, l) with q = p^l; throws DomainError when q is not a prime power.
std::pair<Digit, unsigned> prime_power(std::uint64_t q);

namespace fp {

void trim(FpPoly& a);
FpPoly add(const FpPoly& a, const FpPoly& b, Digit p);
FpPoly sub(const FpPoly& a, const FpPoly& b, Digit p);
FpPoly mul(const FpPoly& a, const FpPoly& b, Digit p);
FpPoly mod(FpPoly a, const FpPoly& f, Digit p);
FpPoly mulmod(const FpPoly& a, const FpPoly& b, const FpPoly& f, Digit p);
FpPoly powmod(FpPoly a, std::uint64_t e, const FpPoly& f, Digit p);
FpPoly gcd(FpPoly a, FpPoly b, Digit p);
Digit inv(Digit a, Digit p);

// Ben-Or test.
bool is_irreducible(const FpPoly& f, Digit p);

// First monic irreducible of degree k over F_p, candidates ordered by the
// integer sum_{i<k} c_i p^i of their lower coefficients.
FpPoly first_irreducible(Digit p, unsigned k);

}  // namespace fp

// The finite field F_q with q = p^l small enough for log/exp tables.
// Elements are Digits in [0, q). The prime subfield is {0, ..., p-1}; for
// l > 1 the class w of x modulo the defining polynomial encodes as p.
class SmallField {
   public:
    static constexpr std::uint32_t kMaxOrder = 1u << 16;

    static std::shared_ptr<const SmallField> make(std::uint32_t q);

    Digit p() const noexcept { return p_; }
    unsigned l() const noexcept { return l_; }
    std::uint32_t q() const noexcept { return q_; }
    const FpPoly& modulus() const noexcept { return modulus_; }

    Digit add(Digit a, Digit b) const noexcept {
        if (l_ == 1) {
            Digit s = a + b;
            return s >= p_ ? s - p_ : s;
        }
        return add_slow(a, b);
    }
    Digit neg(Digit a) const noexcept {
        if (l_ == 1) return a == 0 ? 0 : p_ - a;
        return neg_slow(a);
    }
    Digit sub(Digit a, Digit b) const noexcept { return add(a, neg(b)); }
    Digit mul(Digit a, Digit b) const noexcept {
        if (a == 0 || b == 0) return 0;
        if (l_ == 1) return static_cast<Digit>((static_cast<std::uint64_t>(a) * b) % p_);
        return exp_[log_[a] + log_[b]];
    }
    Digit inv(Digit a) const;
    Digit div(Digit a, Digit b) const { return mul(a, inv(b)); }
    Digit pow(Digit a, std::uint64_t e) const noexcept;

    // Reduces an integer into the prime subfield.
    Digit from_int(long long v) const noexcept;
    // The generator w (only meaningful for l > 1).
    Digit generator() const noexcept { return l_ == 1 ? 1 : p_; }
    std::vector<Digit> digits(Digit a) const;
    Digit from_digits(const std::vector<Digit>& d) const;

   private:
    SmallField(Digit p, unsigned l);
    Digit add_slow(Digit a, Digit b) const noexcept;
    Digit neg_slow(Digit a) const noexcept;

    Digit p_;
    unsigned l_;
    std::uint32_t q_;
    FpPoly modulus_;
    std::vector<Digit> exp_;  // doubled length, so exp_[i + j] needs no reduction
    std::vector<std::uint32_t> log_;
};

}  // namespace tauvar

#endif
