#ifndef TAUVAR_APOLY_HPP
#define TAUVAR_APOLY_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "tauvar/fq.hpp"

namespace tauvar {

// Dense polynomial over F_q (encoded Digits), low degree first, trimmed.
using FqVec = std::vector<Digit>;

namespace fqpoly {

void trim(FqVec& a);
int degree(const FqVec& a);
FqVec add(const SmallField& f, const FqVec& a, const FqVec& b);
FqVec sub(const SmallField& f, const FqVec& a, const FqVec& b);
FqVec neg(const SmallField& f, const FqVec& a);
FqVec mul(const SmallField& f, const FqVec& a, const FqVec& b);
FqVec scale(const SmallField& f, const FqVec& a, Digit c);
// (quotient, remainder); throws DivisionByZero.
std::pair<FqVec, FqVec> divmod(const SmallField& f, const FqVec& a, const FqVec& b);
FqVec exact_div(const SmallField& f, const FqVec& a, const FqVec& b);
FqVec monic(const SmallField& f, const FqVec& a);
FqVec gcd(const SmallField& f, FqVec a, FqVec b);
FqVec powmod(const SmallField& f, FqVec a, std::uint64_t e, const FqVec& m);

// a(T) -> a(T^k)
FqVec inflate(const FqVec& a, std::uint64_t k);
// true iff every nonzero coefficient sits at an exponent divisible by k
bool is_inflated(const FqVec& a, std::uint64_t k);
// inverse of inflate; requires is_inflated
FqVec deflate(const FqVec& a, std::uint64_t k);

bool is_irreducible(const SmallField& f, const FqVec& a);

// Renders an F_q element: an integer for l = 1, a polynomial in w otherwise.
std::string render_scalar(const SmallField& f, Digit c);
// Renders a polynomial in the named variable, highest degree first.
std::string render(const SmallField& f, const FqVec& a, const std::string& var);

}  // namespace fqpoly

// An element of A = F_q[T].
class APoly {
   public:
    explicit APoly(std::shared_ptr<const SmallField> field, FqVec coeffs = {});

    static APoly T(std::shared_ptr<const SmallField> field);
    static APoly constant(std::shared_ptr<const SmallField> field, Digit c);

    const std::shared_ptr<const SmallField>& field() const noexcept { return field_; }
    const FqVec& coeffs() const noexcept { return c_; }
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }
    Digit coeff(std::size_t i) const noexcept { return i < c_.size() ? c_[i] : 0; }
    Digit lead() const noexcept { return c_.empty() ? 0 : c_.back(); }

    APoly operator+(const APoly& o) const;
    APoly operator-(const APoly& o) const;
    APoly operator-() const;
    APoly operator*(const APoly& o) const;
    bool operator==(const APoly& o) const noexcept { return c_ == o.c_; }
    bool operator!=(const APoly& o) const noexcept { return c_ != o.c_; }

    APoly pow(unsigned e) const;
    APoly monic() const;
    bool is_prime() const;
    std::string to_string() const;

    // Ordering used for prime enumeration: degree, then the lower
    // coefficients compared from a_{d-1} down to a_0.
    bool operator<(const APoly& o) const noexcept;

   private:
    std::shared_ptr<const SmallField> field_;
    FqVec c_;
};

std::pair<APoly, APoly> divmod(const APoly& a, const APoly& b);
APoly gcd(const APoly& a, const APoly& b);

// Monic irreducibles of degree <= max_degree in the canonical order.
std::vector<APoly> primes_up_to_degree(const std::shared_ptr<const SmallField>& field, int max_degree);
// The first `count` monic irreducibles in the canonical order.
std::vector<APoly> first_primes(const std::shared_ptr<const SmallField>& field, std::size_t count);

}  // namespace tauvar

#endif
