#ifndef TAUVAR_ORE_HPP
#define TAUVAR_ORE_HPP

#include <string>
#include <utility>
#include <vector>

#include "tauvar/field.hpp"

namespace tauvar {

// Sum a_i tau^i in K{tau}, where tau a = a^q tau. Dense, trimmed.
class OrePoly {
   public:
    OrePoly() = default;
    explicit OrePoly(FieldPtr field, std::vector<FieldElement> coeffs = {});

    static OrePoly zero(FieldPtr field) { return OrePoly(std::move(field)); }
    static OrePoly one(const FieldPtr& field) { return constant(field->one()); }
    static OrePoly constant(const FieldElement& c);
    // c tau^k
    static OrePoly monomial(const FieldElement& c, unsigned k);
    static OrePoly tau(const FieldPtr& field, unsigned k = 1) { return monomial(field->one(), k); }

    const FieldPtr& field() const noexcept { return field_; }
    const std::vector<FieldElement>& coeffs() const noexcept { return c_; }
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }
    bool is_one() const noexcept { return c_.size() == 1 && c_[0].is_one(); }
    FieldElement coeff(std::size_t i) const;
    const FieldElement& lead() const { return c_.back(); }
    // d(P) = a_0
    FieldElement linear_part() const { return coeff(0); }
    bool is_separable() const noexcept { return !c_.empty() && !c_[0].is_zero(); }
    bool is_monic() const noexcept { return !c_.empty() && c_.back().is_one(); }

    OrePoly operator+(const OrePoly& o) const;
    OrePoly operator-(const OrePoly& o) const;
    OrePoly operator-() const;
    // composition product
    OrePoly operator*(const OrePoly& o) const;
    OrePoly& operator+=(const OrePoly& o) { return *this = *this + o; }
    OrePoly& operator-=(const OrePoly& o) { return *this = *this - o; }
    bool operator==(const OrePoly& o) const;
    bool operator!=(const OrePoly& o) const { return !(*this == o); }

    // c * P
    OrePoly scale_left(const FieldElement& c) const;
    // leading coefficient made 1 by a left scalar
    OrePoly monic() const;

    // Q with tau^N P = Q tau^N: coefficients raised to q^N (N < 0 uses
    // inverse Frobenius).
    OrePoly twist(int n) const;

    // (N, Q) with P = tau^N Q and Q separable.
    std::pair<unsigned, OrePoly> separable_part() const;

    // P(x) for x in the same backend.
    FieldElement eval(const FieldElement& x) const;

    // Coefficients moved to another function-field backend or through a
    // finite-field embedding.
    OrePoly with_field(const FieldPtr& f) const;
    OrePoly map(const Embedding& e) const;

    // Deterministic total order (degree, then coefficients from the top).
    int compare(const OrePoly& o) const;

    std::string to_string() const;

   private:
    void trim();
    void check_same(const OrePoly& o) const;

    FieldPtr field_;
    std::vector<FieldElement> c_;
};

// f = quo * g + rem, deg rem < deg g (left division, every backend).
std::pair<OrePoly, OrePoly> left_divmod(const OrePoly& f, const OrePoly& g);
// f = g * quo + rem, deg rem < deg g (needs inverse Frobenius).
std::pair<OrePoly, OrePoly> right_divmod(const OrePoly& f, const OrePoly& g);

// Monic generator of K{tau} f + K{tau} g (a common right divisor).
OrePoly right_gcd(const OrePoly& f, const OrePoly& g);
// Monic generator of f K{tau} + g K{tau} (a common left divisor).
OrePoly left_gcd(const OrePoly& f, const OrePoly& g);
// Monic generator of K{tau} f cap K{tau} g.
OrePoly left_lcm(const OrePoly& f, const OrePoly& g);

// An F_q-basis of {x in F_{q^m} : P(x) = 0}; P must live in a finite
// backend F_{q^m0} with m0 | m.
struct ExtensionKernel {
    FieldPtr field;                   // F_{q^m}
    std::vector<FieldElement> basis;  // over F_q
};
ExtensionKernel kernel_in_extension(const OrePoly& p, unsigned m);

// Smallest multiple m of the backend degree with ker(P) inside F_{q^m}, for
// separable P. NoSplittingFound beyond max_ext.
unsigned splitting_degree(const OrePoly& p, unsigned max_ext = 64);
// kernel_in_extension at the splitting degree.
ExtensionKernel splitting_kernel(const OrePoly& p, unsigned max_ext = 64);

// F_q-basis extraction from an F_p-spanning set of an F_q-subspace.
std::vector<FieldElement> fq_basis(const FieldPtr& f, const std::vector<FieldElement>& fp_span);

}  // namespace tauvar

#endif
