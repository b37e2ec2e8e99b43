#ifndef TAUVAR_FIELD_HPP
#define TAUVAR_FIELD_HPP

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "tauvar/apoly.hpp"
#include "tauvar/fq.hpp"

namespace tauvar {

enum class FieldKind { PrimeField, ExtField, RationalFunctions, PerfectClosure };

std::string to_string(FieldKind kind);

// Identifies a coefficient backend. For the finite kinds the field is
// F_p[g]/(modulus) with deg modulus = l * m; F_q sits inside as the fixed
// field of x -> x^q.
struct FieldDescriptor {
    Digit p = 2;
    unsigned l = 1;
    FieldKind kind = FieldKind::PrimeField;
    unsigned m = 1;
    FpPoly modulus;

    std::uint32_t q() const noexcept;
    bool is_finite() const noexcept { return kind == FieldKind::PrimeField || kind == FieldKind::ExtField; }
    bool is_function_field() const noexcept { return !is_finite(); }
    std::string to_string() const;
    bool operator==(const FieldDescriptor& o) const = default;
    auto operator<=>(const FieldDescriptor& o) const = default;
};

class FieldElement;
class Field;
using FieldPtr = std::shared_ptr<const Field>;

// Immutable arithmetic context shared by all elements of one backend.
class Field : public std::enable_shared_from_this<Field> {
   public:
    // F_p (q = p).
    static FieldPtr prime(std::uint32_t p);
    // F_{q^m}; m = 1 gives F_q itself. Uses the lexicographically first
    // irreducible of degree l*m over F_p.
    static FieldPtr extension(std::uint32_t q, unsigned m);
    static FieldPtr rational_functions(std::uint32_t q);
    static FieldPtr perfect_closure(std::uint32_t q);

    const FieldDescriptor& descriptor() const noexcept { return desc_; }
    FieldKind kind() const noexcept { return desc_.kind; }
    bool is_finite() const noexcept { return desc_.is_finite(); }
    bool is_function_field() const noexcept { return desc_.is_function_field(); }
    bool has_inverse_frobenius() const noexcept { return desc_.kind != FieldKind::RationalFunctions; }
    Digit p() const noexcept { return desc_.p; }
    std::uint32_t q() const noexcept { return fq_->q(); }
    const SmallField& fq() const noexcept { return *fq_; }
    const std::shared_ptr<const SmallField>& fq_ptr() const noexcept { return fq_; }
    // The prime subfield F_p.
    const SmallField& fp() const noexcept { return *fp_; }
    // Dimension over F_p (finite kinds only).
    unsigned degree_over_fp() const noexcept { return k_; }
    // Extension degree over F_q (finite kinds only).
    unsigned degree_over_fq() const noexcept { return desc_.m; }

    bool same_as(const Field& o) const noexcept { return this == &o || desc_ == o.desc_; }

    // RationalFunctions <-> PerfectClosure over the same F_q.
    FieldPtr lifted() const;
    FieldPtr unlifted() const;

    FieldElement zero() const;
    FieldElement one() const;
    FieldElement from_int(long long v) const;
    FieldElement from_fq(Digit c) const;
    // The generator g of a finite field.
    FieldElement generator() const;
    // T in a function field.
    FieldElement T() const;
    // T^{1/q^k} in the perfect closure.
    FieldElement root_of_T(unsigned k) const;
    FieldElement from_coeffs(std::vector<Digit> coeffs) const;
    FieldElement from_fraction(FqVec num, FqVec den, unsigned level = 0) const;

    // Finite-kind internals
    const std::vector<Digit>& fq_generator_image() const noexcept { return w_image_; }

   private:
    friend class FieldElement;
    explicit Field(FieldDescriptor d, std::shared_ptr<const SmallField> fq);
    void init_finite();

    std::vector<Digit> fin_mul(const std::vector<Digit>& a, const std::vector<Digit>& b) const;
    std::vector<Digit> fin_inv(const std::vector<Digit>& a) const;
    std::vector<Digit> fin_frob_p(const std::vector<Digit>& a) const;

    FieldDescriptor desc_;
    std::shared_ptr<const SmallField> fq_;
    std::shared_ptr<const SmallField> fp_;
    unsigned k_ = 0;
    std::vector<std::vector<Digit>> frob_p_cols_;  // (g^i)^p
    std::vector<Digit> w_image_;                    // image of the F_q generator w
    std::vector<std::vector<Digit>> w_powers_;      // images of w^i, i < l
};

// An element of one backend; carries its field.
class FieldElement {
   public:
    FieldElement() = default;

    const FieldPtr& field() const noexcept { return field_; }
    bool is_zero() const noexcept;
    bool is_one() const noexcept;

    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement operator/(const FieldElement& o) const;
    FieldElement operator-() const;
    FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
    FieldElement& operator-=(const FieldElement& o) { return *this = *this - o; }
    FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }
    FieldElement inverse() const;
    FieldElement pow(std::uint64_t e) const;

    // x^{q^n}
    FieldElement frobenius(unsigned n = 1) const;
    // The unique y with y^{q^n} = x; CapabilityError over plain F_q(T).
    FieldElement inverse_frobenius(unsigned n = 1) const;

    // Exact equality; MixedBackends when the fields differ.
    bool operator==(const FieldElement& o) const;
    bool operator!=(const FieldElement& o) const { return !(*this == o); }
    // Deterministic total order within one backend.
    int compare(const FieldElement& o) const;

    // Finite kinds: coordinates over F_p in the basis 1, g, g^2, ...
    const std::vector<Digit>& coords() const noexcept { return a_; }
    // Function kinds
    const FqVec& num() const noexcept { return a_; }
    const FqVec& den() const noexcept { return b_; }
    unsigned level() const noexcept { return level_; }

    // Moves a function-field element between F_q(T) and its perfect
    // closure. Pushing down requires level 0.
    FieldElement with_field(const FieldPtr& f) const;

    bool in_fq() const;
    Digit to_fq() const;

    std::string to_string() const;

   private:
    friend class Field;
    FieldElement(FieldPtr f, std::vector<Digit> a, std::vector<Digit> b, unsigned level)
        : field_(std::move(f)), a_(std::move(a)), b_(std::move(b)), level_(level) {}
    void check_same(const FieldElement& o) const;
    void normalize_fraction();
    void normalize_level();

    FieldPtr field_;
    std::vector<Digit> a_;  // finite: coordinates; function: numerator
    std::vector<Digit> b_;  // function: monic denominator
    unsigned level_ = 0;    // perfect closure: variable S = T^{1/q^level}
};

// a(x) for a in F_q[T], via F_q -> field
FieldElement eval(const APoly& a, const FieldElement& x);

// A field embedding between finite backends that restricts to the identity
// on F_q (with respect to each side's encoding of F_q).
class Embedding {
   public:
    static Embedding find(const FieldPtr& source, const FieldPtr& target);
    static Embedding identity(const FieldPtr& f);

    const FieldPtr& source() const noexcept { return src_; }
    const FieldPtr& target() const noexcept { return dst_; }
    FieldElement operator()(const FieldElement& x) const;

   private:
    static Embedding search(const FieldPtr& source, const FieldPtr& target);

    FieldPtr src_, dst_;
    std::vector<std::vector<Digit>> images_;  // images of g^i
};

// Roots in `field` of a polynomial with coefficients in `field` that splits
// into distinct linear factors there (low degree first coefficient order).
std::vector<FieldElement> split_roots(const std::vector<FieldElement>& poly);

}  // namespace tauvar

#endif
