#ifndef TAUVAR_AMOD_HPP
#define TAUVAR_AMOD_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tauvar/apoly.hpp"
#include "tauvar/qvar.hpp"

namespace tauvar {

// An F_q[T]-module structure on a q-variety: Phi_T is an endomorphism of
// the carrier with d(Phi_T) = delta(T) Id on the tangent space.
class AModule {
   public:
    // DomainError when Phi_T does not preserve the carrier (NotAMorphismInto)
    // or its differential is not delta(T) Id.
    AModule(QVariety carrier, const OreMatrix& phi_T, const FieldElement& delta_T);

    const QVariety& carrier() const noexcept { return phi_T_.domain; }
    const FieldPtr& field() const noexcept { return phi_T_.L.field(); }
    std::size_t n() const noexcept { return phi_T_.L.cols(); }
    const Morphism& phi_T() const noexcept { return phi_T_; }
    const FieldElement& delta_T() const noexcept { return delta_T_; }
    const std::shared_ptr<const SmallField>& fq() const { return field()->fq_ptr(); }

    // Monic generator of ker(delta), or nullopt when delta is injective.
    const std::optional<APoly>& characteristic() const noexcept { return char_; }
    FieldElement delta(const APoly& a) const { return eval(a, delta_T_); }
    bool in_ker_delta(const APoly& a) const { return delta(a).is_zero(); }

   private:
    Morphism phi_T_;
    FieldElement delta_T_;
    std::optional<APoly> char_;
};

// a(Phi_T) by Horner, F_q scalars acting as c tau^0.
Morphism phi(const AModule& m, const APoly& a);

struct TorsionReport {
    APoly a;
    QVariety variety;                  // ker Phi_a
    std::size_t dim_fq = 0;            // finite_part_dim(variety)
    bool infinite = false;             // dimension(variety) > 0
    bool a_in_ker_delta = false;
    // dim_K of K{F} / a K{F} from the diagonal form, on irreducible carriers
    // with a outside ker(delta); always equal to dim_fq.
    std::optional<std::size_t> module_quotient_dim;
};
TorsionReport torsion(const AModule& m, const APoly& a);

struct TorsionPoints {
    FieldPtr field;                                  // F_{q^k} holding every point
    std::vector<std::vector<FieldElement>> basis;    // over F_q
    std::vector<std::vector<FieldElement>> points;   // all of them, when at most max_points
    std::vector<std::vector<Digit>> action;          // Phi_T on the basis, over F_q (columns)
    std::vector<APoly> elementary_divisors;          // invariant factors of T - action, nonunit
};
// Finite backends only; NoSplittingFound beyond max_ext.
TorsionPoints torsion_points(const AModule& m, const APoly& a, unsigned max_ext = 64,
                             std::size_t max_points = 1u << 16);

// Monic nonunit invariant factors of a square matrix over F_q[T].
std::vector<APoly> invariant_factors(std::vector<std::vector<APoly>> m);

struct RankEstimate {
    APoly prime;
    std::size_t dim_fq = 0;
    std::optional<std::size_t> estimate;  // dim_fq / deg, when it divides
};
struct RankReport {
    std::vector<RankEstimate> estimates;
    std::vector<APoly> skipped;   // primes in ker(delta)
    std::size_t rank = 0;
    std::vector<APoly> bad_primes;
    std::string method = "torsion-majority";
};
// budget 0: all primes of degree <= 2, at least 5.
RankReport rank(const AModule& m, std::size_t prime_budget = 0);

struct TateReport {
    std::size_t r = 0;
    std::vector<std::size_t> dims;  // dim_fq Tor(pi^k), k = 1..n_max
    bool ok = false;
};
TateReport tate_check(const AModule& m, const APoly& pi, unsigned n_max);

bool is_A_submodule(const AModule& m, const QVariety& h);
// The structure induced on an A-submodule.
AModule restrict_to(const AModule& m, const QVariety& h);
struct QuotientModule {
    Quotient quotient;
    AModule module;
};
QuotientModule quotient_module(const AModule& m, const QVariety& h);

struct AdditivityReport {
    std::size_t rank_F = 0, rank_H = 0, rank_Q = 0;
    bool ok = false;
};
AdditivityReport rank_additivity_check(const AModule& m, const QVariety& h, std::size_t prime_budget = 0);

struct ExactnessRow {
    APoly a;
    std::size_t dim_F = 0, dim_H = 0, dim_Q = 0;
    bool ok = false;
};
struct ExactnessReport {
    std::vector<ExactnessRow> rows;
    std::vector<APoly> skipped;  // in ker(delta), or Phi_a not onto H
    bool ok = false;
};
// Compares dim Tor(a,F) with dim Tor(a,H) + dim Tor(a,F/H) for each a
// outside ker(delta) with Phi_a(H) = H.
ExactnessReport torsion_exactness_check(const AModule& m, const QVariety& h, const std::vector<APoly>& as);

// Smallest A-submodule containing h.
QVariety jacobian(const AModule& m, const QVariety& h, std::size_t max_steps = 64);
// Largest irreducible A-submodule inside h.
QVariety g_max(const AModule& m, const QVariety& h, std::size_t max_steps = 64);
bool is_sufficiently_generic(const AModule& m, const QVariety& h);

// Checks d(Phi_a) = delta(a) Id on T(F) and the ring-morphism laws on
// `trials` random pairs of small degree; returns the number of failures.
std::size_t check_axioms(const AModule& m, unsigned trials, unsigned seed);

}  // namespace tauvar

#endif
