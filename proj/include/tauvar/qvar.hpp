#ifndef TAUVAR_QVAR_HPP
#define TAUVAR_QVAR_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "tauvar/fplinalg.hpp"
#include "tauvar/klinalg.hpp"
#include "tauvar/orelat.hpp"

namespace tauvar {

// F = W(ker P_1 x ... x ker P_r x K^{n-r}); the annihilator is generated by
// the rows of diag(P_1..P_r, 0..) W_inv.
struct Canon {
    OreMatrix W, W_inv;
    std::vector<OrePoly> seps;
};

// A q-variety in K^n, stored through its radical annihilator M(F) together
// with a canonical decomposition.
class QVariety {
   public:
    // Z(S). Non-radical input is radicalized (see radicalized()).
    static QVariety zeros(const TauSubmodule& s);
    static QVariety full(const FieldPtr& field, std::size_t n);
    static QVariety origin(const FieldPtr& field, std::size_t n);
    // From canonical data; W_inv must invert W and each P_i be separable.
    static QVariety from_canon(Canon canon);

    const FieldPtr& field() const noexcept { return ann_.field(); }
    std::size_t n() const noexcept { return ann_.n(); }
    // M(F), radical.
    const TauSubmodule& ann() const noexcept { return ann_; }
    const Canon& canon() const noexcept { return canon_; }
    std::size_t r() const noexcept { return canon_.seps.size(); }
    // The input module passed to zeros() was not radical.
    bool radicalized() const noexcept { return radicalized_; }
    // Input over F_q(T) needed q-th roots of T; the variety lives over the
    // perfect closure.
    bool lifted() const noexcept { return lifted_; }

    QVariety with_field(const FieldPtr& f) const;
    // Base change along an embedding of finite backends.
    QVariety map(const Embedding& e) const;

    std::string to_string() const;

   private:
    QVariety(TauSubmodule ann, Canon canon, bool radicalized, bool lifted)
        : ann_(std::move(ann)), canon_(std::move(canon)), radicalized_(radicalized), lifted_(lifted) {}

    TauSubmodule ann_;
    Canon canon_;
    bool radicalized_ = false;
    bool lifted_ = false;
};

inline QVariety zeros(const TauSubmodule& s) { return QVariety::zeros(s); }
inline const TauSubmodule& annihilator(const QVariety& f) { return f.ann(); }
// The annihilator rebuilt from the canonical data alone.
TauSubmodule canonical_annihilator(const QVariety& f);

// The F_q-span of the points, all in one finite backend.
QVariety variety_from_points(const FieldPtr& field, std::size_t n,
                             const std::vector<std::vector<FieldElement>>& points);

std::size_t dimension(const QVariety& f);
// dim over F_q of F / (irreducible component)
std::size_t finite_part_dim(const QVariety& f);
QVariety irreducible_component(const QVariety& f);
bool is_irreducible(const QVariety& f);

QVariety sum(const QVariety& a, const QVariety& b);
QVariety intersection(const QVariety& a, const QVariety& b);
// a x b inside K^{n_a + n_b}
QVariety product(const QVariety& a, const QVariety& b);
bool is_subvariety(const QVariety& sub, const QVariety& sup);
bool same_variety(const QVariety& a, const QVariety& b);

struct TangentSpace {
    FieldPtr field;
    std::size_t n = 0;
    klin::Matrix basis;  // K-independent vectors of length n
    std::size_t dim() const noexcept { return basis.size(); }
};

// Linear part of each entry.
klin::Matrix linear_parts(const OreMatrix& m);
TangentSpace tangent_space(const QVariety& f);

// x -> L x from domain (in K^n) to codomain (in K^m); L is m x n.
struct Morphism {
    QVariety domain, codomain;
    OreMatrix L;
};

// NotAMorphismInto unless L maps the domain into the codomain.
Morphism make_morphism(const QVariety& domain, const QVariety& codomain, const OreMatrix& L);
// Each row of L reduced modulo M(domain).
OreMatrix morphism_to_module_map(const Morphism& psi);
// psi after phi
Morphism compose(const Morphism& psi, const Morphism& phi);
// (x, y) -> x + y on a x b, into K^n
Morphism addition_morphism(const QVariety& a, const QVariety& b);

// psi(F), from the left kernel of L stacked over the generators of M(F).
QVariety image(const Morphism& psi);
// psi(F) as the irreducible image plus the span of the images of the finite
// part's points, over a splitting field of the finite part. Finite backends
// only; the result lives in the returned field.
QVariety image_by_points(const Morphism& psi);
QVariety preimage(const Morphism& psi, const QVariety& g);
QVariety kernel(const Morphism& psi);

struct Quotient {
    QVariety Q;
    Morphism Pi;  // F -> Q, built from the generators of M(H)
};
Quotient quotient(const QVariety& f, const QVariety& h);
// psi_bar with psi = psi_bar o Pi, for psi vanishing on the subvariety.
Morphism factor_through_quotient(const Quotient& q, const Morphism& psi);

struct Differential {
    klin::Matrix dL;           // m x n, linear parts of L
    TangentSpace source, target;
    klin::Matrix in_bases;     // target.dim x source.dim
};
Differential differential(const Morphism& psi);
bool is_separable(const Morphism& psi);

// The F_p-space of points of F with coordinates in a finite extension E of
// the backend, as an F_p-basis in reduced echelon form (coordinates of all
// n entries concatenated).
struct PointSpace {
    FieldPtr field;
    std::size_t n = 0;
    smalllin::Matrix basis;
    std::size_t fp_dim() const noexcept { return basis.size(); }
    std::vector<FieldElement> point(const std::vector<Digit>& coords) const;
};
// Common zeros in E^n of the generators of M(F).
PointSpace points_from_equations(const QVariety& f, const FieldPtr& e);
// W applied to the points of ker P_1 x ... x E^{n-r}.
PointSpace points_from_canon(const QVariety& f, const FieldPtr& e);
bool same_points(const PointSpace& a, const PointSpace& b);
bool point_in(const PointSpace& s, const std::vector<FieldElement>& x);

// Value of a row vector at a point.
FieldElement eval_row(const OreRow& g, const std::vector<FieldElement>& x);

}  // namespace tauvar

#endif
