#include "tauvar/amod.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "tauvar/errors.hpp"

namespace tauvar {

namespace {

OreMatrix scalar_matrix(const FieldPtr& f, std::size_t n, const FieldElement& c) {
    OreMatrix m(f, n, n);
    if (!c.is_zero())
        for (std::size_t i = 0; i < n; ++i) m(i, i) = OrePoly::constant(c);
    return m;
}

// d(L) = c Id on the tangent space of F
bool differential_is_scalar(const OreMatrix& L, const QVariety& F, const FieldElement& c) {
    const FieldPtr& f = L.field();
    const klin::Matrix dL = linear_parts(L);
    for (const auto& v : tangent_space(F).basis) {
        const auto w = klin::apply(f, dL, v);
        for (std::size_t i = 0; i < v.size(); ++i)
            if (w[i] != c * v[i]) return false;
    }
    return true;
}

std::optional<APoly> kernel_of_delta(const FieldElement& d) {
    const FieldPtr& f = d.field();
    const auto& fq = f->fq_ptr();
    if (f->is_function_field()) {
        if (!d.in_fq()) return std::nullopt;
        return APoly(fq, {fq->neg(d.to_fq()), 1});
    }
    // minimal polynomial over F_q: product over the Frobenius orbit
    std::vector<FieldElement> poly{f->one()};
    FieldElement x = d;
    do {
        std::vector<FieldElement> next(poly.size() + 1, f->zero());
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i + 1] += poly[i];
            next[i] -= poly[i] * x;
        }
        poly = std::move(next);
        x = x.frobenius(1);
    } while (x != d);
    FqVec c;
    for (const auto& e : poly) c.push_back(e.to_fq());
    return APoly(fq, c);
}

Morphism endo(const QVariety& F, OreMatrix L) { return Morphism{F, F, std::move(L)}; }

std::vector<std::size_t> free_indices(const QVariety& F) {
    std::vector<std::size_t> out;
    for (std::size_t j = F.r(); j < F.n(); ++j) out.push_back(j);
    return out;
}

std::vector<FieldElement> apply_matrix(const OreMatrix& L, const std::vector<FieldElement>& x) {
    std::vector<FieldElement> y;
    for (std::size_t i = 0; i < L.rows(); ++i) y.push_back(eval_row(L.row(i), x));
    return y;
}

FieldElement delta_in(const FieldElement& d, const FieldPtr& f) {
    if (f->is_function_field() && d.field()->is_function_field()) return d.with_field(f);
    if (!d.field()->same_as(*f)) throw MixedBackends("delta(T) lives outside the module's backend");
    return d;
}

Morphism square_endo(const QVariety& carrier, const OreMatrix& phi_T) {
    if (phi_T.rows() != carrier.n() || phi_T.cols() != carrier.n())
        throw DomainError("Phi_T must be a square matrix of the carrier's size");
    return make_morphism(carrier, carrier, phi_T);
}

}  // namespace

AModule::AModule(QVariety carrier, const OreMatrix& phi_T, const FieldElement& delta_T)
    : phi_T_(square_endo(carrier, phi_T)), delta_T_(delta_in(delta_T, phi_T_.L.field())) {
    if (!differential_is_scalar(phi_T_.L, phi_T_.domain, delta_T_))
        throw DomainError("d(Phi_T) is not delta(T) Id on the tangent space");
    char_ = kernel_of_delta(delta_T_);
}

Morphism phi(const AModule& m, const APoly& a) {
    const FieldPtr& f = m.field();
    const std::size_t n = m.n();
    OreMatrix R(f, n, n);
    for (int i = a.degree(); i >= 0; --i) {
        R = R * m.phi_T().L;
        const Digit c = a.coeff(static_cast<std::size_t>(i));
        if (c != 0) R = R + scalar_matrix(f, n, f->from_fq(c));
    }
    return endo(m.carrier(), std::move(R));
}

TorsionReport torsion(const AModule& m, const APoly& a) {
    const Morphism pa = phi(m, a);
    TorsionReport rep{a, kernel(pa), 0, false, m.in_ker_delta(a), std::nullopt};
    rep.dim_fq = finite_part_dim(rep.variety);
    rep.infinite = dimension(rep.variety) > 0;
    if (rep.a_in_ker_delta || !is_irreducible(m.carrier())) return rep;
    // K{F} ~ Lambda_{n-r} in the free coordinates of the carrier
    const QVariety& F = m.carrier();
    const auto free = free_indices(F);
    std::size_t total = 0;
    if (!free.empty()) {
        const OreMatrix moved = (F.canon().W_inv * pa.L * F.canon().W).row_block(free).column_block(free);
        const DiagForm d = diagonalize(moved);
        if (d.r < free.size()) throw InvariantViolation("Phi_a is not injective on K{F} although a is outside ker(delta)");
        for (std::size_t i = 0; i < d.r; ++i) total += static_cast<std::size_t>(d.D(i, i).degree());
    }
    if (rep.infinite || total != rep.dim_fq)
        throw InvariantViolation("torsion dimension " + std::to_string(rep.dim_fq) + " differs from dim K{F}/aK{F} = " +
                                 std::to_string(total));
    rep.module_quotient_dim = total;
    return rep;
}

std::vector<APoly> invariant_factors(std::vector<std::vector<APoly>> m) {
    const std::size_t n = m.size();
    if (n == 0) return {};
    for (std::size_t t = 0; t < n; ++t) {
        while (true) {
            std::size_t pi = n, pj = n;
            for (std::size_t i = t; i < n; ++i)
                for (std::size_t j = t; j < n; ++j)
                    if (!m[i][j].is_zero() && (pi == n || m[i][j].degree() < m[pi][pj].degree())) {
                        pi = i;
                        pj = j;
                    }
            if (pi == n) break;
            std::swap(m[t], m[pi]);
            for (auto& row : m) std::swap(row[t], row[pj]);
            bool clean = true;
            for (std::size_t i = t + 1; i < n; ++i) {
                if (m[i][t].is_zero()) continue;
                const auto [q, r] = divmod(m[i][t], m[t][t]);
                for (std::size_t j = t; j < n; ++j) m[i][j] = m[i][j] - q * m[t][j];
                if (!r.is_zero()) clean = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (m[t][j].is_zero()) continue;
                const auto [q, r] = divmod(m[t][j], m[t][t]);
                for (std::size_t i = t; i < n; ++i) m[i][j] = m[i][j] - q * m[i][t];
                if (!r.is_zero()) clean = false;
            }
            if (!clean) continue;
            // the pivot must divide the rest
            std::size_t bad = n;
            for (std::size_t i = t + 1; i < n && bad == n; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (!divmod(m[i][j], m[t][t]).second.is_zero()) {
                        bad = i;
                        break;
                    }
            if (bad == n) break;
            for (std::size_t j = t; j < n; ++j) m[t][j] = m[t][j] + m[bad][j];
        }
    }
    std::vector<APoly> out;
    for (std::size_t i = 0; i < n; ++i)
        if (m[i][i].degree() > 0) out.push_back(m[i][i].monic());
    return out;
}

TorsionPoints torsion_points(const AModule& m, const APoly& a, unsigned max_ext, std::size_t max_points) {
    const FieldPtr K = m.field();
    if (!K->is_finite())
        throw CapabilityError("torsion points are enumerated only over finite backends");
    if (m.in_ker_delta(a)) throw DomainError(a.to_string() + " lies in ker(delta); the torsion is not finite");
    const QVariety tor = kernel(phi(m, a));
    if (dimension(tor) != 0) throw InvariantViolation("torsion variety is not finite");
    unsigned ext = K->degree_over_fq();
    for (const auto& p : tor.canon().seps)
        if (p.degree() > 0) ext = std::lcm(ext, splitting_degree(p, max_ext));
    if (ext > max_ext) throw NoSplittingFound("torsion does not split within degree " + std::to_string(max_ext));
    const FieldPtr E = Field::extension(K->q(), ext);
    const Embedding emb = Embedding::find(K, E);
    const OreMatrix W = tor.canon().W.map(emb), LT = m.phi_T().L.map(emb);
    const std::size_t n = m.n();

    TorsionPoints out{E, {}, {}, {}, {}};
    for (std::size_t i = 0; i < tor.r(); ++i) {
        if (tor.canon().seps[i].degree() <= 0) continue;
        for (const auto& x : kernel_in_extension(tor.canon().seps[i], ext).basis) {
            std::vector<FieldElement> pt;
            for (std::size_t k = 0; k < n; ++k) pt.push_back(W(k, i).eval(x.with_field(E)));
            out.basis.push_back(std::move(pt));
        }
    }
    const std::size_t d = out.basis.size();
    const SmallField& fq = K->fq();
    const std::size_t dE = E->degree_over_fp(), l = fq.l();
    // F_p-coordinates of b_j w^s, one column per (j, s)
    smalllin::Matrix sys(n * dE, std::vector<Digit>(d * l, 0));
    std::vector<FieldElement> wpow;
    for (std::size_t s = 0; s < l; ++s) wpow.push_back(E->from_fq(fq.pow(fq.generator(), s)));
    auto coords = [&](const std::vector<FieldElement>& x) {
        std::vector<Digit> c;
        for (const auto& v : x) {
            auto cv = v.coords();
            cv.resize(dE, 0);
            c.insert(c.end(), cv.begin(), cv.end());
        }
        return c;
    };
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t s = 0; s < l; ++s) {
            std::vector<FieldElement> v;
            for (const auto& x : out.basis[j]) v.push_back(x * wpow[s]);
            const auto c = coords(v);
            for (std::size_t r = 0; r < c.size(); ++r) sys[r][j * l + s] = c[r];
        }
    out.action.assign(d, std::vector<Digit>(d, 0));
    for (std::size_t j = 0; j < d; ++j) {
        const auto sol = smalllin::solve(E->fp(), sys, coords(apply_matrix(LT, out.basis[j])), d * l);
        if (!sol) throw InvariantViolation("Phi_T does not preserve the torsion points");
        for (std::size_t i = 0; i < d; ++i)
            out.action[i][j] = fq.from_digits(std::vector<Digit>(sol->begin() + i * l, sol->begin() + (i + 1) * l));
    }
    // T - action over F_q[T]
    const auto& fqp = K->fq_ptr();
    std::vector<std::vector<APoly>> charm(d, std::vector<APoly>(d, APoly(fqp)));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            APoly e = APoly::constant(fqp, fq.neg(out.action[i][j]));
            if (i == j) e = e + APoly::T(fqp);
            charm[i][j] = e;
        }
    out.elementary_divisors = invariant_factors(charm);
    std::size_t total = 0;
    for (const auto& e : out.elementary_divisors) total += static_cast<std::size_t>(e.degree());
    if (total != d) throw InvariantViolation("elementary divisor degrees do not add up to the torsion dimension");
    // every point, when few enough
    std::size_t count = 1;
    bool small = true;
    for (std::size_t j = 0; j < d && small; ++j) {
        count *= fq.q();
        small = count <= max_points;
    }
    if (small) {
        for (std::size_t code = 0; code < count; ++code) {
            std::vector<FieldElement> pt(n, E->zero());
            std::size_t x = code;
            for (std::size_t j = 0; j < d; ++j, x /= fq.q()) {
                const FieldElement c = E->from_fq(static_cast<Digit>(x % fq.q()));
                for (std::size_t k = 0; k < n; ++k) pt[k] += c * out.basis[j][k];
            }
            out.points.push_back(std::move(pt));
        }
    }
    return out;
}

RankReport rank(const AModule& m, std::size_t prime_budget) {
    const auto& fq = m.fq();
    std::vector<APoly> primes;
    if (prime_budget == 0) {
        primes = primes_up_to_degree(fq, 2);
        if (primes.size() < 5) primes = first_primes(fq, 5);
    } else {
        primes = first_primes(fq, prime_budget);
    }
    RankReport rep;
    std::map<std::size_t, std::size_t> votes;
    for (const auto& p : primes) {
        if (m.in_ker_delta(p)) {
            rep.skipped.push_back(p);
            continue;
        }
        const TorsionReport t = torsion(m, p);
        RankEstimate e{p, t.dim_fq, std::nullopt};
        if (!t.infinite && t.dim_fq % static_cast<std::size_t>(p.degree()) == 0) {
            e.estimate = t.dim_fq / static_cast<std::size_t>(p.degree());
            ++votes[*e.estimate];
        }
        rep.estimates.push_back(e);
    }
    if (votes.empty()) throw InsufficientPrimes("no prime outside ker(delta) gave an estimate");
    std::size_t best = 0;
    for (const auto& [v, c] : votes) best = std::max(best, c);
    std::vector<std::size_t> leaders;
    for (const auto& [v, c] : votes)
        if (c == best) leaders.push_back(v);
    if (leaders.size() > 1) {
        // ties go to the value seen at the largest-degree primes
        int top = 0;
        for (const auto& e : rep.estimates) top = std::max(top, e.prime.degree());
        std::map<std::size_t, std::size_t> at_top;
        for (const auto& e : rep.estimates)
            if (e.prime.degree() == top && e.estimate) ++at_top[*e.estimate];
        std::size_t best_top = 0;
        std::vector<std::size_t> winners;
        for (auto v : leaders) best_top = std::max(best_top, at_top[v]);
        for (auto v : leaders)
            if (at_top[v] == best_top) winners.push_back(v);
        if (winners.size() != 1) throw InsufficientPrimes("torsion estimates do not single out a rank; enlarge the budget");
        leaders = winners;
    }
    rep.rank = leaders.front();
    for (const auto& e : rep.estimates)
        if (!e.estimate || *e.estimate != rep.rank) rep.bad_primes.push_back(e.prime);
    return rep;
}

TateReport tate_check(const AModule& m, const APoly& pi, unsigned n_max) {
    if (m.in_ker_delta(pi)) throw DomainError(pi.to_string() + " lies in ker(delta)");
    if (!pi.is_prime()) throw DomainError(pi.to_string() + " is not a prime of A");
    if (!is_irreducible(m.carrier())) throw DomainError("the Tate check needs an irreducible carrier");
    TateReport rep;
    const std::size_t deg = static_cast<std::size_t>(pi.degree());
    APoly power = pi;
    for (unsigned k = 1; k <= n_max; ++k, power = power * pi) rep.dims.push_back(torsion(m, power).dim_fq);
    if (rep.dims.empty()) return rep;
    rep.ok = rep.dims[0] % deg == 0;
    rep.r = rep.dims[0] / deg;
    for (unsigned k = 1; k <= n_max && rep.ok; ++k) rep.ok = rep.dims[k - 1] == k * rep.r * deg;
    return rep;
}

bool is_A_submodule(const AModule& m, const QVariety& h0) {
    if (!is_subvariety(h0, m.carrier())) throw NotASubvariety("the variety is not contained in the carrier");
    const QVariety h = h0.with_field(common_field(h0.field(), m.field()));
    const OreMatrix L = m.phi_T().L.with_field(h.field());
    for (const auto& g : h.ann().basis())
        if (!h.ann().contains(row_times(g, L))) return false;
    return true;
}

AModule restrict_to(const AModule& m, const QVariety& h) {
    if (!is_A_submodule(m, h)) throw NotASubmodule("Phi_T does not preserve the variety");
    return AModule(h, m.phi_T().L, m.delta_T());
}

QuotientModule quotient_module(const AModule& m, const QVariety& h) {
    if (!is_A_submodule(m, h)) throw NotASubmodule("Phi_T does not preserve the variety");
    Quotient q = quotient(m.carrier(), h);
    const FieldPtr f = q.Pi.L.field();
    const TauSubmodule gens(q.Pi.L);
    const OreMatrix L = m.phi_T().L.with_field(f);
    std::vector<OreRow> rows;
    for (std::size_t i = 0; i < q.Pi.L.rows(); ++i) {
        auto c = gens.coefficients(row_times(q.Pi.L.row(i), L));
        if (!c) throw InvariantViolation("Pi o Phi_T does not factor through Pi");
        rows.push_back(std::move(*c));
    }
    AModule induced(q.Q, OreMatrix(f, q.Pi.L.rows(), rows), m.delta_T());
    return {std::move(q), std::move(induced)};
}

AdditivityReport rank_additivity_check(const AModule& m, const QVariety& h, std::size_t prime_budget) {
    AdditivityReport rep;
    rep.rank_F = rank(m, prime_budget).rank;
    rep.rank_H = rank(restrict_to(m, h), prime_budget).rank;
    rep.rank_Q = rank(quotient_module(m, h).module, prime_budget).rank;
    rep.ok = rep.rank_F == rep.rank_H + rep.rank_Q;
    return rep;
}

ExactnessReport torsion_exactness_check(const AModule& m, const QVariety& h, const std::vector<APoly>& as) {
    const AModule sub = restrict_to(m, h);
    const AModule quo = quotient_module(m, h).module;
    ExactnessReport rep;
    rep.ok = true;
    for (const auto& a : as) {
        if (m.in_ker_delta(a) ||
            !same_variety(image(Morphism{sub.carrier(), QVariety::full(sub.field(), sub.n()), phi(sub, a).L}),
                          sub.carrier())) {
            rep.skipped.push_back(a);
            continue;
        }
        ExactnessRow row{a, torsion(m, a).dim_fq, torsion(sub, a).dim_fq, torsion(quo, a).dim_fq, false};
        row.ok = row.dim_F == row.dim_H + row.dim_Q;
        rep.ok = rep.ok && row.ok;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

QVariety jacobian(const AModule& m, const QVariety& h, std::size_t max_steps) {
    if (!is_subvariety(h, m.carrier())) throw NotASubvariety("the variety is not contained in the carrier");
    QVariety cur = h.with_field(common_field(h.field(), m.field()));
    const OreMatrix& L = m.phi_T().L;
    for (std::size_t step = 0; step <= max_steps; ++step) {
        const QVariety moved = image(Morphism{cur, QVariety::full(cur.field(), cur.n()), L.with_field(cur.field())});
        QVariety next = sum(cur, moved);
        if (same_variety(next, cur)) return cur;
        cur = std::move(next);
    }
    throw InvariantViolation("the Jacobian iteration did not stabilize");
}

QVariety g_max(const AModule& m, const QVariety& h, std::size_t max_steps) {
    if (!is_subvariety(h, m.carrier())) throw NotASubvariety("the variety is not contained in the carrier");
    QVariety cur = irreducible_component(h.with_field(common_field(h.field(), m.field())));
    for (std::size_t step = 0; step <= max_steps; ++step) {
        QVariety next = irreducible_component(intersection(cur, preimage(m.phi_T(), cur)));
        if (same_variety(next, cur)) return cur;
        cur = std::move(next);
    }
    throw InvariantViolation("the G_max iteration did not stabilize");
}

bool is_sufficiently_generic(const AModule& m, const QVariety& h) { return dimension(g_max(m, h)) == 0; }

std::size_t check_axioms(const AModule& m, unsigned trials, unsigned seed) {
    std::mt19937 rng(seed);
    const auto& fq = m.fq();
    std::uniform_int_distribution<Digit> coeff(0, fq->q() - 1);
    std::uniform_int_distribution<int> deg(0, 2);
    auto random_a = [&] {
        FqVec c(static_cast<std::size_t>(deg(rng)) + 1);
        for (auto& x : c) x = coeff(rng);
        return APoly(fq, c);
    };
    std::size_t failures = 0;
    for (unsigned t = 0; t < trials; ++t) {
        const APoly a = random_a(), b = random_a();
        const OreMatrix pa = phi(m, a).L, pb = phi(m, b).L;
        if (phi(m, a + b).L != pa + pb) ++failures;
        if (phi(m, a * b).L != pa * pb) ++failures;
        if (!differential_is_scalar(pa, m.carrier(), m.delta(a))) ++failures;
    }
    return failures;
}

}  // namespace tauvar
