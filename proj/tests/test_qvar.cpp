#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "tauvar/errors.hpp"
#include "tauvar/qvar.hpp"

using namespace tauvar;
using tauvar::testing::random_element;
using tauvar::testing::random_matrix;
using tauvar::testing::random_ore;
using tauvar::testing::random_unimodular;

namespace {

OrePoly poly(const FieldPtr& f, std::initializer_list<long long> c) {
    std::vector<FieldElement> v;
    for (auto x : c) v.push_back(f->from_int(x));
    return OrePoly(f, std::move(v));
}

OrePoly one(const FieldPtr& f) { return OrePoly::one(f); }
OrePoly zero(const FieldPtr& f) { return OrePoly::zero(f); }

QVariety Z(const FieldPtr& f, std::size_t n, const std::vector<OreRow>& rows) {
    return zeros(TauSubmodule(f, n, rows));
}

QVariety random_variety(const FieldPtr& f, std::mt19937& rng, std::size_t n, int deg = 2) {
    const std::size_t rows = rng() % (n + 1);
    return zeros(TauSubmodule(random_matrix(f, rng, rows, n, deg, f->is_finite() ? 1 : 0)));
}

// Every x in E^n, for tiny E.
std::vector<std::vector<FieldElement>> all_points(const FieldPtr& e, std::size_t n) {
    const std::size_t d = e->degree_over_fp(), p = e->p();
    std::size_t total = 1;
    for (std::size_t i = 0; i < n * d; ++i) total *= p;
    std::vector<std::vector<FieldElement>> out;
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t x = code;
        std::vector<FieldElement> pt;
        for (std::size_t k = 0; k < n; ++k) {
            std::vector<Digit> c(d);
            for (auto& v : c) v = static_cast<Digit>(x % p), x /= p;
            pt.push_back(e->from_coeffs(c));
        }
        out.push_back(std::move(pt));
    }
    return out;
}

}  // namespace

TEST(Qvar, ZerosExamples) {
    auto f = Field::extension(3, 2);
    auto origin = QVariety::origin(f, 3);
    EXPECT_EQ(dimension(origin), 0u);
    EXPECT_EQ(origin.r(), 3u);
    for (const auto& p : origin.canon().seps) EXPECT_TRUE(p.is_one());

    auto tx = Z(f, 1, {{OrePoly::tau(f)}});
    EXPECT_EQ(dimension(tx), 0u);
    EXPECT_EQ(finite_part_dim(tx), 0u);
    EXPECT_TRUE(tx.radicalized());
    EXPECT_TRUE(module_equal(tx.ann(), TauSubmodule::full(f, 1)));

    auto all = QVariety::full(f, 2);
    EXPECT_EQ(dimension(all), 2u);
    EXPECT_FALSE(all.radicalized());
}

TEST(Qvar, PointsExamples) {
    auto f = Field::prime(3);
    auto v = variety_from_points(f, 2, {{f->one(), f->zero()}});
    TauSubmodule expected(f, 2, {{zero(f), one(f)}, {poly(f, {-1, 1}), zero(f)}});
    EXPECT_TRUE(module_equal(v.ann(), expected));
    EXPECT_EQ(dimension(v), 0u);
    EXPECT_EQ(finite_part_dim(v), 1u);
    auto empty = variety_from_points(f, 2, {});
    EXPECT_TRUE(same_variety(empty, QVariety::origin(f, 2)));
    EXPECT_THROW(variety_from_points(Field::rational_functions(3), 1, {}), CapabilityError);
}

TEST(Qvar, PointsMatchSpanByEnumeration) {
    auto e = Field::extension(3, 2);
    std::mt19937 rng(12);
    const auto everything = all_points(e, 2);
    for (int t = 0; t < 6; ++t) {
        std::vector<std::vector<FieldElement>> pts;
        const int k = 1 + t % 3;
        for (int i = 0; i < k; ++i) pts.push_back({random_element(e, rng), random_element(e, rng)});
        auto v = variety_from_points(e, 2, pts);
        // the F_3 span, by enumeration
        std::vector<std::vector<FieldElement>> span{{e->zero(), e->zero()}};
        for (const auto& p : pts) {
            std::vector<std::vector<FieldElement>> next;
            for (const auto& s : span)
                for (int c = 0; c < 3; ++c)
                    next.push_back({s[0] + e->from_int(c) * p[0], s[1] + e->from_int(c) * p[1]});
            span = next;
        }
        for (const auto& x : everything) {
            bool in_span = false;
            for (const auto& s : span) in_span = in_span || (s[0] == x[0] && s[1] == x[1]);
            bool vanishes = true;
            for (const auto& g : v.ann().basis()) vanishes = vanishes && eval_row(g, x).is_zero();
            EXPECT_EQ(in_span, vanishes);
        }
    }
}

TEST(Qvar, DimensionAndComponents) {
    auto f = Field::prime(3);
    EXPECT_EQ(dimension(QVariety::full(f, 4)), 4u);
    auto fq_line = Z(f, 2, {{poly(f, {-1, 1}), zero(f)}, {zero(f), one(f)}});
    EXPECT_EQ(dimension(fq_line), 0u);
    EXPECT_EQ(finite_part_dim(fq_line), 1u);
    EXPECT_FALSE(is_irreducible(fq_line));
    EXPECT_TRUE(same_variety(irreducible_component(fq_line), QVariety::origin(f, 2)));

    auto fq_times_k = Z(f, 2, {{poly(f, {-1, 1}), zero(f)}});
    auto comp = irreducible_component(fq_times_k);
    EXPECT_TRUE(same_variety(comp, Z(f, 2, {{one(f), zero(f)}})));
    EXPECT_TRUE(is_irreducible(comp));
    auto line = Z(f, 2, {{one(f), -one(f)}});
    EXPECT_TRUE(same_variety(irreducible_component(line), line));
}

TEST(Qvar, TangentExamples) {
    auto f = Field::prime(3);
    EXPECT_EQ(tangent_space(QVariety::full(f, 3)).dim(), 3u);
    auto fq_line = Z(f, 2, {{poly(f, {-1, 1}), zero(f)}, {zero(f), one(f)}});
    EXPECT_EQ(tangent_space(fq_line).dim(), 0u);
    EXPECT_EQ(tangent_space(QVariety::origin(f, 2)).dim(), 0u);
    // tau X_1 - X_2 is smooth of dimension 1 with tangent line X_2 = 0
    auto graph = Z(f, 2, {{OrePoly::tau(f), -one(f)}});
    auto t = tangent_space(graph);
    ASSERT_EQ(t.dim(), 1u);
    EXPECT_TRUE(t.basis[0][1].is_zero());
}

TEST(Qvar, MorphismExamples) {
    auto f = Field::extension(3, 2);
    auto K = QVariety::full(f, 1);
    EXPECT_NO_THROW(make_morphism(K, K, OreMatrix::identity(f, 1)));
    EXPECT_NO_THROW(make_morphism(K, K, OreMatrix(f, 1, {{OrePoly::tau(f)}})));
    EXPECT_THROW(make_morphism(K, QVariety::origin(f, 1), OreMatrix::identity(f, 1)), NotAMorphismInto);
    EXPECT_THROW(make_morphism(K, K, OreMatrix(f, 2, 2)), DomainError);

    // morphisms correspond to module maps: rows modulo M(F) round-trip
    std::mt19937 rng(6);
    auto F = random_variety(f, rng, 2);
    auto psi = make_morphism(F, QVariety::full(f, 2), random_matrix(f, rng, 2, 2, 2));
    auto reduced = morphism_to_module_map(psi);
    auto again = make_morphism(F, QVariety::full(f, 2), reduced);
    EXPECT_EQ(morphism_to_module_map(again), reduced);
    for (std::size_t i = 0; i < 2; ++i) EXPECT_TRUE(F.ann().contains(row_sub(psi.L.row(i), reduced.row(i))));
}

TEST(Qvar, ImageExamples) {
    auto f = Field::prime(3);
    auto K = QVariety::full(f, 1), K2 = QVariety::full(f, 2);
    auto tau = make_morphism(K, K, OreMatrix(f, 1, {{OrePoly::tau(f)}}));
    EXPECT_TRUE(same_variety(image(tau), K));
    auto diag = make_morphism(K, K2, OreMatrix(f, 1, {{one(f)}, {one(f)}}));
    EXPECT_TRUE(same_variety(image(diag), Z(f, 2, {{one(f), -one(f)}})));
    auto z = make_morphism(K2, K, OreMatrix(f, 1, 2));
    EXPECT_TRUE(same_variety(image(z), QVariety::origin(f, 1)));
    // a finite part: x -> x^3 - x kills F_3, so F_9 maps onto a 1-dimensional F_3-space
    auto f9 = Field::extension(3, 2);
    auto F9 = zeros(TauSubmodule(f9, 1, {{OrePoly(f9, {-f9->one(), f9->zero(), f9->one()})}}));
    auto wp = make_morphism(F9, QVariety::full(f9, 1), OreMatrix(f9, 1, {{OrePoly(f9, {-f9->one(), f9->one()})}}));
    auto img = image(wp);
    EXPECT_EQ(dimension(img), 0u);
    EXPECT_EQ(finite_part_dim(img), 1u);
    auto by_points = image_by_points(wp);
    EXPECT_TRUE(same_variety(img.map(Embedding::find(f9, by_points.field())), by_points));
}

TEST(Qvar, KernelPreimageExamples) {
    auto f = Field::prime(3);
    auto K = QVariety::full(f, 1);
    auto id = make_morphism(K, K, OreMatrix::identity(f, 1));
    EXPECT_TRUE(same_variety(kernel(id), QVariety::origin(f, 1)));
    auto artin = make_morphism(K, K, OreMatrix(f, 1, {{poly(f, {-1, 1})}}));
    auto ker = kernel(artin);
    EXPECT_EQ(dimension(ker), 0u);
    EXPECT_EQ(finite_part_dim(ker), 1u);
    EXPECT_TRUE(same_variety(preimage(artin, K), K));
}

TEST(Qvar, SumIntersectionExamples) {
    auto f = Field::prime(3);
    auto x1 = Z(f, 2, {{one(f), zero(f)}}), x2 = Z(f, 2, {{zero(f), one(f)}});
    EXPECT_TRUE(same_variety(sum(x1, x2), QVariety::full(f, 2)));
    EXPECT_TRUE(same_variety(sum(x1, QVariety::origin(f, 2)), x1));
    EXPECT_TRUE(same_variety(intersection(x1, x2), QVariety::origin(f, 2)));
}

TEST(Qvar, QuotientExamples) {
    auto f = Field::prime(3);
    auto K = QVariety::full(f, 1);
    auto fq = Z(f, 1, {{poly(f, {-1, 1})}});
    auto q = quotient(K, fq);
    EXPECT_EQ(dimension(q.Q), 1u);
    EXPECT_EQ(q.Pi.L, OreMatrix(f, 1, {{poly(f, {-1, 1})}}));
    EXPECT_TRUE(same_variety(kernel(q.Pi), fq));
    auto d = differential(q.Pi);
    ASSERT_EQ(d.in_bases.size(), 1u);
    EXPECT_EQ(d.in_bases[0][0], -f->one());
    EXPECT_TRUE(is_separable(q.Pi));

    auto by_origin = quotient(K, QVariety::origin(f, 1));
    EXPECT_EQ(dimension(by_origin.Q), 1u);
    auto by_self = quotient(K, K);
    EXPECT_EQ(dimension(by_self.Q), 0u);
    EXPECT_THROW(quotient(fq, K), NotASubvariety);
}

TEST(Qvar, DifferentialAndSeparabilityExamples) {
    auto f = Field::extension(3, 2);
    auto K = QVariety::full(f, 1);
    auto id = make_morphism(K, K, OreMatrix::identity(f, 1));
    auto did = differential(id);
    EXPECT_TRUE(klin::equal(did.in_bases, klin::identity(f, 1)));
    auto tau = make_morphism(K, K, OreMatrix(f, 1, {{OrePoly::tau(f)}}));
    EXPECT_TRUE(differential(tau).in_bases[0][0].is_zero());
    EXPECT_FALSE(is_separable(tau));
    EXPECT_TRUE(is_separable(id));
    EXPECT_TRUE(is_separable(make_morphism(K, K, OreMatrix(f, 1, {{poly(f, {-1, 1})}}))));
}

TEST(Qvar, FunctionFieldVarieties) {
    auto rf = Field::rational_functions(3);
    // tau X_1 - T tau X_2: the radical needs T^{1/3}
    auto v = Z(rf, 2, {{OrePoly::tau(rf), -OrePoly::monomial(rf->T(), 1)}});
    EXPECT_TRUE(v.lifted());
    EXPECT_TRUE(v.radicalized());
    EXPECT_EQ(v.field()->kind(), FieldKind::PerfectClosure);
    EXPECT_EQ(dimension(v), 1u);
    auto carlitz = Z(rf, 1, {{OrePoly(rf, {rf->T(), rf->one()})}});
    EXPECT_FALSE(carlitz.lifted());
    EXPECT_EQ(finite_part_dim(carlitz), 1u);
    EXPECT_THROW(image_by_points(make_morphism(carlitz, QVariety::full(rf, 1), OreMatrix::identity(rf, 1))),
                 CapabilityError);
    // mixed backends meet in the perfect closure
    EXPECT_EQ(dimension(sum(v, QVariety::full(rf, 2))), 2u);
}

// ---------------------------------------------------------------- properties

TEST(Qvar, RoundTripsRandomized) {
    std::mt19937 rng(31);
    for (const auto& f : {Field::extension(3, 2), Field::perfect_closure(3), Field::rational_functions(3)}) {
        for (int t = 0; t < 12; ++t) {
            const std::size_t n = 1 + rng() % 3;
            const TauSubmodule S(random_matrix(f, rng, 1 + rng() % 3, n, 2, f->is_finite() ? 1 : 0));
            const auto F = zeros(S);
            EXPECT_TRUE(module_equal(F.ann(), radical(S)));
            EXPECT_TRUE(module_equal(F.ann(), canonical_annihilator(F)));
            EXPECT_TRUE(module_equal(radical(F.ann()), F.ann()));
            for (const auto& p : F.canon().seps) EXPECT_TRUE(p.is_separable() && p.is_monic());
            for (std::size_t i = 1; i < F.r(); ++i) EXPECT_LE(F.canon().seps[i - 1].compare(F.canon().seps[i]), 0);
            EXPECT_EQ(tangent_space(F).dim(), dimension(F));
            EXPECT_TRUE(module_equal(zeros(F.ann()).ann(), F.ann()));
        }
    }
    for (const auto& f : {Field::extension(3, 2), Field::perfect_closure(3)}) {
        for (int t = 0; t < 10; ++t) {
            const std::size_t n = 1 + rng() % 3;
            auto [W, W_inv] = random_unimodular(f, rng, n, 4, 1);
            std::vector<OrePoly> seps;
            for (std::size_t i = 0; i < rng() % (n + 1); ++i) {
                auto p = random_ore(f, rng, 2, 0);
                seps.push_back(p + OrePoly::constant(p.linear_part().is_zero() ? f->one() : f->zero()));
            }
            const auto F = QVariety::from_canon({W, W_inv, seps});
            const auto G = zeros(F.ann());
            EXPECT_TRUE(module_equal(G.ann(), F.ann()));
            EXPECT_EQ(dimension(G), dimension(F));
            EXPECT_EQ(finite_part_dim(G), finite_part_dim(F));
        }
    }
}

TEST(Qvar, NullstellensatzOnPoints) {
    std::mt19937 rng(44);
    auto f = Field::extension(3, 2);
    for (int t = 0; t < 12; ++t) {
        const std::size_t n = 1 + rng() % 2;
        const TauSubmodule S(random_matrix(f, rng, 1 + rng() % 2, n, 2));
        const auto F = zeros(S);
        for (unsigned m : {2u, 4u}) {
            const auto E = Field::extension(3, m);
            EXPECT_TRUE(same_points(points_from_equations(F, E), points_from_canon(F, E)));
        }
        // literal enumeration over F_9
        const auto pts = points_from_equations(F, f);
        for (const auto& x : all_points(f, n)) {
            bool vanishes = true;
            for (std::size_t i = 0; i < S.gens().rows(); ++i) vanishes = vanishes && eval_row(S.gens().row(i), x).is_zero();
            EXPECT_EQ(vanishes, point_in(pts, x));
        }
    }
}

TEST(Qvar, ImageAndRankNullityRandomized) {
    std::mt19937 rng(53);
    for (const auto& f : {Field::extension(3, 2), Field::perfect_closure(3)}) {
        for (int t = 0; t < 10; ++t) {
            const std::size_t n = 1 + rng() % 2, m = 1 + rng() % 2;
            const auto F = random_variety(f, rng, n);
            const auto psi = make_morphism(F, QVariety::full(f, m), random_matrix(f, rng, m, n, 1, 0));
            const auto img = image(psi);
            EXPECT_EQ(dimension(F), dimension(kernel(psi)) + dimension(img));
            // the image contains psi of each generator direction: pulling M(img) back lands in M(F)
            EXPECT_NO_THROW(make_morphism(F, img, psi.L));
            if (f->is_finite()) {
                const auto by_points = image_by_points(psi);
                EXPECT_TRUE(same_variety(img.map(Embedding::find(f, by_points.field())), by_points));
            }
        }
    }
}

TEST(Qvar, DifferentialIsFunctorial) {
    std::mt19937 rng(61);
    for (const auto& f : {Field::extension(3, 2), Field::perfect_closure(3)}) {
        for (int t = 0; t < 10; ++t) {
            const std::size_t n = 1 + rng() % 3, m = 1 + rng() % 3, k = 1 + rng() % 2;
            const auto F = random_variety(f, rng, n);
            const auto G = QVariety::full(f, m), H = QVariety::full(f, k);
            const auto phi = make_morphism(F, G, random_matrix(f, rng, m, n, 2, 0));
            const auto psi = make_morphism(G, H, random_matrix(f, rng, k, m, 2, 0));
            const auto both = compose(psi, phi);
            const auto dphi = differential(phi), dpsi = differential(psi), dboth = differential(both);
            EXPECT_TRUE(klin::equal(dboth.dL, klin::multiply(f, dpsi.dL, dphi.dL, m, n)));
            EXPECT_TRUE(klin::equal(dboth.in_bases,
                                    klin::multiply(f, dpsi.in_bases, dphi.in_bases, dpsi.source.dim(), dphi.source.dim())));
        }
    }
}

TEST(Qvar, TangentSpaceFromHermiteGenerators) {
    std::mt19937 rng(71);
    auto f = Field::extension(3, 2);
    for (int t = 0; t < 10; ++t) {
        const std::size_t n = 1 + rng() % 3;
        const auto F = random_variety(f, rng, n);
        const auto T = tangent_space(F);
        const auto gens = F.ann().basis();
        if (gens.empty()) continue;
        for (int s = 0; s < 5; ++s) {
            OreRow h = zero_row(f, n);
            for (const auto& g : gens) h = row_add(h, row_scale_left(random_ore(f, rng, 2), g));
            const OreMatrix hm(f, n, {h});
            for (const auto& v : T.basis) EXPECT_TRUE(klin::apply(f, linear_parts(hm), v)[0].is_zero());
        }
    }
}

TEST(Qvar, SumMatchesAddition) {
    std::mt19937 rng(83);
    for (const auto& f : {Field::extension(3, 2), Field::perfect_closure(3)}) {
        for (int t = 0; t < 8; ++t) {
            const std::size_t n = 1 + rng() % 2;
            const auto A = random_variety(f, rng, n), B = random_variety(f, rng, n);
            const auto S = sum(A, B);
            EXPECT_TRUE(is_subvariety(A, S));
            EXPECT_TRUE(is_subvariety(B, S));
            const auto add = addition_morphism(A, B);
            EXPECT_TRUE(same_variety(image(add), S));
            if (f->is_finite()) {
                const auto by_points = image_by_points(add);
                EXPECT_TRUE(same_variety(S.map(Embedding::find(f, by_points.field())), by_points));
            }
            const auto I = intersection(A, B);
            EXPECT_TRUE(is_subvariety(I, A));
            EXPECT_TRUE(is_subvariety(I, B));
        }
    }
}

TEST(Qvar, QuotientUniversalProperty) {
    std::mt19937 rng(97);
    auto f = Field::extension(3, 2);
    for (int t = 0; t < 10; ++t) {
        const std::size_t n = 1 + rng() % 2;
        const auto F = random_variety(f, rng, n);
        const auto H = intersection(F, random_variety(f, rng, n));
        const auto q = quotient(F, H);
        EXPECT_TRUE(same_variety(kernel(q.Pi), H));
        EXPECT_EQ(dimension(q.Q), dimension(F) - dimension(H));
        // psi with rows in M(H) factors through Pi
        const std::size_t m = 1 + rng() % 2;
        std::vector<OreRow> rows;
        const auto hb = H.ann().basis();
        for (std::size_t i = 0; i < m; ++i) {
            OreRow r = zero_row(f, n);
            for (const auto& g : hb) r = row_add(r, row_scale_left(random_ore(f, rng, 1), g));
            rows.push_back(r);
        }
        const auto psi = make_morphism(F, QVariety::full(f, m), OreMatrix(f, n, rows));
        const auto bar = factor_through_quotient(q, psi);
        EXPECT_EQ(bar.L * q.Pi.L, psi.L);
    }
}
