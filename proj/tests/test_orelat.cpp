#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "support.hpp"
#include "tauvar/errors.hpp"
#include "tauvar/orelat.hpp"

using namespace tauvar;
using tauvar::testing::random_matrix;
using tauvar::testing::random_ore;

namespace {

OrePoly poly(const FieldPtr& f, std::initializer_list<long long> c) {
    std::vector<FieldElement> v;
    for (auto x : c) v.push_back(f->from_int(x));
    return OrePoly(f, std::move(v));
}

// All Ore polynomials over F_q coefficients (from_fq) of degree <= d.
std::vector<OrePoly> small_polys(const FieldPtr& f, int d) {
    std::vector<OrePoly> out;
    const std::uint32_t q = f->q();
    std::uint64_t total = 1;
    for (int i = 0; i <= d; ++i) total *= q;
    for (std::uint64_t code = 0; code < total; ++code) {
        std::vector<FieldElement> c;
        std::uint64_t x = code;
        for (int i = 0; i <= d; ++i, x /= q) c.push_back(f->from_fq(static_cast<Digit>(x % q)));
        out.emplace_back(f, std::move(c));
    }
    return out;
}

void for_each_row(const std::vector<OrePoly>& polys, std::size_t n, const std::function<void(const OreRow&)>& visit) {
    std::vector<std::size_t> idx(n, 0);
    while (true) {
        OreRow r;
        for (auto i : idx) r.push_back(polys[i]);
        visit(r);
        std::size_t k = 0;
        while (k < n && ++idx[k] == polys.size()) idx[k++] = 0;
        if (k == n) return;
    }
}

}  // namespace

TEST(Orelat, HermiteExample) {
    auto f = Field::prime(3);
    OreMatrix L(f, 1, {{poly(f, {-1, 1})}, {poly(f, {-1, 0, 1})}});
    auto hf = hermite(L);
    EXPECT_EQ(hf.H, OreMatrix(f, 1, {{poly(f, {-1, 1})}, {OrePoly::zero(f)}}));
    EXPECT_EQ(hf.T_left * L, hf.H);
    auto id = hermite(OreMatrix::identity(f, 3));
    EXPECT_TRUE(id.H.is_identity());
    EXPECT_TRUE(id.T_left.is_identity());
    auto z = hermite(OreMatrix(f, 1, 1));
    EXPECT_TRUE(z.H.is_zero());
    EXPECT_EQ(z.rank(), 0u);
}

TEST(Orelat, DiagonalizeExamples) {
    auto f = Field::extension(3, 2);
    const OrePoly P = OrePoly(f, {f->generator(), f->one(), f->generator()});
    OreMatrix L(f, 2, {{OrePoly::one(f), P}, {OrePoly::zero(f), OrePoly::one(f)}});
    auto d = diagonalize(L);
    EXPECT_TRUE(d.D.is_identity());
    EXPECT_EQ(d.V, OreMatrix(f, 2, {{OrePoly::one(f), -P}, {OrePoly::zero(f), OrePoly::one(f)}}));
    EXPECT_EQ(d.U * L * d.V, d.D);

    OreMatrix diag = OreMatrix::diagonal(f, {OrePoly::tau(f), poly(f, {1, 1})});
    auto dd = diagonalize(diag);
    EXPECT_EQ(dd.D, diag);
    EXPECT_TRUE(dd.U.is_identity());
    EXPECT_TRUE(dd.V.is_identity());

    auto f3 = Field::prime(3);
    OreMatrix row(f3, 2, {{OrePoly::tau(f3, 2), OrePoly::tau(f3, 2)}});
    auto dr = diagonalize(row);
    EXPECT_EQ(dr.D, OreMatrix(f3, 2, {{OrePoly::tau(f3, 2), OrePoly::zero(f3)}}));
    EXPECT_EQ(dr.V, OreMatrix(f3, 2, {{OrePoly::one(f3), -OrePoly::one(f3)}, {OrePoly::zero(f3), OrePoly::one(f3)}}));
    EXPECT_EQ(dr.r, 1u);
}

TEST(Orelat, DiagonalizeLiftsRationalFunctions) {
    auto rf = Field::rational_functions(3);
    // [[tau, T tau]] needs T^{1/3} for the column operation
    OreMatrix L(rf, 2, {{OrePoly::tau(rf), OrePoly::monomial(rf->T(), 1)}});
    auto d = diagonalize(L);
    EXPECT_TRUE(d.lifted);
    EXPECT_EQ(d.D.field()->kind(), FieldKind::PerfectClosure);
    EXPECT_EQ(d.U * L.with_field(d.D.field()) * d.V, d.D);
    // a matrix needing no roots comes back down
    OreMatrix L2(rf, 2, {{OrePoly::one(rf), OrePoly::monomial(rf->T(), 1)}});
    auto d2 = diagonalize(L2);
    EXPECT_TRUE(d2.lifted);
    EXPECT_EQ(d2.D.field()->kind(), FieldKind::RationalFunctions);
}

TEST(Orelat, MembershipExamples) {
    auto f = Field::extension(3, 2);
    TauSubmodule M(f, 1, {{OrePoly::tau(f)}});
    EXPECT_FALSE(M.contains({OrePoly::one(f)}));
    EXPECT_TRUE(M.contains({OrePoly::zero(f)}));
    std::mt19937 rng(4);
    auto G = random_matrix(f, rng, 2, 3, 2);
    TauSubmodule S(G);
    for (int t = 0; t < 10; ++t) {
        OreRow c{random_ore(f, rng, 2), random_ore(f, rng, 2)};
        const OreRow g = row_times(c, G);
        EXPECT_TRUE(S.contains(g));
        auto coeffs = S.coefficients(g);
        ASSERT_TRUE(coeffs.has_value());
        EXPECT_EQ(row_times(*coeffs, G), g);
    }
}

TEST(Orelat, LeftKernelExamples) {
    auto f = Field::prime(3);
    EXPECT_TRUE(left_kernel(OreMatrix::identity(f, 3)).is_zero_module());
    OreMatrix L(f, 1, {{poly(f, {-1, 1})}, {poly(f, {-1, 0, 1})}});
    auto k = left_kernel(L);
    TauSubmodule expected(f, 2, {{-poly(f, {1, 1}), OrePoly::one(f)}});
    EXPECT_TRUE(module_equal(k, expected));
    auto k0 = left_kernel(OreMatrix(f, 1, 1));
    EXPECT_TRUE(module_equal(k0, TauSubmodule::full(f, 1)));
}

TEST(Orelat, IntersectExamples) {
    auto f = Field::prime(3);
    std::mt19937 rng(9);
    TauSubmodule M(random_matrix(f, rng, 2, 2, 2));
    EXPECT_TRUE(module_equal(intersect(M, M), M));
    TauSubmodule A(f, 2, {unit_row(f, 2, 0)}), B(f, 2, {unit_row(f, 2, 1)});
    EXPECT_TRUE(intersect(A, B).is_zero_module());
    const OrePoly a = poly(f, {-1, 1}), b = poly(f, {1, 1});
    TauSubmodule Ma(f, 1, {{a}}), Mb(f, 1, {{b}});
    EXPECT_TRUE(module_equal(intersect(Ma, Mb), TauSubmodule(f, 1, {{left_lcm(a, b)}})));
}

TEST(Orelat, RadicalAndSumExamples) {
    auto f = Field::extension(3, 2);
    TauSubmodule M(f, 1, {{OrePoly::tau(f)}});
    EXPECT_TRUE(module_equal(radical(M), TauSubmodule::full(f, 1)));
    TauSubmodule sep(f, 2, {{poly(f, {1, 1}), OrePoly::zero(f)}});
    EXPECT_TRUE(module_equal(radical(sep), sep));
    TauSubmodule zero(f, 2);
    EXPECT_TRUE(radical(zero).is_zero_module());
    EXPECT_TRUE(module_equal(module_sum(sep, zero), sep));
    TauSubmodule A(f, 2, {unit_row(f, 2, 0)}), B(f, 2, {unit_row(f, 2, 1)});
    EXPECT_TRUE(module_equal(module_sum(A, B), TauSubmodule::full(f, 2)));
    EXPECT_TRUE(module_equal(module_sum(sep, sep), sep));
}

TEST(Orelat, RadicalOverRationalFunctions) {
    auto rf = Field::rational_functions(3);
    // tau X_1 - T tau X_2 = tau (X_1 - T^{1/3} X_2): the radical needs the closure
    TauSubmodule M(rf, 2, {{OrePoly::tau(rf), -OrePoly::monomial(rf->T(), 1)}});
    auto res = radical_with_flag(M);
    EXPECT_TRUE(res.lifted);
    auto pc = rf->lifted();
    EXPECT_TRUE(res.module.contains({OrePoly::one(pc), -OrePoly::constant(pc->root_of_T(1))}));
    EXPECT_TRUE(module_contains(res.module, M));
}

TEST(Orelat, NormalFormInvariantsRandomized) {
    std::mt19937 rng(77);
    for (const auto& f : {Field::extension(3, 2), Field::perfect_closure(3), Field::rational_functions(3)}) {
        for (int t = 0; t < 15; ++t) {
            const std::size_t rows = 1 + rng() % 3, cols = 1 + rng() % 3;
            const OreMatrix L = random_matrix(f, rng, rows, cols, 2, f->is_finite() ? 1 : 0);
            auto d = diagonalize(L);
            const auto Lc = L.with_field(d.D.field());
            EXPECT_EQ(d.U * Lc * d.V, d.D);
            EXPECT_TRUE((d.U * d.U_inv).is_identity());
            EXPECT_TRUE((d.U_inv * d.U).is_identity());
            EXPECT_TRUE((d.V * d.V_inv).is_identity());
            EXPECT_TRUE(d.D.is_diagonal());
            for (std::size_t i = 0; i < std::min(rows, cols); ++i) EXPECT_EQ(i < d.r, !d.D(i, i).is_zero());
            auto hf = hermite(L);
            EXPECT_EQ(hf.T_left * L, hf.H);
            EXPECT_TRUE(module_equal(TauSubmodule(L), TauSubmodule(hf.H)));
        }
    }
}

TEST(Orelat, RadicalPropertiesRandomized) {
    std::mt19937 rng(3);
    for (const auto& f : {Field::extension(3, 2), Field::perfect_closure(3)}) {
        for (int t = 0; t < 12; ++t) {
            const std::size_t n = 1 + rng() % 3;
            TauSubmodule M(random_matrix(f, rng, 1 + rng() % 3, n, 2, 0));
            const auto R = radical(M);
            EXPECT_TRUE(module_contains(R, M));
            EXPECT_TRUE(module_equal(radical(R), R));
            // tau^N f in M implies f in R
            for (const auto& g : R.gens().row_list()) {
                bool found = false;
                for (unsigned N = 0; N <= 4 && !found; ++N) found = M.contains(row_scale_left(OrePoly::tau(f, N), g));
                EXPECT_TRUE(found);
            }
        }
    }
}

TEST(Orelat, IntersectMatchesBruteForce) {
    auto f = Field::prime(3);
    std::mt19937 rng(21);
    const auto polys = small_polys(f, 2);
    for (int t = 0; t < 4; ++t) {
        TauSubmodule A(random_matrix(f, rng, 1, 2, 1, 0)), B(random_matrix(f, rng, 1, 2, 1, 0));
        const auto I = intersect(A, B);
        EXPECT_TRUE(module_contains(A, I));
        EXPECT_TRUE(module_contains(B, I));
        for_each_row(polys, 2, [&](const OreRow& r) {
            EXPECT_EQ(I.contains(r), A.contains(r) && B.contains(r)) << row_to_string(r);
        });
    }
}

TEST(Orelat, LeftKernelMatchesBruteForce) {
    auto f = Field::prime(3);
    std::mt19937 rng(8);
    const auto polys = small_polys(f, 1);
    for (int t = 0; t < 4; ++t) {
        // dependent rows: third row is a combination of the first two
        OreMatrix L = random_matrix(f, rng, 2, 2, 1, 0);
        const OreRow comb = row_add(row_scale_left(poly(f, {1, 1}), L.row(0)), row_scale_left(OrePoly::tau(f), L.row(1)));
        L = L.stacked(OreMatrix(f, 2, {comb}));
        const auto K = left_kernel(L);
        for (const auto& c : K.gens().row_list()) EXPECT_TRUE(row_is_zero(row_times(c, L)));
        for_each_row(polys, 3, [&](const OreRow& c) {
            if (row_is_zero(row_times(c, L))) EXPECT_TRUE(K.contains(c)) << row_to_string(c);
        });
    }
}
