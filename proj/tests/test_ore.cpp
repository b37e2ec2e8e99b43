#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "tauvar/errors.hpp"
#include "tauvar/ore.hpp"

using namespace tauvar;
using tauvar::testing::random_element;
using tauvar::testing::random_nonzero_ore;
using tauvar::testing::random_ore;

namespace {

OrePoly poly(const FieldPtr& f, std::initializer_list<FieldElement> c) { return OrePoly(f, std::vector<FieldElement>(c)); }

std::vector<FieldPtr> backends() {
    return {Field::prime(3), Field::extension(3, 2), Field::extension(4, 2), Field::rational_functions(3),
            Field::perfect_closure(3)};
}

}  // namespace

TEST(Ore, CommutationRule) {
    auto f = Field::rational_functions(3);
    const auto T = f->T();
    EXPECT_EQ(OrePoly::tau(f) * OrePoly::constant(T), OrePoly::monomial(T.pow(3), 1));
}

TEST(Ore, CarlitzSquare) {
    auto f = Field::rational_functions(3);
    const auto T = f->T();
    const OrePoly c = poly(f, {T, f->one()});
    const OrePoly expected = poly(f, {T * T, T + T.pow(3), f->one()});
    EXPECT_EQ(c * c, expected);
    EXPECT_EQ(c * OrePoly::one(f), c);
    EXPECT_EQ(OrePoly::one(f) * c, c);
    EXPECT_EQ((c * c).to_string(), "t^2 + (T^3+T)*t^1 + T^2*t^0");
}

TEST(Ore, LeftDivisionExample) {
    auto f = Field::prime(3);
    const OrePoly t2 = OrePoly::tau(f, 2), tm1 = poly(f, {-f->one(), f->one()});
    auto [q, r] = left_divmod(t2, tm1);
    EXPECT_EQ(q, poly(f, {f->one(), f->one()}));
    EXPECT_EQ(r, OrePoly::one(f));
    auto [q2, r2] = left_divmod(t2, OrePoly::one(f));
    EXPECT_EQ(q2, t2);
    EXPECT_TRUE(r2.is_zero());
    EXPECT_THROW(left_divmod(t2, OrePoly::zero(f)), DivisionByZero);
}

TEST(Ore, RightDivisionExample) {
    auto f = Field::perfect_closure(3);
    const OrePoly Tt = OrePoly::monomial(f->T(), 1);
    auto [q, r] = right_divmod(Tt, OrePoly::tau(f));
    EXPECT_EQ(q, OrePoly::constant(f->root_of_T(1)));
    EXPECT_TRUE(r.is_zero());
    auto rf = Field::rational_functions(3);
    EXPECT_THROW(right_divmod(OrePoly::monomial(rf->T(), 1), OrePoly::tau(rf)), CapabilityError);
}

TEST(Ore, GcdLcmExamples) {
    auto f = Field::prime(3);
    const auto one = f->one();
    const OrePoly tm1 = poly(f, {-one, one}), t2m1 = poly(f, {-one, f->zero(), one});
    EXPECT_EQ(right_gcd(tm1, t2m1), tm1);
    const OrePoly g = poly(f, {one, f->from_int(2), f->from_int(2)});
    EXPECT_EQ(right_gcd(g, OrePoly::zero(f)), g.monic());
    EXPECT_EQ(left_lcm(OrePoly::one(f), g), g.monic());
    EXPECT_EQ(left_lcm(tm1, t2m1), t2m1);
}

TEST(Ore, SeparablePartExamples) {
    auto f = Field::prime(3);
    const auto one = f->one();
    auto [n, q] = poly(f, {f->zero(), one, one}).separable_part();
    EXPECT_EQ(n, 1u);
    EXPECT_EQ(q, poly(f, {one, one}));
    const OrePoly sep = poly(f, {one, f->from_int(2)});
    EXPECT_EQ(sep.separable_part().first, 0u);
    EXPECT_EQ(sep.separable_part().second, sep);
    auto [k, unit] = OrePoly::tau(f, 4).separable_part();
    EXPECT_EQ(k, 4u);
    EXPECT_TRUE(unit.is_one());
    auto rf = Field::rational_functions(3);
    EXPECT_THROW(OrePoly::monomial(rf->T(), 1).separable_part(), CapabilityError);
}

TEST(Ore, TwistAndLinearPart) {
    auto rf = Field::rational_functions(3);
    const OrePoly p = OrePoly::constant(rf->T());
    EXPECT_EQ(p.twist(0), p);
    EXPECT_EQ(p.twist(1), OrePoly::constant(rf->T().pow(3)));
    const OrePoly fq_poly = poly(rf, {rf->from_int(2), rf->one()});
    EXPECT_EQ(fq_poly.twist(3), fq_poly);
    EXPECT_THROW(p.twist(-1), CapabilityError);
    const OrePoly carlitz = poly(rf, {rf->T(), rf->one()});
    EXPECT_EQ(carlitz.linear_part(), rf->T());
    EXPECT_TRUE(OrePoly::tau(rf, 2).linear_part().is_zero());
    EXPECT_TRUE(OrePoly::one(rf).linear_part().is_one());
}

TEST(Ore, KernelExamples) {
    auto f = Field::prime(3);
    const auto one = f->one();
    auto k = kernel_in_extension(poly(f, {-one, one}), 2);
    ASSERT_EQ(k.basis.size(), 1u);
    EXPECT_TRUE(k.basis[0].is_one());
    EXPECT_TRUE(kernel_in_extension(OrePoly::tau(f, 2), 3).basis.empty());
    EXPECT_TRUE(poly(f, {f->zero(), one, one}).eval(f->zero()).is_zero());
    EXPECT_THROW(kernel_in_extension(OrePoly::tau(Field::rational_functions(3)), 2), CapabilityError);
}

TEST(Ore, RingAxiomsRandomized) {
    std::mt19937 rng(2024);
    for (const auto& f : backends()) {
        for (int t = 0; t < 25; ++t) {
            const auto a = random_ore(f, rng, 3), b = random_ore(f, rng, 3), c = random_ore(f, rng, 3);
            EXPECT_EQ((a * b) * c, a * (b * c)) << f->descriptor().to_string();
            EXPECT_EQ(a * (b + c), a * b + a * c);
            EXPECT_EQ((a + b) * c, a * c + b * c);
        }
    }
}

TEST(Ore, EvalIsComposition) {
    std::mt19937 rng(8);
    for (const auto& f : {Field::prime(5), Field::extension(3, 3), Field::extension(4, 2), Field::rational_functions(3)}) {
        for (int t = 0; t < 25; ++t) {
            const auto p = random_ore(f, rng, 2), q = random_ore(f, rng, 2);
            const auto x = random_element(f, rng, 1);
            EXPECT_EQ((p * q).eval(x), p.eval(q.eval(x)));
        }
    }
}

TEST(Ore, DivisionReconstructs) {
    std::mt19937 rng(17);
    for (const auto& f : backends()) {
        for (int t = 0; t < 30; ++t) {
            const auto a = random_ore(f, rng, 4), b = random_nonzero_ore(f, rng, 2);
            auto [q, r] = left_divmod(a, b);
            EXPECT_EQ(q * b + r, a);
            EXPECT_LT(r.degree(), b.degree());
            if (!f->has_inverse_frobenius()) continue;
            auto [q2, r2] = right_divmod(a, b);
            EXPECT_EQ(b * q2 + r2, a);
            EXPECT_LT(r2.degree(), b.degree());
        }
    }
}

TEST(Ore, GcdLcmProperties) {
    std::mt19937 rng(41);
    for (const auto& f : {Field::extension(3, 2), Field::perfect_closure(3)}) {
        for (int t = 0; t < 20; ++t) {
            const auto common = random_nonzero_ore(f, rng, 1);
            const auto a = random_nonzero_ore(f, rng, 2) * common, b = random_nonzero_ore(f, rng, 2) * common;
            const auto d = right_gcd(a, b);
            EXPECT_TRUE(left_divmod(a, d).second.is_zero());
            EXPECT_TRUE(left_divmod(b, d).second.is_zero());
            EXPECT_TRUE(left_divmod(d, common.monic()).second.is_zero());
            const auto l = left_lcm(a, b);
            EXPECT_TRUE(left_divmod(l, a).second.is_zero());
            EXPECT_TRUE(left_divmod(l, b).second.is_zero());
            // degree formula in a domain with a degree function
            EXPECT_EQ(l.degree() + d.degree(), a.degree() + b.degree());
            const auto e = left_gcd(a, b);
            EXPECT_TRUE(right_divmod(a, e).second.is_zero());
            EXPECT_TRUE(right_divmod(b, e).second.is_zero());
        }
    }
}

TEST(Ore, SeparableAndTwistContracts) {
    std::mt19937 rng(5);
    for (const auto& f : {Field::extension(3, 2), Field::perfect_closure(3), Field::extension(2, 3)}) {
        for (int t = 0; t < 30; ++t) {
            const auto p = random_nonzero_ore(f, rng, 3);
            const unsigned shift = std::uniform_int_distribution<unsigned>(0, 2)(rng);
            const auto shifted = OrePoly::tau(f, shift) * p;
            auto [n, q] = shifted.separable_part();
            EXPECT_EQ(OrePoly::tau(f, n) * q, shifted);
            EXPECT_TRUE(q.is_separable());
            const int twist = std::uniform_int_distribution<int>(-2, 2)(rng);
            if (twist >= 0) EXPECT_EQ(OrePoly::tau(f, twist) * p, p.twist(twist) * OrePoly::tau(f, twist));
            else EXPECT_EQ(OrePoly::tau(f, -twist) * p.twist(twist), p * OrePoly::tau(f, -twist));
        }
    }
}

TEST(Ore, SeparableKernelDimensionEqualsDegree) {
    std::mt19937 rng(11);
    for (const auto& f : {Field::prime(3), Field::extension(3, 2), Field::extension(4, 1)}) {
        for (int t = 0; t < 15; ++t) {
            auto p = random_nonzero_ore(f, rng, 3);
            if (!p.is_separable()) p = p + OrePoly::one(f) - OrePoly::constant(p.linear_part());
            if (p.degree() < 1) continue;
            auto k = splitting_kernel(p, 64);
            EXPECT_EQ(k.basis.size(), static_cast<std::size_t>(p.degree()));
            const auto e = Embedding::find(f, k.field);
            const auto pe = p.map(e);
            for (const auto& x : k.basis) EXPECT_TRUE(pe.eval(x).is_zero());
        }
    }
}
