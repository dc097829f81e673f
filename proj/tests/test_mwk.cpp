#include <gtest/gtest.h>

#include <mwrs/mwk.hpp>

#include "random_inputs.hpp"

using namespace mwrs;

namespace {

RatFunc one_minus(const RatFunc& a) { return *RatFunc::constant(a.field(), 1).plus(-a); }

FiniteOps finite_ops(std::uint32_t q) { return FiniteOps{ResidueField::base_field(GF::get(q))}; }

} // namespace

TEST(Symbols, Examples) {
    const FuncOps ops{GF::get(3)};
    const RatFunc t = RatFunc::t(ops.f);
    EXPECT_TRUE(mw_is_zero(mw_symbol(ops, ops.one())));
    auto st = mw_symbol(ops, t);
    EXPECT_EQ(st.milnor1, t);
    EXPECT_EQ(st.witt, WittFunc::from_form({ops.f, {t, RatFunc::constant(ops.f, 2)}}));

    auto f5 = finite_ops(5);
    auto s4 = mw_symbol(f5, Poly{4});
    EXPECT_EQ(s4.milnor1, Poly{4});
    EXPECT_TRUE(s4.witt.is_zero());
    EXPECT_FALSE(mw_is_zero(s4));
    EXPECT_THROW(mw_symbol(f5, Poly{}), math_error);
}

TEST(Symbols, EtaExamples) {
    const FuncOps ops{GF::get(3)};
    const RatFunc t = RatFunc::t(ops.f), u = RatFunc::from_poly(ops.f, Poly{1, 1});
    EXPECT_TRUE(mw_is_zero(mw_eta_mul(mw_hyperbolic(ops))));
    auto eu = mw_eta_mul(mw_unit(ops, u));
    EXPECT_EQ(eu.degree, -1);
    EXPECT_EQ(eu.witt, WittFunc::unit(u));
    auto e2 = mw_eta_mul(mw_symbol2(ops, t, u));
    EXPECT_EQ(e2.degree, 1);
    EXPECT_TRUE(e2.milnor1.is_one());
    EXPECT_EQ(e2.witt, (WittFunc::unit(t) - WittFunc::unit(ops.one())) * (WittFunc::unit(u) - WittFunc::unit(ops.one())));
    EXPECT_THROW(mw_eta_mul(mw_zero(ops, -2)), math_error);
}

TEST(Normalize, Examples) {
    auto f3 = finite_ops(3);
    EXPECT_TRUE(mw_is_zero(mw_symbol2(f3, Poly{2}, Poly{2})));
    const FuncOps ops{GF::get(3)};
    const RatFunc a = RatFunc::t(ops.f), b = RatFunc::from_poly(ops.f, Poly{1, 1});
    auto x = mw_normalize(ops, 1,
                          {mw_symbol(ops, a * b), -mw_symbol(ops, a), -mw_symbol(ops, b), -mw_eta_mul(mw_symbol2(ops, a, b))});
    EXPECT_TRUE(mw_is_zero(x));
    auto y = mw_normalize(ops, 1, {mw_symbol(ops, a), mw_symbol(ops, a.inverse()), mw_eta_mul(mw_symbol2(ops, a, a.inverse()))});
    EXPECT_TRUE(mw_is_zero(y));
    EXPECT_THROW(mw_symbol(ops, a) + mw_zero(ops, 2), math_error);
}

TEST(Compatible, Examples) {
    const FuncOps ops{GF::get(3)};
    const RatFunc t = RatFunc::t(ops.f);
    EXPECT_TRUE(mw_compatible(mw_symbol(ops, t)));
    auto bad = mw_zero(ops, 1);
    bad.milnor1 = t;
    EXPECT_FALSE(mw_compatible(bad));
    auto f5 = finite_ops(5);
    auto ok = mw_zero(f5, 1);
    ok.milnor1 = Poly{4};
    EXPECT_TRUE(mw_compatible(ok));
}

TEST(UnitScale, Identities) {
    std::mt19937_64 rng(71);
    for (auto q : {3u, 5u}) {
        const FuncOps ops{GF::get(q)};
        for (int trial = 0; trial < 40; ++trial) {
            const RatFunc u = gen::function(ops.f, rng), f = gen::function(ops.f, rng), b = gen::function(ops.f, rng);
            auto lhs = mw_unit_scale(u, mw_symbol(ops, f));
            EXPECT_EQ(lhs, mw_symbol(ops, f) + mw_eta_mul(mw_symbol2(ops, u, f)));
            EXPECT_EQ(mw_unit_scale(b * b, mw_symbol(ops, f)), mw_symbol(ops, f));
            EXPECT_EQ(mw_unit_scale(u, mw_symbol(ops, f)), mw_unit_scale(u.inverse(), mw_symbol(ops, f)));
        }
    }
}

TEST(Relations, RandomInstancesOverFunctionFields) {
    std::mt19937_64 rng(73);
    for (auto q : {3u, 5u, 9u}) {
        const FuncOps ops{GF::get(q)};
        for (int trial = 0; trial < 60; ++trial) {
            const RatFunc a = gen::steinberg_input(ops.f, rng), b = gen::function(ops.f, rng);
            EXPECT_TRUE(mw_is_zero(mw_symbol2(ops, a, one_minus(a))));
            EXPECT_EQ(mw_symbol(ops, a * b), mw_symbol(ops, a) + mw_symbol(ops, b) + mw_eta_mul(mw_symbol2(ops, a, b)));
            EXPECT_EQ(mw_unit(ops, a), mw_integer(ops, 1) + mw_eta_mul(mw_symbol(ops, a)));
            EXPECT_TRUE(mw_is_zero(mw_eta_mul(mw_hyperbolic(ops))));
            EXPECT_EQ(mw_unit(ops, a), mw_unit(ops, a * b * b));
            EXPECT_EQ(mw_unit(ops, a), mw_unit(ops, a.inverse()));
        }
    }
}

TEST(FiniteFields, LowDegreeGroupsExhaustive) {
    for (auto q : {3u, 5u, 7u, 9u}) {
        auto ops = finite_ops(q);
        const auto& k = *ops.k;
        std::set<std::uint64_t> milnor;
        for (std::uint64_t i = 1; i < k.size(); ++i) {
            const Poly a = k.element(i);
            // degree 1: the Milnor part determines the element
            auto x = mw_symbol(ops, a);
            EXPECT_TRUE(mw_compatible(x));
            milnor.insert(k.index(x.milnor1));
            for (std::uint64_t j = 1; j < k.size(); ++j) {
                // degree 2 vanishes
                EXPECT_TRUE(mw_is_zero(mw_symbol2(ops, a, k.element(j))));
                auto y = mw_symbol(ops, k.element(j));
                EXPECT_EQ(x == y, i == j);
            }
        }
        EXPECT_EQ(milnor.size(), k.size() - 1);
        // degree 0: (rank, disc) is an isomorphism onto Z + Z/2; test on the box rank in [-3, 3]
        std::set<std::pair<long long, bool>> images;
        for (long long m = -3; m <= 3; ++m)
            for (long long n = -3; n <= 3; ++n) {
                auto g = mw_integer(ops, m) + mw_times(mw_unit(ops, k.nonsquare()), n);
                GWFinite gw(g.milnor0, g.witt);
                EXPECT_EQ(gw.rank, m + n);
                EXPECT_EQ(gw_disc_nonsquare(gw), (n % 2 != 0));
                images.emplace(gw.rank, gw_disc_nonsquare(gw));
            }
        EXPECT_EQ(images.size(), 24u); // ranks -6..6 with both discs, except rank +-6 which have one each
    }
}

TEST(Relations, RandomInstancesOverFiniteFields) {
    std::mt19937_64 rng(79);
    for (auto q : {3u, 5u, 7u, 9u}) {
        auto ops = finite_ops(q);
        const auto& k = *ops.k;
        for (int trial = 0; trial < 60; ++trial) {
            Poly a = gen::residue_unit(k, rng), b = gen::residue_unit(k, rng);
            if (a == k.one()) continue;
            EXPECT_TRUE(mw_is_zero(mw_symbol2(ops, a, k.add(k.one(), k.neg(a)))));
            EXPECT_EQ(mw_symbol(ops, k.mul(a, b)),
                      mw_symbol(ops, a) + mw_symbol(ops, b) + mw_eta_mul(mw_symbol2(ops, a, b)));
            EXPECT_EQ(mw_unit(ops, a), mw_integer(ops, 1) + mw_eta_mul(mw_symbol(ops, a)));
            EXPECT_TRUE(mw_is_zero(mw_eta_mul(mw_hyperbolic(ops))));
        }
    }
}

TEST(Residue, Examples) {
    const FuncOps ops{GF::get(3)};
    const RatFunc t = RatFunc::t(ops.f);
    const Place origin = Place::rational(*ops.f, 0);
    auto k = residue_field(ops.f, origin);
    auto r = mw_residue(mw_symbol(ops, t), origin, t);
    EXPECT_EQ(r.milnor0, 1);
    EXPECT_EQ(r.witt, WittFinite::unit(k, Poly{1}));
    EXPECT_TRUE(mw_is_zero(mw_residue(mw_symbol(ops, RatFunc::from_poly(ops.f, Poly{1, 1})), origin, t)));
    auto r2 = mw_residue(mw_unit_scale(RatFunc::constant(ops.f, 2), mw_symbol(ops, t)), origin, t);
    EXPECT_EQ(r2.milnor0, 1);
    EXPECT_EQ(r2.witt, WittFinite::unit(k, Poly{2}));
    EXPECT_THROW(mw_residue(mw_symbol(ops, t), origin, t * t), math_error);
    EXPECT_THROW(mw_residue(mw_zero(ops, -1), origin, t), math_error);
}

TEST(Residue, TameSymbolNormalization) {
    // {pi, u} -> u(x) and {u, pi} -> u(x)^{-1}
    const FuncOps ops{GF::get(5)};
    const RatFunc t = RatFunc::t(ops.f), u = RatFunc::from_poly(ops.f, Poly{2, 1});
    const Place origin = Place::rational(*ops.f, 0);
    EXPECT_EQ(mw_residue(mw_symbol2(ops, t, u), origin, t).milnor1, Poly{2});
    EXPECT_EQ(mw_residue(mw_symbol2(ops, u, t), origin, t).milnor1, Poly{3});
    // {t, t} = {t, -1}
    EXPECT_EQ(mw_residue(mw_symbol2(ops, t, t), origin, t).milnor1, Poly{4});
}

TEST(Residue, UniformizerCovariance) {
    std::mt19937_64 rng(83);
    for (auto q : {3u, 5u, 9u}) {
        const FuncOps ops{GF::get(q)};
        for (int trial = 0; trial < 60; ++trial) {
            const int n = 1 + static_cast<int>(rng() % 2);
            const RatFunc a = gen::function(ops.f, rng), b = gen::function(ops.f, rng);
            const MWFunc x = n == 1 ? mw_symbol(ops, a) : mw_symbol2(ops, a, b);
            const auto places = poly::irreducibles_of_degree(*ops.f, 1 + static_cast<int>(rng() % 2));
            const Place p = Place::finite(places[rng() % places.size()]);
            auto k = residue_field(ops.f, p);
            const RatFunc pi = canonical_uniformizer(ops.f, p);
            RatFunc u = gen::function(ops.f, rng);
            if (u.valuation(p) != 0) continue;
            EXPECT_EQ(mw_residue(x, p, u * pi), mw_unit_scale(residue_field_reduce(u, p), mw_residue(x, p, pi)));
        }
    }
}

TEST(Residue, IndependentOfFractionRepresentative) {
    std::mt19937_64 rng(89);
    const GFPtr f = GF::get(5);
    const FuncOps ops{f};
    for (int trial = 0; trial < 30; ++trial) {
        Poly n = gen::nonzero_polynomial(*f, rng, 3), d = gen::nonzero_polynomial(*f, rng, 3),
             c = gen::nonzero_polynomial(*f, rng, 2);
        RatFunc g1 = factor_divisor(f, n, d);
        RatFunc g2 = factor_divisor(f, poly::mul(*f, n, c), poly::mul(*f, d, c));
        const Place p = Place::rational(*f, static_cast<Elem>(rng() % 5));
        const RatFunc pi = canonical_uniformizer(f, p);
        EXPECT_EQ(mw_residue(mw_symbol(ops, g1), p, pi), mw_residue(mw_symbol(ops, g2), p, pi));
    }
}

TEST(Specialize, Examples) {
    const FuncOps ops{GF::get(3)};
    const Place origin = Place::rational(*ops.f, 0);
    EXPECT_TRUE(mw_is_zero(mw_specialize(mw_symbol(ops, RatFunc::from_poly(ops.f, Poly{1, 1})), origin)));
    auto k = residue_field(ops.f, origin);
    EXPECT_EQ(mw_specialize(mw_symbol(ops, RatFunc::from_poly(ops.f, Poly{2, 1})), origin),
              mw_symbol(FiniteOps{k}, Poly{2}));
    EXPECT_THROW(mw_specialize(mw_symbol(ops, RatFunc::t(ops.f)), origin), math_error);
}

TEST(Normalize, OutputsAreCompatible) {
    std::mt19937_64 rng(97);
    const FuncOps ops{GF::get(3)};
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<MWFunc> terms;
        for (int i = 0; i < 3; ++i) {
            const RatFunc a = gen::function(ops.f, rng), b = gen::function(ops.f, rng);
            terms.push_back(mw_times(mw_unit_scale(b, mw_symbol2(ops, a, b)), static_cast<long long>(rng() % 5) - 2));
        }
        EXPECT_TRUE(mw_compatible(mw_normalize(ops, 2, terms)));
    }
}
