#include <gtest/gtest.h>

#include <mwrs/p1geom.hpp>

#include "random_inputs.hpp"

using namespace mwrs;

namespace {

std::vector<Place> places_of_degree_at_most(const GF& f, int d) {
    std::vector<Place> out{Place::inf()};
    for (int e = 1; e <= d; ++e)
        for (auto& p : poly::irreducibles_of_degree(f, e)) out.push_back(Place::finite(std::move(p)));
    return out;
}

MWFunc random_element(const FuncOps& ops, std::mt19937_64& rng, int degree) {
    const RatFunc a = gen::function(ops.f, rng), b = gen::function(ops.f, rng), u = gen::function(ops.f, rng);
    MWFunc x = degree == 1 ? mw_symbol(ops, a) : mw_symbol2(ops, a, b);
    return mw_unit_scale(u, x) + mw_times(x, static_cast<long long>(rng() % 3));
}

} // namespace

TEST(Uniformizer, Examples) {
    const GFPtr f = GF::get(3);
    EXPECT_EQ(canonical_uniformizer(f, Place::rational(*f, 0)), RatFunc::t(f));
    EXPECT_EQ(canonical_uniformizer(f, Place::finite(Poly{1, 0, 1})), RatFunc::from_poly(f, Poly{1, 0, 1}));
    EXPECT_EQ(canonical_uniformizer(f, Place::inf()), RatFunc::t(f).inverse());
}

TEST(Uniformizer, ValuationOneAndDivisorIsThePlace) {
    for (auto q : {3u, 5u}) {
        const GFPtr f = GF::get(q);
        const int max_deg = q == 3 ? 4 : 2;
        const auto places = places_of_degree_at_most(*f, max_deg);
        for (const auto& x : places) {
            const RatFunc pi = canonical_uniformizer(f, x);
            EXPECT_EQ(pi.valuation(x), 1);
            auto div = divisor_of(pi);
            // finite p: (p) - deg p * inf; infinity: inf - (t)
            EXPECT_EQ(div.size(), 2u);
            if (x.infinite) {
                EXPECT_EQ(pi.valuation(Place::rational(*f, 0)), -1);
            } else {
                EXPECT_EQ(pi.valuation(Place::inf()), -poly::deg(x.poly));
            }
        }
    }
}

TEST(Twist, Examples) {
    const GFPtr f3 = GF::get(3), f5 = GF::get(5);
    EXPECT_FALSE(omega_twist_unit(f3, Place::rational(*f3, 2)));
    EXPECT_TRUE(omega_twist_unit(f3, Place::inf()));
    EXPECT_FALSE(omega_twist_unit(f5, Place::inf()));
    EXPECT_EQ(omega_twist_element(f3, Place::inf()), Poly{2});
}

TEST(Twist, ChartsAgreeOnOverlap) {
    std::mt19937_64 rng(113);
    for (auto q : {3u, 5u, 7u, 9u}) {
        const FuncOps ops{GF::get(q)};
        std::vector<Place> overlap;
        for (const auto& x : places_of_degree_at_most(*ops.f, 2))
            if (!x.infinite && x.poly != poly::x()) overlap.push_back(x);
        for (int trial = 0; trial < 40; ++trial) {
            const Place& x = overlap[rng() % overlap.size()];
            const int degree = 1 + static_cast<int>(rng() % 2);
            const MWFunc e = random_element(ops, rng, degree);
            EXPECT_EQ(chart_residue(e, x, Chart::t), chart_residue(e, x, Chart::s)) << "q=" << q;
        }
    }
}

TEST(Twist, InfinityChartIsTwistedResidue) {
    std::mt19937_64 rng(127);
    for (auto q : {3u, 5u}) {
        const FuncOps ops{GF::get(q)};
        const Place inf = Place::inf();
        for (int trial = 0; trial < 20; ++trial) {
            const MWFunc e = random_element(ops, rng, 1);
            const MWFinite plain = mw_residue(e, inf, canonical_uniformizer(ops.f, inf));
            EXPECT_EQ(chart_residue(e, inf, Chart::s), mw_unit_scale(omega_twist_element(ops.f, inf), plain));
        }
        EXPECT_THROW(chart_residue(mw_symbol(ops, ops.one()), inf, Chart::t), math_error);
        EXPECT_THROW(chart_residue(mw_symbol(ops, ops.one()), Place::rational(*ops.f, 0), Chart::s), math_error);
    }
}

TEST(Admissible, Examples) {
    const GFPtr f = GF::get(3);
    const FuncOps ops{f};
    const PlaceSet zero_inf{Place::rational(*f, 0), Place::inf()};
    EXPECT_TRUE(relative_admissible(mw_symbol(ops, factor_divisor(f, Poly{1, 1, 1}, Poly{1, 0, 1})), zero_inf));
    EXPECT_FALSE(relative_admissible(mw_symbol(ops, RatFunc::t(f)), zero_inf));
    EXPECT_FALSE(relative_admissible(mw_symbol(ops, factor_divisor(f, Poly{1, 1}, Poly{1, 2})), {Place::inf()}));
    EXPECT_TRUE(relative_admissible(mw_symbol(ops, RatFunc::t(f)), {}));
}

TEST(Admissible, ClosedUnderSum) {
    std::mt19937_64 rng(131);
    const GFPtr f = GF::get(5);
    const FuncOps ops{f};
    const PlaceSet d{Place::rational(*f, 1), Place::inf()};
    const CurveModel c(5);
    const auto trivial = d_trivial_basis(c, d, 1);
    const auto units = d_unit_basis(c, d, 1);
    int checked = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const MWFunc x = mw_unit_scale(units[rng() % units.size()], mw_symbol(ops, trivial[rng() % trivial.size()]));
        const MWFunc y = mw_times(mw_symbol(ops, trivial[rng() % trivial.size()]), 2);
        ASSERT_TRUE(relative_admissible(x, d));
        ASSERT_TRUE(relative_admissible(y, d));
        EXPECT_TRUE(relative_admissible(x + y, d));
        EXPECT_TRUE(relative_admissible(x - y, d));
        ++checked;
    }
    EXPECT_EQ(checked, 50);
}

TEST(Units, BasisExamples) {
    const CurveModel c(3);
    const GFPtr& f = c.field;
    const auto basis = d_unit_basis(c, {}, 1);
    ASSERT_EQ(basis.size(), 4u);
    EXPECT_EQ(basis[0], RatFunc::constant(f, 2));
    std::set<Place> seen;
    for (std::size_t i = 1; i < basis.size(); ++i) {
        ASSERT_EQ(basis[i].factors().size(), 1u);
        seen.insert(Place::finite(basis[i].factors().begin()->first));
    }
    EXPECT_EQ(seen.size(), 3u);
    // with infinity in D the units have total degree 0
    for (const auto& u : d_unit_basis(c, {Place::inf()}, 2)) EXPECT_EQ(u.valuation(Place::inf()), 0);
}

TEST(Units, TrivialBasisRestrictsToOne) {
    for (auto q : {3u, 5u, 9u}) {
        const CurveModel c(q);
        const GFPtr& f = c.field;
        const std::vector<PlaceSet> cases{{}, {Place::inf()}, {Place::rational(*f, 0), Place::inf()}};
        for (const auto& d : cases)
            for (int b = 1; b <= 2; ++b) {
                const auto basis = d_trivial_basis(c, d, b);
                for (const auto& g : basis)
                    for (const auto& x : d) EXPECT_EQ(residue_field_reduce(g, x), Poly{1});
                // rank: the unit group has rank = #finite places outside D (minus 1 if inf in D), torsion gone
                std::size_t finite = 0;
                for (const auto& x : c.places_up_to(b))
                    if (!x.infinite && !d.count(x)) ++finite;
                const std::size_t rank = d.count(Place::inf()) ? finite - (finite ? 1 : 0) : finite;
                Lattice lat(c.places_up_to(b).size());
                for (const auto& g : basis) {
                    std::vector<Integer> v;
                    for (const auto& x : c.places_up_to(b)) v.emplace_back(g.valuation(x));
                    lat.insert(v);
                }
                EXPECT_EQ(lat.rank(), rank) << "q=" << q << " b=" << b;
                if (d.empty()) {
                    EXPECT_EQ(basis.size(), rank + 1); // the constant survives
                }
            }
    }
}

TEST(Units, VanishingCombinations) {
    // candidates with images 1, 2, 3 in Z/4: kernel is generated by (2,-1,0), (1,1,1), (4,0,0)-type vectors
    auto combos = vanishing_combinations(3, {{1, 2, 3}}, {4});
    Lattice lat(3);
    for (const auto& c : combos) {
        EXPECT_EQ((c[0] + 2 * c[1] + 3 * c[2]) % 4, 0);
        lat.insert(c);
    }
    EXPECT_TRUE(lat.contains({2, -1, 0}));
    EXPECT_TRUE(lat.contains({1, 0, 1}));
    EXPECT_TRUE(lat.contains({4, 0, 0}));
    EXPECT_FALSE(lat.contains({1, 0, 0}));
    EXPECT_EQ(vanishing_combinations(2, {}, {}).size(), 2u);
}
