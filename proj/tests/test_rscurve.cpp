#include <gtest/gtest.h>

#include <mwrs/rscurve.hpp>

#include "random_inputs.hpp"

using namespace mwrs;

namespace {

struct Case {
    std::uint32_t q;
    std::string name;
    PlaceSet d;
};

std::vector<Case> shipped_cases() {
    std::vector<Case> out;
    for (auto q : {3u, 5u, 7u, 9u}) {
        const GF& f = *GF::get(q);
        out.push_back({q, "P1", {}});
        out.push_back({q, "A1", {Place::inf()}});
        out.push_back({q, "Gm", {Place::rational(f, 0), Place::inf()}});
    }
    return out;
}

// GW(F_q) = Z + Z/2; over G_m an extra copy of F_q^* = Z/(q-1)
AbGroupInvariants expected_h1(const Case& c) {
    if (c.d.size() == 2) return AbGroupInvariants::from_cyclic_orders({0, 2, Integer(c.q - 1)});
    return AbGroupInvariants::from_cyclic_orders({0, 2});
}

// W(F_q): Z/4 when q = 3 mod 4, (Z/2)^2 otherwise
AbGroupInvariants witt_group(std::uint32_t q) {
    if (q % 4 == 3) return AbGroupInvariants::from_cyclic_orders({4});
    return AbGroupInvariants::from_cyclic_orders({2, 2});
}

RSProblem problem(const Case& c, int l = 0) {
    RSProblem p;
    p.q = c.q;
    p.removed = c.d;
    p.l = l;
    return p;
}

} // namespace

TEST(Family, ExamplesOverF3) {
    const GFPtr f = GF::get(3);
    const FuncOps ops{f};
    RSProblem p;
    p.q = 3;
    for (const auto& g : {RatFunc::constant(f, 2), RatFunc::t(f), RatFunc::from_poly(f, Poly{1, 1}),
                          RatFunc::from_poly(f, Poly{2, 1})})
        EXPECT_TRUE(family_spans(p, 1, mw_symbol(ops, g))) << g.to_string();
    EXPECT_FALSE(family_spans(p, 1, mw_symbol(ops, RatFunc::from_poly(f, Poly{1, 0, 1}))));

    p.removed = {Place::inf()};
    EXPECT_FALSE(family_spans(p, 1, mw_symbol(ops, RatFunc::t(f))));
    EXPECT_TRUE(family_spans(p, 1, mw_symbol(ops, factor_divisor(f, Poly{1, 1}, Poly{2, 1}))));
}

TEST(Family, EtaSymbolsPresent) {
    // every eta[x][y] over the S_1-unit basis has a zero Milnor part; check that
    // the family contains one element per unordered pair (minus zeros)
    RSProblem p;
    p.q = 3;
    const auto gens = generator_family(p, 1);
    std::size_t eta = 0;
    for (const auto& g : gens)
        if (g.provenance.rfind("eta[", 0) == 0) ++eta;
    EXPECT_GT(eta, 0u);
    EXPECT_LE(eta, 10u); // 4 basis units, 10 unordered pairs
}

TEST(Family, NoZeroAndAdmissible) {
    for (const auto& c : shipped_cases()) {
        if (c.q > 5) continue;
        for (int l = -1; l <= 1; ++l)
            for (int b = 1; b <= 2; ++b)
                for (const auto& g : generator_family(problem(c, l), b)) {
                    EXPECT_FALSE(mw_is_zero(g.element));
                    EXPECT_TRUE(relative_admissible(g.element, c.d));
                    EXPECT_EQ(g.element.degree, l + 1);
                }
    }
}

TEST(Family, BoundBelowRemovedDegreeIsAnError) {
    RSProblem p;
    p.q = 3;
    p.removed = {Place::finite(Poly{1, 0, 1})};
    EXPECT_THROW(generator_family(p, 1), math_error);
    EXPECT_NO_THROW(generator_family(p, 2));
}

TEST(Boundary, Examples) {
    const GFPtr f = GF::get(3);
    const FuncOps ops{f};
    const CurveModel c(3);

    // D = {inf}, [(t+1)/(t+2)]: <1> at (t+1); -<-2> = -<1> at (t+2)
    RSProblem a1;
    a1.q = 3;
    a1.removed = {Place::inf()};
    TargetLayout la(c, 0, a1.removed, 1);
    auto col = boundary_column(a1, la, mw_symbol(ops, factor_divisor(f, Poly{1, 1}, Poly{2, 1})));
    std::vector<Integer> expect(la.size());
    expect[la.offset(Place::rational(*f, 2))] = 1;
    expect[la.offset(Place::rational(*f, 1))] = -1;
    EXPECT_EQ(col, expect);

    // D = {}, [t]: <1> at (t); at infinity [1/s] = -<-1>[s] has residue -<-1>,
    // which the twist <-1> turns into -<1>
    RSProblem p1;
    p1.q = 3;
    TargetLayout lp(c, 0, {}, 1);
    col = boundary_column(p1, lp, mw_symbol(ops, RatFunc::t(f)));
    expect.assign(lp.size(), 0);
    expect[lp.offset(Place::rational(*f, 0))] = 1;
    expect[lp.offset(Place::inf())] = -1;
    EXPECT_EQ(col, expect);

    EXPECT_EQ(boundary_column(p1, lp, mw_zero(ops, 1)), std::vector<Integer>(lp.size()));
    EXPECT_EQ(boundary_matrix(p1, 1, {}).cols(), 0u);
}

TEST(Boundary, MatchesChartwiseResidues) {
    // the t-chart computes <1/p'(x)> * residue^p at a finite place; the s-chart
    // computes the twisted residue at infinity directly
    for (auto q : {3u, 5u}) {
        const CurveModel c(q);
        const GF& gf = *c.field;
        for (const auto& cs : shipped_cases()) {
            if (cs.q != q) continue;
            const RSProblem p = problem(cs);
            const TargetLayout layout(c, 0, cs.d, 2);
            for (const auto& g : generator_family(p, 2)) {
                std::vector<Integer> expect(layout.size());
                for (const auto& x : c.places_up_to(2)) {
                    if (cs.d.count(x)) continue;
                    if (x.infinite) {
                        layout.encode(x, chart_residue(g.element, x, Chart::s), expect);
                    } else {
                        auto k = residue_field(c.field, x);
                        const Poly dp = k->reduce(poly::derivative(gf, x.poly));
                        layout.encode(x, mw_unit_scale(dp, chart_residue(g.element, x, Chart::t)), expect);
                    }
                }
                EXPECT_EQ(boundary_column(p, layout, g.element), expect) << g.provenance;
            }
        }
    }
}

TEST(Boundary, ResidueParityMatchesValuation) {
    for (const auto& cs : shipped_cases()) {
        if (cs.q > 5) continue;
        const CurveModel c(cs.q);
        const RSProblem p = problem(cs);
        const TargetLayout layout(c, 0, cs.d, 2);
        for (const auto& g : generator_family(p, 2)) {
            const auto col = boundary_column(p, layout, g.element);
            for (const auto& x : c.places_up_to(2)) {
                if (cs.d.count(x)) continue;
                EXPECT_EQ(col[layout.offset(x)], g.element.milnor1.valuation(x)) << g.provenance;
            }
        }
    }
}

TEST(Cohomology, ShippedValues) {
    for (const auto& c : shipped_cases()) {
        const RSResult r = rs_cohomology(problem(c));
        EXPECT_EQ(r.h1, expected_h1(c)) << c.name << " q=" << c.q << ": " << r.h1.to_string();
        ASSERT_TRUE(r.stabilized_at.has_value());
        EXPECT_LE(*r.stabilized_at, 3);
        if (c.d.empty()) {
            EXPECT_EQ(r.h0, AbGroupInvariants::from_cyclic_orders({Integer(c.q - 1)}));
        } else {
            EXPECT_EQ(r.h0, AbGroupInvariants{});
        }
    }
}

TEST(Cohomology, StableUnderLargerBoundAndShuffle) {
    for (const auto& c : shipped_cases()) {
        if (c.q > 5) continue;
        const RSProblem p = problem(c);
        const RSResult r = rs_cohomology(p);
        const int b = *r.stabilized_at;
        for (int extra = 1; extra <= 2; ++extra) EXPECT_EQ(rs_cohomology_at(p, b + extra).h1, r.h1);
        for (std::uint64_t seed : {1u, 2u, 3u}) EXPECT_EQ(rs_cohomology_at(p, b, seed).h1, r.h1);
    }
}

TEST(Cohomology, BoundaryColumnsDie) {
    for (const auto& c : shipped_cases()) {
        if (c.q > 5) continue;
        const RSProblem p = problem(c);
        const RSSnapshot s = rs_cohomology_at(p, 2);
        for (const auto& g : generator_family(p, 2)) {
            const auto col = boundary_column(p, s.layout, g.element);
            EXPECT_TRUE(same_class(s, col, std::vector<Integer>(col.size())));
        }
    }
}

TEST(Cohomology, TorsionGrowsWithD) {
    for (auto q : {3u, 5u}) {
        std::vector<std::size_t> torsion;
        for (const auto& c : shipped_cases())
            if (c.q == q) torsion.push_back(rs_cohomology(problem(c)).h1.invariant_factors.size());
        ASSERT_EQ(torsion.size(), 3u);
        EXPECT_LE(torsion[0], torsion[1]);
        EXPECT_LE(torsion[1], torsion[2]);
    }
}

TEST(Cohomology, OtherWeightsOverP1) {
    for (auto q : {3u, 5u, 7u}) {
        RSProblem p;
        p.q = q;
        p.l = 1;
        const RSResult r1 = rs_cohomology(p);
        EXPECT_EQ(r1.h1, AbGroupInvariants::from_cyclic_orders({Integer(q - 1)})) << r1.h1.to_string();
        EXPECT_EQ(r1.h0, AbGroupInvariants{});
        p.l = -1;
        const RSResult rm = rs_cohomology(p);
        EXPECT_EQ(rm.h1, witt_group(q)) << rm.h1.to_string();
        EXPECT_EQ(rm.h0, AbGroupInvariants::from_cyclic_orders({0, 2}));
    }
}

TEST(Cohomology, NotCertifiedWhenCapTooSmall) {
    RSProblem p;
    p.q = 3;
    p.bound = 1;
    const RSResult r = rs_cohomology(p);
    EXPECT_FALSE(r.stabilized_at.has_value());
    EXPECT_EQ(r.final_bound, 1);
    p.l = 2;
    EXPECT_THROW(rs_cohomology(p), std::invalid_argument);
}

TEST(Theta, AffineLinePointsAgree) {
    for (auto q : {3u, 5u}) {
        const GF& f = *GF::get(q);
        RSProblem p;
        p.q = q;
        p.removed = {Place::inf()};
        const RSResult r = rs_cohomology(p);
        const auto base = theta_class(r, Place::rational(f, 0));
        for (Elem a = 1; a < q; ++a) EXPECT_EQ(theta_class(r, Place::rational(f, a)), base);
        EXPECT_TRUE(same_class(r.snapshot, theta_vector(r.snapshot, Place::rational(f, 0)),
                               theta_vector(r.snapshot, Place::rational(f, 1))));
        EXPECT_THROW(theta_class(r, Place::inf()), math_error);
    }
}

TEST(Theta, HigherDegreePointIsMultiple) {
    // on A^1, <1> at a degree-2 point is the class of the trace form of F_{q^2},
    // which has rank 2: it differs from twice a rational point at most by torsion
    const GF& f = *GF::get(3);
    RSProblem p;
    p.q = 3;
    p.removed = {Place::inf()};
    const RSSnapshot s = rs_cohomology_at(p, 2);
    auto twice = theta_vector(s, Place::rational(f, 0));
    for (auto& v : twice) v *= 2;
    auto diff = theta_vector(s, Place::finite(Poly{1, 0, 1}));
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= twice[i];
    for (auto& v : diff) v *= 2;
    EXPECT_TRUE(same_class(s, diff, std::vector<Integer>(diff.size())));
}
