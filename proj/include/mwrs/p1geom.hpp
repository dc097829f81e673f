#pragma once

// The projective line over F_q: charts t and s = 1/t, canonical
// uniformizers, the canonical bundle trivialized by dt and ds, and the
// admissibility condition for a pair (P^1, D).

#include <set>
#include <vector>

#include "mwk.hpp"

namespace mwrs {

using PlaceSet = std::set<Place>;

/// P^1 over F_q with its two standard charts.
struct CurveModel {
    GFPtr field;

    explicit CurveModel(std::uint32_t q) : field(GF::get(q)) {}

    FuncOps ops() const { return FuncOps{field}; }
    RatFunc t() const { return RatFunc::t(field); }
    RatFunc s() const { return RatFunc::t(field).inverse(); }

    /// Finite places of degree <= bound in canonical order, then infinity.
    std::vector<Place> places_up_to(int bound) const {
        std::vector<Place> out;
        for (int d = 1; d <= bound; ++d)
            for (auto& p : poly::irreducibles_of_degree(*field, d)) out.push_back(Place::finite(std::move(p)));
        out.push_back(Place::inf());
        return out;
    }
};

/// Square class (true = nonsquare in k(x)) by which a residue computed in the
/// local chart must be scaled to land in the omega-twisted target. Finite
/// places use dt; at infinity dt = -s^{-2} ds contributes <-1>.
inline bool omega_twist_unit(const GFPtr& f, const Place& x) {
    if (!x.infinite) return false;
    return !f->is_square(f->neg(1));
}

/// The twist unit as an element of k(x).
inline Poly omega_twist_element(const GFPtr& f, const Place& x) {
    return x.infinite ? poly::constant(f->neg(1)) : Poly{1};
}

/// Regular at every point of D with trivial restriction there.
inline bool relative_admissible(const MWFunc& x, const PlaceSet& d) {
    for (const auto& p : d) {
        try {
            if (!mw_is_zero(mw_specialize(x, p))) return false;
        } catch (const math_error&) {
            return false;
        }
    }
    return true;
}

enum class Chart { t, s };

/// Residue at x of the omega-valued element x_elem (x) dt, computed entirely in
/// one chart: write dt = g * d(pi) with pi the chart's local equation of x,
/// then the value is <g(x)> * residue^pi. The two charts agree on their
/// overlap; this is what makes the twist bookkeeping coordinate free.
inline MWFinite chart_residue(const MWFunc& elem, const Place& x, Chart chart) {
    const GFPtr& f = elem.ops.f;
    const GF& gf = *f;
    const RatFunc t = RatFunc::t(f);
    if (chart == Chart::t) {
        if (x.infinite) throw math_error("infinity is not in the t-chart");
        // dt = (1/p'(t)) dp
        RatFunc pi = canonical_uniformizer(f, x);
        Poly dp = poly::derivative(gf, x.poly);
        RatFunc g = RatFunc::from_poly(f, dp).inverse();
        return mw_unit_scale(residue_field_reduce(g, x), mw_residue(elem, x, pi));
    }
    if (!x.infinite && x.poly == poly::x()) throw math_error("the place t = 0 is not in the s-chart");
    // local equation p*(s) = s^d p(1/s) / p(0), monic in s; at infinity p*(s) = s
    Poly pstar{0, 1};
    if (!x.infinite) pstar = poly::monic(gf, poly::reverse(x.poly));
    const int d = poly::deg(pstar);
    // a polynomial Q(s) at s = 1/t is t^{-deg Q} rev(Q)(t)
    RatFunc pi = RatFunc::from_poly(f, poly::reverse(pstar)) * t.pow(-d);
    // dt = -s^{-2} ds and ds = (1/p*'(s)) dp*; s^{-2} is a square
    Poly dpstar = poly::derivative(gf, pstar);
    const int dd = poly::deg(dpstar);
    RatFunc dpstar_t = RatFunc::from_poly(f, poly::reverse(dpstar)) * t.pow(-dd);
    RatFunc g = -(dpstar_t.inverse());
    return mw_unit_scale(residue_field_reduce(g, x), mw_residue(elem, x, pi));
}

/// Multiplicative basis of the S-units regular and invertible along D, where
/// S is the set of places of degree <= bound together with infinity: the
/// primitive constant, then products of finite places outside D (of total
/// degree 0 when infinity lies in D).
inline std::vector<RatFunc> d_unit_basis(const CurveModel& c, const PlaceSet& d, int bound) {
    const GFPtr& f = c.field;
    std::vector<RatFunc> out{RatFunc::constant(f, f->primitive())};
    std::vector<Poly> free_places;
    for (const auto& x : c.places_up_to(bound))
        if (!x.infinite && !d.count(x)) free_places.push_back(x.poly);
    if (!d.count(Place::inf())) {
        for (const auto& p : free_places) out.emplace_back(f, 1, RatFunc::Factors{{p, 1}});
        return out;
    }
    if (free_places.empty()) return out;
    IntMatrix degrees(1, free_places.size());
    for (std::size_t i = 0; i < free_places.size(); ++i) degrees(0, i) = poly::deg(free_places[i]);
    const IntMatrix ker = integer_kernel(degrees);
    for (std::size_t j = 0; j < ker.cols(); ++j) {
        RatFunc::Factors fac;
        for (std::size_t i = 0; i < free_places.size(); ++i)
            if (ker(i, j) != 0) fac[free_places[i]] = static_cast<int>(ker(i, j));
        out.emplace_back(f, 1, std::move(fac));
    }
    return out;
}

/// Discrete log of the restriction of a D-unit to x, with the order of k(x)^*.
inline std::pair<Integer, Integer> restriction_log(const RatFunc& u, const Place& x) {
    auto k = residue_field(u.field(), x);
    return {Integer(k->log(residue_field_reduce(u, x))), Integer(k->size() - 1)};
}

/// Integer combinations c of `count` candidates whose images under a map to
/// a finite product of cyclic groups vanish: `images[i][j]` is the image of
/// candidate j in the i-th cyclic factor of order `orders[i]` (0 = Z).
/// Returns a basis of the coefficient lattice.
inline std::vector<std::vector<Integer>> vanishing_combinations(std::size_t count,
                                                                const std::vector<std::vector<Integer>>& images,
                                                                const std::vector<Integer>& orders) {
    std::vector<std::vector<Integer>> out;
    if (images.empty()) {
        for (std::size_t j = 0; j < count; ++j) {
            std::vector<Integer> e(count);
            e[j] = 1;
            out.push_back(std::move(e));
        }
        return out;
    }
    const std::size_t rows = images.size();
    IntMatrix m(rows, count + rows);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < count; ++j) m(i, j) = images[i][j];
        m(i, count + i) = orders[i];
    }
    const IntMatrix ker = integer_kernel(m);
    Lattice lat(count);
    for (std::size_t j = 0; j < ker.cols(); ++j) {
        std::vector<Integer> v(count);
        for (std::size_t i = 0; i < count; ++i) v[i] = ker(i, j);
        lat.insert(std::move(v));
    }
    return lat.basis();
}

/// Basis of the D-trivial S-units: f regular along D with f = 1 in k(x) for x in D.
inline std::vector<RatFunc> d_trivial_basis(const CurveModel& c, const PlaceSet& d, int bound) {
    const auto units = d_unit_basis(c, d, bound);
    std::vector<std::vector<Integer>> images;
    std::vector<Integer> orders;
    for (const auto& x : d) {
        std::vector<Integer> row;
        Integer order;
        for (const auto& u : units) {
            auto [lg, ord] = restriction_log(u, x);
            row.push_back(lg);
            order = ord;
        }
        images.push_back(std::move(row));
        orders.push_back(order);
    }
    std::vector<RatFunc> out;
    for (const auto& coeffs : vanishing_combinations(units.size(), images, orders)) {
        RatFunc g = RatFunc::constant(c.field, 1);
        for (std::size_t j = 0; j < units.size(); ++j)
            if (coeffs[j] != 0) g = g * units[j].pow(static_cast<long long>(coeffs[j]));
        out.push_back(std::move(g));
    }
    return out;
}

} // namespace mwrs
