#pragma once

// The relative Picard group Pic(P^1, D) of divisors supported off D modulo
// divisors of functions that are 1 along D, and the rank map from H^1 of the
// Milnor-Witt complex (l = 0) to it.

#include <optional>
#include <string>
#include <vector>

#include "rscurve.hpp"

namespace mwrs {

/// Pic(C, D) computed on divisors of degree <= B: rows are the places outside
/// D, relations the divisors of a basis of the D-trivial S_B-units.
struct PicSnapshot {
    std::uint32_t q = 3;
    PlaceSet removed;
    int bound = 0;
    std::vector<Place> places;
    Lattice relations;
    AbGroupInvariants invariants;

    std::size_t row(const Place& x) const {
        for (std::size_t i = 0; i < places.size(); ++i)
            if (places[i] == x) return i;
        throw math_error("place " + x.to_string() + " is not a Picard coordinate");
    }
};

struct RelativePicardResult {
    AbGroupInvariants invariants;
    std::optional<int> stabilized_at;
    /// For D empty: the degree of each coordinate place (deg : Pic -> Z is an isomorphism).
    std::vector<std::pair<Place, int>> degree_map;
    PicSnapshot snapshot;
};

inline PicSnapshot relative_picard_at(std::uint32_t q, const PlaceSet& removed, int bound) {
    detail::validate({q, removed, 0});
    if (bound < detail::min_bound({q, removed, 0})) throw math_error("bound smaller than the degree of a removed place");
    const CurveModel c(q);
    PicSnapshot s{q, removed, bound, {}, Lattice(0), {}};
    for (const auto& x : c.places_up_to(bound))
        if (!removed.count(x)) s.places.push_back(x);
    s.relations = Lattice(s.places.size());
    for (const auto& g : d_trivial_basis(c, removed, bound)) {
        std::vector<Integer> col(s.places.size());
        for (const auto& [x, n] : divisor_of(g)) {
            if (removed.count(x)) throw math_error("D-trivial unit with a zero or pole on D");
            col[s.row(x)] += n;
        }
        s.relations.insert(std::move(col));
    }
    s.invariants = cokernel_invariants({s.places.size(), s.relations.basis_matrix()});
    return s;
}

/// Same stabilization protocol as rs_cohomology: bound == nullopt searches up to cap.
inline RelativePicardResult relative_picard(std::uint32_t q, const PlaceSet& removed, std::optional<int> bound,
                                            int cap = 4) {
    const int lo = detail::min_bound({q, removed, 0});
    const int hi = bound ? *bound : std::max(cap, lo);
    if (hi < lo) throw math_error("bound smaller than the degree of a removed place");
    std::optional<PicSnapshot> prev;
    std::optional<int> stable;
    for (int b = lo; b <= hi; ++b) {
        PicSnapshot snap = relative_picard_at(q, removed, b);
        if (prev && prev->invariants == snap.invariants) {
            stable = prev->bound;
            prev = std::move(snap);
            break;
        }
        prev = std::move(snap);
    }
    RelativePicardResult r{prev->invariants, stable, {}, std::move(*prev)};
    if (removed.empty())
        for (const auto& x : r.snapshot.places) r.degree_map.emplace_back(x, x.degree());
    return r;
}

/// rank : GW(k(x)) -> Z at every target place, as a matrix from the l = 0
/// target coordinates to the Picard coordinates.
inline IntMatrix rank_map(const RSSnapshot& rs, const PicSnapshot& pic) {
    if (rs.problem.l != 0) throw math_error("rank comparison needs l = 0");
    if (rs.bound != pic.bound || rs.problem.removed != pic.removed || rs.problem.q != pic.q)
        throw math_error("rank comparison: bound or D mismatch");
    const auto& coords = rs.layout.coordinates();
    IntMatrix phi(pic.places.size(), coords.size());
    for (std::size_t j = 0; j < coords.size(); ++j)
        if (coords[j].label == "rank") phi(pic.row(coords[j].place), j) = 1;
    return phi;
}

struct ComparisonResult {
    bool well_defined = false;
    bool surjective = false;
    AbGroupInvariants kernel;
};

/// The map H^1 -> Pic(C, D) induced by the rank. Well-definedness: every
/// H^1 relation maps into the Picard relations. The kernel is computed as
/// phi^{-1}(Pic relations) modulo the H^1 relations.
inline ComparisonResult rank_comparison(const RSSnapshot& rs, const PicSnapshot& pic) {
    const IntMatrix phi = rank_map(rs, pic);
    const std::size_t n = rs.layout.size(), m = pic.places.size();
    ComparisonResult out;

    out.well_defined = true;
    for (const auto& rel : rs.relations.basis()) {
        std::vector<Integer> img(m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) img[i] += phi(i, j) * rel[j];
        if (!pic.relations.contains(std::move(img))) out.well_defined = false;
    }

    const IntMatrix picrel = pic.relations.basis_matrix();
    {
        std::vector<std::vector<Integer>> cols;
        for (std::size_t j = 0; j < n; ++j) cols.push_back(phi.column(j));
        for (std::size_t j = 0; j < picrel.cols(); ++j) cols.push_back(picrel.column(j));
        out.surjective = cokernel_invariants({m, IntMatrix::from_columns(m, cols)}) == AbGroupInvariants{};
    }

    // ker [phi | -picrel], projected to the first n coordinates
    IntMatrix joint(m, n + picrel.cols());
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) joint(i, j) = phi(i, j);
        for (std::size_t j = 0; j < picrel.cols(); ++j) joint(i, n + j) = -picrel(i, j);
    }
    const IntMatrix ker = integer_kernel(joint);
    Lattice pre(n);
    for (std::size_t j = 0; j < ker.cols(); ++j) {
        std::vector<Integer> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = ker(i, j);
        pre.insert(std::move(v));
    }
    if (!out.well_defined) throw math_error("rank comparison is not well defined (internal bug)");
    out.kernel = quotient_invariants(pre.basis_matrix(), rs.relations.basis_matrix());
    return out;
}

/// Image of an H^1 target vector in the Picard coordinates.
inline std::vector<Integer> apply_rank(const RSSnapshot& rs, const PicSnapshot& pic, const std::vector<Integer>& v) {
    const IntMatrix phi = rank_map(rs, pic);
    std::vector<Integer> img(pic.places.size());
    for (std::size_t i = 0; i < img.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) img[i] += phi(i, j) * v[j];
    return img;
}

/// Degree of a Picard coordinate vector.
inline Integer divisor_class_degree(const PicSnapshot& pic, const std::vector<Integer>& v) {
    Integer d = 0;
    for (std::size_t i = 0; i < v.size(); ++i) d += v[i] * pic.places[i].degree();
    return d;
}

} // namespace mwrs
