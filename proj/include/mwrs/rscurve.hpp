#pragma once

// The relative Rost-Schmid complex of (P^1, D) twisted by omega:
//   K^MW_{l+1}(O_{C,D}; omega) -> (+)_{x not in D} K^MW_l(k(x)) (+) (+)_{x in D} K^MW_{l+1}(k(x))
// Restricted to the admissible subgroup (trivial along D) the second block
// vanishes, so H^1 is the cokernel of the residue block. Computed on
// generators supported in degree <= B and stabilized in B.

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "p1geom.hpp"

namespace mwrs {

struct RSProblem {
    std::uint32_t q = 3;
    PlaceSet removed;          // D
    int l = 0;                 // -1, 0 or 1
    std::optional<int> bound;  // nullopt: automatic up to cap
    int cap = 4;
};

struct RSGenerator {
    MWFunc element;
    std::string provenance;
};

struct TargetCoordinate {
    Place place;
    std::string label;
    Integer torsion; // 0 for a Z coordinate, otherwise the order of the coordinate
};

/// Row layout of the residue block: integer coordinates for each target group.
/// l = 0: GW(k(x)) as (rank, disc) with disc of order 2.
/// l = -1: W(k(x)) as Z/4 when -1 is not a square, else (parity, disc).
/// l = 1: K^MW_1(k(x)) = k(x)^* via discrete log.
class TargetLayout {
  public:
    TargetLayout(const CurveModel& c, int l, const PlaceSet& removed, int bound) : field_(c.field), l_(l) {
        for (const auto& x : c.places_up_to(bound)) {
            if (removed.count(x)) continue;
            offset_[x] = coords_.size();
            auto k = residue_field(c.field, x);
            if (l == 0) {
                coords_.push_back({x, "rank", 0});
                coords_.push_back({x, "disc", 2});
            } else if (l == -1) {
                if (k->minus_one_is_square()) {
                    coords_.push_back({x, "witt.parity", 2});
                    coords_.push_back({x, "witt.disc", 2});
                } else {
                    coords_.push_back({x, "witt", 4});
                }
            } else {
                coords_.push_back({x, "milnor", Integer(k->size() - 1)});
            }
        }
    }

    std::size_t size() const noexcept { return coords_.size(); }
    const std::vector<TargetCoordinate>& coordinates() const noexcept { return coords_; }
    bool contains(const Place& x) const { return offset_.count(x) > 0; }
    std::size_t offset(const Place& x) const {
        auto it = offset_.find(x);
        if (it == offset_.end()) throw math_error("place " + x.to_string() + " is not a target");
        return it->second;
    }

    /// Writes the coordinates of an (already twisted) residue at x into col.
    void encode(const Place& x, const MWFinite& r, std::vector<Integer>& col) const {
        const std::size_t o = offset(x);
        if (l_ == 0) {
            GWFinite g(r.milnor0, r.witt); // throws on a rank-parity violation
            col[o] += r.milnor0;
            col[o + 1] += gw_disc_nonsquare(g) ? 1 : 0;
        } else if (l_ == -1) {
            const bool odd = r.witt.odd_rank(), ns = r.witt.signed_disc_nonsquare();
            if (r.witt.field()->minus_one_is_square()) {
                col[o] += odd ? 1 : 0;
                col[o + 1] += ns ? 1 : 0;
            } else {
                col[o] += (odd ? 1 : 0) + (ns ? 2 : 0);
            }
        } else {
            col[o] += Integer(r.ops.k->log(r.milnor1));
        }
    }

  private:
    GFPtr field_;
    int l_;
    std::vector<TargetCoordinate> coords_;
    std::map<Place, std::size_t> offset_;
};

namespace detail {

inline void validate(const RSProblem& p) {
    if (p.l < -1 || p.l > 1) throw std::invalid_argument("l must be -1, 0 or 1");
    for (const auto& x : p.removed)
        if (!x.infinite && !poly::is_irreducible(*GF::get(p.q), x.poly))
            throw std::invalid_argument("removed place " + x.to_string() + " is not monic irreducible");
}

inline int min_bound(const RSProblem& p) {
    int b = 1;
    for (const auto& x : p.removed) b = std::max(b, x.degree());
    return b;
}

inline std::set<Poly, poly::Less> support(const MWFunc& x) {
    std::set<Poly, poly::Less> out;
    for (const auto& kv : x.milnor1.factors()) out.insert(kv.first);
    for (const auto& kv : x.milnor2.values) out.insert(kv.first);
    for (const auto& e : x.witt.representative())
        for (const auto& kv : e.factors()) out.insert(kv.first);
    return out;
}

} // namespace detail

/// Generators of the admissible part of K^MW_{l+1} on S_B-units:
///   l = 0:  sum c_j [u_j] with trivial restriction to D, and eta[u_j][u_k];
///   l = -1: sum of 1, eta[u_j] with trivial restriction, and eta^2[u_j][u_k];
///   l = 1:  [u_j][u_k].
/// Here u_j runs over the D-unit basis. Zero elements are dropped.
inline std::vector<RSGenerator> generator_family(const RSProblem& p, int bound) {
    detail::validate(p);
    if (bound < detail::min_bound(p)) throw math_error("bound smaller than the degree of a removed place");
    const CurveModel c(p.q);
    const FuncOps ops = c.ops();
    const auto units = d_unit_basis(c, p.removed, bound);

    std::vector<RSGenerator> out;
    auto emit = [&](MWFunc e, std::string prov) {
        if (!mw_is_zero(e)) out.push_back({std::move(e), std::move(prov)});
    };

    // candidates whose restriction to D is constrained
    std::vector<MWFunc> cand;
    std::vector<std::string> cand_names;
    std::vector<std::vector<Integer>> images;
    std::vector<Integer> orders;
    if (p.l == 0) {
        for (const auto& u : units) {
            cand.push_back(mw_symbol(ops, u));
            cand_names.push_back("[" + u.to_string() + "]");
        }
        for (const auto& x : p.removed) {
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
    } else if (p.l == -1) {
        cand.push_back(mw_integer(ops, 1));
        cand_names.push_back("1");
        for (const auto& u : units) {
            cand.push_back(mw_eta_mul(mw_symbol(ops, u)));
            cand_names.push_back("eta[" + u.to_string() + "]");
        }
        for (const auto& x : p.removed) {
            auto k = residue_field(c.field, x);
            std::vector<Integer> rank_row{1}, disc_row{0};
            for (const auto& u : units) {
                rank_row.push_back(0);
                disc_row.push_back(k->is_square(residue_field_reduce(u, x)) ? 0 : 1);
            }
            images.push_back(std::move(rank_row));
            orders.push_back(0);
            images.push_back(std::move(disc_row));
            orders.push_back(2);
        }
    }
    for (const auto& coeffs : vanishing_combinations(cand.size(), images, orders)) {
        auto e = mw_zero(ops, p.l + 1);
        std::string prov;
        for (std::size_t j = 0; j < cand.size(); ++j) {
            if (coeffs[j] == 0) continue;
            e = e + mw_times(cand[j], static_cast<long long>(coeffs[j]));
            prov += (prov.empty() ? "" : " + ") + coeffs[j].str() + "*" + cand_names[j];
        }
        emit(std::move(e), std::move(prov));
    }

    // unconstrained: their restrictions to D lie in I^2 or K_2 of a finite field
    for (std::size_t j = 0; j < units.size(); ++j)
        for (std::size_t k = (p.l == 1 ? 0 : j); k < units.size(); ++k) {
            const std::string pair = "[" + units[j].to_string() + "][" + units[k].to_string() + "]";
            auto sym = mw_symbol2(ops, units[j], units[k]);
            if (p.l == 1) emit(sym, pair);
            else if (p.l == 0) emit(mw_eta_mul(sym), "eta" + pair);
            else emit(mw_eta_mul(mw_eta_mul(sym)), "eta^2" + pair);
        }
    return out;
}

/// Whether a degree-1 element lies in the span of the l = 0 family at bound B:
/// it must be admissible and supported on S_B, and its Milnor part must lie in
/// the multiplicative span of the family's Milnor parts (the remaining Witt
/// part is then a combination of the eta[u][v]).
inline bool family_spans(const RSProblem& p, int bound, const MWFunc& x) {
    if (p.l != 0 || x.degree != 1) throw math_error("family_spans expects l = 0 and a degree-1 element");
    if (!relative_admissible(x, p.removed)) return false;
    const CurveModel c(p.q);
    std::vector<Poly> finite;
    for (const auto& y : c.places_up_to(bound))
        if (!y.infinite) finite.push_back(y.poly);
    for (const auto& s : detail::support(x))
        if (std::find(finite.begin(), finite.end(), s) == finite.end()) return false;
    auto coords = [&](const RatFunc& f) {
        std::vector<Integer> v{Integer(c.field->log(f.unit()))};
        for (const auto& y : finite) v.push_back(f.valuation(Place::finite(y)));
        return v;
    };
    Lattice lat(finite.size() + 1);
    std::vector<Integer> rel(finite.size() + 1);
    rel[0] = p.q - 1;
    lat.insert(rel);
    for (const auto& g : generator_family(p, bound)) lat.insert(coords(g.element.milnor1));
    return lat.contains(coords(x.milnor1));
}

/// Residue-block column of one generator: mw_residue at every target place
/// in its support (canonical uniformizer), scaled by the omega twist unit.
inline std::vector<Integer> boundary_column(const RSProblem& p, const TargetLayout& layout, const MWFunc& g) {
    std::vector<Integer> col(layout.size());
    std::vector<Place> places;
    for (const auto& poly : detail::support(g)) places.push_back(Place::finite(poly));
    places.push_back(Place::inf());
    for (const auto& x : places) {
        if (p.removed.count(x)) continue;
        if (!layout.contains(x)) throw math_error("generator supported outside the degree bound at " + x.to_string());
        MWFinite r = mw_residue(g, x, canonical_uniformizer(g.ops.f, x));
        if (omega_twist_unit(g.ops.f, x)) r = mw_unit_scale(omega_twist_element(g.ops.f, x), r);
        layout.encode(x, r, col);
    }
    return col;
}

/// Dense residue block for a generator list (columns in generator order).
inline IntMatrix boundary_matrix(const RSProblem& p, int bound, const std::vector<RSGenerator>& gens) {
    const CurveModel c(p.q);
    const TargetLayout layout(c, p.l, p.removed, bound);
    std::vector<std::vector<Integer>> cols;
    for (const auto& g : gens) cols.push_back(boundary_column(p, layout, g.element));
    return IntMatrix::from_columns(layout.size(), cols);
}

/// H^1 at one bound: target layout and the full relation lattice (residue
/// columns plus torsion relations of the target coordinates).
struct RSSnapshot {
    RSProblem problem;
    int bound = 0;
    TargetLayout layout;
    Lattice relations;
    std::size_t generators_used = 0;
    AbGroupInvariants h1;
};

inline RSSnapshot rs_cohomology_at(const RSProblem& p, int bound, std::optional<std::uint64_t> shuffle_seed = {}) {
    const CurveModel c(p.q);
    auto gens = generator_family(p, bound);
    if (shuffle_seed) {
        std::mt19937_64 rng(*shuffle_seed);
        std::shuffle(gens.begin(), gens.end(), rng);
    }
    RSSnapshot snap{p, bound, TargetLayout(c, p.l, p.removed, bound), Lattice(0), gens.size(), {}};
    snap.relations = Lattice(snap.layout.size());
    for (std::size_t i = 0; i < snap.layout.size(); ++i) {
        const Integer& t = snap.layout.coordinates()[i].torsion;
        if (t == 0) continue;
        std::vector<Integer> rel(snap.layout.size());
        rel[i] = t;
        snap.relations.insert(std::move(rel));
    }
    for (const auto& g : gens) {
        if (!relative_admissible(g.element, p.removed))
            throw math_error("generator " + g.provenance + " is not trivial along D");
        snap.relations.insert(boundary_column(p, snap.layout, g.element));
    }
    snap.h1 = cokernel_invariants({snap.layout.size(), snap.relations.basis_matrix()});
    return snap;
}

struct RSResult {
    AbGroupInvariants h0;
    AbGroupInvariants h1;
    std::size_t generators_used = 0;
    std::optional<int> stabilized_at; // nullopt: not certified
    int final_bound = 0;
    RSSnapshot snapshot;
};

/// Unramified classes of K^MW_{l+1}(F_q(t)) are the constants K^MW_{l+1}(F_q);
/// a nonzero constant restricts to itself, so H^0 vanishes once D is nonempty.
inline AbGroupInvariants rs_h0(const RSProblem& p) {
    if (!p.removed.empty()) return {};
    switch (p.l) {
    case 0: return AbGroupInvariants::from_cyclic_orders({Integer(p.q - 1)}); // F_q^*
    case -1: return AbGroupInvariants::from_cyclic_orders({0, 2});         // GW(F_q)
    default: return {};                                                      // K^MW_2(F_q) = 0
    }
}

/// Increase B until two consecutive bounds give isomorphic H^1, or until the
/// requested bound (or cap) is reached, in which case the result is flagged
/// as not certified.
inline RSResult rs_cohomology(const RSProblem& p) {
    detail::validate(p);
    const int lo = detail::min_bound(p);
    const int hi = p.bound ? *p.bound : std::max(p.cap, lo);
    if (hi < lo) throw math_error("bound smaller than the degree of a removed place");
    std::optional<RSSnapshot> prev;
    for (int b = lo; b <= hi; ++b) {
        RSSnapshot snap = rs_cohomology_at(p, b);
        if (prev && prev->h1 == snap.h1) {
            RSResult r{rs_h0(p), snap.h1, snap.generators_used, prev->bound, b, std::move(snap)};
            return r;
        }
        prev = std::move(snap);
    }
    RSResult r{rs_h0(p), prev->h1, prev->generators_used, std::nullopt, prev->bound, std::move(*prev)};
    return r;
}

/// Unit form <1> in the GW(k(y)) summand, as a target vector (l = 0).
inline std::vector<Integer> theta_vector(const RSSnapshot& s, const Place& y) {
    if (s.problem.l != 0) throw math_error("theta classes are defined for l = 0");
    if (s.problem.removed.count(y)) throw math_error("point lies in D");
    if (y.degree() > s.bound) throw math_error("point outside the computed bound");
    std::vector<Integer> v(s.layout.size());
    v[s.layout.offset(y)] = 1;
    return v;
}

/// Coordinates of Theta(<1>_y) in the canonical decomposition of H^1.
inline std::vector<Integer> theta_class(const RSSnapshot& s, const Place& y) {
    CokernelCoordinates coords(s.relations.basis_matrix());
    return coords(theta_vector(s, y));
}
inline std::vector<Integer> theta_class(const RSResult& r, const Place& y) { return theta_class(r.snapshot, y); }

/// Whether two target vectors define the same class in H^1.
inline bool same_class(const RSSnapshot& s, const std::vector<Integer>& a, const std::vector<Integer>& b) {
    std::vector<Integer> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    return s.relations.contains(std::move(d));
}

} // namespace mwrs
