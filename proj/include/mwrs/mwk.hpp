#pragma once

// Milnor-Witt K-theory in degrees -2..2 as the fiber product
//   K^MW_n = K^M_n x_{K^M_n/2 = I^n/I^{n+1}} I^n
// over finite fields and over F_q(t). Elements are compatible pairs
// (Milnor part, Witt part); [a] has Witt part <a> - <1>.

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "quadform.hpp"

namespace mwrs {

constexpr int kMinDegree = -2;
constexpr int kMaxDegree = 2;

/// Field data for a finite field k(x).
struct FiniteOps {
    ResidueFieldPtr k;

    using Elem = Poly;
    using Witt = WittFinite;
    /// K_2^M of a finite field vanishes.
    struct Milnor2 {
        bool operator==(const Milnor2&) const = default;
    };

    Witt witt_zero() const { return WittFinite::zero(k); }
    Witt witt_unit(const Elem& a) const { return WittFinite::unit(k, a); }
    Elem one() const { return k->one(); }
    Elem mul(const Elem& a, const Elem& b) const { return k->mul(a, b); }
    Elem inv(const Elem& a) const { return k->inv(a); }
    Elem pow(const Elem& a, long long n) const { return k->pow(a, n); }
    Elem negate(const Elem& a) const { return k->neg(a); }
    bool is_zero_elem(const Elem& a) const { return a.empty(); }
    bool same_field(const FiniteOps& o) const { return k->modulus() == o.k->modulus() && k->gf().q() == o.k->gf().q(); }

    Milnor2 m2_zero() const { return {}; }
    Milnor2 m2_symbol(const Elem&, const Elem&) const { return {}; }
    Milnor2 m2_add(const Milnor2&, const Milnor2&) const { return {}; }
    Milnor2 m2_times(const Milnor2&, long long) const { return {}; }
    bool m2_compatible(const Milnor2&, const Witt& w) const { return w.in_i2(); }
    std::string elem_string(const Elem& a) const { return std::to_string(k->index(a)); }
};

/// Degree-2 Milnor classes over F_q(t), stored as their tame symbols at the
/// finite places (an injective invariant because K_2 of a finite field is 0).
struct TameCoords {
    std::map<Poly, Poly, poly::Less> values; // place -> nontrivial value in k(p)
    bool operator==(const TameCoords&) const = default;
};

/// Field data for F_q(t).
struct FuncOps {
    GFPtr f;

    using Elem = RatFunc;
    using Witt = WittFunc;
    using Milnor2 = TameCoords;

    Witt witt_zero() const { return WittFunc::zero(f); }
    Witt witt_unit(const Elem& a) const { return WittFunc::unit(a); }
    Elem one() const { return RatFunc::constant(f, 1); }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem inv(const Elem& a) const { return a.inverse(); }
    Elem pow(const Elem& a, long long n) const { return a.pow(n); }
    Elem negate(const Elem& a) const { return -a; }
    bool is_zero_elem(const Elem&) const { return false; }
    bool same_field(const FuncOps& o) const { return f->q() == o.f->q(); }

    /// Tame symbol of {a, b} at a finite place, normalized so {pi, u} -> u:
    /// (-1)^{v(a)v(b)} b^{v(a)} / a^{v(b)} reduced at p.
    static Poly tame_symbol(const RatFunc& a, const RatFunc& b, const Place& x) {
        const int va = a.valuation(x), vb = b.valuation(x);
        RatFunc u = b.pow(va) / a.pow(vb);
        if ((va * vb) % 2 != 0) u = -u;
        return residue_field_reduce(u, x);
    }

    Milnor2 m2_zero() const { return {}; }
    Milnor2 m2_symbol(const Elem& a, const Elem& b) const {
        Milnor2 out;
        std::set<Poly, poly::Less> places;
        for (const auto& kv : a.factors()) places.insert(kv.first);
        for (const auto& kv : b.factors()) places.insert(kv.first);
        for (const auto& p : places) {
            const Place x = Place::finite(p);
            Poly t = tame_symbol(a, b, x);
            if (t != Poly{1}) out.values.emplace(p, std::move(t));
        }
        return out;
    }
    Milnor2 m2_add(const Milnor2& a, const Milnor2& b) const {
        Milnor2 out = a;
        for (const auto& [p, v] : b.values) {
            auto it = out.values.find(p);
            if (it == out.values.end()) {
                out.values.emplace(p, v);
                continue;
            }
            auto k = residue_field(f, Place::finite(p));
            it->second = k->mul(it->second, v);
            if (it->second == Poly{1}) out.values.erase(it);
        }
        return out;
    }
    Milnor2 m2_times(const Milnor2& a, long long n) const {
        Milnor2 out;
        for (const auto& [p, v] : a.values) {
            auto k = residue_field(f, Place::finite(p));
            Poly r = k->pow(v, n);
            if (r != Poly{1}) out.values.emplace(p, std::move(r));
        }
        return out;
    }
    /// w in I^2 with second residues <T_p> - <1> at every finite place.
    bool m2_compatible(const Milnor2& m, const Witt& w) const {
        if (!w.in_i2()) return false;
        std::set<Poly, poly::Less> places;
        for (const auto& e : w.representative())
            for (const auto& kv : e.factors()) places.insert(kv.first);
        for (const auto& kv : m.values) places.insert(kv.first);
        const FuncForm form = w.form();
        for (const auto& p : places) {
            const Place x = Place::finite(p);
            auto k = residue_field(f, x);
            WittFinite res = second_residue(form, x, canonical_uniformizer(f, x));
            auto it = m.values.find(p);
            WittFinite expect = it == m.values.end() ? WittFinite::zero(k)
                                                     : WittFinite::unit(k, it->second) - WittFinite::unit(k, k->one());
            if (!(res == expect)) return false;
        }
        return true;
    }
    std::string elem_string(const Elem& a) const { return a.to_string(); }
};

/// Element of K^MW_n(F), kMinDegree <= n <= kMaxDegree.
template <class Ops>
struct MWElement {
    using Elem = typename Ops::Elem;
    using Witt = typename Ops::Witt;
    using Milnor2 = typename Ops::Milnor2;

    Ops ops;
    int degree = 0;
    long long milnor0 = 0; // degree 0
    Elem milnor1{};        // degree 1 (multiplicative)
    Milnor2 milnor2{};     // degree 2
    Witt witt{};           // in I^n (W for n <= 0)

    bool operator==(const MWElement& o) const {
        if (degree != o.degree || !(witt == o.witt)) return false;
        switch (degree) {
        case 0: return milnor0 == o.milnor0;
        case 1: return milnor1 == o.milnor1;
        case 2: return milnor2 == o.milnor2;
        default: return true;
        }
    }
};

using MWFinite = MWElement<FiniteOps>;
using MWFunc = MWElement<FuncOps>;

template <class Ops>
MWElement<Ops> mw_zero(const Ops& ops, int degree) {
    if (degree < kMinDegree || degree > kMaxDegree) throw math_error("degree out of range");
    MWElement<Ops> x{ops, degree};
    x.milnor1 = ops.one();
    x.milnor2 = ops.m2_zero();
    x.witt = ops.witt_zero();
    return x;
}

template <class Ops>
bool mw_is_zero(const MWElement<Ops>& x) {
    return x == mw_zero(x.ops, x.degree);
}

/// Fiber-product condition for a pair (Milnor part, Witt part).
template <class Ops>
bool mw_compatible(const MWElement<Ops>& x) {
    const Ops& ops = x.ops;
    switch (x.degree) {
    case 0: return (x.milnor0 % 2 != 0) == x.witt.odd_rank();
    case 1: {
        auto diff = x.witt - (ops.witt_unit(x.milnor1) - ops.witt_unit(ops.one()));
        return diff.in_i2();
    }
    case 2: return ops.m2_compatible(x.milnor2, x.witt);
    default: return true;
    }
}

/// [a] = (a, <a> - <1>).
template <class Ops>
MWElement<Ops> mw_symbol(const Ops& ops, const typename Ops::Elem& a) {
    if (ops.is_zero_elem(a)) throw math_error("mw_symbol: zero input");
    auto x = mw_zero(ops, 1);
    x.milnor1 = a;
    x.witt = ops.witt_unit(a) - ops.witt_unit(ops.one());
    return x;
}

/// [a][b] = ({a, b}, (<a> - <1>)(<b> - <1>)).
template <class Ops>
MWElement<Ops> mw_symbol2(const Ops& ops, const typename Ops::Elem& a, const typename Ops::Elem& b) {
    if (ops.is_zero_elem(a) || ops.is_zero_elem(b)) throw math_error("mw_symbol2: zero input");
    auto x = mw_zero(ops, 2);
    x.milnor2 = ops.m2_symbol(a, b);
    auto one = ops.witt_unit(ops.one());
    x.witt = (ops.witt_unit(a) - one) * (ops.witt_unit(b) - one);
    return x;
}

/// <u> in degree 0.
template <class Ops>
MWElement<Ops> mw_unit(const Ops& ops, const typename Ops::Elem& u) {
    if (ops.is_zero_elem(u)) throw math_error("mw_unit: zero input");
    auto x = mw_zero(ops, 0);
    x.milnor0 = 1;
    x.witt = ops.witt_unit(u);
    return x;
}

/// n * <1> in degree 0.
template <class Ops>
MWElement<Ops> mw_integer(const Ops& ops, long long n) {
    auto x = mw_zero(ops, 0);
    x.milnor0 = n;
    x.witt = ops.witt_unit(ops.one()).times(n);
    return x;
}

template <class Ops>
MWElement<Ops> operator+(const MWElement<Ops>& a, const MWElement<Ops>& b) {
    if (a.degree != b.degree) throw math_error("adding Milnor-Witt elements of different degree");
    if (!a.ops.same_field(b.ops)) throw math_error("field mismatch");
    MWElement<Ops> x = a;
    x.milnor0 = a.milnor0 + b.milnor0;
    x.milnor1 = a.ops.mul(a.milnor1, b.milnor1);
    x.milnor2 = a.ops.m2_add(a.milnor2, b.milnor2);
    x.witt = a.witt + b.witt;
    return x;
}

template <class Ops>
MWElement<Ops> operator-(const MWElement<Ops>& a) {
    MWElement<Ops> x = a;
    x.milnor0 = -a.milnor0;
    x.milnor1 = a.ops.inv(a.milnor1);
    x.milnor2 = a.ops.m2_times(a.milnor2, -1);
    x.witt = -a.witt;
    return x;
}

template <class Ops>
MWElement<Ops> operator-(const MWElement<Ops>& a, const MWElement<Ops>& b) {
    return a + (-b);
}

template <class Ops>
MWElement<Ops> mw_times(const MWElement<Ops>& a, long long n) {
    MWElement<Ops> x = a;
    x.milnor0 = a.milnor0 * n;
    x.milnor1 = a.ops.pow(a.milnor1, n);
    x.milnor2 = a.ops.m2_times(a.milnor2, n);
    x.witt = a.witt.times(n);
    return x;
}

/// h = 2 + eta[-1] = (2, <1,-1>).
template <class Ops>
MWElement<Ops> mw_hyperbolic(const Ops& ops) {
    auto x = mw_zero(ops, 0);
    x.milnor0 = 2;
    x.witt = ops.witt_unit(ops.one()) + ops.witt_unit(ops.negate(ops.one()));
    return x;
}

/// Multiplication by eta: drops the Milnor part, keeps the Witt part
/// along I^n in I^{n-1}.
template <class Ops>
MWElement<Ops> mw_eta_mul(const MWElement<Ops>& x) {
    if (x.degree - 1 < kMinDegree) throw math_error("eta multiplication below degree -2");
    auto y = mw_zero(x.ops, x.degree - 1);
    y.witt = x.witt;
    return y;
}

/// <u> * x: trivial on the Milnor part, multiplication by <u> on the Witt part.
template <class Ops>
MWElement<Ops> mw_unit_scale(const typename Ops::Elem& u, const MWElement<Ops>& x) {
    if (x.ops.is_zero_elem(u)) throw math_error("mw_unit_scale: zero unit");
    MWElement<Ops> y = x;
    y.witt = x.ops.witt_unit(u) * x.witt;
    return y;
}

/// Sum of a homogeneous list of terms, in canonical form. Every component is
/// kept in normal form by construction; the fiber-product condition is
/// re-checked on the output.
template <class Ops>
MWElement<Ops> mw_normalize(const Ops& ops, int degree, const std::vector<MWElement<Ops>>& terms) {
    auto sum = mw_zero(ops, degree);
    for (const auto& t : terms) sum = sum + t;
    if (!mw_compatible(sum)) throw math_error("mw_normalize: incompatible pair (internal construction bug)");
    return sum;
}

// ---------------------------------------------------------------------------
// residues and specialization over F_q(t)

namespace detail {

// N_{k(x)/F_q}(a) = a^{(Q-1)/(q-1)}
inline Elem norm_to_base(const ResidueField& k, const Poly& a) {
    const std::uint64_t q = k.gf().q();
    Poly n = k.pow(a, static_cast<long long>((k.size() - 1) / (q - 1)));
    return n.empty() ? 0 : n[0];
}

} // namespace detail

/// Tame symbol at infinity of a degree-2 class, from Weil reciprocity over
/// the finite places.
inline Elem tame_at_infinity(const FuncOps& ops, const TameCoords& m) {
    const GF& f = *ops.f;
    Elem prod = 1;
    for (const auto& [p, v] : m.values)
        prod = f.mul(prod, detail::norm_to_base(*residue_field(ops.f, Place::finite(p)), v));
    return f.inv(prod);
}

/// Residue map K^MW_n(F_q(t)) -> K^MW_{n-1}(k(x)) for the uniformizer pi.
inline MWFinite mw_residue(const MWFunc& x, const Place& p, const RatFunc& pi) {
    if (x.degree < 0 || x.degree > 2) throw math_error("mw_residue: degree out of range");
    detail::check_uniformizer(pi, p);
    FiniteOps out_ops{residue_field(x.ops.f, p)};
    auto y = mw_zero(out_ops, x.degree - 1);
    y.witt = second_residue(x.witt, p, pi);
    if (x.degree == 1) y.milnor0 = x.milnor1.valuation(p);
    if (x.degree == 2) {
        if (p.infinite) y.milnor1 = poly::constant(tame_at_infinity(x.ops, x.milnor2));
        else {
            auto it = x.milnor2.values.find(p.poly);
            y.milnor1 = it == x.milnor2.values.end() ? out_ops.one() : it->second;
        }
    }
    if (!mw_compatible(y)) throw math_error("mw_residue: residue violates the fiber-product law");
    return y;
}

/// Restriction of an element regular at x to K^MW_n(k(x)).
inline MWFinite mw_specialize(const MWFunc& x, const Place& p) {
    FiniteOps out_ops{residue_field(x.ops.f, p)};
    auto y = mw_zero(out_ops, x.degree);
    try {
        y.witt = witt_specialize(x.witt, p);
    } catch (const math_error&) {
        throw math_error("ramified at p");
    }
    if (x.degree == 0) y.milnor0 = x.milnor0;
    if (x.degree == 1) {
        if (x.milnor1.valuation(p) != 0) throw math_error("ramified at p");
        y.milnor1 = residue_field_reduce(x.milnor1, p);
    }
    if (x.degree == 2) {
        bool ramified = p.infinite ? tame_at_infinity(x.ops, x.milnor2) != 1 : x.milnor2.values.count(p.poly) > 0;
        if (ramified) throw math_error("ramified at p");
    }
    return y;
}

} // namespace mwrs
