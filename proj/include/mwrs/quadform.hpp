#pragma once

// Witt and Grothendieck-Witt classes of diagonal forms over finite fields
// F_{q^d} and over F_q(t): normal forms, second residues, specialization.

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "function_field.hpp"

namespace mwrs {

// ---------------------------------------------------------------------------
// finite fields

/// Diagonal form <a_1, ..., a_n> over a finite residue field.
struct FiniteForm {
    ResidueFieldPtr field;
    std::vector<Poly> entries;
};

/// Class in W(k), k finite. W(k) has four elements, determined by rank parity
/// and signed discriminant (-1)^{n(n-1)/2} prod a_i.
class WittFinite {
  public:
    WittFinite() = default;
    explicit WittFinite(ResidueFieldPtr k, bool odd = false, bool sd_nonsquare = false)
        : k_(std::move(k)), odd_(odd), sd_nonsquare_(sd_nonsquare) {}

    static WittFinite zero(ResidueFieldPtr k) { return WittFinite(std::move(k)); }
    static WittFinite unit(ResidueFieldPtr k, const Poly& a) {
        bool ns = !k->is_square(a);
        return WittFinite(std::move(k), true, ns);
    }

    /// witt_class_normalize over a finite field.
    static WittFinite from_form(const FiniteForm& f) {
        WittFinite w = zero(f.field);
        for (const auto& a : f.entries) {
            if (a.empty()) throw math_error("witt_class_normalize: zero entry");
            w = w + unit(f.field, a);
        }
        return w;
    }

    const ResidueFieldPtr& field() const noexcept { return k_; }
    bool odd_rank() const noexcept { return odd_; }
    bool signed_disc_nonsquare() const noexcept { return sd_nonsquare_; }
    bool is_zero() const noexcept { return !odd_ && !sd_nonsquare_; }
    /// Membership in I^2 (= 0 for finite fields).
    bool in_i2() const noexcept { return is_zero(); }

    WittFinite operator+(const WittFinite& o) const {
        check(o);
        bool cross = odd_ && o.odd_ && !k_->minus_one_is_square();
        return WittFinite(k_, odd_ != o.odd_, sd_nonsquare_ != o.sd_nonsquare_ != cross);
    }
    WittFinite operator-() const {
        bool flip = odd_ && !k_->minus_one_is_square();
        return WittFinite(k_, odd_, sd_nonsquare_ != flip);
    }
    WittFinite operator-(const WittFinite& o) const { return *this + (-o); }
    WittFinite operator*(const WittFinite& o) const {
        check(o);
        WittFinite w = zero(k_);
        for (const auto& a : representative())
            for (const auto& b : o.representative()) w = w + unit(k_, k_->mul(a, b));
        return w;
    }
    WittFinite times(long long n) const {
        WittFinite w = zero(k_), base = n >= 0 ? *this : -*this;
        for (long long i = 0; i < (n >= 0 ? n : -n) % 4; ++i) w = w + base;
        return w;
    }
    bool operator==(const WittFinite& o) const {
        return k_->modulus() == o.k_->modulus() && odd_ == o.odd_ && sd_nonsquare_ == o.sd_nonsquare_;
    }

    /// Canonical anisotropic representative: [], <1>, <nu>, or <1, -nu>.
    std::vector<Poly> representative() const {
        const Poly& nu = k_->nonsquare();
        if (odd_) return {sd_nonsquare_ ? nu : k_->one()};
        if (sd_nonsquare_) return {k_->one(), k_->neg(nu)};
        return {};
    }

    std::string to_string() const {
        auto rep = representative();
        if (rep.empty()) return "0";
        std::string s = "<";
        for (std::size_t i = 0; i < rep.size(); ++i) s += (i ? "," : "") + std::to_string(k_->index(rep[i]));
        return s + ">";
    }

  private:
    void check(const WittFinite& o) const {
        if (k_->modulus() != o.k_->modulus() || k_->gf().q() != o.k_->gf().q())
            throw math_error("field mismatch in Witt arithmetic");
    }

    ResidueFieldPtr k_;
    bool odd_ = false;
    bool sd_nonsquare_ = false;
};

/// Signed discriminant of a finite form: true when the class is a nonsquare.
inline bool signed_discriminant_nonsquare(const FiniteForm& f) {
    const auto& k = *f.field;
    Poly d = k.one();
    for (const auto& a : f.entries) {
        if (a.empty()) throw math_error("signed_discriminant: zero entry");
        d = k.mul(d, a);
    }
    const std::size_t n = f.entries.size();
    if ((n * (n - 1) / 2) % 2 == 1) d = k.neg(d);
    return !k.is_square(d);
}

// ---------------------------------------------------------------------------
// F_q(t)

/// Diagonal form over F_q(t).
struct FuncForm {
    GFPtr field;
    std::vector<RatFunc> entries;
};

/// Square class in F_q(t)^*: squarefree part c * prod p.
struct FuncSquareClass {
    RatFunc representative;

    bool is_trivial() const {
        return representative.factors().empty() && representative.field()->is_square(representative.unit());
    }
    bool operator==(const FuncSquareClass& o) const {
        const GF& f = *representative.field();
        return representative.factors() == o.representative.factors() &&
               f.is_square(representative.unit()) == f.is_square(o.representative.unit());
    }
};

inline FuncSquareClass signed_discriminant(const FuncForm& f) {
    RatFunc d = RatFunc::constant(f.field, 1);
    for (const auto& a : f.entries) d = d * a;
    const std::size_t n = f.entries.size();
    if ((n * (n - 1) / 2) % 2 == 1) d = -d;
    return {d.squarefree_part()};
}

/// Canonical uniformizer of a place: p itself, or 1/t at infinity.
inline RatFunc canonical_uniformizer(const GFPtr& f, const Place& x) {
    if (x.infinite) return RatFunc::t(f).inverse();
    return RatFunc(f, 1, {{x.poly, 1}});
}

namespace detail {

// <entry> contributions of a list of entries at x: second residue collects
// odd valuations, first residue even ones
inline WittFinite residue_at(const std::vector<RatFunc>& entries, const GFPtr& f, const Place& x,
                             const RatFunc& pi, bool second) {
    auto k = residue_field(f, x);
    WittFinite w = WittFinite::zero(k);
    for (const auto& e : entries) {
        const int v = e.valuation(x);
        if ((v % 2 != 0) != second) continue;
        RatFunc u = v == 0 ? e : e * pi.pow(-v);
        w = w + WittFinite::unit(k, residue_field_reduce(u, x));
    }
    return w;
}

inline void check_uniformizer(const RatFunc& pi, const Place& x) {
    if (pi.valuation(x) != 1) throw math_error("pi is not a uniformizer at " + x.to_string());
}

} // namespace detail

/// Class in W(F_q(t)), stored through the split Milnor sequence:
/// w = c + sum_p L_p(rho_p) with c in W(F_q), rho_p in W(k(p)) and
/// L_p(<a_1,...,a_r>) = <a^_1 p, ..., a^_r p> for the reduced lifts a^_i.
/// The data (c, rho) is unique, so equality is equality of the data.
class WittFunc {
  public:
    WittFunc() = default;
    explicit WittFunc(GFPtr f) : f_(std::move(f)), constant_(WittFinite::zero(ResidueField::base_field(f_))) {}

    static WittFunc zero(GFPtr f) { return WittFunc(std::move(f)); }
    static WittFunc unit(const RatFunc& a) { return from_form({a.field(), {a}}); }

    /// witt_class_normalize over F_q(t).
    static WittFunc from_form(const FuncForm& form) {
        const GFPtr& f = form.field;
        const GF& gf = *f;
        std::vector<RatFunc> entries;
        entries.reserve(form.entries.size());
        std::set<Poly, poly::Less> pending;
        for (const auto& e : form.entries) {
            entries.push_back(e.squarefree_part());
            for (const auto& kv : entries.back().factors()) pending.insert(kv.first);
        }

        WittFunc w(f);
        // clear second residues from the top degree down; lifts of a residue at
        // p only involve places of smaller degree
        while (!pending.empty()) {
            Poly p = *pending.rbegin();
            pending.erase(std::prev(pending.end()));
            const Place x = Place::finite(p);
            const RatFunc pi = canonical_uniformizer(f, x);
            WittFinite rho = detail::residue_at(entries, f, x, pi, true);
            if (rho.is_zero()) continue;
            for (const auto& a : rho.representative()) {
                RatFunc lifted = RatFunc::from_poly(f, a) * pi;
                for (const auto& kv : lifted.factors())
                    if (kv.first != p) pending.insert(kv.first);
                entries.push_back(-lifted);
            }
            w.lifts_.emplace(std::move(p), std::move(rho));
        }
        // what is left is unramified everywhere, hence constant; read it off at t = 0
        const Place origin = Place::rational(gf, 0);
        w.constant_ = detail::residue_at(entries, f, origin, canonical_uniformizer(f, origin), false);
        w.constant_ = WittFinite(ResidueField::base_field(f), w.constant_.odd_rank(), w.constant_.signed_disc_nonsquare());
        return w;
    }

    const GFPtr& field() const noexcept { return f_; }
    const WittFinite& constant_part() const noexcept { return constant_; }
    const std::map<Poly, WittFinite, poly::Less>& lifts() const noexcept { return lifts_; }
    bool is_zero() const { return constant_.is_zero() && lifts_.empty(); }

    /// Canonical representative: constant part followed by the lifts.
    std::vector<RatFunc> representative() const {
        std::vector<RatFunc> out;
        for (const auto& c : constant_.representative()) out.push_back(RatFunc::constant(f_, c.empty() ? 0 : c[0]));
        for (const auto& [p, rho] : lifts_)
            for (const auto& a : rho.representative())
                out.push_back(RatFunc::from_poly(f_, a) * canonical_uniformizer(f_, Place::finite(p)));
        return out;
    }
    FuncForm form() const { return {f_, representative()}; }

    WittFunc operator+(const WittFunc& o) const {
        check(o);
        auto a = representative();
        auto b = o.representative();
        a.insert(a.end(), b.begin(), b.end());
        return from_form({f_, std::move(a)});
    }
    WittFunc operator-() const {
        auto a = representative();
        for (auto& e : a) e = -e;
        return from_form({f_, std::move(a)});
    }
    WittFunc operator-(const WittFunc& o) const { return *this + (-o); }
    WittFunc operator*(const WittFunc& o) const {
        check(o);
        std::vector<RatFunc> prod;
        for (const auto& a : representative())
            for (const auto& b : o.representative()) prod.push_back(a * b);
        return from_form({f_, std::move(prod)});
    }
    WittFunc times(long long n) const {
        // W(F_q(t)) has exponent dividing 4
        WittFunc base = n >= 0 ? *this : -*this;
        std::vector<RatFunc> rep;
        auto r = base.representative();
        for (long long i = 0; i < (n >= 0 ? n : -n) % 4; ++i) rep.insert(rep.end(), r.begin(), r.end());
        return from_form({f_, std::move(rep)});
    }

    bool odd_rank() const { return representative().size() % 2 == 1; }
    FuncSquareClass signed_disc() const { return signed_discriminant(form()); }
    /// I^2 membership: even rank and trivial signed discriminant.
    bool in_i2() const { return !odd_rank() && signed_disc().is_trivial(); }

    bool operator==(const WittFunc& o) const {
        return f_->q() == o.f_->q() && constant_ == o.constant_ && lifts_ == o.lifts_;
    }

    std::string to_string() const {
        auto rep = representative();
        if (rep.empty()) return "0";
        std::string s = "<";
        for (std::size_t i = 0; i < rep.size(); ++i) s += (i ? ", " : "") + rep[i].to_string();
        return s + ">";
    }

  private:
    void check(const WittFunc& o) const {
        if (f_->q() != o.f_->q()) throw math_error("field mismatch in Witt arithmetic");
    }

    GFPtr f_;
    WittFinite constant_;
    std::map<Poly, WittFinite, poly::Less> lifts_;
};

/// Second residue of a form over F_q(t) at x with respect to the uniformizer pi.
inline WittFinite second_residue(const FuncForm& form, const Place& x, const RatFunc& pi) {
    detail::check_uniformizer(pi, x);
    return detail::residue_at(form.entries, form.field, x, pi, true);
}
inline WittFinite second_residue(const WittFunc& w, const Place& x, const RatFunc& pi) {
    return second_residue(w.form(), x, pi);
}

/// Restriction of a class unramified at x to W(k(x)).
inline WittFinite witt_specialize(const WittFunc& w, const Place& x) {
    const FuncForm form = w.form();
    const RatFunc pi = canonical_uniformizer(w.field(), x);
    if (!detail::residue_at(form.entries, w.field(), x, pi, true).is_zero()) throw math_error("not regular at x");
    return detail::residue_at(form.entries, w.field(), x, pi, false);
}

// ---------------------------------------------------------------------------
// Grothendieck-Witt elements: GW = Z x_{Z/2} W

template <class Witt>
struct GWElement {
    long long rank = 0;
    Witt witt;

    GWElement() = default;
    GWElement(long long r, Witt w) : rank(r), witt(std::move(w)) {
        if ((rank % 2 != 0) != witt.odd_rank()) throw math_error("GW element violates rank parity");
    }

    bool operator==(const GWElement& o) const { return rank == o.rank && witt == o.witt; }
};

using GWFinite = GWElement<WittFinite>;
using GWFunc = GWElement<WittFunc>;

enum class GWOp { add, multiply };

template <class Witt>
GWElement<Witt> gw_combine(GWOp op, const GWElement<Witt>& a, const GWElement<Witt>& b) {
    if (op == GWOp::add) return {a.rank + b.rank, a.witt + b.witt};
    return {a.rank * b.rank, a.witt * b.witt};
}

inline GWFinite gw_unit(const ResidueFieldPtr& k, const Poly& a) { return {1, WittFinite::unit(k, a)}; }
inline GWFunc gw_unit(const RatFunc& a) { return {1, WittFunc::unit(a)}; }

/// Unsigned discriminant class of a finite GW element (true = nonsquare).
/// Together with the rank this is an isomorphism GW(k) -> Z + Z/2.
inline bool gw_disc_nonsquare(const GWFinite& g) {
    long long m = ((g.rank % 4) + 4) % 4;
    bool sign = (m == 2 || m == 3) && !g.witt.field()->minus_one_is_square();
    return g.witt.signed_disc_nonsquare() != sign;
}

inline GWFinite gw_from_rank_disc(const ResidueFieldPtr& k, long long rank, bool disc_nonsquare) {
    long long m = ((rank % 4) + 4) % 4;
    bool sign = (m == 2 || m == 3) && !k->minus_one_is_square();
    return {rank, WittFinite(k, rank % 2 != 0, disc_nonsquare != sign)};
}

} // namespace mwrs
