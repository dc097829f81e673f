#pragma once

// The rational function field F_q(t): places of P^1, factored rational
// functions, divisors, valuations and reduction to residue fields.

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "finite_field.hpp"

namespace mwrs {

/// Closed point of P^1 over F_q: a monic irreducible polynomial or infinity.
struct Place {
    Poly poly; // empty for infinity
    bool infinite = false;

    static Place inf() { return Place{{}, true}; }
    static Place finite(Poly p) { return Place{std::move(p), false}; }
    /// The rational point t = a, i.e. the place (t - a).
    static Place rational(const GF& f, Elem a) { return finite(Poly{f.neg(a), 1}); }

    int degree() const { return infinite ? 1 : poly::deg(poly); }

    bool operator==(const Place&) const = default;
    bool operator<(const Place& o) const {
        if (infinite != o.infinite) return !infinite;
        return poly::Less{}(poly, o.poly);
    }

    std::string to_string() const {
        if (infinite) return "inf";
        std::string s = "[";
        for (std::size_t i = 0; i < poly.size(); ++i) s += (i ? "," : "") + std::to_string(poly[i]);
        return s + "]";
    }
};

/// Residue field k(x) of a place. Infinity and rational places have k(x) = F_q.
inline ResidueFieldPtr residue_field(const GFPtr& f, const Place& x) {
    if (x.infinite || x.degree() == 1) return ResidueField::base_field(f);
    return ResidueField::get(f, x.poly);
}

/// Nonzero element c * prod p_i^{e_i} of F_q(t)^*, p_i monic irreducible.
class RatFunc {
  public:
    using Factors = std::map<Poly, int, poly::Less>;

    RatFunc() = default;
    RatFunc(GFPtr f, Elem unit, Factors factors = {}) : f_(std::move(f)), unit_(unit), factors_(std::move(factors)) {
        if (unit_ == 0) throw math_error("rational function with zero unit");
        std::erase_if(factors_, [](const auto& kv) { return kv.second == 0; });
    }

    static RatFunc constant(GFPtr f, Elem c) { return RatFunc(std::move(f), c); }
    static RatFunc t(GFPtr f) { return RatFunc(std::move(f), 1, {{poly::x(), 1}}); }

    /// Factor a nonzero polynomial.
    static RatFunc from_poly(const GFPtr& f, const Poly& a) {
        if (a.empty()) throw math_error("factor_divisor: zero polynomial");
        return RatFunc(f, poly::lead(a), poly::factor(*f, a));
    }

    const GFPtr& field() const noexcept { return f_; }
    Elem unit() const noexcept { return unit_; }
    const Factors& factors() const noexcept { return factors_; }
    bool is_one() const { return unit_ == 1 && factors_.empty(); }
    bool is_constant() const { return factors_.empty(); }

    int valuation(const Place& x) const {
        if (x.infinite) {
            int v = 0;
            for (const auto& [p, e] : factors_) v -= e * poly::deg(p);
            return v;
        }
        auto it = factors_.find(x.poly);
        return it == factors_.end() ? 0 : it->second;
    }

    RatFunc operator*(const RatFunc& o) const {
        Factors fac = factors_;
        for (const auto& [p, e] : o.factors_) fac[p] += e;
        return RatFunc(f_, f_->mul(unit_, o.unit_), std::move(fac));
    }
    RatFunc inverse() const {
        Factors fac;
        for (const auto& [p, e] : factors_) fac[p] = -e;
        return RatFunc(f_, f_->inv(unit_), std::move(fac));
    }
    RatFunc operator/(const RatFunc& o) const { return *this * o.inverse(); }
    RatFunc pow(long long n) const {
        Factors fac;
        for (const auto& [p, e] : factors_) fac[p] = static_cast<int>(e * n);
        Elem u = n >= 0 ? f_->pow(unit_, static_cast<std::uint64_t>(n)) : f_->pow(f_->inv(unit_), static_cast<std::uint64_t>(-n));
        return RatFunc(f_, u, std::move(fac));
    }
    RatFunc operator-() const { return RatFunc(f_, f_->neg(unit_), factors_); }

    /// Numerator and denominator polynomials (denominator monic).
    std::pair<Poly, Poly> fraction() const {
        Poly num{unit_}, den{1};
        for (const auto& [p, e] : factors_) {
            for (int i = 0; i < std::abs(e); ++i) {
                if (e > 0) num = poly::mul(*f_, num, p);
                else den = poly::mul(*f_, den, p);
            }
        }
        return {num, den};
    }

    /// Sum of two functions, refactored. Returns nullopt when the sum is 0.
    std::optional<RatFunc> plus(const RatFunc& o) const {
        auto [n1, d1] = fraction();
        auto [n2, d2] = o.fraction();
        Poly num = poly::add(*f_, poly::mul(*f_, n1, d2), poly::mul(*f_, n2, d1));
        if (num.empty()) return std::nullopt;
        return from_poly(f_, num) / from_poly(f_, poly::mul(*f_, d1, d2));
    }

    /// Square-free representative of the square class: exponents reduced mod 2.
    RatFunc squarefree_part() const {
        Factors fac;
        for (const auto& [p, e] : factors_)
            if (e % 2 != 0) fac[p] = 1;
        return RatFunc(f_, unit_, std::move(fac));
    }

    bool operator==(const RatFunc& o) const { return unit_ == o.unit_ && factors_ == o.factors_; }

    std::string to_string() const {
        std::string s = std::to_string(unit_);
        for (const auto& [p, e] : factors_) s += "*" + Place::finite(p).to_string() + "^" + std::to_string(e);
        return s;
    }

  private:
    GFPtr f_;
    Elem unit_ = 1;
    Factors factors_;
};

/// factor_divisor: the rational function num/den in factored form.
inline RatFunc factor_divisor(const GFPtr& f, const Poly& num, const Poly& den) {
    if (den.empty()) throw math_error("factor_divisor: division by zero polynomial");
    if (num.empty()) throw math_error("factor_divisor: zero function");
    return RatFunc::from_poly(f, num) / RatFunc::from_poly(f, den);
}

/// Formal Z-combination of places.
using Divisor = std::map<Place, long long>;

inline Divisor divisor_of(const RatFunc& g) {
    Divisor d;
    for (const auto& [p, e] : g.factors()) d[Place::finite(p)] = e;
    if (int v = g.valuation(Place::inf()); v != 0) d[Place::inf()] = v;
    return d;
}

inline long long divisor_degree(const Divisor& d) {
    long long s = 0;
    for (const auto& [x, n] : d) s += n * x.degree();
    return s;
}

/// Image of a polynomial in k(x) for a finite place x.
inline Poly residue_field_reduce(const GFPtr& f, const Poly& g, const Place& x) {
    if (x.infinite) throw math_error("residue_field_reduce: polynomial input needs a finite place");
    Poly r = residue_field(f, x)->reduce(poly::mod(*f, g, x.poly));
    if (r.empty()) throw math_error("ramified at x");
    return r;
}

/// Image in k(x) of a function with v_x(g) = 0. At infinity this is the value
/// of the expansion in s = 1/t at s = 0, which for monic factors is the unit.
inline Poly residue_field_reduce(const RatFunc& g, const Place& x) {
    if (g.valuation(x) != 0) throw math_error("ramified at x");
    const GF& f = *g.field();
    if (x.infinite) return poly::constant(g.unit());
    auto k = residue_field(g.field(), x);
    Poly r = k->from_base(g.unit());
    for (const auto& [p, e] : g.factors()) {
        Poly pr = poly::mod(f, p, x.poly);
        if (x.degree() == 1) pr = poly::constant(poly::eval(f, p, f.neg(x.poly[0])));
        r = k->mul(r, k->pow(pr, e));
    }
    return r;
}

} // namespace mwrs
