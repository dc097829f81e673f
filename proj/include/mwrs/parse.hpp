#pragma once

// Text syntax for command-line input and human-readable output.
//
//   field elements   integer index (base-p digits of the coefficients in F_p[u])
//   places           "inf", an element index a for the place (t - a), or
//                    "[c0,c1,...,1]" for a monic irreducible polynomial
//   functions        t, element indices, + - * / ^ and parentheses, e.g. "(t^2+1)/t"
//   MW terms         products of an integer, eta, h, <f> and [f], joined by + and -,
//                    e.g. "[t] - 2*<t+1>*eta*[t][t+2]"

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "p1geom.hpp"

namespace mwrs {

/// Malformed user input.
class parse_error : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

inline long long parse_int(std::string_view s) {
    std::string t = trim(s);
    if (t.empty()) throw parse_error("expected an integer");
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(t, &pos);
    } catch (const std::exception&) {
        throw parse_error("not an integer: '" + t + "'");
    }
    if (pos != t.size()) throw parse_error("not an integer: '" + t + "'");
    return v;
}

} // namespace detail

/// Splits at `sep` outside (), [] and <>.
inline std::vector<std::string> split_top_level(std::string_view s, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(' || c == '[' || c == '<') ++depth;
        if (c == ')' || c == ']' || c == '>') --depth;
        if (depth < 0) throw parse_error("unbalanced brackets in '" + std::string(s) + "'");
        if (c == sep && depth == 0) {
            out.push_back(detail::trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (depth != 0) throw parse_error("unbalanced brackets in '" + std::string(s) + "'");
    out.push_back(detail::trim(cur));
    return out;
}

inline Elem parse_element(const GF& f, std::string_view s) {
    long long v = detail::parse_int(s);
    if (v < 0 || v >= static_cast<long long>(f.q())) throw parse_error("field element out of range: " + std::string(s));
    return static_cast<Elem>(v);
}

inline Place parse_place(const GF& f, std::string_view text) {
    std::string s = detail::trim(text);
    if (s == "inf") return Place::inf();
    if (!s.empty() && s.front() == '[') {
        if (s.back() != ']') throw parse_error("bad place: " + s);
        Poly p;
        for (const auto& c : split_top_level(std::string_view(s).substr(1, s.size() - 2), ',')) p.push_back(parse_element(f, c));
        poly::trim(p);
        if (poly::deg(p) < 1 || poly::lead(p) != 1) throw parse_error("place polynomial must be monic of positive degree: " + s);
        if (!poly::is_irreducible(f, p)) throw parse_error("place polynomial is not irreducible: " + s);
        return Place::finite(std::move(p));
    }
    return Place::rational(f, parse_element(f, s));
}

inline PlaceSet parse_place_set(const GF& f, std::string_view s) {
    PlaceSet out;
    if (detail::trim(s).empty()) return out;
    for (const auto& item : split_top_level(s, ',')) out.insert(parse_place(f, item));
    return out;
}

namespace detail {

// recursive descent over polynomial fractions
class FuncParser {
  public:
    FuncParser(const GFPtr& f, std::string_view s) : f_(f), s_(s) {}

    RatFunc run() {
        auto [n, d] = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        if (n.empty()) fail("the zero function is not allowed");
        return factor_divisor(f_, n, d);
    }

  private:
    using Frac = std::pair<Poly, Poly>;

    [[noreturn]] void fail(const std::string& msg) const {
        throw parse_error("in '" + std::string(s_) + "': " + msg);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Frac add(const Frac& a, const Frac& b, bool minus) const {
        const GF& f = *f_;
        Poly rhs = poly::mul(f, b.first, a.second);
        if (minus) rhs = poly::scale(f, rhs, f.neg(1));
        return {poly::add(f, poly::mul(f, a.first, b.second), rhs), poly::mul(f, a.second, b.second)};
    }
    Frac mul(const Frac& a, const Frac& b) const {
        return {poly::mul(*f_, a.first, b.first), poly::mul(*f_, a.second, b.second)};
    }
    Frac inv(const Frac& a) const {
        if (a.first.empty()) fail("division by zero");
        return {a.second, a.first};
    }

    Frac expr() {
        Frac acc;
        if (eat('-')) acc = add({Poly{}, Poly{1}}, term(), true);
        else acc = term();
        while (true) {
            if (eat('+')) acc = add(acc, term(), false);
            else if (eat('-')) acc = add(acc, term(), true);
            else return acc;
        }
    }
    Frac term() {
        Frac acc = power();
        while (true) {
            if (eat('*')) acc = mul(acc, power());
            else if (eat('/')) acc = mul(acc, inv(power()));
            else return acc;
        }
    }
    Frac power() {
        Frac b = atom();
        if (!eat('^')) return b;
        skip();
        std::size_t start = pos_;
        if (pos_ < s_.size() && s_[pos_] == '-') ++pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        long long e = parse_int(s_.substr(start, pos_ - start));
        if (e < 0) {
            b = inv(b);
            e = -e;
        }
        Frac r{Poly{1}, Poly{1}};
        for (long long i = 0; i < e; ++i) r = mul(r, b);
        return r;
    }
    Frac atom() {
        skip();
        if (eat('(')) {
            Frac r = expr();
            if (!eat(')')) fail("missing ')'");
            return r;
        }
        if (pos_ < s_.size() && s_[pos_] == 't') {
            ++pos_;
            return {poly::x(), Poly{1}};
        }
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail(pos_ < s_.size() ? "unexpected '" + std::string(1, s_[pos_]) + "'" : "unexpected end");
        return {poly::constant(parse_element(*f_, s_.substr(start, pos_ - start))), Poly{1}};
    }

    GFPtr f_;
    std::string_view s_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Nonzero element of F_q(t) from an expression in t.
inline RatFunc parse_function(const GFPtr& f, std::string_view s) { return detail::FuncParser(f, s).run(); }

/// One monomial n * <u> * eta^k * h^j * [a_1]...[a_m], m <= 2.
inline MWFunc parse_mw_monomial(const FuncOps& ops, std::string_view text) {
    const std::string s = detail::trim(text);
    long long coeff = 1;
    int eta = 0, hyper = 0;
    RatFunc unit = ops.one();
    std::vector<RatFunc> symbols;
    // factors: split at top-level '*', and also between adjacent brackets "[a][b]"
    std::vector<std::string> factors;
    for (const auto& part : split_top_level(s, '*')) {
        std::string cur;
        int depth = 0;
        for (char c : part) {
            if (depth == 0 && (c == '[' || c == '<') && !detail::trim(cur).empty()) {
                factors.push_back(detail::trim(cur));
                cur.clear();
            }
            if (c == '(' || c == '[' || c == '<') ++depth;
            if (c == ')' || c == ']' || c == '>') --depth;
            cur += c;
        }
        factors.push_back(detail::trim(cur));
    }
    for (const auto& fac : factors) {
        if (fac.empty()) throw parse_error("empty factor in '" + s + "'");
        if (fac == "eta") ++eta;
        else if (fac == "h") ++hyper;
        else if (fac.front() == '[' && fac.back() == ']') symbols.push_back(parse_function(ops.f, fac.substr(1, fac.size() - 2)));
        else if (fac.front() == '<' && fac.back() == '>') unit = unit * parse_function(ops.f, fac.substr(1, fac.size() - 2));
        else coeff *= detail::parse_int(fac);
    }
    if (symbols.size() > 2) throw parse_error("symbols of length > 2 are not supported: '" + s + "'");
    const int degree = static_cast<int>(symbols.size()) - eta;
    if (degree < kMinDegree || degree > kMaxDegree) throw parse_error("degree out of range in '" + s + "'");
    MWFunc x = symbols.empty() ? mw_integer(ops, 1)
               : symbols.size() == 1 ? mw_symbol(ops, symbols[0])
                                     : mw_symbol2(ops, symbols[0], symbols[1]);
    for (int i = 0; i < eta; ++i) x = mw_eta_mul(x);
    x = mw_unit_scale(unit, x);
    for (int i = 0; i < hyper; ++i) x = x + mw_unit_scale(ops.negate(ops.one()), x);
    return mw_times(x, coeff);
}

/// Homogeneous sum of monomials, normalized.
inline MWFunc parse_mw(const FuncOps& ops, std::string_view text) {
    // split at top-level + and - (a leading '-' negates the first monomial)
    std::vector<std::pair<bool, std::string>> parts;
    int depth = 0;
    std::string cur;
    bool neg = false;
    for (char c : text) {
        if (c == '(' || c == '[' || c == '<') ++depth;
        if (c == ')' || c == ']' || c == '>') --depth;
        if (depth == 0 && (c == '+' || c == '-')) {
            if (!detail::trim(cur).empty()) parts.emplace_back(neg, detail::trim(cur));
            else if (!parts.empty() || c == '+') throw parse_error("dangling sign in '" + std::string(text) + "'");
            cur.clear();
            neg = c == '-';
            continue;
        }
        cur += c;
    }
    if (detail::trim(cur).empty()) throw parse_error("empty Milnor-Witt expression");
    parts.emplace_back(neg, detail::trim(cur));
    std::vector<MWFunc> terms;
    for (const auto& [minus, p] : parts) {
        MWFunc m = parse_mw_monomial(ops, p);
        terms.push_back(minus ? -m : m);
    }
    for (const auto& t : terms)
        if (t.degree != terms.front().degree) throw parse_error("terms of different degree");
    return mw_normalize(ops, terms.front().degree, terms);
}

// ---------------------------------------------------------------------------
// formatting

inline std::string format_poly(const Poly& p) {
    if (p.empty()) return "0";
    std::string s;
    for (std::size_t i = p.size(); i-- > 0;) {
        if (p[i] == 0) continue;
        if (!s.empty()) s += "+";
        std::string mono = i == 0 ? "" : i == 1 ? "t" : "t^" + std::to_string(i);
        if (mono.empty()) s += std::to_string(p[i]);
        else if (p[i] == 1) s += mono;
        else s += std::to_string(p[i]) + "*" + mono;
    }
    return s;
}

inline std::string format_function(const RatFunc& g) {
    std::string num, den;
    auto append = [](std::string& out, const Poly& p, int e) {
        std::string base = poly::deg(p) == 1 && p[0] == 0 ? "t" : "(" + format_poly(p) + ")";
        if (!out.empty()) out += "*";
        out += base + (e == 1 ? "" : "^" + std::to_string(e));
    };
    for (const auto& [p, e] : g.factors()) append(e > 0 ? num : den, p, std::abs(e));
    if (g.unit() != 1 || num.empty()) num = std::to_string(g.unit()) + (num.empty() ? "" : "*" + num);
    return den.empty() ? num : num + "/" + (den.find('*') == std::string::npos ? den : "(" + den + ")");
}

inline std::string format_witt(const WittFunc& w) {
    auto rep = w.representative();
    if (rep.empty()) return "0";
    std::string s = "<";
    for (std::size_t i = 0; i < rep.size(); ++i) s += (i ? ", " : "") + format_function(rep[i]);
    return s + ">";
}

inline std::string format_witt(const WittFinite& w) {
    auto rep = w.representative();
    if (rep.empty()) return "0";
    std::string s = "<";
    for (std::size_t i = 0; i < rep.size(); ++i) s += (i ? ", " : "") + format_poly(rep[i]);
    return s + ">";
}

inline std::string format_milnor(const MWFunc& x) {
    switch (x.degree) {
    case 0: return std::to_string(x.milnor0);
    case 1: return "{" + format_function(x.milnor1) + "}";
    case 2: {
        if (x.milnor2.values.empty()) return "0";
        std::string s;
        for (const auto& [p, v] : x.milnor2.values)
            s += (s.empty() ? "" : ", ") + ("tame@" + format_poly(p) + "=" + format_poly(v));
        return s;
    }
    default: return "0";
    }
}

inline std::string format_milnor(const MWFinite& x) {
    switch (x.degree) {
    case 0: return std::to_string(x.milnor0);
    case 1: return "{" + format_poly(x.milnor1) + "}";
    default: return "0";
    }
}

inline std::string format_place(const Place& x) { return x.infinite ? "inf" : format_poly(x.poly); }

} // namespace mwrs
