#pragma once

// Finite fields F_q (q odd) as F_p[u]/(m), polynomials over F_q, their
// factorization, and residue fields F_q[t]/(p).

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "abgrp.hpp"

namespace mwrs {

using Elem = std::uint32_t;
using Poly = std::vector<Elem>; // ascending coefficients, no trailing zeros

namespace detail {

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    if (n > 1) out.push_back(n);
    return out;
}

} // namespace detail

/// The base field F_q, q = p^k odd. Elements are indices 0..q-1 whose base-p
/// digits are the coefficients of a polynomial in u reduced mod the modulus.
/// Arithmetic is table driven.
class GF {
  public:
    static std::shared_ptr<const GF> get(std::uint32_t q) {
        static std::mutex mu;
        static std::map<std::uint32_t, std::shared_ptr<const GF>> cache;
        std::lock_guard lock(mu);
        auto it = cache.find(q);
        if (it != cache.end()) return it->second;
        auto f = std::shared_ptr<const GF>(new GF(q));
        cache.emplace(q, f);
        return f;
    }

    std::uint32_t q() const noexcept { return q_; }
    std::uint32_t p() const noexcept { return p_; }
    std::uint32_t degree() const noexcept { return k_; }
    /// Monic modulus over F_p, ascending coefficients (length k+1).
    const std::vector<std::uint32_t>& modulus() const noexcept { return modulus_; }

    Elem add(Elem a, Elem b) const { return add_[a * q_ + b]; }
    Elem sub(Elem a, Elem b) const { return add_[a * q_ + neg_[b]]; }
    Elem neg(Elem a) const { return neg_[a]; }
    Elem mul(Elem a, Elem b) const { return mul_[a * q_ + b]; }
    Elem inv(Elem a) const {
        if (a == 0) throw math_error("division by zero in F_" + std::to_string(q_));
        return inv_[a];
    }
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
    Elem pow(Elem a, std::uint64_t e) const {
        Elem r = 1;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    /// Image of an integer under Z -> F_p -> F_q.
    Elem from_int(long long n) const {
        long long r = n % static_cast<long long>(p_);
        return static_cast<Elem>(r < 0 ? r + p_ : r);
    }
    bool is_square(Elem a) const {
        if (a == 0) throw math_error("is_square: zero element");
        return pow(a, (q_ - 1) / 2) == 1;
    }
    /// Generator of F_q^*, least index with full order.
    Elem primitive() const noexcept { return primitive_; }
    /// Discrete log base primitive().
    std::uint32_t log(Elem a) const {
        if (a == 0) throw math_error("log of zero");
        return log_[a];
    }
    /// Least-index nonsquare.
    Elem nonsquare() const noexcept { return nonsquare_; }

  private:
    explicit GF(std::uint32_t q) : q_(q) {
        if (q < 3 || q % 2 == 0) throw std::invalid_argument("F_q requires odd q >= 3, got " + std::to_string(q));
        auto pf = detail::prime_factors(q);
        if (pf.size() != 1) throw std::invalid_argument("q = " + std::to_string(q) + " is not a prime power");
        p_ = static_cast<std::uint32_t>(pf[0]);
        for (std::uint32_t t = q; t > 1; t /= p_) ++k_;
        if (q > 4096) throw std::invalid_argument("q too large for table arithmetic");
        modulus_ = least_irreducible();
        build_tables();
    }

    std::vector<std::uint32_t> digits(std::uint32_t a) const {
        std::vector<std::uint32_t> d(k_);
        for (std::uint32_t i = 0; i < k_; ++i, a /= p_) d[i] = a % p_;
        return d;
    }
    std::uint32_t undigits(const std::vector<std::uint32_t>& d) const {
        std::uint32_t a = 0;
        for (std::uint32_t i = k_; i-- > 0;) a = a * p_ + d[i];
        return a;
    }

    // monic degree-k polynomial over F_p with no root-free factorization check:
    // irreducible iff no monic factor of degree <= k/2 divides it
    std::vector<std::uint32_t> least_irreducible() const {
        if (k_ == 1) return {0, 1};
        auto rem = [&](std::vector<std::uint32_t> a, const std::vector<std::uint32_t>& b) {
            const std::size_t db = b.size() - 1;
            while (a.size() > db) {
                std::uint32_t c = a.back();
                std::size_t shift = a.size() - 1 - db;
                for (std::size_t i = 0; i <= db; ++i)
                    a[shift + i] = (a[shift + i] + (p_ - c) * b[i]) % p_;
                while (!a.empty() && a.back() == 0) a.pop_back();
            }
            return a;
        };
        std::uint32_t count = 1;
        for (std::uint32_t i = 0; i < k_; ++i) count *= p_;
        for (std::uint32_t idx = 0; idx < count; ++idx) {
            std::vector<std::uint32_t> cand(k_ + 1);
            std::uint32_t t = idx;
            for (std::uint32_t i = 0; i < k_; ++i, t /= p_) cand[i] = t % p_;
            cand[k_] = 1;
            bool irreducible = true;
            for (std::uint32_t d = 1; 2 * d <= k_ && irreducible; ++d) {
                std::uint32_t nd = 1;
                for (std::uint32_t i = 0; i < d; ++i) nd *= p_;
                for (std::uint32_t j = 0; j < nd && irreducible; ++j) {
                    std::vector<std::uint32_t> f(d + 1);
                    std::uint32_t s = j;
                    for (std::uint32_t i = 0; i < d; ++i, s /= p_) f[i] = s % p_;
                    f[d] = 1;
                    if (rem(cand, f).empty()) irreducible = false;
                }
            }
            if (irreducible) return cand;
        }
        throw std::logic_error("no irreducible polynomial found");
    }

    void build_tables() {
        add_.resize(q_ * q_);
        mul_.resize(q_ * q_);
        neg_.resize(q_);
        inv_.assign(q_, 0);
        log_.assign(q_, 0);
        for (std::uint32_t a = 0; a < q_; ++a) {
            auto da = digits(a);
            std::vector<std::uint32_t> dn(k_);
            for (std::uint32_t i = 0; i < k_; ++i) dn[i] = (p_ - da[i]) % p_;
            neg_[a] = undigits(dn);
            for (std::uint32_t b = 0; b < q_; ++b) {
                auto db = digits(b);
                std::vector<std::uint32_t> s(k_);
                for (std::uint32_t i = 0; i < k_; ++i) s[i] = (da[i] + db[i]) % p_;
                add_[a * q_ + b] = undigits(s);
                // schoolbook product then reduce by the monic modulus
                std::vector<std::uint32_t> prod(2 * k_, 0);
                for (std::uint32_t i = 0; i < k_; ++i)
                    for (std::uint32_t j = 0; j < k_; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
                for (std::uint32_t d = 2 * k_ - 1; d >= k_; --d) {
                    std::uint32_t c = prod[d];
                    if (c == 0) continue;
                    for (std::uint32_t i = 0; i <= k_; ++i)
                        prod[d - k_ + i] = (prod[d - k_ + i] + (p_ - c) * modulus_[i]) % p_;
                }
                prod.resize(k_);
                mul_[a * q_ + b] = undigits(prod);
            }
        }
        for (std::uint32_t a = 1; a < q_; ++a)
            for (std::uint32_t b = 1; b < q_; ++b)
                if (mul_[a * q_ + b] == 1) inv_[a] = b;
        const auto pf = detail::prime_factors(q_ - 1);
        for (Elem g = 1; g < q_; ++g) {
            bool full = true;
            for (auto r : pf)
                if (pow(g, (q_ - 1) / r) == 1) full = false;
            if (full) {
                primitive_ = g;
                break;
            }
        }
        Elem x = 1;
        for (std::uint32_t e = 0; e < q_ - 1; ++e) {
            log_[x] = e;
            x = mul(x, primitive_);
        }
        for (Elem a = 1; a < q_; ++a)
            if (log_[a] % 2 == 1) {
                nonsquare_ = a;
                break;
            }
    }

    std::uint32_t q_, p_ = 0, k_ = 0;
    std::vector<std::uint32_t> modulus_;
    std::vector<Elem> add_, mul_, neg_, inv_;
    std::vector<std::uint32_t> log_;
    Elem primitive_ = 1, nonsquare_ = 0;
};

using GFPtr = std::shared_ptr<const GF>;

// ---------------------------------------------------------------------------
// polynomials over F_q

namespace poly {

inline void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}
inline int deg(const Poly& a) { return static_cast<int>(a.size()) - 1; }
inline Elem lead(const Poly& a) { return a.empty() ? 0 : a.back(); }
inline Poly constant(Elem c) { return c ? Poly{c} : Poly{}; }
inline Poly x() { return Poly{0, 1}; }

inline Poly add(const GF& f, const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = f.add(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
    trim(r);
    return r;
}
inline Poly sub(const GF& f, const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = f.sub(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
    trim(r);
    return r;
}
inline Poly scale(const GF& f, const Poly& a, Elem c) {
    if (c == 0) return {};
    Poly r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = f.mul(a[i], c);
    return r;
}
inline Poly mul(const GF& f, const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = f.add(r[i + j], f.mul(a[i], b[j]));
    }
    trim(r);
    return r;
}
/// Quotient and remainder; b must be nonzero.
inline std::pair<Poly, Poly> divmod(const GF& f, Poly a, const Poly& b) {
    if (b.empty()) throw math_error("polynomial division by zero");
    const std::size_t db = b.size() - 1;
    const Elem inv_lead = f.inv(b.back());
    Poly quot(a.size() >= b.size() ? a.size() - db : 0, 0);
    while (a.size() > db) {
        const Elem c = f.mul(a.back(), inv_lead);
        const std::size_t shift = a.size() - 1 - db;
        quot[shift] = c;
        for (std::size_t i = 0; i <= db; ++i) a[shift + i] = f.sub(a[shift + i], f.mul(c, b[i]));
        a.pop_back();
        trim(a);
    }
    trim(quot);
    return {std::move(quot), std::move(a)};
}
inline Poly mod(const GF& f, const Poly& a, const Poly& b) { return divmod(f, a, b).second; }
inline Poly monic(const GF& f, const Poly& a) { return a.empty() ? a : scale(f, a, f.inv(a.back())); }
inline Poly gcd(const GF& f, Poly a, Poly b) {
    while (!b.empty()) {
        Poly r = mod(f, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(f, a);
}
inline Poly mulmod(const GF& f, const Poly& a, const Poly& b, const Poly& m) { return mod(f, mul(f, a, b), m); }
inline Poly powmod(const GF& f, Poly a, Integer e, const Poly& m) {
    Poly r = mod(f, Poly{1}, m);
    a = mod(f, a, m);
    while (e > 0) {
        if ((e & 1) != 0) r = mulmod(f, r, a, m);
        a = mulmod(f, a, a, m);
        e >>= 1;
    }
    return r;
}
inline Poly derivative(const GF& f, const Poly& a) {
    Poly r;
    for (std::size_t i = 1; i < a.size(); ++i) r.push_back(f.mul(f.from_int(static_cast<long long>(i)), a[i]));
    trim(r);
    return r;
}
inline Elem eval(const GF& f, const Poly& a, Elem x) {
    Elem r = 0;
    for (std::size_t i = a.size(); i-- > 0;) r = f.add(f.mul(r, x), a[i]);
    return r;
}
/// t^deg(a) * a(1/t).
inline Poly reverse(const Poly& a) {
    Poly r(a.rbegin(), a.rend());
    trim(r);
    return r;
}

/// Canonical total order: degree first, then coefficients from the top down.
struct Less {
    bool operator()(const Poly& a, const Poly& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        for (std::size_t i = a.size(); i-- > 0;)
            if (a[i] != b[i]) return a[i] < b[i];
        return false;
    }
};

inline Integer field_size(const GF& f, int d) {
    Integer r = 1;
    for (int i = 0; i < d; ++i) r *= f.q();
    return r;
}

/// Rabin irreducibility test for a monic polynomial.
inline bool is_irreducible(const GF& f, const Poly& a) {
    const int n = deg(a);
    if (n <= 0) return false;
    if (n == 1) return true;
    auto frob = [&](int k) { return powmod(f, x(), field_size(f, k), a); };
    if (sub(f, frob(n), mod(f, x(), a)).size() != 0) return false;
    for (auto r : detail::prime_factors(static_cast<std::uint64_t>(n))) {
        Poly g = gcd(f, sub(f, frob(n / static_cast<int>(r)), x()), a);
        if (g.size() != 1) return false;
    }
    return true;
}

/// All monic polynomials of degree d, in index order of the low coefficients.
inline std::vector<Poly> monic_of_degree(const GF& f, int d) {
    std::vector<Poly> out;
    std::uint64_t count = 1;
    for (int i = 0; i < d; ++i) count *= f.q();
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        Poly p(static_cast<std::size_t>(d) + 1);
        std::uint64_t t = idx;
        for (int i = 0; i < d; ++i, t /= f.q()) p[static_cast<std::size_t>(i)] = static_cast<Elem>(t % f.q());
        p[static_cast<std::size_t>(d)] = 1;
        out.push_back(std::move(p));
    }
    return out;
}

/// Monic irreducibles of degree d in canonical (Less) order.
inline std::vector<Poly> irreducibles_of_degree(const GF& f, int d) {
    std::vector<Poly> out;
    for (auto& p : monic_of_degree(f, d))
        if (is_irreducible(f, p)) out.push_back(std::move(p));
    std::sort(out.begin(), out.end(), Less{});
    return out;
}

namespace detail {

// p-th root of a polynomial whose derivative vanishes
inline Poly pth_root(const GF& f, const Poly& a) {
    const std::uint64_t root_exp = f.q() / f.p(); // (c^(q/p))^p = c^q = c
    Poly r;
    for (std::size_t i = 0; i < a.size(); i += f.p()) r.push_back(f.pow(a[i], root_exp));
    trim(r);
    return r;
}

// square-free factorization of a monic polynomial: (factor, multiplicity)
inline void squarefree(const GF& f, const Poly& a, int mult, std::vector<std::pair<Poly, int>>& out) {
    if (deg(a) <= 0) return;
    Poly d = derivative(f, a);
    if (d.empty()) {
        squarefree(f, pth_root(f, a), mult * static_cast<int>(f.p()), out);
        return;
    }
    Poly c = gcd(f, a, d);
    Poly w = divmod(f, a, c).first;
    int i = 1;
    while (deg(w) > 0) {
        Poly y = gcd(f, w, c);
        Poly z = divmod(f, w, y).first;
        if (deg(z) > 0) out.emplace_back(monic(f, z), i * mult);
        ++i;
        w = y;
        c = divmod(f, c, y).first;
    }
    if (deg(c) > 0) squarefree(f, pth_root(f, c), mult * static_cast<int>(f.p()), out);
}

// equal-degree splitting (Cantor-Zassenhaus, odd q)
inline void equal_degree(const GF& f, const Poly& a, int d, std::mt19937_64& rng, std::vector<Poly>& out) {
    const int n = deg(a);
    if (n == d) {
        out.push_back(a);
        return;
    }
    const Integer e = (field_size(f, d) - 1) / 2;
    std::uniform_int_distribution<std::uint32_t> coeff(0, f.q() - 1);
    for (;;) {
        Poly r(static_cast<std::size_t>(n));
        for (auto& c : r) c = coeff(rng);
        trim(r);
        if (deg(r) <= 0) continue;
        Poly g = gcd(f, r, a);
        if (deg(g) > 0 && deg(g) < n) {
            equal_degree(f, g, d, rng, out);
            equal_degree(f, divmod(f, a, g).first, d, rng, out);
            return;
        }
        Poly s = sub(f, powmod(f, r, e, a), Poly{1});
        g = gcd(f, s, a);
        if (deg(g) > 0 && deg(g) < n) {
            equal_degree(f, g, d, rng, out);
            equal_degree(f, divmod(f, a, g).first, d, rng, out);
            return;
        }
    }
}

} // namespace detail

/// Factorization into monic irreducibles: a = lead(a) * prod p^e.
/// Deterministic: the splitting stage uses a fixed seed.
inline std::map<Poly, int, Less> factor(const GF& f, const Poly& a) {
    if (a.empty()) throw math_error("factor: zero polynomial");
    std::map<Poly, int, Less> out;
    std::mt19937_64 rng(0x5eed5eedULL);
    std::vector<std::pair<Poly, int>> sqf;
    detail::squarefree(f, monic(f, a), 1, sqf);
    for (const auto& [g, mult] : sqf) {
        // distinct-degree stage
        Poly rest = g, h = x();
        for (int d = 1; 2 * d <= deg(rest); ++d) {
            h = powmod(f, h, f.q(), rest);
            Poly part = gcd(f, sub(f, h, x()), rest);
            if (deg(part) > 0) {
                std::vector<Poly> pieces;
                detail::equal_degree(f, part, d, rng, pieces);
                for (auto& pc : pieces) out[monic(f, pc)] += mult;
                rest = divmod(f, rest, part).first;
                h = mod(f, h, rest);
            }
        }
        if (deg(rest) > 0) out[monic(f, rest)] += mult;
    }
    return out;
}

} // namespace poly

// ---------------------------------------------------------------------------
// residue fields F_q[t]/(m)

/// Finite extension F_q[t]/(m) for a monic irreducible m. The base field is
/// the case m = t. Elements are reduced polynomials; F^* is handled through
/// an exp/log table.
class ResidueField {
  public:
    static std::shared_ptr<const ResidueField> get(const GFPtr& base, const Poly& modulus) {
        static std::mutex mu;
        static std::map<std::pair<std::uint32_t, Poly>, std::shared_ptr<const ResidueField>> cache;
        std::lock_guard lock(mu);
        auto key = std::make_pair(base->q(), modulus);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        auto r = std::shared_ptr<const ResidueField>(new ResidueField(base, modulus));
        cache.emplace(std::move(key), r);
        return r;
    }
    static std::shared_ptr<const ResidueField> base_field(const GFPtr& base) { return get(base, poly::x()); }

    const GF& gf() const noexcept { return *base_; }
    const GFPtr& gf_ptr() const noexcept { return base_; }
    const Poly& modulus() const noexcept { return modulus_; }
    int degree() const noexcept { return poly::deg(modulus_); }
    std::uint64_t size() const noexcept { return size_; }

    Poly reduce(const Poly& a) const { return poly::mod(*base_, a, modulus_); }
    Poly one() const { return Poly{1}; }
    Poly from_base(Elem c) const { return poly::constant(c); }
    Poly add(const Poly& a, const Poly& b) const { return poly::add(*base_, a, b); }
    Poly neg(const Poly& a) const { return poly::sub(*base_, {}, a); }
    Poly mul(const Poly& a, const Poly& b) const { return poly::mulmod(*base_, a, b, modulus_); }
    Poly pow(const Poly& a, long long e) const {
        if (e < 0) return pow(inv(a), -e);
        if (a.empty()) return e == 0 ? one() : Poly{};
        return exp_[(log(a) * static_cast<std::uint64_t>(e % static_cast<long long>(size_ - 1))) % (size_ - 1)];
    }
    Poly inv(const Poly& a) const {
        if (a.empty()) throw math_error("inverse of zero in residue field");
        return exp_[(size_ - 1 - log(a)) % (size_ - 1)];
    }

    /// Index of an element: base-q digits are its coefficients.
    std::uint64_t index(const Poly& a) const {
        std::uint64_t r = 0;
        for (std::size_t i = a.size(); i-- > 0;) r = r * base_->q() + a[i];
        return r;
    }
    Poly element(std::uint64_t idx) const {
        Poly a;
        for (int i = 0; i < degree(); ++i, idx /= base_->q()) a.push_back(static_cast<Elem>(idx % base_->q()));
        poly::trim(a);
        return a;
    }

    std::uint64_t log(const Poly& a) const {
        if (a.empty()) throw math_error("log of zero in residue field");
        return log_[index(a)];
    }
    const Poly& primitive() const noexcept { return exp_[1 % (size_ - 1)]; }
    bool is_square(const Poly& a) const {
        if (a.empty()) throw math_error("is_square: zero input");
        return log(a) % 2 == 0;
    }
    /// Least-index nonsquare.
    const Poly& nonsquare() const noexcept { return nonsquare_; }
    bool minus_one_is_square() const { return (size_ - 1) % 4 == 0; }

  private:
    ResidueField(GFPtr base, Poly modulus) : base_(std::move(base)), modulus_(std::move(modulus)) {
        if (poly::lead(modulus_) != 1 || !poly::is_irreducible(*base_, modulus_))
            throw std::invalid_argument("residue field modulus must be monic irreducible");
        size_ = 1;
        for (int i = 0; i < degree(); ++i) size_ *= base_->q();
        if (size_ > (1u << 22)) throw std::invalid_argument("residue field too large for table arithmetic");
        const auto pf = detail::prime_factors(size_ - 1);
        Poly gen;
        for (std::uint64_t idx = 1; idx < size_; ++idx) {
            Poly g = element(idx);
            bool full = true;
            for (auto r : pf)
                if (poly::powmod(*base_, g, Integer((size_ - 1) / r), modulus_) == Poly{1}) {
                    full = false;
                    break;
                }
            if (full) {
                gen = g;
                break;
            }
        }
        exp_.resize(size_ - 1);
        log_.assign(size_, 0);
        Poly cur{1};
        for (std::uint64_t e = 0; e + 1 < size_; ++e) {
            exp_[e] = cur;
            log_[index(cur)] = e;
            cur = poly::mulmod(*base_, cur, gen, modulus_);
        }
        for (std::uint64_t idx = 1; idx < size_; ++idx)
            if (log_[idx] % 2 == 1) {
                nonsquare_ = element(idx);
                break;
            }
    }

    GFPtr base_;
    Poly modulus_;
    std::uint64_t size_ = 0;
    std::vector<Poly> exp_;
    std::vector<std::uint64_t> log_;
    Poly nonsquare_;
};

using ResidueFieldPtr = std::shared_ptr<const ResidueField>;

} // namespace mwrs
