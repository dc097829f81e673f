#pragma once

// Seeded generators for property tests.

#include <random>

#include <mwrs/function_field.hpp>

namespace gen {

using namespace mwrs;

inline Elem unit(const GF& f, std::mt19937_64& rng) { return static_cast<Elem>(1 + rng() % (f.q() - 1)); }

inline Poly polynomial(const GF& f, std::mt19937_64& rng, int max_deg) {
    Poly p(1 + rng() % (max_deg + 1));
    for (auto& c : p) c = static_cast<Elem>(rng() % f.q());
    poly::trim(p);
    return p;
}

inline Poly nonzero_polynomial(const GF& f, std::mt19937_64& rng, int max_deg) {
    while (true) {
        Poly p = polynomial(f, rng, max_deg);
        if (!p.empty()) return p;
    }
}

/// Small-height nonzero element of F_q(t).
inline RatFunc function(const GFPtr& f, std::mt19937_64& rng, int max_deg = 2) {
    return factor_divisor(f, nonzero_polynomial(*f, rng, max_deg), nonzero_polynomial(*f, rng, max_deg));
}

/// Element a with a != 0 and 1 - a != 0.
inline RatFunc steinberg_input(const GFPtr& f, std::mt19937_64& rng, int max_deg = 2) {
    while (true) {
        RatFunc a = function(f, rng, max_deg);
        if (!a.is_one()) return a;
    }
}

/// Nonzero element of k(x) for a residue field given as F_q[t]/(p).
inline Poly residue_unit(const ResidueField& k, std::mt19937_64& rng) {
    return k.element(1 + rng() % (k.size() - 1));
}

} // namespace gen
