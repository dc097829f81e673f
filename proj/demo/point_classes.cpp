// Prints H^0, H^1 and Pic for P^1, A^1 and G_m over F_q, then the classes of
// the rational points of A^1 in H^1.
//
//   point_classes [q]

#include <cstdio>
#include <cstdlib>

#include <mwrs/svpic.hpp>

using namespace mwrs;

int main(int argc, char** argv) {
    const std::uint32_t q = argc > 1 ? static_cast<std::uint32_t>(std::atoi(argv[1])) : 3;
    const GF& f = *GF::get(q);
    const std::pair<const char*, PlaceSet> curves[] = {
        {"P1", {}}, {"A1", {Place::inf()}}, {"Gm", {Place::rational(f, 0), Place::inf()}}};

    for (const auto& [name, d] : curves) {
        RSProblem p;
        p.q = q;
        p.removed = d;
        const RSResult rs = rs_cohomology(p);
        const auto pic = relative_picard(q, d, std::nullopt);
        const auto cmp = rank_comparison(rs.snapshot, relative_picard_at(q, d, rs.final_bound));
        std::printf("%-3s H0 = %-6s H1 = %-14s Pic = %-10s rank kernel = %s\n", name, rs.h0.to_string().c_str(),
                    rs.h1.to_string().c_str(), pic.invariants.to_string().c_str(), cmp.kernel.to_string().c_str());
    }

    RSProblem a1;
    a1.q = q;
    a1.removed = {Place::inf()};
    const RSResult r = rs_cohomology(a1);
    std::printf("\nTheta(<1>_y) on A1, H1 = %s\n", r.h1.to_string().c_str());
    for (Elem a = 0; a < q; ++a) {
        const Place y = Place::rational(f, a);
        std::printf("  y = %-6s", y.to_string().c_str());
        for (const auto& c : theta_class(r, y)) std::printf(" %s", c.str().c_str());
        std::printf("\n");
    }
}
