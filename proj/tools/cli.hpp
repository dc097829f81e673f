#pragma once

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif
#include <nlohmann/json.hpp>

#include <mwrs/parse.hpp>
#include <mwrs/svpic.hpp>

namespace mwrs::cli {

using Json = nlohmann::ordered_json;

inline Json to_json(const AbGroupInvariants& g) {
    Json factors = Json::array();
    for (const auto& d : g.invariant_factors) factors.push_back(d.convert_to<long long>());
    return Json{{"free_rank", g.free_rank}, {"invariant_factors", factors}};
}

inline Json to_json(const PlaceSet& d) {
    Json a = Json::array();
    for (const auto& x : d) a.push_back(x.to_string());
    return a;
}

inline Json to_json(const std::vector<Integer>& v) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(x.convert_to<long long>());
    return a;
}

inline Json stabilized_json(const std::optional<int>& b) {
    return b ? Json(*b) : Json("not certified");
}

inline std::string stabilized_text(const std::optional<int>& b) {
    return b ? "stabilized at B = " + std::to_string(*b) : "not certified";
}

namespace detail {

struct Options {
    std::uint32_t q = 3;
    std::string remove;
    int l = 0;
    std::optional<int> bound;
    bool automatic = false;
    bool json = false;
    bool strict = false;
    std::string add, mul, form, terms, place, pi, specialize, residue, point;
};

inline GFPtr field(const Options& o) {
    if (o.q < 3 || o.q % 2 == 0) throw parse_error("q must be an odd prime power");
    try {
        return GF::get(o.q);
    } catch (const std::exception& e) {
        throw parse_error(e.what());
    }
}

inline std::vector<Poly> finite_entries(const GF& f, const std::string& list) {
    std::vector<Poly> out;
    for (const auto& s : split_top_level(list, ',')) {
        Elem a = parse_element(f, s);
        if (a == 0) throw parse_error("form entries must be nonzero");
        out.push_back(poly::constant(a));
    }
    return out;
}

inline RSProblem problem(const Options& o, int l) {
    auto f = field(o);
    RSProblem p{o.q, parse_place_set(*f, o.remove), l, o.bound};
    return p;
}

inline int cmd_gw(const Options& o, std::ostream& out) {
    auto f = field(o);
    auto k = ResidueField::base_field(f);
    const int given = !o.add.empty() + !o.mul.empty() + !o.form.empty();
    if (given != 1) throw parse_error("gw needs exactly one of --add, --mul, --form");
    GWFinite g;
    if (!o.form.empty()) {
        auto e = finite_entries(*f, o.form);
        g = {static_cast<long long>(e.size()), WittFinite::from_form({k, e})};
    } else {
        auto e = finite_entries(*f, o.add.empty() ? o.mul : o.add);
        const GWOp op = o.add.empty() ? GWOp::multiply : GWOp::add;
        g = op == GWOp::add ? GWFinite{0, WittFinite::zero(k)} : gw_unit(k, k->one());
        for (const auto& a : e) g = gw_combine(op, g, gw_unit(k, a));
    }
    const bool ns = gw_disc_nonsquare(g);
    const Elem disc = ns ? f->nonsquare() : 1;
    const GWFinite h = gw_combine(GWOp::add, gw_unit(k, k->one()), gw_unit(k, k->neg(k->one())));
    std::string name;
    if (g == h) name = "h (hyperbolic)";
    else if (g.rank == 0 && g.witt.is_zero()) name = "0";
    else {
        // anisotropic part plus copies of h
        auto rep = g.witt.representative();
        long long copies = (g.rank - static_cast<long long>(rep.size())) / 2;
        name = g.witt.is_zero() ? "" : format_witt(g.witt);
        if (copies != 0) name += (name.empty() ? "" : " + ") + (copies == 1 ? std::string("h") : std::to_string(copies) + "h");
    }
    if (o.json) {
        out << Json{{"q", o.q}, {"rank", g.rank}, {"disc", disc}, {"witt", g.witt.to_string()}, {"hyperbolic", g == h}}.dump()
            << "\n";
    } else {
        out << name << "; rank " << g.rank << ", disc " << disc << ", witt " << g.witt.to_string() << "\n";
    }
    return 0;
}

inline int cmd_witt(const Options& o, std::ostream& out) {
    auto f = field(o);
    if (o.form.empty()) throw parse_error("witt needs --form");
    FuncForm form{f, {}};
    for (const auto& e : split_top_level(o.form, ',')) form.entries.push_back(parse_function(f, e));
    const WittFunc w = WittFunc::from_form(form);
    Json j{{"q", o.q}, {"class", format_witt(w)}, {"odd_rank", w.odd_rank()}, {"in_i2", w.in_i2()}};
    std::string text = "class " + format_witt(w);
    if (!o.specialize.empty()) {
        const Place x = parse_place(*f, o.specialize);
        const auto s = witt_specialize(w, x);
        j["specialization"] = format_witt(s);
        text += "\nspecialization at " + format_place(x) + ": " + format_witt(s);
    }
    if (!o.residue.empty()) {
        const Place x = parse_place(*f, o.residue);
        RatFunc pi = o.pi.empty() ? canonical_uniformizer(f, x) : parse_function(f, o.pi);
        const auto r = second_residue(w, x, pi);
        j["second_residue"] = format_witt(r);
        text += "\nsecond residue at " + format_place(x) + ": " + format_witt(r);
    }
    out << (o.json ? j.dump() : text) << "\n";
    return 0;
}

inline int cmd_mw(const Options& o, std::ostream& out) {
    auto f = field(o);
    if (o.terms.empty()) throw parse_error("mw-normalize needs --terms");
    const MWFunc x = parse_mw(FuncOps{f}, o.terms);
    if (o.json) {
        out << Json{{"q", o.q}, {"degree", x.degree}, {"milnor", format_milnor(x)}, {"witt", format_witt(x.witt)},
                    {"zero", mw_is_zero(x)}}
                   .dump()
            << "\n";
    } else {
        out << "degree " << x.degree << "; milnor " << format_milnor(x) << "; witt " << format_witt(x.witt) << "\n";
    }
    return 0;
}

inline int cmd_residue(const Options& o, std::ostream& out) {
    auto f = field(o);
    if (o.terms.empty() || o.place.empty()) throw parse_error("residue needs --terms and --place");
    const MWFunc x = parse_mw(FuncOps{f}, o.terms);
    const Place p = parse_place(*f, o.place);
    const RatFunc pi = o.pi.empty() ? canonical_uniformizer(f, p) : parse_function(f, o.pi);
    const MWFinite r = mw_residue(x, p, pi);
    if (o.json) {
        out << Json{{"q", o.q}, {"place", p.to_string()}, {"degree", r.degree}, {"milnor", format_milnor(r)},
                    {"witt", format_witt(r.witt)}}
                   .dump()
            << "\n";
    } else {
        out << "residue at " << format_place(p) << ": degree " << r.degree << "; milnor " << format_milnor(r)
            << "; witt " << format_witt(r.witt) << "\n";
    }
    return 0;
}

inline Json target_json(const TargetLayout& layout) {
    Json a = Json::array();
    for (const auto& c : layout.coordinates())
        a.push_back(Json{{"place", c.place.to_string()}, {"label", c.label}, {"torsion", c.torsion.convert_to<long long>()}});
    return a;
}

inline int cmd_rs(const Options& o, std::ostream& out) {
    const RSProblem p = problem(o, o.l);
    const RSResult r = rs_cohomology(p);
    if (o.json) {
        out << Json{{"q", o.q},
                    {"removed", to_json(p.removed)},
                    {"l", o.l},
                    {"h0", to_json(r.h0)},
                    {"h1", to_json(r.h1)},
                    {"generators_used", r.generators_used},
                    {"stabilized_at", stabilized_json(r.stabilized_at)},
                    {"final_bound", r.final_bound},
                    {"target_coordinates", target_json(r.snapshot.layout)}}
                   .dump()
            << "\n";
    } else {
        out << "H0 = " << r.h0.to_string() << "\nH1 = " << r.h1.to_string() << "\n"
            << stabilized_text(r.stabilized_at) << " (computed up to B = " << r.final_bound << ", "
            << r.generators_used << " generators)\n";
    }
    return (o.strict && !r.stabilized_at) ? 1 : 0;
}

inline int cmd_picard(const Options& o, std::ostream& out) {
    const RSProblem p = problem(o, 0);
    const auto r = relative_picard(p.q, p.removed, p.bound);
    if (o.json) {
        Json deg = Json::array();
        for (const auto& [x, d] : r.degree_map) deg.push_back(Json{{"place", x.to_string()}, {"degree", d}});
        out << Json{{"q", o.q},
                    {"removed", to_json(p.removed)},
                    {"invariants", to_json(r.invariants)},
                    {"stabilized_at", stabilized_json(r.stabilized_at)},
                    {"final_bound", r.snapshot.bound},
                    {"degree_map", deg}}
                   .dump()
            << "\n";
    } else {
        out << "Pic = " << r.invariants.to_string() << "\n" << stabilized_text(r.stabilized_at) << "\n";
        if (!r.degree_map.empty()) out << "degree map: each place to its degree\n";
    }
    return (o.strict && !r.stabilized_at) ? 1 : 0;
}

inline int cmd_compare(const Options& o, std::ostream& out) {
    const RSProblem p = problem(o, 0);
    const RSResult rs = rs_cohomology(p);
    const PicSnapshot pic = relative_picard_at(p.q, p.removed, rs.snapshot.bound);
    const ComparisonResult c = rank_comparison(rs.snapshot, pic);
    if (o.json) {
        out << Json{{"q", o.q},
                    {"removed", to_json(p.removed)},
                    {"bound", rs.snapshot.bound},
                    {"stabilized_at", stabilized_json(rs.stabilized_at)},
                    {"h1", to_json(rs.h1)},
                    {"picard", to_json(pic.invariants)},
                    {"well_defined", c.well_defined},
                    {"surjective", c.surjective},
                    {"kernel", to_json(c.kernel)}}
                   .dump()
            << "\n";
    } else {
        out << "rank: " << rs.h1.to_string() << " -> " << pic.invariants.to_string() << "\n"
            << (c.surjective ? "surjective" : "not surjective") << ", kernel " << c.kernel.to_string() << "\n";
    }
    return (o.strict && !rs.stabilized_at) ? 1 : 0;
}

inline int cmd_theta(const Options& o, std::ostream& out) {
    const RSProblem p = problem(o, 0);
    if (o.point.empty()) throw parse_error("theta needs --point");
    const Place y = parse_place(*GF::get(o.q), o.point);
    if (p.removed.count(y)) throw math_error("point lies in D");
    const RSResult rs = rs_cohomology(p);
    // a point beyond the stabilized bound is handled at its own degree
    const RSSnapshot snap =
        y.degree() > rs.snapshot.bound && !p.bound ? rs_cohomology_at(p, y.degree()) : rs.snapshot;
    if (y.degree() > snap.bound) throw math_error("point outside the computed bound");
    const auto coords = theta_class(snap, y);
    const PicSnapshot pic = relative_picard_at(p.q, p.removed, snap.bound);
    const auto img = apply_rank(snap, pic, theta_vector(snap, y));
    const Integer deg = divisor_class_degree(pic, img);
    if (o.json) {
        out << Json{{"q", o.q},
                    {"removed", to_json(p.removed)},
                    {"point", y.to_string()},
                    {"bound", snap.bound},
                    {"h1", to_json(snap.h1)},
                    {"coordinates", to_json(coords)},
                    {"coordinate_orders", to_json(CokernelCoordinates(snap.relations.basis_matrix()).orders())},
                    {"divisor_degree", deg.convert_to<long long>()}}
                   .dump()
            << "\n";
    } else {
        out << "Theta(<1>_" << format_place(y) << ") in H1 = " << snap.h1.to_string() << ": " << to_json(coords).dump()
            << "\ndivisor degree " << deg << "\n";
    }
    return 0;
}

} // namespace detail

/// Runs one command line (without the program name). Exit codes: 0 success,
/// 1 computation error or uncertified result under --strict, 2 usage error.
inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    detail::Options o;
    CLI::App app{"Milnor-Witt K-theory and Rost-Schmid cohomology of (P^1, D) over finite fields", "mwrs"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    auto common = [&](CLI::App* c) {
        c->add_option("--q", o.q, "odd prime power")->required();
        c->add_flag("--json", o.json, "machine-readable output");
    };
    auto cohom = [&](CLI::App* c) {
        c->add_option("--remove", o.remove, "removed places D, comma separated (0, inf, [c0,...,1])");
        auto* b = c->add_option("--bound", o.bound, "support degree bound (acts as a cap on the search)");
        auto* a = c->add_flag("--auto", o.automatic, "search bounds automatically (default)");
        b->excludes(a);
        c->add_flag("--strict", o.strict, "exit 1 when stabilization is not certified");
    };

    auto* gw = app.add_subcommand("gw", "Grothendieck-Witt arithmetic over F_q");
    common(gw);
    gw->add_option("--add", o.add, "sum of unit forms <a>, comma separated");
    gw->add_option("--mul", o.mul, "product of unit forms <a>, comma separated");
    gw->add_option("--form", o.form, "diagonal form entries");

    auto* witt = app.add_subcommand("witt", "Witt class of a diagonal form over F_q(t)");
    common(witt);
    witt->add_option("--form", o.form, "entries, comma separated")->required();
    witt->add_option("--specialize", o.specialize, "place to specialize at");
    witt->add_option("--residue", o.residue, "place for the second residue");
    witt->add_option("--pi", o.pi, "uniformizer (default: canonical)");

    auto* mw = app.add_subcommand("mw-normalize", "normal form of a Milnor-Witt expression over F_q(t)");
    common(mw);
    mw->add_option("--terms", o.terms, "expression, e.g. \"[t]+eta*[t][t+1]\"")->required();

    auto* res = app.add_subcommand("residue", "residue of a Milnor-Witt expression at a place");
    common(res);
    res->add_option("--terms", o.terms, "expression")->required();
    res->add_option("--place", o.place, "place")->required();
    res->add_option("--pi", o.pi, "uniformizer (default: canonical)");

    auto* rs = app.add_subcommand("rs-cohom", "H0 and H1 of the relative Rost-Schmid complex");
    common(rs);
    cohom(rs);
    rs->add_option("--l", o.l, "degree l in {-1, 0, 1}")->check(CLI::Range(-1, 1));

    auto* pic = app.add_subcommand("picard", "relative Picard group Pic(P^1, D)");
    common(pic);
    cohom(pic);

    auto* cmp = app.add_subcommand("compare", "rank comparison H1 -> Pic(P^1, D)");
    common(cmp);
    cohom(cmp);

    auto* th = app.add_subcommand("theta", "point class Theta(<1>_y) in H1");
    common(th);
    cohom(th);
    th->add_option("--point", o.point, "place y outside D")->required();

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (gw->parsed()) return detail::cmd_gw(o, out);
        if (witt->parsed()) return detail::cmd_witt(o, out);
        if (mw->parsed()) return detail::cmd_mw(o, out);
        if (res->parsed()) return detail::cmd_residue(o, out);
        if (rs->parsed()) return detail::cmd_rs(o, out);
        if (pic->parsed()) return detail::cmd_picard(o, out);
        if (cmp->parsed()) return detail::cmd_compare(o, out);
        if (th->parsed()) return detail::cmd_theta(o, out);
    } catch (const parse_error& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

} // namespace mwrs::cli
