// dendro: command-line surface for the tree-category and dendroidal-set
// toolkit. Every predicate is truncation-relative; all bounds are explicit
// flags. Exit code 0 iff all requested checks pass.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "dendro/closed_ops.hpp"
#include "dendro/flavors.hpp"
#include "dendro/homotopy.hpp"
#include "dendro/json_io.hpp"
#include "dendro/normality.hpp"
#include "dendro/verify.hpp"

using namespace dendro;

namespace {

int g_threads = 1;  // cap on internal parallelism; current code paths are sequential

Flavor parse_flavor(const std::string& name) {
    auto f = flavor_from_name(name);
    if (!f) throw CLI::ValidationError("flavor", "expected general|open|closed");
    return *f;
}

ordered_json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    ordered_json j;
    in >> j;
    return j;
}

void emit(const ordered_json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        out << j.dump(2) << "\n";
    }
}

int report_exit(const VerifyReport& r, bool as_json) {
    if (as_json) {
        std::cout << r.to_json().dump(2) << "\n";
    } else {
        for (const auto& c : r.checks)
            std::cout << (c.status == "pass" ? "[PASS] " : (c.status == "fail" ? "[FAIL] " : "[????] "))
                      << c.name << (c.counts.is_null() ? "" : " " + c.counts.dump()) << "\n";
    }
    return r.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dendro: finite combinatorics of dendroidal sets"};
    app.require_subcommand(1);
    app.add_option("--threads", g_threads, "cap internal parallelism (current build is sequential)")
        ->capture_default_str();

    std::string flavor_name_opt = "general";
    std::string term, term2, format = "term", in_path, out_path, mode;
    int max_size = 4, max_arity = 6, level_n = 0, shom_k = 0;
    long long budget = 100000;
    bool as_json = false;
    bool timings = false;

    // trees enum|info|dot
    auto* trees = app.add_subcommand("trees", "tree enumeration and inspection");
    trees->require_subcommand(1);
    auto* tenum = trees->add_subcommand("enum", "list isomorphism classes up to a size bound");
    tenum->add_option("--max-size", max_size)->capture_default_str();
    tenum->add_option("--flavor", flavor_name_opt)->capture_default_str();
    tenum->add_option("--format", format, "term|json|dot")->capture_default_str();
    tenum->callback([&] {
        Flavor f = parse_flavor(flavor_name_opt);
        for (const auto& t : enumerate_trees(max_size, f)) {
            if (format == "term")
                std::cout << print_term(t) << "\n";
            else if (format == "json")
                std::cout << tree_to_json(t).dump() << "\n";
            else if (format == "dot")
                std::cout << to_dot(t) << "\n";
            else
                throw CLI::ValidationError("format", "expected term|json|dot");
        }
    });
    auto* tinfo = trees->add_subcommand("info", "size, edges, automorphisms of a term");
    tinfo->add_option("--term", term)->required();
    tinfo->add_option("--flavor", flavor_name_opt)->capture_default_str();
    tinfo->callback([&] {
        Tree t = parse_term(term, parse_flavor(flavor_name_opt));
        ordered_json j{{"term", print_term(t)},
                       {"flavor", flavor_name(t.flavor())},
                       {"size", t.size()},
                       {"edges", t.n_edges()},
                       {"vertices", t.n_vertices()},
                       {"inner_edges", static_cast<int>(t.inner_edges().size())},
                       {"automorphisms", static_cast<int>(automorphisms(t).size())}};
        std::cout << j.dump(2) << "\n";
    });
    auto* tdot = trees->add_subcommand("dot", "DOT export of a term");
    tdot->add_option("--term", term)->required();
    tdot->add_option("--flavor", flavor_name_opt)->capture_default_str();
    tdot->callback([&] { std::cout << to_dot(parse_term(term, parse_flavor(flavor_name_opt))); });

    // hom
    auto* hom = app.add_subcommand("hom", "list all morphisms between two terms");
    hom->add_option("--src", term)->required();
    hom->add_option("--dst", term2)->required();
    hom->add_option("--flavor", flavor_name_opt)->capture_default_str();
    hom->add_flag("--json", as_json);
    hom->callback([&] {
        Flavor f = parse_flavor(flavor_name_opt);
        auto maps = hom_set(parse_term(term, f), parse_term(term2, f));
        if (as_json) {
            ordered_json arr = ordered_json::array();
            for (const auto& m : maps) arr.push_back(morphism_id(m));
            std::cout << ordered_json{{"count", maps.size()}, {"morphisms", arr}}.dump(2) << "\n";
        } else {
            for (const auto& m : maps) std::cout << m.describe() << "\n";
            std::cout << maps.size() << " morphisms\n";
        }
    });

    // aut
    auto* aut = app.add_subcommand("aut", "automorphism group of a term");
    aut->add_option("--term", term)->required();
    aut->add_option("--flavor", flavor_name_opt)->capture_default_str();
    aut->callback([&] {
        Flavor f = parse_flavor(flavor_name_opt);
        auto as = automorphisms(parse_term(term, f));
        for (const auto& a : as) std::cout << a.describe() << "\n";
        std::cout << "order " << as.size() << "\n";
    });

    // presheaf check|sk|cosk
    auto* psh = app.add_subcommand("presheaf", "presheaf utilities");
    psh->require_subcommand(1);
    auto* pcheck = psh->add_subcommand("check", "functoriality audit of a presheaf file");
    pcheck->add_option("--in", in_path)->required();
    pcheck->callback([&] {
        Presheaf x = presheaf_from_json(load_json(in_path));
        std::string why;
        bool ok = x.check_functorial(&why);
        std::cout << (ok ? "functorial\n" : "NOT functorial: " + why + "\n");
        if (!ok) throw CLI::RuntimeError(1);
    });
    auto* psk = psh->add_subcommand("sk", "skeleton of a presheaf");
    psk->add_option("--in", in_path)->required();
    psk->add_option("--n", level_n)->required();
    psk->add_option("--out", out_path);
    psk->callback([&] {
        auto x = std::make_shared<Presheaf>(presheaf_from_json(load_json(in_path)));
        emit(presheaf_to_json(*skeleton(x, level_n).object), out_path);
    });
    auto* pcosk = psh->add_subcommand("cosk", "evaluate a coskeleton at a tree");
    pcosk->add_option("--in", in_path)->required();
    pcosk->add_option("--n", level_n)->required();
    pcosk->add_option("--at", term, "tree term to evaluate at")->required();
    pcosk->callback([&] {
        Presheaf x = presheaf_from_json(load_json(in_path));
        LeanObject lean = coskeleton(x, level_n);
        Tree t = parse_term(term, x.site().flavor());
        std::cout << ordered_json{{"tree", print_term(t)},
                                  {"degree", level_n},
                                  {"value", lean.evaluate(t).size()}}
                         .dump(2)
                  << "\n";
    });

    // normal check
    auto* normal = app.add_subcommand("normal", "normality checks");
    auto* ncheck = normal->add_subcommand("check", "freeness of automorphism actions");
    ncheck->add_option("--in", in_path)->required();
    ncheck->add_option("--max-size", max_size)->capture_default_str();
    ncheck->callback([&] {
        Presheaf x = presheaf_from_json(load_json(in_path));
        bool ok = is_normal_upto(x, max_size);
        std::cout << (ok ? "normal" : "not normal") << " up to size " << max_size << "\n";
        if (!ok) throw CLI::RuntimeError(1);
    });

    // lift solve|family
    auto* lift = app.add_subcommand("lift", "lifting problems");
    lift->require_subcommand(1);
    auto* lsolve = lift->add_subcommand(
        "solve", "solve one lifting problem from a bundle {left,right,top,bottom}");
    lsolve->add_option("--in", in_path, "bundle with four map objects")->required();
    lsolve->callback([&] {
        ordered_json j = load_json(in_path);
        auto read_map = [&](const char* key) {
            auto src = std::make_shared<Presheaf>(presheaf_from_json(j.at(key).at("source")));
            auto dst = std::make_shared<Presheaf>(presheaf_from_json(j.at(key).at("target")));
            return PresheafMap(src, dst,
                               j.at(key).at("components").get<std::vector<std::vector<int>>>());
        };
        LiftingProblem prob(read_map("left"), read_map("right"), read_map("top"),
                            read_map("bottom"));
        auto h = solve_lift(prob);
        if (h) {
            std::cout << ordered_json{{"solved", true}, {"components", h->components()}}.dump(2)
                      << "\n";
        } else {
            std::cout << ordered_json{{"solved", false}}.dump(2) << "\n";
            throw CLI::RuntimeError(1);
        }
    });
    auto* lfam = lift->add_subcommand("family", "RLP of a map against a generator family");
    lfam->add_option("--in", in_path, "bundle with one map object {source,target,components}")
        ->required();
    lfam->add_option("--family", mode, "boundaries|horns")->required();
    lfam->add_option("--max-size", max_size)->capture_default_str();
    lfam->callback([&] {
        ordered_json j = load_json(in_path);
        auto src = std::make_shared<Presheaf>(presheaf_from_json(j.at("source")));
        auto dst = std::make_shared<Presheaf>(presheaf_from_json(j.at("target")));
        PresheafMap p(src, dst, j.at("components").get<std::vector<std::vector<int>>>());
        bool ok;
        if (mode == "boundaries")
            ok = is_trivial_fib_upto(p, max_size);
        else if (mode == "horns")
            ok = is_inner_fib_upto(p, max_size);
        else
            throw CLI::ValidationError("family", "expected boundaries|horns");
        std::cout << (ok ? "has RLP" : "fails RLP") << " against " << mode << " up to size "
                  << max_size << "\n";
        if (!ok) throw CLI::RuntimeError(1);
    });

    // gset verify
    auto* gset = app.add_subcommand("gset", "finite G-set checks");
    auto* gverify =
        gset->add_subcommand("verify", "exhaustive LLP characterization for a cyclic group");
    int cyclic_k = 2, max_carrier = 4;
    gverify->add_option("--cyclic", cyclic_k, "order of the cyclic group")->capture_default_str();
    gverify->add_option("--max-carrier", max_carrier)->capture_default_str();
    gverify->add_flag("--json", as_json);
    gverify->callback([&] {
        FiniteGroup g = FiniteGroup::cyclic(cyclic_k);
        auto gsets = all_gsets_upto(g, max_carrier);
        long long checked = 0, bad = 0;
        for (const auto& x : gsets)
            for (const auto& y : gsets)
                for (const auto& f : equivariant_maps(x, y)) {
                    ++checked;
                    if (has_llp_generator(f) != (f.is_injective() && free_on_complement(f))) ++bad;
                }
        ordered_json j{{"group", "C" + std::to_string(cyclic_k)},
                       {"gsets", gsets.size()},
                       {"maps_checked", checked},
                       {"discrepancies", bad}};
        std::cout << j.dump(as_json ? 2 : -1) << "\n";
        if (bad) throw CLI::RuntimeError(1);
    });

    // tower reindex
    auto* tower = app.add_subcommand("tower", "tower reindexing");
    auto* treindex = tower->add_subcommand("reindex", "reindex a strict tower map");
    treindex->add_option("--in", in_path)->required();
    treindex->add_option("--mode", mode, "injective|free-complement")->required();
    treindex->add_option("--out", out_path);
    treindex->callback([&] {
        GSetTowerMap f = tower_map_from_json(load_json(in_path));
        if (mode == "injective") {
            GSetTowerMap r = reindex_to_injective(f);
            emit(tower_map_to_json(r), out_path);
        } else if (mode == "free-complement") {
            auto out = reindex_free_complement(f);
            if (!out) {
                std::cout << ordered_json{{"status", "inconclusive"}}.dump(2) << "\n";
                throw CLI::RuntimeError(2);
            }
            ordered_json j = tower_map_to_json(out->map);
            j["theta"] = out->theta;
            j["status"] = "ok";
            emit(j, out_path);
        } else {
            throw CLI::ValidationError("mode", "expected injective|free-complement");
        }
    });

    // ass verify
    auto* ass = app.add_subcommand("ass", "associative operad battery");
    auto* averify = ass->add_subcommand("verify", "operation counts and matching maps");
    averify->add_option("--max-arity", max_arity)->capture_default_str();
    averify->add_option("--max-size", max_size, "closed-tree size bound for the nerve checks")
        ->capture_default_str();
    averify->add_flag("--json", as_json);
    auto ass_battery = [&] {
        VerifyReport rep;
        rep.suite = "ass";
        bool ok = true;
        ordered_json arities = ordered_json::array();
        long long fact = 1;
        for (int n = 0; n <= max_arity; ++n) {
            if (n > 0) fact *= n;
            bool count_ok = static_cast<long long>(linear_orders(n).size()) == fact;
            if (!count_ok) ok = false;
            ordered_json entry{{"arity", n}, {"operations", fact}, {"count_ok", count_ok}};
            if (n >= 1 && n <= 6) {
                MatchingReport r = matching_report(n);
                entry["matching"] = r.matching_card;
                entry["image"] = r.image_card;
                entry["injective"] = r.injective;
                entry["bijective"] = r.bijective;
            }
            arities.push_back(std::move(entry));
        }
        const Site& cs = Site::get(Flavor::Closed, max_size);
        Presheaf nerve = closed_nerve_ass(cs);
        bool functorial = nerve.check_functorial();
        bool normal_ok = is_normal_upto(nerve, max_size);
        bool fillers = nerve_has_unique_very_inner_fillers(nerve, max_size);
        auto m = coskeletal_degree_search(nerve, max_size);
        if (!functorial || !normal_ok || !fillers || !m) ok = false;
        rep.checks.push_back({"ass_battery", ok ? "pass" : "fail",
                              ordered_json{{"arities", arities},
                                           {"nerve_functorial", functorial},
                                           {"nerve_normal", normal_ok},
                                           {"unique_very_inner_fillers", fillers},
                                           {"coskeletal_degree", m ? *m : -1}},
                              -1});
        std::exit(report_exit(rep, as_json));
    };
    averify->callback(ass_battery);

    // build-e
    auto* builde = app.add_subcommand("build-e", "iterated boundary-filler gluing");
    builde->add_option("--max-size", max_size)->capture_default_str();
    builde->add_option("--flavor", flavor_name_opt)->capture_default_str();
    builde->add_option("--budget", budget)->capture_default_str();
    builde->add_option("--out", out_path);
    builde->callback([&] {
        const Site& site = Site::get(parse_flavor(flavor_name_opt), max_size);
        EConstructionState st = build_E(site, budget);
        ordered_json glue = ordered_json::array();
        for (const auto& g : st.glue)
            glue.push_back(ordered_json{{"level", g.level},
                                        {"tree", g.tree_key},
                                        {"attachments", g.attachments}});
        ordered_json j{{"flavor", flavor_name(site.flavor())},
                       {"max_size", max_size},
                       {"complete", st.complete},
                       {"failed_level", st.failed_level},
                       {"glue", std::move(glue)},
                       {"object", st.levels.empty() ? ordered_json(nullptr)
                                                    : presheaf_to_json(*st.top())}};
        emit(j, out_path);
        if (!st.complete) throw CLI::RuntimeError(2);
    });

    // shom
    auto* shom = app.add_subcommand("shom", "simplicial hom levels against a coskeleton");
    std::string y_path;
    shom->add_option("--x", in_path, "presheaf file for the source")->required();
    shom->add_option("--y", y_path, "presheaf file whose coskeleton is the target")->required();
    shom->add_option("--degree", level_n, "coskeletal degree of the target")->required();
    shom->add_option("--k", shom_k, "simplicial level")->capture_default_str();
    shom->callback([&] {
        Presheaf x = presheaf_from_json(load_json(in_path));
        Presheaf y = presheaf_from_json(load_json(y_path));
        LeanObject lean = coskeleton(y, level_n);
        auto maps = shom_level(x, lean, shom_k);
        std::cout << ordered_json{{"k", shom_k}, {"value", maps.size()}}.dump(2) << "\n";
    });

    // verify all | verify ass
    auto* verify = app.add_subcommand("verify", "verification batteries");
    auto* vass = verify->add_subcommand("ass", "alias for `ass verify`");
    vass->add_option("--max-arity", max_arity)->capture_default_str();
    vass->add_option("--max-size", max_size)->capture_default_str();
    vass->add_flag("--json", as_json);
    vass->callback(ass_battery);
    auto* vall = verify->add_subcommand("all", "run the full acceptance battery");
    std::string level = "quick";
    vall->add_option("--level", level, "quick|full")->capture_default_str();
    vall->add_flag("--json", as_json);
    vall->add_flag("--timings", timings, "include wall times (breaks byte-identical output)");
    vall->add_option("--budget", budget)->capture_default_str();
    vall->callback([&] {
        VerifyOptions opts;
        opts.quick = level != "full";
        opts.timings = timings;
        opts.e_budget = budget;
        std::exit(report_exit(run_verification_battery(opts), as_json));
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
