#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dendro/lean.hpp"
#include "dendro/lifting.hpp"

using namespace dendro;

namespace {
PresheafPtr ptr(Presheaf p) { return std::make_shared<Presheaf>(std::move(p)); }

PresheafMap to_terminal(PresheafPtr x) {
    auto term = ptr(Presheaf::terminal(x->site()));
    std::vector<std::vector<int>> comp(static_cast<std::size_t>(x->site().n_trees()));
    for (int t = 0; t < x->site().n_trees(); ++t)
        comp[static_cast<std::size_t>(t)].assign(static_cast<std::size_t>(x->card(t)), 0);
    return PresheafMap(x, term, std::move(comp), false);
}

PresheafMap from_empty(PresheafPtr x) {
    auto zero = ptr(Presheaf::empty(x->site()));
    std::vector<std::vector<int>> comp(static_cast<std::size_t>(x->site().n_trees()));
    return PresheafMap(zero, x, std::move(comp), false);
}

PresheafPtr random_presheaf(const Site& site, std::mt19937& rng, int max_summands = 2) {
    std::uniform_int_distribution<int> pick_tree(0, site.n_trees() - 1);
    std::uniform_int_distribution<int> n_summands(1, max_summands);
    PresheafPtr acc = ptr(Presheaf::empty(site));
    int k = n_summands(rng);
    for (int i = 0; i < k; ++i) {
        Representable r = representable(site, site.tree(pick_tree(rng)));
        acc = coproduct(acc, r.presheaf).object;
    }
    return acc;
}
}  // namespace

TEST_CASE("identity lifts") {
    const Site& site = Site::get(Flavor::General, 3);
    Representable rc2 = representable(site, corolla(2));
    auto x = rc2.presheaf;
    Subobject bd = boundary(rc2);
    PresheafMap incl = bd.inclusion();

    // p = identity: lift exists (the bottom map)
    {
        LiftingProblem prob(incl, identity_map(x), incl, identity_map(x));
        auto h = solve_lift(prob);
        REQUIRE(h.has_value());
        CHECK(*h == identity_map(x));
    }
    // i = identity: lift exists (the top map)
    {
        PresheafMap tt = to_terminal(x);
        LiftingProblem prob(identity_map(x), tt, identity_map(x), tt);
        auto h = solve_lift(prob);
        REQUIRE(h.has_value());
        CHECK(*h == identity_map(x));
    }
}

TEST_CASE("horn of the linear 2-tree against terminal lifts") {
    const Site& site = Site::get(Flavor::General, 4);
    Tree lin2 = linear_tree(2);
    Representable rep = representable(site, lin2);
    Subobject h = horn(rep, 1);
    auto term = ptr(Presheaf::terminal(site));
    PresheafMap p = identity_map(term);
    PresheafMap i = h.inclusion();
    CHECK(has_rlp(i, p));
}

TEST_CASE("terminal has RLP against every family") {
    const Site& site = Site::get(Flavor::General, 3);
    auto term = ptr(Presheaf::terminal(site));
    PresheafMap p = identity_map(term);
    CHECK(has_rlp_family(p, boundary_inclusions(site, 3)));
    CHECK(has_rlp_family(p, horn_inclusions(site, 3)));
    CHECK(is_trivial_fib_upto(p, 3));
}

TEST_CASE("representable to terminal fails RLP against some boundary") {
    const Site& site = Site::get(Flavor::General, 3);
    Representable rc2 = representable(site, corolla(2));
    PresheafMap p = to_terminal(rc2.presheaf);
    CHECK(!is_trivial_fib_upto(p, 3));
}

TEST_CASE("solver soundness and completeness against naive enumeration") {
    const Site& site = Site::get(Flavor::General, 3);
    std::mt19937 rng(17);
    int instances = 0;
    while (instances < 12) {
        auto a = random_presheaf(site, rng);
        auto b = random_presheaf(site, rng);
        Subobject sk = skeleton(b, 1);
        PresheafMap i = sk.inclusion();
        auto x = random_presheaf(site, rng);
        PresheafMap p = to_terminal(x);
        auto tops = hom_maps(sk.object, x);
        auto bottoms = hom_maps(b, p.target_ptr());
        if (tops.empty() || bottoms.empty()) continue;
        // candidate maps b -> x for naive check
        auto candidates = hom_maps(b, x);
        if (candidates.size() > 200) continue;
        for (const auto& top : tops)
            for (const auto& bottom : bottoms) {
                if (!(compose(p, top) == compose(bottom, i))) continue;
                LiftingProblem prob(i, p, top, bottom);
                auto got = solve_lift(prob);
                // naive search
                std::optional<PresheafMap> naive;
                for (const auto& h : candidates) {
                    if (compose(h, i) == top && compose(p, h) == bottom) {
                        naive = h;
                        break;
                    }
                }
                CHECK(got.has_value() == naive.has_value());
                if (got) {
                    CHECK(compose(*got, i) == top);
                    CHECK(compose(p, *got) == bottom);
                }
                ++instances;
            }
    }
    CHECK(instances >= 12);
}

TEST_CASE("coskeletal reduction of boundary inclusions") {
    const Site& site = Site::get(Flavor::General, 4);
    for (int t = 0; t < site.n_trees(); ++t) {
        const Tree& tr = site.tree(t);
        Representable rep = representable(site, tr);
        PresheafMap incl = boundary(rep).inclusion();
        for (int n = 0; n <= 4; ++n) {
            PresheafMap red = coskeletal_reduction(incl, n);
            if (tr.size() != n) {
                CHECK(red.is_isomorphism());
            } else {
                CHECK(!red.is_isomorphism());
                // the reduced map is the boundary inclusion again: source
                // matches the boundary and target the representable
                for (int s = 0; s < site.n_trees(); ++s) {
                    CHECK(red.source().card(s) == incl.source().card(s));
                    CHECK(red.target().card(s) == rep.presheaf->card(s));
                }
                CHECK(red.is_injective());
            }
        }
    }
}

TEST_CASE("reduction for identity maps is an isomorphism") {
    const Site& site = Site::get(Flavor::General, 3);
    Representable rc = representable(site, corolla(2));
    for (int n = 0; n <= 3; ++n)
        CHECK(coskeletal_reduction(identity_map(rc.presheaf), n).is_isomorphism());
}

TEST_CASE("lifting against a coskeletal object is invariant under reduction") {
    const Site& site = Site::get(Flavor::General, 3);
    std::mt19937 rng(3);
    for (int trial = 0; trial < 6; ++trial) {
        auto data = random_presheaf(site, rng);
        for (int n = 0; n <= 2; ++n) {
            LeanObject lean = coskeleton(*data, n);
            auto xn = ptr(materialize(lean, site));       // n-coskeletal
            auto xm = n == 0 ? ptr(Presheaf::terminal(site))
                             : ptr(materialize(coskeleton(*xn, n - 1), site));
            // p: cosk_n -> cosk_{n-1} unit-induced map
            PresheafMap p = n == 0 ? to_terminal(xn) : coskeleton_unit(xn, n - 1);
            for (auto& i : boundary_inclusions(site, 3)) {
                bool direct = has_rlp(i, p);
                PresheafMap red = coskeletal_reduction(i, n);
                bool reduced;
                if (red.is_isomorphism()) {
                    reduced = true;
                } else {
                    // lifting the reduced problem against data -> *
                    PresheafMap q = to_terminal(xn);
                    reduced = has_rlp(red, q);
                }
                CHECK(direct == reduced);
            }
        }
    }
}

TEST_CASE("retract stability of LLP") {
    const Site& site = Site::get(Flavor::General, 3);
    Representable re = representable(site, eta());
    // g: empty -> eta + eta, f: empty -> eta is a retract of g
    auto ee = coproduct(re.presheaf, re.presheaf);
    PresheafMap g = from_empty(ee.object);
    PresheafMap f = from_empty(re.presheaf);
    // retract data: eta -> eta+eta (first injection), fold back
    PresheafMap section = ee.inj_left;
    std::vector<std::vector<int>> foldc(static_cast<std::size_t>(site.n_trees()));
    for (int t = 0; t < site.n_trees(); ++t)
        for (int x = 0; x < ee.object->card(t); ++x)
            foldc[static_cast<std::size_t>(t)].push_back(x % re.presheaf->card(t) == x ? x : x - re.presheaf->card(t));
    PresheafMap fold(ee.object, re.presheaf, std::move(foldc));
    CHECK(compose(fold, section) == identity_map(re.presheaf));

    // any p with g having LLP: f inherits it; test against a sample family
    auto x = representable(site, corolla(1)).presheaf;
    PresheafMap p = to_terminal(x);
    bool g_llp = has_rlp(g, p);
    if (g_llp) {
        // construct lifts for f from lifts for g through the retract
        CHECK(has_rlp(f, p));
    }
}
