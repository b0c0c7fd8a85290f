#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dendro/flavors.hpp"
#include "dendro/presheaf.hpp"

using namespace dendro;

namespace {
PresheafPtr ptr(Presheaf p) { return std::make_shared<Presheaf>(std::move(p)); }
}

TEST_CASE("representables satisfy Yoneda") {
    const Site& site = Site::get(Flavor::General, 4);
    for (int t = 0; t < site.n_trees(); ++t) {
        Representable rep = representable(site, site.tree(t));
        CHECK(rep.presheaf->check_functorial());
        // identity element present
        bool has_id = false;
        for (const auto& m : rep.elements[static_cast<std::size_t>(t)])
            if (m.is_identity()) has_id = true;
        CHECK(has_id);
        // |Hom(Omega[t], X)| = |X_t| for a few X
        for (int u = 0; u < site.n_trees(); ++u) {
            Representable x = representable(site, site.tree(u));
            CHECK(count_hom_maps(*rep.presheaf, *x.presheaf) == x.presheaf->card(t));
        }
    }
    // |Omega[eta]_eta| = 1, |Omega[C_2]_eta| = 3
    Representable re = representable(site, eta());
    CHECK(re.presheaf->card(site.index_of(eta().key())) == 1);
    Representable rc2 = representable(site, corolla(2));
    CHECK(rc2.presheaf->card(site.index_of(eta().key())) == 3);
}

TEST_CASE("boundaries") {
    const Site& site = Site::get(Flavor::General, 4);
    // eta has no proper faces
    Subobject be = boundary(representable(site, eta()));
    CHECK(be.object->total_elements() == 0);

    // boundary of C_n is n+1 disjoint copies of eta: at the eta level it has
    // n+1 elements, and nothing anywhere else
    for (int n = 1; n <= 3; ++n) {
        Subobject b = boundary(representable(site, corolla(n)));
        int eta_idx = site.index_of(eta().key());
        CHECK(b.object->card(eta_idx) == n + 1);
        for (int t = 0; t < site.n_trees(); ++t) {
            if (t == eta_idx) continue;
            // only degenerate images of colours can appear; at C_1 there are
            // the n+1 degenerate elements, elsewhere nothing of interest:
            // check boundary is strictly smaller than the representable at C_n itself
            if (site.tree(t).key() == corolla(n).key())
                CHECK(b.object->card(t) < b.ambient->card(t));
        }
    }
}

TEST_CASE("boundary equals skeleton at size minus one") {
    for (Flavor f : {Flavor::General, Flavor::Open, Flavor::Closed}) {
        const Site& site = Site::get(f, 5);
        for (int t = 0; t < site.n_trees(); ++t) {
            const Tree& tr = site.tree(t);
            Representable rep = representable(site, tr);
            Subobject bd = boundary(rep);
            Subobject sk = skeleton(rep.presheaf, tr.size() - 1);
            CHECK(bd.mask == sk.mask);
        }
    }
}

TEST_CASE("horns") {
    const Site& site = Site::get(Flavor::General, 5);
    // horns are strictly contained in boundaries
    for (int t = 0; t < site.n_trees(); ++t) {
        const Tree& tr = site.tree(t);
        Representable rep = representable(site, tr);
        Subobject bd = boundary(rep);
        for (EdgeId e : tr.inner_edges()) {
            Subobject h = horn(rep, e);
            bool contained = true, strict = false;
            for (int s = 0; s < site.n_trees(); ++s)
                for (int x = 0; x < rep.presheaf->card(s); ++x) {
                    if (h.contains(s, x) && !bd.contains(s, x)) contained = false;
                    if (!h.contains(s, x) && bd.contains(s, x)) strict = true;
                }
            CHECK(contained);
            CHECK(strict);
        }
    }
    Representable rc2 = representable(site, corolla(2));
    CHECK_THROWS_AS(horn(rc2, 1), std::invalid_argument);  // leaf is not inner
}

TEST_CASE("horn of the linear 2-tree is the image of the simplicial horn") {
    const Site& site = Site::get(Flavor::General, 4);
    Tree lin2 = linear_tree(2);
    Representable rep = representable(site, lin2);
    // the unique inner edge of the linear tree with two vertices
    REQUIRE(lin2.inner_edges().size() == 1);
    Subobject h = horn(rep, lin2.inner_edges()[0]);

    SimplicialSet sh = simplex_horn(2, 1, 2);
    Presheaf embedded = simplicial_extend(sh, site);
    for (int t = 0; t < site.n_trees(); ++t) CHECK(h.object->card(t) == embedded.card(t));
}

TEST_CASE("spine of a two-vertex tree is two corollas glued along eta") {
    const Site& site = Site::get(Flavor::General, 4);
    Tree t = parse_term("[[*]]");  // linear with 2 vertices
    Representable rep = representable(site, t);
    Subobject sp = spine(rep);
    // the spine of i([2]) contains both corolla faces: elements at C_1 are
    // exactly the two one-vertex faces plus degenerate ones; at the tree itself
    // nothing non-degenerate
    int c1 = site.index_of(corolla(1).key());
    int full = rep.presheaf->card(c1);
    CHECK(sp.object->card(c1) < full);
    CHECK(sp.object->card(c1) >= 2);
    int t_idx = site.index_of(t.key());
    CHECK(sp.object->card(t_idx) < rep.presheaf->card(t_idx));
}

TEST_CASE("skeleton basics") {
    const Site& site = Site::get(Flavor::General, 4);
    Representable rc2 = representable(site, corolla(2));
    // sk_n identity when n = size
    Subobject sk_full = skeleton(rc2.presheaf, 3);
    CHECK(sk_full.object->total_elements() == rc2.presheaf->total_elements());
    // sk_0 keeps only eta-generated elements
    Subobject sk0 = skeleton(rc2.presheaf, 0);
    CHECK(sk0.object->card(site.index_of(eta().key())) == 3);
    CHECK(sk0.object->card(site.index_of(corolla(2).key())) == 0);
    // sk_{-1} is empty
    CHECK(skeleton(rc2.presheaf, -1).object->total_elements() == 0);
}

TEST_CASE("finite limits and colimits") {
    const Site& site = Site::get(Flavor::General, 3);
    auto term = ptr(Presheaf::terminal(site));
    auto zero = ptr(Presheaf::empty(site));
    Representable rc2 = representable(site, corolla(2));
    auto x = rc2.presheaf;

    // x times terminal is x
    auto prod = product(x, term);
    CHECK(prod.object->total_elements() == x->total_elements());
    CHECK(prod.proj_left.is_isomorphism());

    // coproduct with empty is x
    auto cop = coproduct(x, zero);
    CHECK(cop.inj_left.is_isomorphism());

    // pullback of identity against identity is the diagonal
    auto pb = pullback(identity_map(x), identity_map(x));
    CHECK(pb.object->total_elements() == x->total_elements());

    // equalizer of equal maps is everything
    CHECK(equalizer(identity_map(x), identity_map(x)).object->total_elements() ==
          x->total_elements());

    // hom_maps from empty: exactly one
    CHECK(count_hom_maps(*zero, *x) == 1);
}

TEST_CASE("pushout glues") {
    const Site& site = Site::get(Flavor::General, 3);
    // glue two copies of eta along nothing: coproduct
    Representable re = representable(site, eta());
    auto zero = ptr(Presheaf::empty(site));
    PresheafMap za(zero, re.presheaf, [&] {
        std::vector<std::vector<int>> c(static_cast<std::size_t>(site.n_trees()));
        return c;
    }());
    auto po = pushout(za, za);
    CHECK(po.object->card(site.index_of(eta().key())) == 2);

    // glue two etas along eta: a single eta
    auto po2 = pushout(identity_map(re.presheaf), identity_map(re.presheaf));
    CHECK(po2.object->card(site.index_of(eta().key())) == 1);
}

TEST_CASE("image factorization") {
    const Site& site = Site::get(Flavor::General, 3);
    Representable rc1 = representable(site, corolla(1));
    Representable re = representable(site, eta());
    // the degeneracy C_1 -> eta induces a non-injective map of representables
    auto maps = hom_maps(rc1.presheaf, re.presheaf);
    REQUIRE(maps.size() == 1);  // Yoneda: |eta_{C_1}| = 1
    auto fact = image_factorization(maps[0]);
    CHECK(fact.epi.is_surjective());
    CHECK(fact.image.inclusion().is_injective());
    // image of a non-injective map is strictly smaller somewhere
    bool strictly_smaller = false;
    for (int t = 0; t < site.n_trees(); ++t)
        if (fact.image.object->card(t) < rc1.presheaf->card(t)) strictly_smaller = true;
    CHECK(strictly_smaller);
}

TEST_CASE("quotient by pairs propagates along actions") {
    const Site& site = Site::get(Flavor::General, 3);
    Representable rc2 = representable(site, corolla(2));
    // identify the two leaf colours of C_2 inside the representable
    int eta_idx = site.index_of(eta().key());
    REQUIRE(rc2.presheaf->card(eta_idx) == 3);
    auto q = quotient_by_pairs(rc2.presheaf, {{eta_idx, 1, 2}});
    CHECK(q.object->card(eta_idx) == 2);
    CHECK(q.projection.is_surjective());
    CHECK(q.object->check_functorial());
}

TEST_CASE("generated subobjects") {
    const Site& site = Site::get(Flavor::General, 3);
    Representable rc2 = representable(site, corolla(2));
    int t_idx = site.index_of(corolla(2).key());
    // the subobject generated by the identity element is everything
    int id_elt = -1;
    for (int i = 0; i < rc2.presheaf->card(t_idx); ++i)
        if (rc2.elements[static_cast<std::size_t>(t_idx)][static_cast<std::size_t>(i)].is_identity())
            id_elt = i;
    REQUIRE(id_elt >= 0);
    Subobject gen = generated_subobject(rc2.presheaf, {{t_idx, id_elt}});
    CHECK(gen.object->total_elements() == rc2.presheaf->total_elements());
}

TEST_CASE("functoriality audit rejects broken actions") {
    const Site& site = Site::get(Flavor::General, 2);
    Representable rc1 = representable(site, corolla(1));
    // corrupt one action entry
    std::vector<int> cards;
    std::vector<std::vector<int>> actions;
    for (int t = 0; t < site.n_trees(); ++t) cards.push_back(rc1.presheaf->card(t));
    for (int a = 0; a < site.n_trees(); ++a)
        for (int b = 0; b < site.n_trees(); ++b)
            for (int m = 0; m < site.n_hom(a, b); ++m) actions.push_back(rc1.presheaf->action(a, b, m));
    // swap values in some non-identity action with card >= 2
    bool corrupted = false;
    int slot = 0;
    for (int a = 0; a < site.n_trees() && !corrupted; ++a)
        for (int b = 0; b < site.n_trees() && !corrupted; ++b)
            for (int m = 0; m < site.n_hom(a, b) && !corrupted; ++m) {
                int fi = site.flat_index(a, b, m);
                if (a != b && actions[static_cast<std::size_t>(fi)].size() >= 1 &&
                    cards[static_cast<std::size_t>(a)] >= 2) {
                    actions[static_cast<std::size_t>(fi)][0] =
                        (actions[static_cast<std::size_t>(fi)][0] + 1) % cards[static_cast<std::size_t>(a)];
                    corrupted = true;
                }
                slot = fi;
            }
    (void)slot;
    REQUIRE(corrupted);
    CHECK_THROWS_AS(Presheaf(site, cards, actions, true), std::invalid_argument);
}

TEST_CASE("hom map count via Yoneda on products") {
    const Site& site = Site::get(Flavor::General, 3);
    Representable re = representable(site, eta());
    Representable rc1 = representable(site, corolla(1));
    auto prod = product(re.presheaf, rc1.presheaf);
    // Hom(Omega[eta], A x B) = A_eta x B_eta
    CHECK(count_hom_maps(*re.presheaf, *prod.object) ==
          static_cast<long long>(prod.object->card(site.index_of(eta().key()))));
}
