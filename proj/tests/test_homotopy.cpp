#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dendro/flavors.hpp"
#include "dendro/homotopy.hpp"
#include "dendro/lifting.hpp"
#include "dendro/normality.hpp"

using namespace dendro;

namespace {
PresheafPtr ptr(Presheaf p) { return std::make_shared<Presheaf>(std::move(p)); }
}

TEST_CASE("edge poset maps of standard simplices") {
    const Site& s4 = Site::get(Flavor::General, 4);
    // E(Delta[0]) is terminal
    EdgePosetMaps e0 = edge_poset_maps(0, s4);
    for (int t = 0; t < s4.n_trees(); ++t) CHECK(e0.presheaf->card(t) == 1);

    // |E(Delta[1])_{C_2}| = 5: monotone maps from two incomparable minima
    // under a maximum into {0 < 1}
    EdgePosetMaps e1 = edge_poset_maps(1, s4);
    CHECK(e1.presheaf->card(s4.index_of(corolla(2).key())) == 5);
    // at eta: maps from a point to {0,1}
    CHECK(e1.presheaf->card(s4.index_of(eta().key())) == 2);
    CHECK(e1.presheaf->check_functorial());
}

TEST_CASE("boundary values agree below the dimension") {
    const Site& s4 = Site::get(Flavor::General, 4);
    for (int n = 1; n <= 4; ++n) {
        EdgePosetMaps full = edge_poset_maps(n, s4);
        Subobject bd = edge_poset_maps_boundary(n, full);
        for (int t = 0; t < s4.n_trees(); ++t) {
            if (s4.tree(t).size() < n)
                CHECK(bd.object->card(t) == full.presheaf->card(t));
        }
    }
}

TEST_CASE("tensor kernel via cell filtration matches the direct formula") {
    const Site& s3 = Site::get(Flavor::General, 3);
    for (int n = 0; n <= 3; ++n) {
        SimplicialSet dn = standard_simplex(n, n);
        Presheaf glued = tensor_kernel(dn, s3);
        EdgePosetMaps direct = edge_poset_maps(n, s3);
        for (int t = 0; t < s3.n_trees(); ++t)
            CHECK(glued.card(t) == direct.presheaf->card(t));
    }
    // boundaries too
    for (int n = 1; n <= 3; ++n) {
        SimplicialSet bd = simplex_boundary(n, n);
        Presheaf glued = tensor_kernel(bd, s3);
        EdgePosetMaps full = edge_poset_maps(n, s3);
        Subobject direct = edge_poset_maps_boundary(n, full);
        for (int t = 0; t < s3.n_trees(); ++t)
            CHECK(glued.card(t) == direct.object->card(t));
    }
}

TEST_CASE("skeletal coherence of the kernel") {
    // values at trees of size < n agree between sk_{n-1} M and sk_n M
    const Site& s4 = Site::get(Flavor::General, 4);
    for (int n = 1; n <= 4; ++n) {
        SimplicialSet dn = standard_simplex(n, n);
        for (int j = 0; j + 1 <= n; ++j) {
            Presheaf a = tensor_kernel(sset_skeleton(dn, j), s4);
            Presheaf b = tensor_kernel(sset_skeleton(dn, j + 1), s4);
            for (int t = 0; t < s4.n_trees(); ++t)
                if (s4.tree(t).size() < j + 1) CHECK(a.card(t) == b.card(t));
        }
    }
}

TEST_CASE("tensor with a point is the identity") {
    const Site& s3 = Site::get(Flavor::General, 3);
    Representable rc2 = representable(s3, corolla(2));
    SimplicialSet d0 = standard_simplex(0, 0);
    Presheaf tens = tensor_simplicial(*rc2.presheaf, d0);
    for (int t = 0; t < s3.n_trees(); ++t) CHECK(tens.card(t) == rc2.presheaf->card(t));

    // empty tensor anything is empty
    Presheaf zero = Presheaf::empty(s3);
    SimplicialSet d2 = standard_simplex(2, 2);
    Presheaf tz = tensor_simplicial(zero, d2);
    CHECK(tz.total_elements() == 0);

    // (Omega[eta] x E(Delta[1]))_eta has 2 elements
    Representable re = representable(s3, eta());
    SimplicialSet d1 = standard_simplex(1, 1);
    Presheaf te = tensor_simplicial(*re.presheaf, d1);
    CHECK(te.card(s3.index_of(eta().key())) == 2);
}

TEST_CASE("simplicial hom levels") {
    const Site& s2 = Site::get(Flavor::General, 2);
    Representable rc1 = representable(s2, corolla(1));
    LeanObject y = coskeleton(*rc1.presheaf, 2);

    // level 0 is plain hom
    auto l0 = shom_level(*rc1.presheaf, y, 0);
    CHECK(l0.size() == hom_maps(rc1.presheaf, y.data_ptr()).size());

    // from the empty object: exactly one map at every level
    Presheaf zero = Presheaf::empty(s2);
    for (int k = 0; k <= 2; ++k) CHECK(shom_level(zero, y, k).size() == 1);

    // into the terminal object: exactly one map at every level
    LeanObject term = coskeleton(Presheaf::terminal(s2), 0);
    Representable re = representable(s2, eta());
    for (int k = 0; k <= 2; ++k) CHECK(shom_level(*re.presheaf, term, k).size() == 1);
}

TEST_CASE("cotensor adjunction through the kernel") {
    const Site& s2 = Site::get(Flavor::General, 2);
    SimplicialSet d1 = standard_simplex(1, 1);
    Presheaf kernel = tensor_kernel(d1, s2);
    Representable rc1 = representable(s2, corolla(1));
    LeanObject y = coskeleton(*rc1.presheaf, 2);
    LeanObject cot = cartesian_exponential(kernel, y);
    // |Hom(z, CExp(E(M), y))| = |Hom(z x E(M), y)|
    Representable z = representable(s2, corolla(2));
    auto lhs = count_hom_maps(*z.presheaf, cot.data());
    auto rhs = count_hom_maps(*product(z.presheaf, ptr(kernel)).object, y.data());
    CHECK(lhs == rhs);
}

TEST_CASE("E construction, general flavor") {
    const Site& s3 = Site::get(Flavor::General, 3);
    EConstructionState st = build_E(s3);
    REQUIRE(st.complete);
    REQUIRE(st.levels.size() == 4);  // stages 0..max_size

    // stage 0 is the representable of eta
    Representable re = representable(s3, eta());
    for (int t = 0; t < s3.n_trees(); ++t)
        CHECK(st.levels[0]->card(t) == re.presheaf->card(t));
    // stage 1 is the representable of the stump
    Representable rc0 = representable(s3, corolla(0));
    for (int t = 0; t < s3.n_trees(); ++t)
        CHECK(st.levels[1]->card(t) == rc0.presheaf->card(t));

    CHECK(has_stable_levels(st));
    CHECK(has_boundary_fillers(st, 3));
    CHECK(is_normal_upto(*st.top(), 3));
}

TEST_CASE("E construction, open flavor") {
    const Site& s3 = Site::get(Flavor::Open, 3);
    EConstructionState st = build_E(s3);
    REQUIRE(st.complete);
    // no open tree of size 1: stage 1 equals stage 0 = eta
    Representable re = representable(s3, eta(Flavor::Open));
    for (int t = 0; t < s3.n_trees(); ++t) {
        CHECK(st.levels[0]->card(t) == re.presheaf->card(t));
        CHECK(st.levels[1]->card(t) == re.presheaf->card(t));
    }
    CHECK(has_stable_levels(st));
    CHECK(has_boundary_fillers(st, 3));
    CHECK(is_normal_upto(*st.top(), 3));
}

TEST_CASE("budget exhaustion reports a partial state") {
    const Site& s3 = Site::get(Flavor::General, 3);
    EConstructionState st = build_E(s3, 1);
    CHECK(!st.complete);
    CHECK(st.failed_level >= 0);
}

TEST_CASE("normalization") {
    const Site& s3 = Site::get(Flavor::General, 3);
    EConstructionState st = build_E(s3);
    // normalize(terminal) projects E -> terminal; source is normal
    auto term = ptr(Presheaf::terminal(s3));
    PresheafMap pr = normalize(term, st);
    CHECK(is_normal_upto(pr.source(), 3));
    // normalize(empty) is the identity of the empty presheaf
    auto zero = ptr(Presheaf::empty(s3));
    PresheafMap pz = normalize(zero, st);
    CHECK(pz.source().total_elements() == 0);
    // sampled source normality
    Representable rc2 = representable(s3, corolla(2));
    CHECK(is_normal_upto(normalize(rc2.presheaf, st).source(), 3));
}
