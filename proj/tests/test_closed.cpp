#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dendro/closed_ops.hpp"
#include "dendro/lean.hpp"
#include "dendro/lifting.hpp"
#include "dendro/normality.hpp"

using namespace dendro;

TEST_CASE("linear orders count factorially") {
    long long fact = 1;
    for (int n = 0; n <= 7; ++n) {
        if (n > 0) fact *= n;
        CHECK(static_cast<long long>(linear_orders(n).size()) == fact);
    }
}

TEST_CASE("matching objects") {
    // n = 1: a point
    CHECK(matching_object_ass(1).size() == 1);
    // n = 2: a point, the map is 2-to-1
    {
        MatchingReport r = matching_report(2);
        CHECK(r.matching_card == 1);
        CHECK(r.operations == 2);
        CHECK(!r.injective);
        CHECK(r.image_card == 1);
    }
    // n = 3: 8 families (tournaments), injective image of size 6
    {
        MatchingReport r = matching_report(3);
        CHECK(r.matching_card == 8);
        CHECK(r.injective);
        CHECK(r.image_card == 6);
        CHECK(!r.bijective);
    }
    // n = 4, 5, 6: bijective
    for (int n = 4; n <= 6; ++n) {
        MatchingReport r = matching_report(n);
        CHECK(r.bijective);
        CHECK(r.matching_card == r.operations);
    }
}

TEST_CASE("closed nerve values") {
    const Site& cs = Site::get(Flavor::Closed, 5);
    Presheaf nerve = closed_nerve_ass(cs);
    CHECK(nerve.check_functorial());
    CHECK(nerve.card(cs.index_of("[]")) == 1);
    CHECK(nerve.card(cs.index_of("[[]]")) == 1);
    CHECK(nerve.card(cs.index_of("[[][]]")) == 2);
    CHECK(nerve.card(cs.index_of("[[[]]]")) == 1);
}

TEST_CASE("closed nerve is normal while being lean-truncated") {
    const Site& cs = Site::get(Flavor::Closed, 5);
    Presheaf nerve = closed_nerve_ass(cs);
    CHECK(is_normal_upto(nerve, 5));
}

TEST_CASE("closed nerve very inner horn fillers are unique") {
    const Site& cs = Site::get(Flavor::Closed, 5);
    Presheaf nerve = closed_nerve_ass(cs);
    CHECK(nerve_has_unique_very_inner_fillers(nerve, 5));
}

TEST_CASE("closed nerve is an inner fibration at truncated scale") {
    const Site& cs = Site::get(Flavor::Closed, 5);
    auto nerve = std::make_shared<Presheaf>(closed_nerve_ass(cs));
    CHECK(is_operad_upto(nerve, 5));
}

TEST_CASE("closed boundaries") {
    const Site& cs = Site::get(Flavor::Closed, 5);
    // closed boundary of the stump is empty
    Representable rstump = representable(cs, parse_term("[]", Flavor::Closed));
    CHECK(boundary(rstump).object->total_elements() == 0);

    // the closed boundary of the closed 2-corolla strictly contains the
    // closed-unit colours: it has elements over trees other than the unit
    Tree c2bar = parse_term("[[][]]", Flavor::Closed);
    Representable r = representable(cs, c2bar);
    Subobject bd = boundary(r);
    int unit_idx = cs.index_of("[]");
    CHECK(bd.object->card(unit_idx) >= 3);
    int c1bar = cs.index_of("[[]]");
    CHECK(bd.object->card(c1bar) > 0);  // strictly larger than a union of units

    // very inner horn precondition: edges below stumps are rejected
    for (EdgeId e : c2bar.inner_edges())
        CHECK_THROWS_AS(horn(r, e, true), std::invalid_argument);
    // the chain tree has one genuinely very inner edge
    Tree chain = parse_term("[[[]]]", Flavor::Closed);
    Representable rc = representable(cs, chain);
    int very_inner = 0;
    for (EdgeId e : chain.inner_edges())
        if (!chain.is_stump(e)) {
            ++very_inner;
            CHECK_NOTHROW(horn(rc, e, true));
        }
    CHECK(very_inner == 1);
}

TEST_CASE("coskeletal degree search on the nerve") {
    const Site& cs = Site::get(Flavor::Closed, 5);
    Presheaf nerve = closed_nerve_ass(cs);
    auto m = coskeletal_degree_search(nerve, 5);
    REQUIRE(m.has_value());
    CHECK(*m <= 5);
}
