#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dendro/tree.hpp"

using namespace dendro;

TEST_CASE("sizes of basic trees") {
    CHECK(eta().size() == 0);
    CHECK(corolla(0).size() == 1);
    CHECK(corolla(2).size() == 3);
    for (int n = 0; n <= 5; ++n) CHECK(corolla(n).size() == n + 1);
    // the linear tree with n vertices has size 2n
    for (int n = 0; n <= 4; ++n) CHECK(linear_tree(n).size() == 2 * n);
}

TEST_CASE("parse and print") {
    CHECK(parse_term("*") == eta());
    CHECK(parse_term("[**]") == corolla(2));
    Tree t = parse_term("[[]]");
    CHECK(t.size() == 3);
    CHECK(t.n_vertices() == 2);
    CHECK(t.n_edges() == 2);
    CHECK(print_term(parse_term("[ * [ ] ]")) == "[*[]]");

    CHECK_THROWS_AS(parse_term("["), ParseError);
    CHECK_THROWS_AS(parse_term("*]"), ParseError);
    CHECK_THROWS_AS(parse_term("x"), ParseError);
    CHECK_THROWS_AS(parse_term(""), ParseError);
    // flavor violations
    CHECK_THROWS_AS(parse_term("*", Flavor::Closed), ParseError);
    CHECK_THROWS_AS(parse_term("[]", Flavor::Open), ParseError);
    CHECK_NOTHROW(parse_term("[]", Flavor::Closed));
}

TEST_CASE("canonical keys are order independent") {
    Tree a = parse_term("[*[**]]");
    Tree b = parse_term("[[**]*]");
    CHECK(a.key() == b.key());
    CHECK(parse_term("[*]").key() != parse_term("[[]]").key());
    CHECK(parse_term("[]").key() != parse_term("[*]").key());
}

TEST_CASE("canonical key soundness against brute-force isomorphism") {
    auto trees = enumerate_trees(5, Flavor::General);
    for (std::size_t i = 0; i < trees.size(); ++i)
        for (std::size_t j = 0; j < trees.size(); ++j) {
            bool same_key = trees[i].key() == trees[j].key();
            bool iso = isomorphic_brute_force(trees[i], trees[j]);
            CHECK(same_key == iso);
        }
}

TEST_CASE("enumeration of small trees") {
    auto g0 = enumerate_trees(0, Flavor::General);
    REQUIRE(g0.size() == 1);
    CHECK(g0[0] == eta());

    auto g1 = enumerate_trees(1, Flavor::General);
    REQUIRE(g1.size() == 2);
    CHECK(g1[0] == eta());
    CHECK(g1[1] == corolla(0));

    auto o2 = enumerate_trees(2, Flavor::Open);
    REQUIRE(o2.size() == 2);
    CHECK(o2[0] == eta(Flavor::Open));
    CHECK(o2[1] == corolla(1, Flavor::Open));

    // closed trees have odd size; smallest is the stump
    auto c3 = enumerate_trees(3, Flavor::Closed);
    REQUIRE(c3.size() == 2);
    CHECK(c3[0].key() == "[]");
    CHECK(c3[1].key() == "[[]]");

    // trees are sorted by (size, key) and pairwise non-isomorphic
    auto g5 = enumerate_trees(5, Flavor::General);
    CHECK(g5.size() == 14);
    for (std::size_t i = 1; i < g5.size(); ++i) {
        bool ordered = g5[i - 1].size() < g5[i].size() ||
                       (g5[i - 1].size() == g5[i].size() && g5[i - 1].key() < g5[i].key());
        CHECK(ordered);
    }
}

TEST_CASE("deterministic enumeration") {
    auto a = enumerate_trees(6, Flavor::General);
    auto b = enumerate_trees(6, Flavor::General);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].key() == b[i].key());
}

TEST_CASE("parse/print round trip over enumerated trees") {
    for (Flavor f : {Flavor::General, Flavor::Open, Flavor::Closed}) {
        for (const auto& t : enumerate_trees(6, f)) {
            Tree back = parse_term(print_term(t), f);
            CHECK(back == t);
        }
    }
}

TEST_CASE("closure") {
    CHECK(closure(eta()) == corolla(0, Flavor::Closed));
    CHECK(closure(corolla(2)).key() == "[[][]]");
    for (const auto& t : enumerate_trees(4, Flavor::General)) {
        Tree c = closure(t);
        CHECK(c.flavor() == Flavor::Closed);
        CHECK(closure(c) == c);
    }
}

TEST_CASE("graft") {
    // grafting eta is neutral
    Tree c3 = corolla(3);
    for (EdgeId l : c3.leaf_edges()) CHECK(graft(c3, l, eta()) == c3);

    // size adds
    Tree c2 = corolla(2);
    Tree g = graft(c3, c3.leaf_edges()[2], c2);
    CHECK(g.size() == c3.size() + c2.size());
    CHECK(g.key() == "[**[**]]");

    CHECK_THROWS_AS(graft(c3, 0, c2), std::invalid_argument);  // root is not a leaf

    Tree oc = corolla(2, Flavor::Open);
    Tree og = graft(oc, oc.leaf_edges()[0], corolla(1, Flavor::Open));
    CHECK(og.flavor() == Flavor::Open);
}

TEST_CASE("edge poset") {
    Tree e = eta();
    EdgePoset pe(e);
    CHECK(pe.leq(0, 0));

    Tree c2 = corolla(2);
    EdgePoset p2(c2);
    CHECK(p2.leq(1, 0));
    CHECK(p2.leq(2, 0));
    CHECK(!p2.leq(1, 2));
    CHECK(!p2.leq(2, 1));
    CHECK(!p2.leq(0, 1));

    // linear tree: total order with n+1 elements, root maximal
    Tree lin = linear_tree(3);
    EdgePoset pl(lin);
    for (EdgeId a = 0; a < lin.n_edges(); ++a)
        for (EdgeId b = 0; b < lin.n_edges(); ++b) CHECK(pl.leq(a, b) == (a >= b));
}

TEST_CASE("dot export mentions all edges") {
    std::string dot = to_dot(parse_term("[*[]]"));
    CHECK(dot.find("e0") != std::string::npos);
    CHECK(dot.find("e1") != std::string::npos);
}
