#include "support/generators.hpp"
#include "support/oracles.hpp"

#include "ldbig/algebra.hpp"

#include <doctest.h>

using namespace ldbig;

namespace {

LocalInterface loc1(std::set<std::string> plus = {}, std::set<std::string> minus = {}) {
    return LocalInterface({{}, {std::move(plus), std::move(minus)}});
}

// A : ε -> <(∅,∅),({y},∅)> with one A node pointing at y.
Bigraph lower() {
    BigraphBuilder b(testing::test_signature(), LocalInterface::unit(), loc1({"y"}));
    auto a = b.add_node({"A", 1, 0}, RootIndex{1});
    b.set_link(port(a, 0), outer_name(1, "y"));
    return std::move(b).build();
}

// B : <(∅,∅),({y},∅)> -> <(∅,∅),({o},∅)>, site inside a B node which y
// reaches through its negative port.
Bigraph upper() {
    BigraphBuilder b(testing::test_signature(), loc1({"y"}), loc1({"o"}));
    auto n = b.add_node({"B", 1, 1}, RootIndex{1});
    b.set_site_parent(1, n);
    b.set_link(inner_name(1, "y"), port(n, 0));
    b.set_link(port(n, 0), outer_name(1, "o"));
    return std::move(b).build();
}

Bigraph relink_one(testing::Rng& rng, const Bigraph& b) {
    auto points = b.points();
    auto links = b.all_links();
    if (points.empty() || links.empty())
        return b;
    BigraphBuilder builder(b);
    builder.set_link(testing::pick(rng, points), testing::pick(rng, links));
    return std::move(builder).build();
}

}  // namespace

TEST_CASE("identity") {
    auto e = identity(LocalInterface::unit());
    CHECK(e.nodes().empty());
    CHECK(e.edges().empty());
    CHECK(e.inner().width() == 0);

    auto id = identity(loc1({"a"}, {"b"}));
    CHECK(id.site_parent(1) == Parent{RootIndex{1}});
    CHECK(id.link_of(inner_name(1, "a")) == Link{outer_name(1, "a")});
    CHECK(id.link_of(outer_name(1, "b")) == Link{inner_name(1, "b")});
    CHECK(is_valid(id));
}

TEST_CASE("compose nests roots in sites and chains links") {
    auto c = compose(upper(), lower());
    CHECK(is_valid(c));
    CHECK(c.inner() == LocalInterface::unit());
    CHECK(c.outer() == loc1({"o"}));

    BigraphBuilder want(testing::test_signature(), LocalInterface::unit(), loc1({"o"}));
    auto n = want.add_node({"B", 1, 1}, RootIndex{1});
    auto a = want.add_node({"A", 1, 0}, n);
    want.set_link(port(a, 0), port(n, 0));
    want.set_link(port(n, 0), outer_name(1, "o"));
    auto expected = std::move(want).build();
    CHECK(is_isomorphic(c, expected));
    CHECK(oracle::isomorphic(c, expected));
}

TEST_CASE("compose refreshes colliding identifiers") {
    auto c = compose(upper(), lower());
    CHECK(c.nodes().size() == 2);
    std::set<std::string> controls;
    for (const auto& [_, node] : c.nodes())
        controls.insert(node.control.name);
    CHECK(controls == std::set<std::string>{"A", "B"});
}

TEST_CASE("compose rejects mismatched interfaces") {
    CHECK_THROWS_AS(compose(upper(), upper()), InterfaceMismatch);
    CHECK_THROWS_AS(compose(identity(loc1({"z"})), lower()), InterfaceMismatch);
}

TEST_CASE("compose rejects conflicting signatures") {
    Signature other;
    other.add({"A", 0, 0});
    BigraphBuilder b(other, loc1({"y"}), loc1({"y"}));
    b.set_link(inner_name(1, "y"), outer_name(1, "y"));
    b.add_node({"A", 0, 0}, RootIndex{1});
    CHECK_THROWS_AS(compose(std::move(b).build(), lower()), SignatureMismatch);
}

TEST_CASE("compose reports link cycles through the shared interface") {
    auto j = loc1({"y"}, {"z"});
    BigraphBuilder in(testing::test_signature(), LocalInterface::unit(), j);
    auto a = in.add_node({"A", 1, 0}, RootIndex{1});
    in.set_link(port(a, 0), outer_name(1, "y"));
    in.set_link(outer_name(1, "z"), outer_name(1, "y"));
    BigraphBuilder out(testing::test_signature(), j, LocalInterface::empty(1));
    out.set_link(inner_name(1, "y"), inner_name(1, "z"));
    CHECK_THROWS_AS(compose(std::move(out).build(), std::move(in).build()), CompositionError);
}

TEST_CASE("compose with a width-0 interface merges global names") {
    LocalInterface g({{{"g"}, {}}});
    auto inner = BigraphBuilder(testing::test_signature(), LocalInterface::unit(), g).build();
    BigraphBuilder out(testing::test_signature(), g, LocalInterface({{{"h"}, {}}, {}}));
    auto n = out.add_node({"A", 1, 0}, RootIndex{1});
    auto e = out.add_edge();
    out.set_link(port(n, 0), e);
    out.set_link(inner_name(0, "g"), e);
    auto c = compose(std::move(out).build(), inner);
    CHECK(is_valid(c));
    CHECK(c.edges().size() == 1);
}

TEST_CASE("tensor places operands side by side") {
    auto t = tensor(upper(), lower());
    CHECK(t.inner().width() == 1);
    CHECK(t.outer().width() == 2);
    CHECK(t.nodes().size() == 2);
    CHECK(is_valid(t));
    // The lower operand's root moved to index 2.
    for (const auto& [_, node] : t.nodes())
        if (node.control.name == "A")
            CHECK(node.parent == Parent{RootIndex{2}});
    CHECK(t.outer().at(2).plus == std::set<std::string>{"y"});
}

TEST_CASE("tensor unit and clash handling") {
    auto b = upper();
    CHECK(is_isomorphic(tensor(b, identity(LocalInterface::unit())), b));
    CHECK(is_isomorphic(tensor(identity(LocalInterface::unit()), b), b));
    CHECK(is_isomorphic(tensor_all({}), identity(LocalInterface::unit())));

    LocalInterface g({{{"g"}, {}}});
    BigraphBuilder x(testing::test_signature(), LocalInterface::unit(), g);
    auto gx = std::move(x).build();
    BigraphBuilder y(testing::test_signature(), LocalInterface::unit(), LocalInterface({{{}, {"g"}}}));
    y.set_link(outer_name(0, "g"), y.add_edge());
    auto gy = std::move(y).build();
    CHECK_THROWS_AS(tensor(gx, gx), GlobalNameClash);
    auto tagged = tensor(gx, gx, {true});
    CHECK(tagged.outer().global().plus == std::set<std::string>{"g", "g'"});
    CHECK(is_valid(tagged));
    auto mixed = tensor(gy, gx, {true});
    CHECK(mixed.outer().global().minus == std::set<std::string>{"g"});
    CHECK(mixed.outer().global().plus == std::set<std::string>{"g'"});
    CHECK(is_valid(mixed));
}

TEST_CASE("tensor preserves well-formedness on random pairs") {
    testing::Rng rng(5);
    for (int i = 0; i < 500; ++i) {
        auto c1 = testing::random_chain(rng, 2, 2, {"g1", "h1"});
        auto c2 = testing::random_chain(rng, 2, 2, {"g2", "h2"});
        auto a = testing::random_bigraph(rng, c1[0], c1[1]);
        auto b = testing::random_bigraph(rng, c2[0], c2[1]);
        auto t = tensor(a, b);
        REQUIRE(is_valid(t));
        CHECK(t.nodes().size() == a.nodes().size() + b.nodes().size());
        CHECK(t.edges().size() == a.edges().size() + b.edges().size());
        CHECK(is_valid(tensor(a, a, {true})));
    }
}

TEST_CASE("composition of pass-through-free random bigraphs stays well-formed") {
    testing::Rng rng(6);
    int checked = 0;
    for (int i = 0; i < 600; ++i) {
        auto chain = testing::random_chain(rng, 3, 2);
        auto b1 = testing::random_bigraph(rng, chain[0], chain[1]);
        auto b2 = testing::random_bigraph(rng, chain[1], chain[2]);
        Bigraph c;
        try {
            c = compose(b2, b1);
        } catch (const CompositionError&) {
            continue;
        }
        ++checked;
        for (const auto& issue : validate(c)) {
            // Composition may create pass-through names; every other clause
            // must survive.
            CHECK(issue.clause == "pass-through");
        }
        CHECK(c.nodes().size() == b1.nodes().size() + b2.nodes().size());
    }
    CHECK(checked > 500);
}

TEST_CASE("isomorphism: reflexive and support-renaming invariant") {
    testing::Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        auto chain = testing::random_chain(rng, 2, 2);
        auto b = testing::random_bigraph(rng, chain[0], chain[1], {6, 3, 0.3, true});
        CHECK(is_isomorphic(b, b));
        CHECK(is_isomorphic(b, testing::scramble_support(rng, b)));
        CHECK(is_isomorphic(b, shift_support(b, 17, 4)));
    }
}

TEST_CASE("isomorphism agrees with bijection enumeration") {
    testing::Rng rng(8);
    int positives = 0, negatives = 0;
    for (int i = 0; i < 600; ++i) {
        auto chain = testing::random_chain(rng, 2, 2);
        auto a = testing::random_bigraph(rng, chain[0], chain[1], {6, 2, 0.3, true});
        Bigraph b;
        switch (i % 3) {
        case 0:
            b = testing::scramble_support(rng, a);
            break;
        case 1:
            b = testing::scramble_support(rng, relink_one(rng, a));
            break;
        default:
            b = testing::random_bigraph(rng, chain[0], chain[1], {6, 2, 0.3, true});
            break;
        }
        const bool want = oracle::isomorphic(a, b);
        REQUIRE(is_isomorphic(a, b) == want);
        CHECK(is_isomorphic(a, b, {false}) == oracle::isomorphic(a, b, false));
        (want ? positives : negatives)++;
    }
    CHECK(positives > 100);
    CHECK(negatives > 100);
}

TEST_CASE("isomorphism distinguishes symmetric-looking shapes") {
    // Two C nodes under one root, each reached by an A node: the pairing
    // matters only through the links.
    auto build = [](bool crossed) {
        BigraphBuilder b(testing::test_signature(), LocalInterface::unit(), LocalInterface::empty(2));
        auto c1 = b.add_node({"C", 0, 1}, RootIndex{1});
        auto c2 = b.add_node({"C", 0, 1}, RootIndex{2});
        auto a1 = b.add_node({"A", 1, 0}, RootIndex{1});
        auto a2 = b.add_node({"A", 1, 0}, RootIndex{2});
        b.set_link(port(a1, 0), port(crossed ? c2 : c1, 0));
        b.set_link(port(a2, 0), port(crossed ? c1 : c2, 0));
        return std::move(b).build();
    };
    CHECK_FALSE(is_isomorphic(build(false), build(true)));
    CHECK_FALSE(oracle::isomorphic(build(false), build(true)));
}

TEST_CASE("categorical laws on random bigraphs") {
    testing::Rng rng(9);
    int assoc = 0;
    for (int i = 0; i < 150; ++i) {
        auto ch = testing::random_chain(rng, 4, 2);
        auto b1 = testing::random_bigraph(rng, ch[0], ch[1]);
        auto b2 = testing::random_bigraph(rng, ch[1], ch[2]);
        auto b3 = testing::random_bigraph(rng, ch[2], ch[3]);
        CHECK(is_isomorphic(compose(identity(ch[1]), b1), b1));
        CHECK(is_isomorphic(compose(b1, identity(ch[0])), b1));
        try {
            auto left = compose(b3, compose(b2, b1));
            auto right = compose(compose(b3, b2), b1);
            CHECK(is_isomorphic(left, right));
            ++assoc;
        } catch (const CompositionError&) {
        }
    }
    CHECK(assoc > 100);
}
