#include <doctest.h>

#include "linkdyn/error.hpp"
#include "linkdyn/term.hpp"
#include "linkdyn/testkit.hpp"

using namespace linkdyn;

namespace {
UniversePtr small() {
    return Universe::make({"s", "t"}, {"f", "g"}, {"a", "b", "c"}, {"n"});
}
}  // namespace

TEST_CASE("term evaluation per the axioms") {
    auto u = small();
    NameId s = 0, a = 0, c = 2;

    CHECK(evaluate_term(parse_term("empty (>) (s = a)", *u), u) ==
          DataLinkage(u, {spot_link(s, a)}));
    // overriding after a duplicate-key union keeps only the update
    CHECK(evaluate_term(parse_term("((s = a) (+) (s = b)) (>) (s = c)", *u), u) ==
          DataLinkage(u, {spot_link(s, c)}));
    CHECK(evaluate_term(parse_term("empty", *u), u) == DataLinkage(u));
}

TEST_CASE("term syntax covers every link form") {
    auto u = small();
    CHECK(parse_link("s = a", *u) == spot_link(0, 0));
    CHECK(parse_link("a . f", *u) == partial_field_link(0, 0));
    CHECK(parse_link("a.f=b", *u) == field_link(0, 0, 1));
    CHECK(parse_link("a : n", *u) == value_assoc(0, 0));
}

TEST_CASE("term parse errors") {
    auto u = small();
    CHECK_THROWS_AS(parse_term("s = q", *u), InputError);        // unknown atom
    CHECK_THROWS_AS(parse_term("x = a", *u), InputError);        // unknown spot
    CHECK_THROWS_AS(parse_term("(s = a", *u), InputError);       // unbalanced
    CHECK_THROWS_AS(parse_term("s = a extra", *u), InputError);  // trailing
    CHECK_THROWS_AS(parse_term("s = !pso", *u), InputError);     // marker in plain universe
}

TEST_CASE("operators are left-associative at one precedence level") {
    auto u = small();
    // ((s=a) (+) (s=b)) (>) (s=c), not (s=a) (+) ((s=b) (>) (s=c))
    CHECK(evaluate_term(parse_term("(s = a) (+) (s = b) (>) (s = c)", *u), u) ==
          DataLinkage(u, {spot_link(0, 2)}));
}

TEST_CASE("mimic universes parse marker links") {
    auto m = small()->mimic_twin();
    CHECK(parse_link("s = !pso", *m) == spot_link(0, kPsoAtom));
    CHECK(parse_link("!pso . f = a", *m) == field_link(kPsoAtom, 0, 0));
}

TEST_CASE("printing round-trips through parsing") {
    auto u = testkit::suite_universe();
    testkit::Rng rng(99);
    for (int i = 0; i < 300; ++i) {
        LinkageTerm t = testkit::random_term(rng, *u, 5);
        DataLinkage norm = evaluate_term(t, u);
        DataLinkage back = evaluate_term(parse_term(term_to_text(t, *u), *u), u);
        CHECK(back == norm);
        DataLinkage again =
            evaluate_term(parse_term(term_to_text(linkage_to_term(norm), *u), *u), u);
        CHECK(again == norm);
    }
}
