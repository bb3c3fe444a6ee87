#include <doctest.h>

#include "linkdyn/error.hpp"
#include "linkdyn/semantics.hpp"
#include "linkdyn/testkit.hpp"

using namespace linkdyn;

namespace {

UniversePtr one_atom() { return Universe::make({"s", "t"}, {"f"}, {"a"}, {"n"}); }

DataLinkage dl(const UniversePtr& u, std::vector<AtomicLink> links) {
    return DataLinkage(u, std::move(links));
}

}  // namespace

TEST_CASE("allocation picks the first unused atom") {
    auto u = Universe::make({"s"}, {"f"}, {"a", "b", "c"}, {"n"});
    CHECK(fresh_atom(dl(u, {})) == 0);
    CHECK(fresh_atom(dl(u, {field_link(0, 0, 1)})) == 2);

    auto single = one_atom();
    CHECK_FALSE(fresh_atom(dl(single, {spot_link(0, 0)})).has_value());
}

TEST_CASE("allocation succeeds and fails with the supply") {
    auto u = one_atom();
    NameId s = 0, t = 1, a = 0;

    ActionResult ok = apply_action(get_fresh(s), dl(u, {}));
    CHECK(ok.reply);
    CHECK(ok.state == dl(u, {spot_link(s, a)}));

    ActionResult exhausted = apply_action(get_fresh(t), dl(u, {spot_link(s, a)}));
    CHECK_FALSE(exhausted.reply);
    CHECK(exhausted.state == dl(u, {spot_link(s, a)}));
}

TEST_CASE("allocation in a mimic state ignores the markers") {
    auto m = one_atom()->mimic_twin();
    NameId s = 0, t = 1, a = 0;
    ActionResult out = apply_action(get_fresh(t), dl(m, {spot_link(s, kPsoAtom)}));
    CHECK(out.reply);
    CHECK(out.state == dl(m, {spot_link(s, kPsoAtom), spot_link(t, a)}));

    ActionResult sso = apply_action(set_spot_sso(t), dl(m, {spot_link(s, kPsoAtom)}));
    CHECK(sso.reply);
    CHECK(sso.state == dl(m, {spot_link(s, kPsoAtom), spot_link(t, kSsoAtom)}));
}

TEST_CASE("set spot copies or clears") {
    auto u = Universe::make({"s", "t"}, {"f"}, {"a", "b"}, {"n"});
    NameId s = 0, t = 1, a = 0, b = 1;

    ActionResult copy = apply_action(set_spot(s, t), dl(u, {spot_link(t, a), spot_link(s, b)}));
    CHECK(copy.reply);
    CHECK(copy.state == dl(u, {spot_link(s, a), spot_link(t, a)}));

    // undefined source clears the target
    ActionResult clear = apply_action(set_spot(s, t), dl(u, {spot_link(s, b)}));
    CHECK(clear.reply);
    CHECK(clear.state == dl(u, {}));

    // a multiple source blocks the write
    DataLinkage multi = dl(u, {spot_link(t, a), spot_link(t, b)});
    ActionResult blocked = apply_action(set_spot(s, t), multi);
    CHECK_FALSE(blocked.reply);
    CHECK(blocked.state == multi);
}

TEST_CASE("clear spot always succeeds") {
    auto u = Universe::make({"s", "t"}, {"f"}, {"a", "b"}, {"n"});
    NameId s = 0, a = 0, b = 1;
    CHECK(apply_action(clear_spot(s), dl(u, {})).reply);
    ActionResult out = apply_action(clear_spot(s), dl(u, {spot_link(s, a), spot_link(s, b)}));
    CHECK(out.reply);
    CHECK(out.state == dl(u, {}));
}

TEST_CASE("equality and undefinedness tests never change the state") {
    auto u = Universe::make({"s", "t"}, {"f"}, {"a", "b"}, {"n"});
    NameId s = 0, t = 1, a = 0, b = 1;

    CHECK(apply_action(undef_test(s), dl(u, {})).reply);
    CHECK_FALSE(apply_action(undef_test(s), dl(u, {spot_link(s, a)})).reply);
    CHECK_FALSE(apply_action(undef_test(s), dl(u, {spot_link(s, a), spot_link(s, b)})).reply);

    CHECK(apply_action(equal_test(s, t), dl(u, {spot_link(s, a), spot_link(t, a)})).reply);
    CHECK_FALSE(apply_action(equal_test(s, t), dl(u, {spot_link(s, a), spot_link(t, b)})).reply);
    // an undefined side compares false
    CHECK_FALSE(apply_action(equal_test(s, t), dl(u, {spot_link(s, a)})).reply);
    CHECK_FALSE(apply_action(equal_test(s, t), dl(u, {})).reply);
}

TEST_CASE("field actions") {
    auto u = Universe::make({"s", "t"}, {"f"}, {"a", "b"}, {"n"});
    NameId s = 0, t = 1, a = 0, b = 1, f = 0;
    DataLinkage base = dl(u, {spot_link(s, a)});

    ActionResult added = apply_action(add_field(s, f), base);
    CHECK(added.reply);
    CHECK(added.state == dl(u, {spot_link(s, a), partial_field_link(a, f)}));

    // present field blocks another add
    CHECK_FALSE(apply_action(add_field(s, f), added.state).reply);

    CHECK(apply_action(has_field(s, f), added.state).reply);
    CHECK_FALSE(apply_action(has_field(s, f), base).reply);

    // set field copies the source spot, or makes the content undefined
    DataLinkage with_src = combine(added.state, dl(u, {spot_link(t, b)}));
    ActionResult set = apply_action(set_field(s, f, t), with_src);
    CHECK(set.reply);
    CHECK(set.state ==
          dl(u, {spot_link(s, a), spot_link(t, b), field_link(a, f, b)}));

    ActionResult undef_src = apply_action(set_field(s, f, t), added.state);
    CHECK(undef_src.reply);
    CHECK(undef_src.state == added.state);

    // absent field blocks writes
    CHECK_FALSE(apply_action(set_field(s, f, t), base).reply);
    CHECK_FALSE(apply_action(clear_field(s, f), base).reply);

    ActionResult cleared = apply_action(clear_field(s, f), set.state);
    CHECK(cleared.reply);
    CHECK(cleared.state ==
          dl(u, {spot_link(s, a), spot_link(t, b), partial_field_link(a, f)}));

    ActionResult removed = apply_action(remove_field(s, f), set.state);
    CHECK(removed.reply);
    CHECK(removed.state == dl(u, {spot_link(s, a), spot_link(t, b)}));
    CHECK_FALSE(apply_action(remove_field(s, f), base).reply);
}

TEST_CASE("get field reads through the source spot") {
    auto u = Universe::make({"s", "t"}, {"f"}, {"a", "b"}, {"n"});
    NameId s = 0, t = 1, a = 0, b = 1, f = 0;

    DataLinkage full = dl(u, {spot_link(t, a), field_link(a, f, b), spot_link(s, a)});
    ActionResult got = apply_action(get_field(s, t, f), full);
    CHECK(got.reply);
    CHECK(got.state == dl(u, {spot_link(s, b), spot_link(t, a), field_link(a, f, b)}));

    // undefined content clears the target spot
    DataLinkage partial = dl(u, {spot_link(t, a), partial_field_link(a, f), spot_link(s, b)});
    ActionResult cleared = apply_action(get_field(s, t, f), partial);
    CHECK(cleared.reply);
    CHECK(cleared.state == dl(u, {spot_link(t, a), partial_field_link(a, f)}));

    // absent field gives a negative reply
    CHECK_FALSE(apply_action(get_field(s, t, f), dl(u, {spot_link(t, a)})).reply);
}

TEST_CASE("collection reclaims unreachable carriers") {
    auto u = Universe::make({"s"}, {"f", "g"}, {"a", "b", "c"}, {"n"});
    NameId s = 0, a = 0, b = 1, c = 2, f = 0, g = 1;

    CHECK(collect_garbage(dl(u, {})) == dl(u, {}));

    DataLinkage chain = dl(u, {spot_link(s, a), field_link(a, f, b), field_link(b, g, c)});
    CHECK(collect_garbage(chain) == chain);

    DataLinkage orphan = dl(u, {spot_link(s, a), field_link(b, f, c), value_assoc(b, 0)});
    CHECK(collect_garbage(orphan) == dl(u, {spot_link(s, a)}));
}

TEST_CASE("mimic collection keeps links carried by the markers") {
    auto m = Universe::make({"s"}, {"f"}, {"a"}, {"n"})->mimic_twin();
    DataLinkage l = dl(m, {field_link(kPsoAtom, 0, kSsoAtom), partial_field_link(kSsoAtom, 0)});
    CHECK(collect_garbage(l) == l);
}

TEST_CASE("illegal actions are input errors") {
    auto u = one_atom();
    CHECK_THROWS_AS(apply_action(set_spot_pso(0), dl(u, {})), InputError);
    CHECK_FALSE(action_is_legal(set_spot_pso(0), *u));
    CHECK(action_is_legal(set_spot_pso(0), *u->mimic_twin()));
}

TEST_CASE("negative replies leave the state unchanged") {
    auto u = testkit::suite_universe();
    testkit::Rng rng(7);
    for (int i = 0; i < 2000; ++i) {
        DataLinkage l = testkit::random_state(rng, u, 8);
        Action a = testkit::random_action(rng, *u);
        ActionResult out = apply_action(a, l);
        if (!out.reply) CHECK(out.state == l);
        // determinism
        ActionResult again = apply_action(a, l);
        CHECK(again.reply == out.reply);
        CHECK(again.state == out.state);
    }
}

TEST_CASE("test actions never change the state") {
    auto u = testkit::suite_universe();
    testkit::Rng rng(8);
    for (int i = 0; i < 2000; ++i) {
        DataLinkage l = testkit::random_state(rng, u, 8);
        NameId s = NameId(i % 3), t = NameId((i / 3) % 3), f = NameId(i % 2);
        CHECK(apply_action(equal_test(s, t), l).state == l);
        CHECK(apply_action(undef_test(s), l).state == l);
        CHECK(apply_action(has_field(s, f), l).state == l);
    }
}

TEST_CASE("successful allocation yields an unused atom") {
    auto u = testkit::suite_universe();
    testkit::Rng rng(9);
    for (int i = 0; i < 2000; ++i) {
        DataLinkage l = testkit::random_state(rng, u, 6);
        auto atom = fresh_atom(l);
        if (!atom) continue;
        for (const AtomicLink& x : l.links()) {
            if (x.kind == LinkKind::Spot) CHECK(x.b != *atom);
            if (x.kind != LinkKind::Spot) CHECK(x.a != *atom);
            if (x.kind == LinkKind::Field) CHECK(x.c != *atom);
        }
    }
}
