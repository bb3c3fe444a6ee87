#include <doctest.h>

#include <set>
#include <tuple>

#include "linkdyn/error.hpp"
#include "linkdyn/linkage.hpp"
#include "linkdyn/testkit.hpp"

using namespace linkdyn;

namespace {

UniversePtr small() {
    return Universe::make({"s", "t"}, {"f", "g"}, {"a", "b", "c"}, {"n"});
}

DataLinkage dl(const UniversePtr& u, std::vector<AtomicLink> links) {
    return DataLinkage(u, std::move(links));
}

// Test-local reference for the overriding combination, working on plain
// tuple sets: distribute over the update links, filter same-key rows.
using Row = std::tuple<int, NameId, NameId, NameId>;

Row row(const AtomicLink& l) { return {int(l.kind), l.a, l.b, l.c}; }

std::set<Row> naive_override(const DataLinkage& base, const DataLinkage& update) {
    auto key = [](const Row& r) -> std::tuple<int, NameId, NameId> {
        auto [kind, a, b, c] = r;
        if (kind == int(LinkKind::Spot)) return {0, a, 0};
        if (kind == int(LinkKind::Value)) return {2, a, 0};
        return {1, a, b};  // both field link forms share the (carrier, field) key
    };
    std::set<Row> out;
    for (const AtomicLink& upd : update.links()) {
        for (const AtomicLink& b : base.links())
            if (key(row(b)) != key(row(upd))) out.insert(row(b));
        out.insert(row(upd));
    }
    if (update.empty())
        for (const AtomicLink& b : base.links()) out.insert(row(b));
    return out;
}

std::set<Row> rows(const DataLinkage& l) {
    std::set<Row> out;
    for (const AtomicLink& x : l.links()) out.insert(row(x));
    return out;
}

}  // namespace

TEST_CASE("combine is plain set union") {
    auto u = small();
    NameId s = 0, t = 1, a = 0, b = 1;

    CHECK(combine(dl(u, {}), dl(u, {})) == dl(u, {}));
    CHECK(combine(dl(u, {spot_link(s, a)}), dl(u, {spot_link(s, a)})) ==
          dl(u, {spot_link(s, a)}));
    CHECK(combine(dl(u, {spot_link(s, a)}), dl(u, {spot_link(t, b)})) ==
          dl(u, {spot_link(s, a), spot_link(t, b)}));
}

TEST_CASE("combine rejects mixed universes") {
    auto u1 = small();
    auto u2 = Universe::make({"x"}, {"f"}, {"a"}, {"n"});
    CHECK_THROWS_AS(combine(DataLinkage(u1), DataLinkage(u2)), InputError);
}

TEST_CASE("override keeps the base when the update is empty") {
    auto u = small();
    DataLinkage base = dl(u, {spot_link(0, 0), field_link(0, 0, 1)});
    CHECK(override_combine(base, dl(u, {})) == base);
}

TEST_CASE("override displaces same-key links") {
    auto u = small();
    NameId s = 0, a = 0, b = 1;
    CHECK(override_combine(dl(u, {spot_link(s, a)}), dl(u, {spot_link(s, b)})) ==
          dl(u, {spot_link(s, b)}));
}

TEST_CASE("override distributes over a multi-link update") {
    auto u = small();
    NameId s = 0, t = 1, a = 0, b = 1, c = 2;
    // distributing brings the displaced link back through the second
    // update link: {s=a} over {s=b, t=c} keeps s=a
    DataLinkage got = override_combine(dl(u, {spot_link(s, a)}),
                                       dl(u, {spot_link(s, b), spot_link(t, c)}));
    DataLinkage expected = dl(u, {spot_link(s, a), spot_link(s, b), spot_link(t, c)});
    CHECK(got == expected);
    CHECK(rows(got) == naive_override(dl(u, {spot_link(s, a)}),
                                      dl(u, {spot_link(s, b), spot_link(t, c)})));
}

TEST_CASE("partial and full field links share a key") {
    auto u = small();
    NameId s = 0, a = 0, b = 1, f = 0;
    DataLinkage base = dl(u, {spot_link(s, a), field_link(a, f, b)});
    DataLinkage upd = dl(u, {partial_field_link(a, f)});
    DataLinkage got = override_combine(base, upd);
    CHECK(got == dl(u, {spot_link(s, a), partial_field_link(a, f)}));
    CHECK(rows(got) == naive_override(base, upd));
}

TEST_CASE("override agrees with the naive route on random states") {
    auto u = testkit::suite_universe();
    testkit::Rng rng(41);
    for (int i = 0; i < 500; ++i) {
        DataLinkage base = testkit::random_state(rng, u, 8);
        DataLinkage upd = testkit::random_state(rng, u, 4);
        CHECK(rows(override_combine(base, upd)) == naive_override(base, upd));
    }
}

TEST_CASE("single-link override places the link and clears its key group") {
    auto u = testkit::suite_universe();
    testkit::Rng rng(17);
    for (int i = 0; i < 500; ++i) {
        DataLinkage base = testkit::random_state(rng, u, 8);
        AtomicLink l = testkit::random_link(rng, *u);
        DataLinkage got = override_one(base, l);
        CHECK(got.contains(l));
        for (const AtomicLink& x : got.links())
            if (!(x == l)) CHECK(link_key(x) != link_key(l));
    }
}

TEST_CASE("spot content classification") {
    auto u = small();
    NameId s = 0, a = 0, b = 1;
    CHECK(content_of_spot(dl(u, {}), s).status == SpotContent::Status::Undefined);

    SpotContent unique = content_of_spot(dl(u, {spot_link(s, a)}), s);
    CHECK(unique.status == SpotContent::Status::Unique);
    CHECK(unique.atom == a);

    CHECK(content_of_spot(dl(u, {spot_link(s, a), spot_link(s, b)}), s).status ==
          SpotContent::Status::Multiple);
}

TEST_CASE("field group classification") {
    auto u = small();
    NameId a = 0, b = 1, f = 0;
    CHECK(field_group(dl(u, {}), a, f).status == FieldGroup::Status::Absent);
    CHECK(field_group(dl(u, {partial_field_link(a, f)}), a, f).status ==
          FieldGroup::Status::UndefinedContent);

    FieldGroup unique = field_group(dl(u, {field_link(a, f, b)}), a, f);
    CHECK(unique.status == FieldGroup::Status::Unique);
    CHECK(unique.target == b);

    CHECK(field_group(dl(u, {partial_field_link(a, f), field_link(a, f, b)}), a, f).status ==
          FieldGroup::Status::Multiple);
    CHECK(field_group(dl(u, {field_link(a, f, b), field_link(a, f, 2)}), a, f).status ==
          FieldGroup::Status::Multiple);
}

TEST_CASE("local determinism") {
    auto u = small();
    NameId s = 0, a = 0, f = 0;
    CHECK(is_locally_deterministic_spot(dl(u, {spot_link(s, a)}), s));
    CHECK_FALSE(is_locally_deterministic_spot(dl(u, {}), s));
    // a lone partial link is deterministic with undefined content
    CHECK(is_locally_deterministic_field(dl(u, {partial_field_link(a, f)}), a, f));
    CHECK_FALSE(is_locally_deterministic_field(dl(u, {}), a, f));
}

TEST_CASE("mimic markers are rejected in plain universes") {
    auto u = small();
    CHECK_THROWS_AS(dl(u, {spot_link(0, kPsoAtom)}), InputError);
    auto m = u->mimic_twin();
    CHECK(dl(m, {spot_link(0, kPsoAtom)}).size() == 1);
}

TEST_CASE("canonical text is sorted and stable") {
    auto u = small();
    DataLinkage l = dl(u, {field_link(0, 0, 1), spot_link(0, 0), value_assoc(1, 0)});
    CHECK(linkage_to_text(l) == "s = a, a . f = b, b : n");
    CHECK(linkage_to_text(dl(u, {})) == "empty");
}
