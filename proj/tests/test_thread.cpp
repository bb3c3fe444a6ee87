#include <doctest.h>

#include <algorithm>

#include "linkdyn/error.hpp"
#include "linkdyn/testkit.hpp"
#include "linkdyn/thread.hpp"

using namespace linkdyn;

namespace {

UniversePtr uni() { return Universe::make({"s", "t"}, {"f"}, {"a"}, {"n"}); }

ThreadGraph from_text(const std::string& text, const Universe& u) {
    return ThreadGraph::build(parse_thread_spec(text, u));
}

}  // namespace

TEST_CASE("building constants and simple posts") {
    auto u = uni();

    ThreadGraph stop = from_text("start X\nX := stop\n", *u);
    CHECK(stop.node_count() == 1);
    CHECK(stop.node(stop.root()).kind == NodeKind::Stop);

    ThreadGraph one = from_text("start X\nX := <stop> dld(s = fresh) <dead>\n", *u);
    CHECK(one.node_count() == 3);

    ThreadGraph loop = from_text("start X\nX := <X> aux(ping) <stop>\n", *u);
    CHECK(loop.node_count() == 2);
    CHECK(loop.node(loop.root()).yes == loop.root());
}

TEST_CASE("residuals collect every reachable continuation") {
    auto u = uni();

    ThreadGraph stop = from_text("start X\nX := stop\n", *u);
    CHECK(stop.residuals(stop.root()).size() == 1);

    ThreadGraph one = from_text("start X\nX := <stop> aux(m) <dead>\n", *u);
    CHECK(one.residuals(one.root()).size() == 3);

    // the tail of the two-allocation thread is one of its residuals
    ThreadGraph p = from_text(
        "start P\n"
        "P := <Q> dld(s = fresh) <Q>\n"
        "Q := <stop> dld(t = fresh) <dead>\n",
        *u);
    auto res = p.residuals(p.root());
    NodeId q = p.node(p.root()).yes;
    CHECK(std::find(res.begin(), res.end(), q) != res.end());

    // stepping never leaves the residual set
    for (NodeId n : res)
        for (bool reply : {true, false}) {
            ThreadStep s = p.step(n, reply);
            if (s.kind == ThreadStep::Kind::Next)
                CHECK(std::find(res.begin(), res.end(), s.next) != res.end());
        }
}

TEST_CASE("stepping follows the reply") {
    auto u = uni();
    ThreadGraph g = from_text("start X\nX := <Y> aux(m) <stop>\nY := dead\n", *u);

    ThreadStep yes = g.step(g.root(), true);
    CHECK(yes.kind == ThreadStep::Kind::Next);
    CHECK(g.node(yes.next).kind == NodeKind::Dead);

    ThreadStep no = g.step(g.root(), false);
    CHECK(g.node(no.next).kind == NodeKind::Stop);

    CHECK(g.step(yes.next, true).kind == ThreadStep::Kind::Deadlocked);
    CHECK(g.step(no.next, false).kind == ThreadStep::Kind::Terminated);
}

TEST_CASE("the internal step ignores its reply") {
    auto u = uni();
    ThreadGraph g = from_text("start X\nX := tau; Y\nY := stop\n", *u);
    const ThreadNode& root = g.node(g.root());
    CHECK(root.action.kind == ThreadAction::Kind::Tau);
    CHECK(root.yes == root.no);
    CHECK(g.step(g.root(), false).next == g.step(g.root(), true).next);
}

TEST_CASE("canonical tokens identify bisimilar structure") {
    auto u = uni();

    ThreadGraph a = from_text("start X\nX := <X> aux(m) <stop>\n", *u);
    ThreadGraph b = from_text("start P\nP := <P> aux(m) <stop>\n", *u);
    CHECK(a.canonical_token(a.root()) == b.canonical_token(b.root()));

    ThreadGraph stop = from_text("start X\nX := stop\n", *u);
    ThreadGraph dead = from_text("start X\nX := dead\n", *u);
    CHECK(stop.canonical_token(stop.root()) != dead.canonical_token(dead.root()));

    // a two-variable unrolling of the same loop lands in the same class
    ThreadGraph unrolled = from_text(
        "start X\n"
        "X := <Y> aux(m) <stop>\n"
        "Y := <X> aux(m) <stop>\n",
        *u);
    CHECK(unrolled.canonical_token(unrolled.root()) == a.canonical_token(a.root()));
    NodeId y = unrolled.node(unrolled.root()).yes;
    CHECK(unrolled.structure_class(y) == unrolled.structure_class(unrolled.root()));
}

TEST_CASE("distinct actions split classes") {
    auto u = uni();
    ThreadGraph g = from_text(
        "start P\n"
        "P := <Q> dld(s = fresh) <Q>\n"
        "Q := <stop> dld(t = fresh) <dead>\n",
        *u);
    CHECK(g.structure_class(g.root()) != g.structure_class(g.node(g.root()).yes));
}

TEST_CASE("printing round-trips to an equal-token graph") {
    auto u = uni();
    testkit::Rng rng(1234);
    for (int i = 0; i < 200; ++i) {
        ThreadGraph g = testkit::random_thread(rng, u, 4, true);
        ThreadGraph back = from_text(thread_to_text(g), *u);
        CHECK(back.canonical_token(back.root()) == g.canonical_token(g.root()));
    }
}

TEST_CASE("ill-formed specifications are rejected") {
    auto u = uni();
    CHECK_THROWS_AS(from_text("start X\n", *u), InputError);                 // undefined start
    CHECK_THROWS_AS(from_text("X := stop\n", *u), InputError);               // no start
    CHECK_THROWS_AS(from_text("start X\nX := <Y> aux(m) <stop>\n", *u),
                    InputError);                                             // undefined branch
    CHECK_THROWS_AS(from_text("start X\nX := stop\nX := dead\n", *u), InputError);  // duplicate
    CHECK_THROWS_AS(from_text("start X\nX := <stop> dld(nope) <stop>\n", *u),
                    InputError);  // unparseable heap method
    CHECK_THROWS_AS(from_text("start X\nX := <stop> dld(s = !pso) <stop>\n", *u),
                    InputError);  // mimic action against a plain universe
}

TEST_CASE("mimic universes accept marker actions in threads") {
    auto m = uni()->mimic_twin();
    ThreadGraph g = from_text("start X\nX := <stop> dld(t = !sso) <dead>\n", *m);
    CHECK(g.node(g.root()).action.method == "t = !sso");
}
