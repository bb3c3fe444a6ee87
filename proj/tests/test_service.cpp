#include <doctest.h>

#include "linkdyn/error.hpp"
#include "linkdyn/semantics.hpp"
#include "linkdyn/service.hpp"
#include "linkdyn/testkit.hpp"

using namespace linkdyn;

namespace {

UniversePtr one_atom() { return Universe::make({"s", "t"}, {"f"}, {"a"}, {"n"}); }

ThreadGraph from_text(const std::string& text, const Universe& u) {
    return ThreadGraph::build(parse_thread_spec(text, u));
}

// the two-allocation example thread
ThreadGraph example_one(const Universe& u) {
    return from_text(
        "start P\n"
        "P := <Q> dld(s = fresh) <Q>\n"
        "Q := <stop> dld(t = fresh) <dead>\n",
        u);
}

std::vector<TraceEvent::Kind> kinds(const Trace& t) {
    std::vector<TraceEvent::Kind> out;
    for (const TraceEvent& ev : t.events) out.push_back(ev.kind);
    return out;
}

}  // namespace

TEST_CASE("plain service performs matching requests") {
    auto u = one_atom();
    ThreadGraph g = from_text("start X\nX := <stop> dld(s = fresh) <dead>\n", *u);
    auto h = ForecastingService::plain(DataLinkage(u));

    auto out = h.process("s = fresh", g, g.root());
    CHECK(out.reply == Reply::True);
    REQUIRE(out.next.state().has_value());
    CHECK(*out.next.state() == DataLinkage(u, {spot_link(0, 0)}));
}

TEST_CASE("out-of-scope methods block and absorb") {
    auto u = one_atom();
    ThreadGraph g = from_text("start X\nX := <stop> aux(whatever) <dead>\n", *u);
    auto h = ForecastingService::plain(DataLinkage(u));

    auto out = h.process("whatever", g, g.root());
    CHECK(out.reply == Reply::Blocked);
    CHECK(out.next.blocked());

    // once blocked, always blocked
    auto again = out.next.process("s = fresh", g, g.root());
    CHECK(again.reply == Reply::Blocked);
    CHECK(again.next.blocked());
}

TEST_CASE("requests from finished or mismatched threads block") {
    auto u = one_atom();
    auto h = ForecastingService::plain(DataLinkage(u));

    ThreadGraph stop = from_text("start X\nX := stop\n", *u);
    CHECK(h.process("s = fresh", stop, stop.root()).reply == Reply::Blocked);

    ThreadGraph tau = from_text("start X\nX := tau; Y\nY := stop\n", *u);
    CHECK(h.process("s = fresh", tau, tau.root()).reply == Reply::Blocked);

    ThreadGraph other = from_text("start X\nX := <stop> dld(t = fresh) <dead>\n", *u);
    CHECK(h.process("s = fresh", other, other.root()).reply == Reply::Blocked);
}

TEST_CASE("mimic service handles marker writes") {
    auto m = one_atom()->mimic_twin();
    DataLinkage start(m, {spot_link(0, kPsoAtom)});

    ThreadGraph sso = from_text("start X\nX := <stop> dld(t = !sso) <dead>\n", *m);
    auto h = ForecastingService::mimic(start);
    auto out = h.process("t = !sso", sso, sso.root());
    CHECK(out.reply == Reply::True);
    CHECK(*out.next.state() == DataLinkage(m, {spot_link(0, kPsoAtom), spot_link(1, kSsoAtom)}));

    ThreadGraph fresh = from_text("start X\nX := <stop> dld(t = fresh) <dead>\n", *m);
    auto out2 = ForecastingService::mimic(start).process("t = fresh", fresh, fresh.root());
    CHECK(out2.reply == Reply::True);
    CHECK(*out2.next.state() == DataLinkage(m, {spot_link(0, kPsoAtom), spot_link(1, 0)}));

    // names outside the universe are out of scope
    ThreadGraph junk = from_text("start X\nX := <stop> aux(x9 = fresh) <dead>\n", *m);
    CHECK(ForecastingService::mimic(start).process("x9 = fresh", junk, junk.root()).reply ==
          Reply::Blocked);
}

TEST_CASE("use step cases") {
    auto u = one_atom();
    auto h = ForecastingService::plain(DataLinkage(u));

    ThreadGraph stop = from_text("start X\nX := stop\n", *u);
    CHECK(use_step(stop, stop.root(), kHeapFocus, h).kind == UseOutcome::Kind::Terminated);

    ThreadGraph dead = from_text("start X\nX := dead\n", *u);
    CHECK(use_step(dead, dead.root(), kHeapFocus, h).kind == UseOutcome::Kind::Deadlocked);

    ThreadGraph tau = from_text("start X\nX := tau; Y\nY := stop\n", *u);
    UseOutcome t = use_step(tau, tau.root(), kHeapFocus, h);
    CHECK(t.kind == UseOutcome::Kind::TauStep);
    CHECK_FALSE(t.processed);

    ThreadGraph foreign = from_text("start X\nX := <stop> aux(ping) <dead>\n", *u);
    UseOutcome f = use_step(foreign, foreign.root(), kHeapFocus, h);
    CHECK(f.kind == UseOutcome::Kind::ExternalPending);
    CHECK(f.focus == "aux");
    CHECK(f.method == "ping");

    // a processed action turns into an internal step with the reply chosen
    ThreadGraph act = from_text("start X\nX := <stop> dld(s = fresh) <dead>\n", *u);
    UseOutcome p = use_step(act, act.root(), kHeapFocus, h);
    CHECK(p.kind == UseOutcome::Kind::TauStep);
    CHECK(p.processed);
    CHECK(p.reply);

    // a blocked request deadlocks the composition
    ThreadGraph junk = from_text("start X\nX := <stop> dld(fgc) <dead>\n", *u);
    auto blocked_service = h.process("nope", stop, stop.root()).next;
    CHECK(use_step(junk, junk.root(), kHeapFocus, blocked_service).kind ==
          UseOutcome::Kind::Deadlocked);
}

TEST_CASE("running the two-allocation thread against the plain service") {
    auto u = one_atom();
    ThreadGraph g = example_one(*u);
    Trace trace = run_thread(g, g.root(), kHeapFocus,
                             ForecastingService::plain(DataLinkage(u)), {}, 100);

    REQUIRE(trace.events.size() == 3);
    CHECK(trace.events[0].kind == TraceEvent::Kind::TauProcessed);
    CHECK(trace.events[0].method == "s = fresh");
    CHECK(trace.events[0].reply);
    CHECK(trace.events[1].method == "t = fresh");
    CHECK_FALSE(trace.events[1].reply);
    CHECK(trace.events[2].kind == TraceEvent::Kind::Deadlocked);
}

TEST_CASE("run of a bare stop thread") {
    auto u = one_atom();
    ThreadGraph g = from_text("start X\nX := stop\n", *u);
    Trace t = run_thread(g, g.root(), kHeapFocus, ForecastingService::plain(DataLinkage(u)), {},
                         10);
    CHECK(kinds(t) == std::vector{TraceEvent::Kind::Terminated});
}

TEST_CASE("foreign actions consume scripted replies") {
    auto u = one_atom();
    ThreadGraph g = from_text("start X\nX := <stop> aux(ping) <dead>\n", *u);

    std::vector<bool> replies{false};
    Trace t = run_thread(g, g.root(), kHeapFocus, ForecastingService::plain(DataLinkage(u)),
                         replies, 10);
    REQUIRE(t.events.size() == 2);
    CHECK(t.events[0].kind == TraceEvent::Kind::Foreign);
    CHECK_FALSE(t.events[0].reply);
    CHECK(t.events[1].kind == TraceEvent::Kind::Deadlocked);

    CHECK_THROWS_AS(run_thread(g, g.root(), kHeapFocus,
                               ForecastingService::plain(DataLinkage(u)), {}, 10),
                    InputError);
}

TEST_CASE("fuel exhaustion is marked") {
    auto u = one_atom();
    ThreadGraph g = from_text("start X\nX := <X> dld(undef t) <X>\n", *u);
    Trace t = run_thread(g, g.root(), kHeapFocus, ForecastingService::plain(DataLinkage(u)), {},
                         5);
    CHECK(t.out_of_fuel());
    CHECK(t.events.size() == 6);
}

TEST_CASE("accepted requests behave exactly like the action semantics") {
    auto u = testkit::suite_universe();
    auto m = u->mimic_twin();
    testkit::Rng rng(4242);
    for (int i = 0; i < 500; ++i) {
        bool mimic = i % 2 == 0;
        const UniversePtr& universe = mimic ? m : u;
        Action a = testkit::random_action(rng, *universe);
        DataLinkage state = testkit::random_state(rng, universe, 5);

        ThreadSpec spec;
        spec.start = "X";
        spec.equations.push_back({"X", ThreadSpec::Equation::Rhs::Post,
                                  ThreadAction::heap(a, *universe), ThreadSpec::Branch::stop(),
                                  ThreadSpec::Branch::dead()});
        ThreadGraph g = ThreadGraph::build(spec);

        ForecastingService h = mimic ? ForecastingService::mimic(state)
                                     : ForecastingService::plain(state);
        auto out = h.process(action_to_text(a, *universe), g, g.root());
        ActionResult direct = apply_action(a, state);
        CHECK(out.reply == (direct.reply ? Reply::True : Reply::False));
        REQUIRE(out.next.state().has_value());
        CHECK(*out.next.state() == direct.state);
    }
}

TEST_CASE("service conditions hold on random samples") {
    for (ServiceKind kind :
         {ServiceKind::Plain, ServiceKind::Mimic, ServiceKind::Shedding}) {
        auto result = testkit::conformance_suite(2024, kind, 400);
        if (!result.failures.empty()) CAPTURE(result.failures.front());
        CHECK(result.failures.empty());
    }
}
