#include "linkdyn/service.hpp"

#include "linkdyn/error.hpp"
#include "linkdyn/semantics.hpp"
#include "linkdyn/shedding.hpp"

namespace linkdyn {

ForecastingService ForecastingService::plain(DataLinkage initial) {
    if (initial.universe()->mimic())
        throw InputError("service: the plain service takes a plain-universe state");
    UniversePtr u = initial.universe();
    return {ServiceKind::Plain, u, std::move(initial)};
}

ForecastingService ForecastingService::mimic(DataLinkage initial) {
    if (!initial.universe()->mimic())
        throw InputError("service: the mimic service takes a mimic-universe state");
    UniversePtr u = initial.universe();
    return {ServiceKind::Mimic, u, std::move(initial)};
}

ForecastingService ForecastingService::shedding(DataLinkage initial) {
    if (initial.universe()->mimic())
        throw InputError("service: the shedding service takes a plain-universe state");
    UniversePtr u = initial.universe();
    return {ServiceKind::Shedding, u, std::move(initial)};
}

ServiceOutcome ForecastingService::process(std::string_view method, const ThreadGraph& g,
                                           NodeId n) const {
    if (blocked()) return {Reply::Blocked, *this};

    // Requests are rejected unless the requesting thread's first step is
    // exactly the requested method. The focus is not the service's
    // business; only the method is compared.
    const ThreadNode& node = g.node(n);
    if (node.kind != NodeKind::Post || node.action.kind == ThreadAction::Kind::Tau ||
        node.action.method != method)
        return {Reply::Blocked, as_blocked()};

    // In-scope methods are the actions legal for the service's universe;
    // mimic write actions parse only against a mimic universe.
    Action a;
    try {
        a = parse_action(method, *universe_);
    } catch (const InputError&) {
        return {Reply::Blocked, as_blocked()};
    }

    if (kind_ == ServiceKind::Shedding && updates_content(a.kind) &&
        check_shed_safe(g, n, *state_).member) {
        ActionResult out = apply_action(shed_action(a), *state_);
        return {out.reply ? Reply::True : Reply::False,
                ForecastingService(kind_, universe_, std::move(out.state))};
    }

    ActionResult out = apply_action(a, *state_);
    return {out.reply ? Reply::True : Reply::False,
            ForecastingService(kind_, universe_, std::move(out.state))};
}

UseOutcome use_step(const ThreadGraph& g, NodeId n, std::string_view focus,
                    const ForecastingService& h) {
    const ThreadNode& node = g.node(n);
    UseOutcome out;
    switch (node.kind) {
        case NodeKind::Stop:
            out.kind = UseOutcome::Kind::Terminated;
            return out;
        case NodeKind::Dead:
            out.kind = UseOutcome::Kind::Deadlocked;
            return out;
        case NodeKind::Post:
            break;
    }

    const ThreadAction& act = node.action;
    if (act.kind == ThreadAction::Kind::Tau) {
        out.kind = UseOutcome::Kind::TauStep;
        out.next = node.yes;
        out.service = h;
        out.processed = false;
        return out;
    }
    if (act.focus != focus) {
        out.kind = UseOutcome::Kind::ExternalPending;
        out.focus = act.focus;
        out.method = act.method;
        out.yes = node.yes;
        out.no = node.no;
        return out;
    }

    ServiceOutcome r = h.process(act.method, g, n);
    if (r.reply == Reply::Blocked) {
        out.kind = UseOutcome::Kind::Deadlocked;
        return out;
    }
    out.kind = UseOutcome::Kind::TauStep;
    out.processed = true;
    out.reply = r.reply == Reply::True;
    out.method = act.method;
    out.next = out.reply ? node.yes : node.no;
    out.service = std::move(r.next);
    return out;
}

bool Trace::terminated() const {
    return !events.empty() && events.back().kind == TraceEvent::Kind::Terminated;
}
bool Trace::deadlocked() const {
    return !events.empty() && events.back().kind == TraceEvent::Kind::Deadlocked;
}
bool Trace::out_of_fuel() const {
    return !events.empty() && events.back().kind == TraceEvent::Kind::FuelExhausted;
}

Trace run_thread(const ThreadGraph& g, NodeId n, std::string_view focus, ForecastingService h,
                 const std::vector<bool>& foreign_replies, std::size_t fuel) {
    if (fuel == 0) throw InputError("run: fuel must be positive");
    Trace trace;
    std::size_t oracle_pos = 0;
    NodeId cur = n;

    auto snapshot = [&]() { trace.states.push_back(h.state()); };

    for (std::size_t step = 0; step < fuel; ++step) {
        UseOutcome out = use_step(g, cur, focus, h);
        switch (out.kind) {
            case UseOutcome::Kind::Terminated:
                trace.events.push_back({TraceEvent::Kind::Terminated, {}, {}, false});
                snapshot();
                return trace;
            case UseOutcome::Kind::Deadlocked:
                trace.events.push_back({TraceEvent::Kind::Deadlocked, {}, {}, false});
                snapshot();
                return trace;
            case UseOutcome::Kind::TauStep: {
                TraceEvent ev;
                ev.kind = out.processed ? TraceEvent::Kind::TauProcessed
                                        : TraceEvent::Kind::TauLiteral;
                ev.method = out.method;
                ev.reply = out.reply;
                trace.events.push_back(std::move(ev));
                h = std::move(*out.service);
                cur = out.next;
                snapshot();
                break;
            }
            case UseOutcome::Kind::ExternalPending: {
                if (oracle_pos >= foreign_replies.size())
                    throw InputError("run: no scripted reply left for " + out.focus + "(" +
                                     out.method + ")");
                bool reply = foreign_replies[oracle_pos++];
                trace.events.push_back({TraceEvent::Kind::Foreign, out.method, out.focus, reply});
                cur = reply ? out.yes : out.no;
                snapshot();
                break;
            }
        }
    }
    trace.events.push_back({TraceEvent::Kind::FuelExhausted, {}, {}, false});
    snapshot();
    return trace;
}

namespace {

ForecastingService make_service(ServiceKind kind, const UniversePtr& u,
                                const std::optional<DataLinkage>& state) {
    DataLinkage initial = state ? *state : DataLinkage(u);
    ForecastingService s = [&] {
        switch (kind) {
            case ServiceKind::Plain:
                return ForecastingService::plain(initial);
            case ServiceKind::Mimic:
                return ForecastingService::mimic(initial);
            case ServiceKind::Shedding:
                return ForecastingService::shedding(initial);
        }
        throw InputError("check_service_conditions: corrupt kind");
    }();
    if (!state) {
        // reach the blocked state through a rejected request
        ThreadSpec spec;
        spec.start = "X";
        spec.equations.push_back(
            {"X", ThreadSpec::Equation::Rhs::Post, ThreadAction::foreign("probe", "__nothing"),
             ThreadSpec::Branch::stop(), ThreadSpec::Branch::stop()});
        ThreadGraph probe = ThreadGraph::build(spec);
        auto out = s.process("__nothing", probe, probe.root());
        return out.next;
    }
    return s;
}

}  // namespace

std::vector<std::string> check_service_conditions(ServiceKind kind, const UniversePtr& u,
                                                  std::span<const ConformanceSample> samples) {
    std::vector<std::string> violations;

    // fixed helper threads for the mandatory rejections
    ThreadSpec stop_spec;
    stop_spec.start = "X";
    stop_spec.equations.push_back({"X", ThreadSpec::Equation::Rhs::Stop, {}, {}, {}});
    ThreadGraph stop_thread = ThreadGraph::build(stop_spec);

    ThreadSpec dead_spec;
    dead_spec.start = "X";
    dead_spec.equations.push_back({"X", ThreadSpec::Equation::Rhs::Dead, {}, {}, {}});
    ThreadGraph dead_thread = ThreadGraph::build(dead_spec);

    ThreadSpec tau_spec;
    tau_spec.start = "X";
    tau_spec.equations.push_back({"X", ThreadSpec::Equation::Rhs::TauPrefix, {},
                                  ThreadSpec::Branch::stop(), {}});
    ThreadGraph tau_thread = ThreadGraph::build(tau_spec);

    ThreadSpec other_spec;
    other_spec.start = "X";
    other_spec.equations.push_back({"X", ThreadSpec::Equation::Rhs::Post,
                                    ThreadAction::foreign("aux", "__distinct_method"),
                                    ThreadSpec::Branch::stop(), ThreadSpec::Branch::dead()});
    ThreadGraph other_thread = ThreadGraph::build(other_spec);

    std::size_t index = 0;
    for (const ConformanceSample& sample : samples) {
        ++index;
        auto complain = [&](const std::string& what) {
            violations.push_back("sample " + std::to_string(index) + ": " + what +
                                 " (method '" + sample.method + "')");
        };

        ForecastingService h = make_service(kind, u, sample.state);

        // mandatory rejections, independent of the sampled thread
        const std::pair<const char*, const ThreadGraph*> rejects[] = {
            {"terminated thread", &stop_thread},
            {"deadlocked thread", &dead_thread},
            {"tau-prefixed thread", &tau_thread},
        };
        for (const auto& [label, graph] : rejects) {
            auto out = h.process(sample.method, *graph, graph->root());
            if (out.reply != Reply::Blocked) complain(std::string("accepted a ") + label);
            if (!out.next.blocked()) complain(std::string(label) + " did not land in the blocked state");
        }
        if (sample.method != "__distinct_method") {
            auto out = h.process(sample.method, other_thread, other_thread.root());
            if (out.reply != Reply::Blocked) complain("accepted a mismatched first action");
            if (!out.next.blocked()) complain("mismatch did not land in the blocked state");
        }

        // the sampled request itself; Blocked must absorb
        auto out = h.process(sample.method, sample.thread, sample.node);
        if (out.reply == Reply::Blocked) {
            if (!out.next.blocked()) complain("Blocked reply left a live state");
            auto again = out.next.process(sample.method, sample.thread, sample.node);
            if (again.reply != Reply::Blocked) complain("blocked state accepted a request");
            if (!again.next.blocked()) complain("blocked state escaped");
            auto probe = out.next.process("__other", stop_thread, stop_thread.root());
            if (probe.reply != Reply::Blocked || !probe.next.blocked())
                complain("blocked state accepted another request");
        } else if (h.blocked()) {
            complain("request accepted while in the blocked state");
        }
    }
    return violations;
}

}  // namespace linkdyn
