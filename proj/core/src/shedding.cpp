#include "linkdyn/shedding.hpp"

#include <unordered_set>

#include "linkdyn/error.hpp"

namespace linkdyn {

Action shed_action(const Action& a) {
    if (is_mimic_only(a.kind)) throw InputError("shed_action: mimic-only action");
    switch (a.kind) {
        case ActionKind::GetFresh:
        case ActionKind::SetSpot:
        case ActionKind::GetField:
            return clear_spot(a.s);
        case ActionKind::SetField:
            return clear_field(a.s, a.f);
        default:
            return a;
    }
}

Action mimic_action(ShedMode mode, const Action& a) {
    if (is_mimic_only(a.kind)) throw InputError("mimic_action: mimic-only action");
    if (mode == ShedMode::Off || !updates_content(a.kind)) return a;
    const bool primary = mode == ShedMode::Primary;
    switch (a.kind) {
        case ActionKind::GetFresh:
        case ActionKind::SetSpot:
        case ActionKind::GetField:
            return primary ? set_spot_pso(a.s) : set_spot_sso(a.s);
        case ActionKind::SetField:
            return primary ? set_field_pso(a.s, a.f) : set_field_sso(a.s, a.f);
        default:
            return a;
    }
}

namespace {

// some link from `spot` to a genuine (non-marker) atom
bool spot_has_real_link(const DataLinkage& l, NameId spot) {
    for (const AtomicLink& x : l.links())
        if (x.kind == LinkKind::Spot && x.a == spot && !is_special_atom(x.b)) return true;
    return false;
}

bool spot_links_to(const DataLinkage& l, NameId spot, NameId atom) {
    return l.contains(spot_link(spot, atom));
}

}  // namespace

bool use_is_error_free(const Action& a, const DataLinkage& l) {
    if (is_mimic_only(a.kind)) throw InputError("use_is_error_free: mimic-only action");
    switch (a.kind) {
        case ActionKind::GetFresh:
        case ActionKind::ClearSpot:
            return true;
        case ActionKind::SetSpot:
            return spot_has_real_link(l, a.t);
        case ActionKind::UndefTest:
        case ActionKind::AddField:
        case ActionKind::RemoveField:
        case ActionKind::HasField:
            return spot_has_real_link(l, a.s);
        case ActionKind::EqualTest:
        case ActionKind::SetField:
            return spot_has_real_link(l, a.s) && spot_has_real_link(l, a.t);
        case ActionKind::GetField:
            // the source spot and the field content it exposes, both genuine
            for (const AtomicLink& x : l.links()) {
                if (x.kind != LinkKind::Spot || x.a != a.t || is_special_atom(x.b)) continue;
                for (const AtomicLink& y : l.links())
                    if (y.kind == LinkKind::Field && y.a == x.b && y.b == a.f &&
                        !is_special_atom(y.c))
                        return true;
            }
            return false;
        case ActionKind::ClearField:
        case ActionKind::CollectGarbage:
            return false;
        default:
            return false;
    }
}

bool use_is_secondary_error(const Action& a, const DataLinkage& l) {
    if (is_mimic_only(a.kind)) throw InputError("use_is_secondary_error: mimic-only action");
    switch (a.kind) {
        case ActionKind::SetSpot:
            return spot_links_to(l, a.t, kSsoAtom);
        case ActionKind::EqualTest:
        case ActionKind::SetField:
            return spot_links_to(l, a.s, kSsoAtom) || spot_links_to(l, a.t, kSsoAtom);
        case ActionKind::UndefTest:
        case ActionKind::AddField:
        case ActionKind::RemoveField:
        case ActionKind::HasField:
            return spot_links_to(l, a.s, kSsoAtom);
        case ActionKind::GetField: {
            if (spot_links_to(l, a.t, kSsoAtom)) return true;
            // a field content that is the secondary marker, via any link of the source spot
            for (const AtomicLink& x : l.links()) {
                if (x.kind != LinkKind::Spot || x.a != a.t) continue;
                if (l.contains(field_link(x.b, a.f, kSsoAtom))) return true;
            }
            return false;
        }
        default:
            return false;
    }
}

namespace {

struct PairKey {
    std::uint32_t cls;
    DataLinkage state;

    bool operator==(const PairKey& other) const {
        return cls == other.cls && state == other.state;
    }
};

struct PairKeyHash {
    std::size_t operator()(const PairKey& k) const {
        return k.state.hash() * 1000003u + k.cls;
    }
};

struct Search {
    const ThreadGraph& g;
    std::size_t bound;
    std::size_t explored = 0;
    std::unordered_set<PairKey, PairKeyHash> on_path;
    std::vector<ShedStep> trail;
    std::vector<ShedStep> witness;

    Search(const ThreadGraph& graph, std::size_t b) : g(graph), bound(b) {}

    void capture_failure(ShedMode mode, const ThreadAction& act, const DataLinkage& l) {
        if (!witness.empty()) return;
        witness = trail;
        ShedStep last;
        last.mode = mode;
        last.action = act.kind == ThreadAction::Kind::Tau ? "tau" : act.method;
        last.state_after = linkage_to_text(l);
        last.failure = true;
        witness.push_back(std::move(last));
    }

    bool run(ShedMode mode, NodeId n, const DataLinkage& l) {
        if (++explored > bound)
            throw BoundExceeded("shed-safety search exceeded " + std::to_string(bound) + " pairs");

        const ThreadNode& node = g.node(n);
        if (node.kind != NodeKind::Post) return true;  // termination and deadlock are safe

        PairKey key{g.structure_class(n), l};
        if (on_path.count(key)) return true;  // cycle without a marker use

        const ThreadAction& act = node.action;

        if (act.kind == ThreadAction::Kind::Tau) {
            ShedStep frame;
            frame.mode = mode;
            frame.action = "tau";
            frame.performed = "tau";
            frame.reply = true;
            frame.state_after = linkage_to_text(l);
            trail.push_back(frame);
            on_path.insert(key);
            bool ok = run(ShedMode::Off, node.yes, l) && run(ShedMode::Secondary, node.yes, l);
            on_path.erase(key);
            trail.pop_back();
            return ok;
        }

        if (act.kind == ThreadAction::Kind::Foreign) {
            // both replies possible; each continuation checked unshed and shed
            on_path.insert(key);
            bool ok = true;
            for (NodeId branch : {node.yes, node.no}) {
                ShedStep frame;
                frame.mode = mode;
                frame.action = act.focus + "(" + act.method + ")";
                frame.performed = branch == node.yes ? "assume true" : "assume false";
                frame.reply = branch == node.yes;
                frame.state_after = linkage_to_text(l);
                trail.push_back(frame);
                ok = run(ShedMode::Off, branch, l) && run(ShedMode::Secondary, branch, l);
                trail.pop_back();
                if (!ok) break;
            }
            on_path.erase(key);
            return ok;
        }

        // heap action
        const Action& m = act.action;
        if (use_is_secondary_error(m, l)) return true;  // a secondary marker is hit first
        if (!use_is_error_free(m, l)) {
            // neither covered: a primary-marker use, or a use the mimic
            // rules give no clearance for
            capture_failure(mode, act, l);
            return false;
        }

        Action performed = mimic_action(mode, m);
        ActionResult out = apply_action(performed, l);
        NodeId next = out.reply ? node.yes : node.no;

        ShedStep frame;
        frame.mode = mode;
        frame.action = act.method;
        frame.performed = action_to_text(performed, *l.universe());
        frame.reply = out.reply;
        frame.state_after = linkage_to_text(out.state);
        trail.push_back(frame);

        on_path.insert(key);
        bool ok = run(ShedMode::Off, next, out.state) && run(ShedMode::Secondary, next, out.state);
        on_path.erase(key);
        trail.pop_back();
        return ok;
    }
};

}  // namespace

ShedVerdict check_shed_safe(const ThreadGraph& g, NodeId n, const DataLinkage& plain_state,
                            std::size_t bound) {
    DataLinkage mimic_state = plain_state.embed_mimic();
    Search search(g, bound);
    ShedVerdict verdict;
    verdict.member = search.run(ShedMode::Primary, n, mimic_state);
    verdict.explored = search.explored;
    if (!verdict.member) verdict.witness = std::move(search.witness);
    return verdict;
}

bool shed_safe_search(const ThreadGraph& g, ShedMode mode,
                      std::span<const std::pair<NodeId, DataLinkage>> ancestors, NodeId n,
                      const DataLinkage& mimic_state, std::size_t bound) {
    if (!mimic_state.universe()->mimic())
        throw InputError("shed_safe_search: state must live over a mimic universe");
    Search search(g, bound);
    for (const auto& [node, state] : ancestors)
        search.on_path.insert(PairKey{g.structure_class(node), state});
    return search.run(mode, n, mimic_state);
}

}  // namespace linkdyn
