// Desk-scale reference for the drop-safety predicate. Everything here is
// written against its own little state representation and semantics so
// that it shares no evaluation path with check_shed_safe; only the input
// types (thread graph, actions, the initial linkage) are common ground.

#include <array>
#include <set>
#include <vector>

#include "linkdyn/error.hpp"
#include "linkdyn/shedding.hpp"

namespace linkdyn {

namespace {

// markers get ids far above any declared atom index
constexpr long kMarkerP = 1'000'000'000L;
constexpr long kMarkerS = 1'000'000'001L;

// {tag, x, y, z}: tag 0 spot link (spot, atom), 1 partial field (atom,
// field), 2 field link (atom, field, atom), 3 value assoc (atom, value)
using Row = std::array<long, 4>;
using State = std::set<Row>;

bool is_marker(long a) { return a >= kMarkerP; }

std::vector<long> spot_targets(const State& st, long spot) {
    std::vector<long> out;
    for (const Row& r : st)
        if (r[0] == 0 && r[1] == spot) out.push_back(r[2]);
    return out;
}

std::vector<Row> group_rows(const State& st, long carrier, long field) {
    std::vector<Row> out;
    for (const Row& r : st)
        if ((r[0] == 1 || r[0] == 2) && r[1] == carrier && r[2] == field) out.push_back(r);
    return out;
}

void erase_spot(State& st, long spot) {
    for (auto it = st.begin(); it != st.end();)
        it = (*it)[0] == 0 && (*it)[1] == spot ? st.erase(it) : std::next(it);
}

void erase_group(State& st, long carrier, long field) {
    for (auto it = st.begin(); it != st.end();) {
        const Row& r = *it;
        bool hit = (r[0] == 1 || r[0] == 2) && r[1] == carrier && r[2] == field;
        it = hit ? st.erase(it) : std::next(it);
    }
}

struct Step {
    State state;
    bool reply;
};

Step effect(const Action& a, const State& st, long atom_count) {
    State out = st;
    switch (a.kind) {
        case ActionKind::GetFresh: {
            std::set<long> used;
            for (const Row& r : st) {
                if (r[0] == 0) used.insert(r[2]);
                if (r[0] == 1 || r[0] == 3) used.insert(r[1]);
                if (r[0] == 2) {
                    used.insert(r[1]);
                    used.insert(r[3]);
                }
            }
            for (long cand = 0; cand < atom_count; ++cand) {
                if (!used.count(cand)) {
                    erase_spot(out, a.s);
                    out.insert({0, a.s, cand, 0});
                    return {out, true};
                }
            }
            return {st, false};
        }
        case ActionKind::SetSpot: {
            auto src = spot_targets(st, a.t);
            if (src.size() > 1) return {st, false};
            erase_spot(out, a.s);
            if (src.size() == 1) out.insert({0, a.s, src[0], 0});
            return {out, true};
        }
        case ActionKind::ClearSpot:
            erase_spot(out, a.s);
            return {out, true};
        case ActionKind::EqualTest: {
            auto lhs = spot_targets(st, a.s), rhs = spot_targets(st, a.t);
            return {st, lhs.size() == 1 && rhs.size() == 1 && lhs[0] == rhs[0]};
        }
        case ActionKind::UndefTest:
            return {st, spot_targets(st, a.s).empty()};
        case ActionKind::AddField: {
            auto c = spot_targets(st, a.s);
            if (c.size() != 1) return {st, false};
            if (!group_rows(st, c[0], a.f).empty()) return {st, false};
            out.insert({1, c[0], a.f, 0});
            return {out, true};
        }
        case ActionKind::RemoveField: {
            auto c = spot_targets(st, a.s);
            if (c.size() != 1) return {st, false};
            if (group_rows(st, c[0], a.f).empty()) return {st, false};
            erase_group(out, c[0], a.f);
            return {out, true};
        }
        case ActionKind::HasField: {
            auto c = spot_targets(st, a.s);
            return {st, c.size() == 1 && !group_rows(st, c[0], a.f).empty()};
        }
        case ActionKind::SetField: {
            auto c = spot_targets(st, a.s);
            if (c.size() != 1) return {st, false};
            if (group_rows(st, c[0], a.f).size() != 1) return {st, false};
            auto src = spot_targets(st, a.t);
            if (src.size() > 1) return {st, false};
            erase_group(out, c[0], a.f);
            if (src.size() == 1)
                out.insert({2, c[0], a.f, src[0]});
            else
                out.insert({1, c[0], a.f, 0});
            return {out, true};
        }
        case ActionKind::ClearField: {
            auto c = spot_targets(st, a.s);
            if (c.size() != 1) return {st, false};
            if (group_rows(st, c[0], a.f).empty()) return {st, false};
            erase_group(out, c[0], a.f);
            out.insert({1, c[0], a.f, 0});
            return {out, true};
        }
        case ActionKind::GetField: {
            auto c = spot_targets(st, a.t);
            if (c.size() != 1) return {st, false};
            auto grp = group_rows(st, c[0], a.f);
            if (grp.size() != 1) return {st, false};
            erase_spot(out, a.s);
            if (grp[0][0] == 2) out.insert({0, a.s, grp[0][3], 0});
            return {out, true};
        }
        case ActionKind::CollectGarbage: {
            std::set<long> live{kMarkerP, kMarkerS};
            for (const Row& r : st)
                if (r[0] == 0) live.insert(r[2]);
            for (bool grew = true; grew;) {
                grew = false;
                for (const Row& r : st)
                    if (r[0] == 2 && live.count(r[1]) && !live.count(r[3])) {
                        live.insert(r[3]);
                        grew = true;
                    }
            }
            out.clear();
            for (const Row& r : st)
                if (r[0] == 0 || live.count(r[1])) out.insert(r);
            return {out, true};
        }
        case ActionKind::SetSpotPso:
        case ActionKind::SetSpotSso: {
            erase_spot(out, a.s);
            out.insert({0, a.s, a.kind == ActionKind::SetSpotPso ? kMarkerP : kMarkerS, 0});
            return {out, true};
        }
        case ActionKind::SetFieldPso:
        case ActionKind::SetFieldSso: {
            auto c = spot_targets(st, a.s);
            if (c.size() != 1) return {st, false};
            if (group_rows(st, c[0], a.f).size() != 1) return {st, false};
            erase_group(out, c[0], a.f);
            out.insert({2, c[0], a.f, a.kind == ActionKind::SetFieldPso ? kMarkerP : kMarkerS});
            return {out, true};
        }
    }
    throw InputError("oracle: corrupt action kind");
}

bool any_real_target(const State& st, long spot) {
    for (long t : spot_targets(st, spot))
        if (!is_marker(t)) return true;
    return false;
}

bool links_to(const State& st, long spot, long atom) {
    return st.count({0, spot, atom, 0}) > 0;
}

bool error_free(const Action& a, const State& st) {
    switch (a.kind) {
        case ActionKind::GetFresh:
        case ActionKind::ClearSpot:
            return true;
        case ActionKind::SetSpot:
            return any_real_target(st, a.t);
        case ActionKind::UndefTest:
        case ActionKind::AddField:
        case ActionKind::RemoveField:
        case ActionKind::HasField:
            return any_real_target(st, a.s);
        case ActionKind::EqualTest:
        case ActionKind::SetField:
            return any_real_target(st, a.s) && any_real_target(st, a.t);
        case ActionKind::GetField:
            for (long c : spot_targets(st, a.t)) {
                if (is_marker(c)) continue;
                for (const Row& r : st)
                    if (r[0] == 2 && r[1] == c && r[2] == a.f && !is_marker(r[3])) return true;
            }
            return false;
        default:
            return false;
    }
}

bool secondary_error(const Action& a, const State& st) {
    switch (a.kind) {
        case ActionKind::SetSpot:
            return links_to(st, a.t, kMarkerS);
        case ActionKind::EqualTest:
        case ActionKind::SetField:
            return links_to(st, a.s, kMarkerS) || links_to(st, a.t, kMarkerS);
        case ActionKind::UndefTest:
        case ActionKind::AddField:
        case ActionKind::RemoveField:
        case ActionKind::HasField:
            return links_to(st, a.s, kMarkerS);
        case ActionKind::GetField:
            if (links_to(st, a.t, kMarkerS)) return true;
            for (long c : spot_targets(st, a.t))
                if (st.count({2, c, a.f, kMarkerS})) return true;
            return false;
        default:
            return false;
    }
}

Action translate(int mode, const Action& a) {
    if (mode == 0 || !updates_content(a.kind)) return a;
    bool primary = mode == 1;
    if (a.kind == ActionKind::SetField)
        return primary ? set_field_pso(a.s, a.f) : set_field_sso(a.s, a.f);
    return primary ? set_spot_pso(a.s) : set_spot_sso(a.s);
}

// pairwise bisimilarity over graph nodes, naive fixpoint
std::vector<std::vector<bool>> bisimilar(const ThreadGraph& g) {
    const std::size_t n = g.node_count();
    std::vector<std::vector<bool>> eq(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const ThreadNode& a = g.node(NodeId(i));
            const ThreadNode& b = g.node(NodeId(j));
            eq[i][j] = a.kind == b.kind &&
                       (a.kind != NodeKind::Post || a.action == b.action);
        }
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (!eq[i][j] || g.node(NodeId(i)).kind != NodeKind::Post) continue;
                const ThreadNode& a = g.node(NodeId(i));
                const ThreadNode& b = g.node(NodeId(j));
                if (!eq[a.yes][b.yes] || !eq[a.no][b.no]) {
                    eq[i][j] = false;
                    changed = true;
                }
            }
    }
    return eq;
}

struct Enumerator {
    const ThreadGraph& g;
    long atom_count;
    std::size_t bound;
    std::size_t used = 0;
    bool exceeded = false;
    std::vector<std::vector<bool>> eq;
    std::vector<std::pair<NodeId, State>> path;

    Enumerator(const ThreadGraph& graph, long atoms, std::size_t b)
        : g(graph), atom_count(atoms), bound(b), eq(bisimilar(graph)) {}

    bool safe(int mode, NodeId n, const State& st) {
        if (exceeded) return true;
        if (++used > bound) {
            exceeded = true;
            return true;
        }
        const ThreadNode& node = g.node(n);
        if (node.kind != NodeKind::Post) return true;

        for (const auto& [pn, ps] : path)
            if (eq[pn][n] && ps == st) return true;

        const ThreadAction& act = node.action;

        if (act.kind == ThreadAction::Kind::Tau) {
            path.emplace_back(n, st);
            bool ok = safe(0, node.yes, st) && safe(2, node.yes, st);
            path.pop_back();
            return ok;
        }
        if (act.kind == ThreadAction::Kind::Foreign) {
            path.emplace_back(n, st);
            bool ok = safe(0, node.yes, st) && safe(2, node.yes, st) && safe(0, node.no, st) &&
                      safe(2, node.no, st);
            path.pop_back();
            return ok;
        }

        const Action& m = act.action;
        if (secondary_error(m, st)) return true;
        if (!error_free(m, st)) return false;
        Step out = effect(translate(mode, m), st, atom_count);
        NodeId next = out.reply ? node.yes : node.no;
        path.emplace_back(n, st);
        bool ok = safe(0, next, out.state) && safe(2, next, out.state);
        path.pop_back();
        return ok;
    }
};

State import_state(const DataLinkage& l) {
    State st;
    for (const AtomicLink& x : l.links()) {
        switch (x.kind) {
            case LinkKind::Spot:
                st.insert({0, x.a, x.b, 0});
                break;
            case LinkKind::PartialField:
                st.insert({1, x.a, x.b, 0});
                break;
            case LinkKind::Field:
                st.insert({2, x.a, x.b, x.c});
                break;
            case LinkKind::Value:
                st.insert({3, x.a, x.b, 0});
                break;
        }
    }
    return st;
}

}  // namespace

std::optional<bool> brute_force_shed_safe(const ThreadGraph& g, NodeId n,
                                          const DataLinkage& plain_state, std::size_t bound) {
    if (plain_state.universe()->mimic())
        throw InputError("oracle: expects a plain initial state");
    Enumerator e(g, long(plain_state.universe()->atoms().size()), bound);
    bool result = e.safe(1, n, import_state(plain_state));
    if (e.exceeded) return std::nullopt;
    return result;
}

}  // namespace linkdyn
