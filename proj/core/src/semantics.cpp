#include "linkdyn/semantics.hpp"

#include <algorithm>
#include <set>
#include <vector>

#include "linkdyn/error.hpp"

namespace linkdyn {

namespace {

DataLinkage without_spot_links(const DataLinkage& l, NameId spot) {
    std::vector<AtomicLink> out;
    out.reserve(l.size());
    for (const AtomicLink& x : l.links())
        if (!(x.kind == LinkKind::Spot && x.a == spot)) out.push_back(x);
    return DataLinkage(l.universe(), std::move(out));
}

DataLinkage without_field_group(const DataLinkage& l, NameId carrier, NameId field) {
    std::vector<AtomicLink> out;
    out.reserve(l.size());
    for (const AtomicLink& x : l.links()) {
        bool in_group = (x.kind == LinkKind::PartialField || x.kind == LinkKind::Field) &&
                        x.a == carrier && x.b == field;
        if (!in_group) out.push_back(x);
    }
    return DataLinkage(l.universe(), std::move(out));
}

DataLinkage with_one(const DataLinkage& l, const AtomicLink& x) { return override_one(l, x); }

ActionResult unchanged(const DataLinkage& l, bool reply) { return {l, reply}; }

}  // namespace

std::optional<NameId> fresh_atom(const DataLinkage& l) {
    std::set<NameId> used;
    for (const AtomicLink& x : l.links()) {
        switch (x.kind) {
            case LinkKind::Spot:
                used.insert(x.b);
                break;
            case LinkKind::PartialField:
            case LinkKind::Value:
                used.insert(x.a);
                break;
            case LinkKind::Field:
                used.insert(x.a);
                used.insert(x.c);
                break;
        }
    }
    const auto count = NameId(l.universe()->atoms().size());
    for (NameId a = 0; a < count; ++a)
        if (!used.count(a)) return a;
    return std::nullopt;
}

DataLinkage collect_garbage(const DataLinkage& l) {
    std::set<NameId> reachable;
    for (const AtomicLink& x : l.links())
        if (x.kind == LinkKind::Spot) reachable.insert(x.b);
    if (l.universe()->mimic()) {
        reachable.insert(kPsoAtom);
        reachable.insert(kSsoAtom);
    }
    bool grew = true;
    while (grew) {
        grew = false;
        for (const AtomicLink& x : l.links())
            if (x.kind == LinkKind::Field && reachable.count(x.a) && !reachable.count(x.c)) {
                reachable.insert(x.c);
                grew = true;
            }
    }
    std::vector<AtomicLink> out;
    out.reserve(l.size());
    for (const AtomicLink& x : l.links()) {
        if (x.kind == LinkKind::Spot || reachable.count(x.a)) out.push_back(x);
    }
    return DataLinkage(l.universe(), std::move(out));
}

ActionResult apply_action(const Action& a, const DataLinkage& l) {
    const Universe& u = *l.universe();
    if (!action_is_legal(a, u)) throw InputError("apply_action: action is not legal for this universe");

    switch (a.kind) {
        case ActionKind::GetFresh: {
            auto atom = fresh_atom(l);
            if (!atom) return unchanged(l, false);
            return {with_one(l, spot_link(a.s, *atom)), true};
        }
        case ActionKind::SetSpot: {
            SpotContent src = content_of_spot(l, a.t);
            if (src.status == SpotContent::Status::Unique)
                return {with_one(l, spot_link(a.s, src.atom)), true};
            if (src.status == SpotContent::Status::Undefined)
                return {without_spot_links(l, a.s), true};
            return unchanged(l, false);
        }
        case ActionKind::ClearSpot:
            return {without_spot_links(l, a.s), true};
        case ActionKind::EqualTest: {
            SpotContent lhs = content_of_spot(l, a.s);
            SpotContent rhs = content_of_spot(l, a.t);
            bool eq = lhs.status == SpotContent::Status::Unique &&
                      rhs.status == SpotContent::Status::Unique && lhs.atom == rhs.atom;
            return unchanged(l, eq);
        }
        case ActionKind::UndefTest:
            return unchanged(l, content_of_spot(l, a.s).status == SpotContent::Status::Undefined);
        case ActionKind::AddField: {
            SpotContent c = content_of_spot(l, a.s);
            if (c.status != SpotContent::Status::Unique) return unchanged(l, false);
            if (field_group(l, c.atom, a.f).status != FieldGroup::Status::Absent)
                return unchanged(l, false);
            return {combine(l, DataLinkage(l.universe(), {partial_field_link(c.atom, a.f)})), true};
        }
        case ActionKind::RemoveField: {
            SpotContent c = content_of_spot(l, a.s);
            if (c.status != SpotContent::Status::Unique) return unchanged(l, false);
            if (field_group(l, c.atom, a.f).status == FieldGroup::Status::Absent)
                return unchanged(l, false);
            return {without_field_group(l, c.atom, a.f), true};
        }
        case ActionKind::HasField: {
            SpotContent c = content_of_spot(l, a.s);
            bool has = c.status == SpotContent::Status::Unique &&
                       field_group(l, c.atom, a.f).status != FieldGroup::Status::Absent;
            return unchanged(l, has);
        }
        case ActionKind::SetField: {
            SpotContent c = content_of_spot(l, a.s);
            if (c.status != SpotContent::Status::Unique) return unchanged(l, false);
            auto group = field_group(l, c.atom, a.f).status;
            if (group == FieldGroup::Status::Absent || group == FieldGroup::Status::Multiple)
                return unchanged(l, false);
            SpotContent src = content_of_spot(l, a.t);
            if (src.status == SpotContent::Status::Unique)
                return {with_one(l, field_link(c.atom, a.f, src.atom)), true};
            if (src.status == SpotContent::Status::Undefined)
                return {with_one(l, partial_field_link(c.atom, a.f)), true};
            return unchanged(l, false);
        }
        case ActionKind::ClearField: {
            SpotContent c = content_of_spot(l, a.s);
            if (c.status != SpotContent::Status::Unique) return unchanged(l, false);
            if (field_group(l, c.atom, a.f).status == FieldGroup::Status::Absent)
                return unchanged(l, false);
            return {with_one(l, partial_field_link(c.atom, a.f)), true};
        }
        case ActionKind::GetField: {
            SpotContent c = content_of_spot(l, a.t);
            if (c.status != SpotContent::Status::Unique) return unchanged(l, false);
            FieldGroup group = field_group(l, c.atom, a.f);
            if (group.status == FieldGroup::Status::Unique)
                return {with_one(l, spot_link(a.s, group.target)), true};
            if (group.status == FieldGroup::Status::UndefinedContent)
                return {without_spot_links(l, a.s), true};
            return unchanged(l, false);
        }
        case ActionKind::CollectGarbage:
            return {collect_garbage(l), true};
        case ActionKind::SetSpotPso:
            return {with_one(l, spot_link(a.s, kPsoAtom)), true};
        case ActionKind::SetSpotSso:
            return {with_one(l, spot_link(a.s, kSsoAtom)), true};
        case ActionKind::SetFieldPso:
        case ActionKind::SetFieldSso: {
            SpotContent c = content_of_spot(l, a.s);
            if (c.status != SpotContent::Status::Unique) return unchanged(l, false);
            auto group = field_group(l, c.atom, a.f).status;
            if (group == FieldGroup::Status::Absent || group == FieldGroup::Status::Multiple)
                return unchanged(l, false);
            NameId marker = a.kind == ActionKind::SetFieldPso ? kPsoAtom : kSsoAtom;
            return {with_one(l, field_link(c.atom, a.f, marker)), true};
        }
    }
    throw InputError("apply_action: corrupt action kind");
}

}  // namespace linkdyn
