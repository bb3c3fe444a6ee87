#pragma once

#include <optional>

#include "linkdyn/action.hpp"
#include "linkdyn/linkage.hpp"

namespace linkdyn {

struct ActionResult {
    DataLinkage state;
    bool reply;
};

// State change and reply of one action. Spots and fields an action
// consults must be locally deterministic, or nothing changes and the
// reply is false; targets that are only written or cleared are
// overridden whatever their prior multiplicity. Pure and total on
// actions legal for the state's universe.
ActionResult apply_action(const Action& a, const DataLinkage& l);

// The allocation candidate: the first declared atom occurring nowhere
// in the state; the mimic markers are neither candidates nor blockers.
std::optional<NameId> fresh_atom(const DataLinkage& l);

// Full garbage collection: drop every field link, partial field link
// and value association whose carrier is not reachable from a spot via
// field links. Spot links always survive; in mimic universes the two
// markers count as roots and are never reclaimed.
DataLinkage collect_garbage(const DataLinkage& l);

}  // namespace linkdyn
