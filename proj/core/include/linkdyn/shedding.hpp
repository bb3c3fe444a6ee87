#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "linkdyn/semantics.hpp"
#include "linkdyn/thread.hpp"

namespace linkdyn {

// How a content-changing action is treated while simulating shedding:
// performed as-is, or replaced by a write of the primary / secondary
// marker. The primary marker tracks the spot or field whose dropping is
// under scrutiny; the secondary marker any other one dropped later.
enum class ShedMode : std::uint8_t { Off = 0, Primary = 1, Secondary = 2 };

// The action performed instead of `a` when the spot or field it updates
// is shed: the matching clear action for the four content-changing
// actions, the action itself otherwise. Plain actions only.
Action shed_action(const Action& a);

// The mimic translation of `a` for the given mode: the marker-writing
// variant of a content-changing action, otherwise `a` unchanged.
Action mimic_action(ShedMode mode, const Action& a);

// True when using `a` in mimic state `l` touches no marker: the spots
// (and the field content, for a field read) the action consults carry
// at least one link to a genuine atom. Allocation and spot clearing
// qualify unconditionally; field clearing and collection never do.
bool use_is_error_free(const Action& a, const DataLinkage& l);

// True when using `a` in mimic state `l` reads a secondary marker: some
// consulted spot links to it, or a read field content is it.
bool use_is_secondary_error(const Action& a, const DataLinkage& l);

// One frame of a failed-safety witness: the action encountered, what
// was performed in its place (empty at the failing frame), the reply,
// and the mimic state after the step.
struct ShedStep {
    ShedMode mode = ShedMode::Primary;
    std::string action;     // the thread's action as written
    std::string performed;  // the mimic translation actually applied
    bool reply = false;
    std::string state_after;
    bool failure = false;  // final frame: the action is neither error-free nor a secondary error
};

struct ShedVerdict {
    bool member = false;       // dropping at the thread's first update is safe
    std::size_t explored = 0;  // search invocations
    std::vector<ShedStep> witness;  // first failing path; empty when member
};

// Decides whether the spot or field updated by the first action of the
// thread at `n` may safely be dropped in state `plain_state`: no path
// of the mimic simulation runs into a use of the primary marker first.
// Throws BoundExceeded past `bound` explored pairs.
ShedVerdict check_shed_safe(const ThreadGraph& g, NodeId n, const DataLinkage& plain_state,
                            std::size_t bound = 1'000'000);

// The underlying inductive search, exposed with an explicit starting
// mode and ancestor set (pairs of node and mimic state). Reaching an
// ancestor pair again closes a cycle and counts as safe.
bool shed_safe_search(const ThreadGraph& g, ShedMode mode,
                      std::span<const std::pair<NodeId, DataLinkage>> ancestors, NodeId n,
                      const DataLinkage& mimic_state, std::size_t bound = 1'000'000);

// Independent desk-scale oracle for the same predicate, written against
// its own state representation and semantics; shares no evaluation code
// with check_shed_safe. Returns nullopt when the instance exceeds
// `bound` explored pairs.
std::optional<bool> brute_force_shed_safe(const ThreadGraph& g, NodeId n,
                                          const DataLinkage& plain_state,
                                          std::size_t bound = 200'000);

}  // namespace linkdyn
