#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "linkdyn/service.hpp"
#include "linkdyn/shedding.hpp"
#include "linkdyn/thread.hpp"

namespace linkdyn {

// A parsed workspace file: the universe, the initial state, the thread,
// scripted replies for foreign actions, and a step budget.
struct Workspace {
    UniversePtr universe;
    DataLinkage initial;
    ThreadSpec thread_spec;
    ThreadGraph thread;
    std::vector<bool> foreign_replies;
    std::size_t fuel = 10'000;
};

// Sections: [universe] with `spots = ...`, `fields = ...`, `atoms = ...`,
// `values = ...` (space- or comma-separated names); [state] with one
// link per line; [thread] in the thread file syntax; [oracle] with
// true/false tokens; [fuel] with one positive integer. `#` starts a
// comment. Unknown sections are rejected. Workspace universes are
// always plain.
Workspace parse_workspace(std::string_view text, const std::string& origin = "workspace");

// Per-step heap occupancy: total links, genuine atoms occurring, atoms
// reachable from spots, and the difference a collection would reclaim.
struct GarbageStep {
    std::size_t links = 0;
    std::size_t occupied = 0;
    std::size_t reachable = 0;
    std::size_t reclaimable = 0;
};

GarbageStep measure_garbage(const DataLinkage& l);

// One report row per trace event that carries a state.
std::vector<std::optional<GarbageStep>> garbage_report(const Trace& trace);

// Event-per-line rendering:
//   tau <method> -> true|false      processed actions
//   tau                             literal internal steps
//   foreign <focus>(<method>) -> true|false
//   stop | dead | fuel              terminal line
// With `with_states`, each event line is followed by an indented
// canonical state line.
std::string format_trace(const Trace& trace, bool with_states);

std::string format_garbage_report(const Trace& trace);

std::string format_verdict(const ShedVerdict& v);

// Deterministic DOT rendering: occurring atoms as nodes (value
// associations in the label), spots as box nodes, field links as
// labelled edges, fields with undefined content as dashed edges into
// point stubs.
std::string render_dot(const DataLinkage& l);

}  // namespace linkdyn
