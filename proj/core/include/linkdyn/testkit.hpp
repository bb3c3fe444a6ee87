#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "linkdyn/service.hpp"
#include "linkdyn/term.hpp"

namespace linkdyn::testkit {

using Rng = std::mt19937_64;

// The universe the randomized suites run over: 3 spots, 2 fields,
// 3 atoms, 2 values.
UniversePtr suite_universe();

AtomicLink random_link(Rng& rng, const Universe& u);
DataLinkage random_state(Rng& rng, const UniversePtr& u, std::size_t max_links);
LinkageTerm random_term(Rng& rng, const Universe& u, int max_depth);

// A plain action with uniformly chosen names; mimic write actions are
// included when the universe is mimic.
Action random_action(Rng& rng, const Universe& u);

// A small thread over the universe: up to `max_posts` action nodes with
// branches into each other or the constants. Heap actions throughout,
// with an occasional foreign or tau step when `allow_foreign`.
ThreadGraph random_thread(Rng& rng, const UniversePtr& u, std::size_t max_posts,
                          bool allow_foreign);

struct SuiteResult {
    std::string name;
    std::size_t checked = 0;
    std::vector<std::string> failures;

    bool passed() const { return failures.empty(); }
};

// The algebra's equation schemes, each on `per_equation` random
// instantiations; both sides evaluated to canonical link sets.
SuiteResult axiom_suite(std::uint64_t seed, std::size_t per_equation);

// Random closed terms evaluate without error; the canonical result
// survives a print/parse/evaluate round trip and re-normalizes to
// itself.
SuiteResult normalization_suite(std::uint64_t seed, std::size_t terms, int max_depth);

// Collection is idempotent, keeps every spot link, leaves no dangling
// carrier and always replies true.
SuiteResult collector_suite(std::uint64_t seed, std::size_t states);

// The two service conditions on random (method, state, thread) samples.
SuiteResult conformance_suite(std::uint64_t seed, ServiceKind kind, std::size_t samples);

}  // namespace linkdyn::testkit
