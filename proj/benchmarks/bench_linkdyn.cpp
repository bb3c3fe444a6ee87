#include <benchmark/benchmark.h>

#include "linkdyn/semantics.hpp"
#include "linkdyn/service.hpp"
#include "linkdyn/shedding.hpp"
#include "linkdyn/term.hpp"
#include "linkdyn/testkit.hpp"

using namespace linkdyn;

namespace {

UniversePtr wide_universe() {
    std::vector<std::string> spots, fields, atoms, values{"v"};
    for (int i = 0; i < 16; ++i) {
        spots.push_back("s" + std::to_string(i));
        fields.push_back("f" + std::to_string(i));
    }
    for (int i = 0; i < 64; ++i) atoms.push_back("a" + std::to_string(i));
    return Universe::make(spots, fields, atoms, values);
}

void BM_OverrideSingleLink(benchmark::State& state) {
    auto u = wide_universe();
    testkit::Rng rng(1);
    DataLinkage base = testkit::random_state(rng, u, std::size_t(state.range(0)));
    AtomicLink link = testkit::random_link(rng, *u);
    for (auto _ : state) benchmark::DoNotOptimize(override_one(base, link));
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_OverrideSingleLink)->Arg(8)->Arg(64)->Arg(256);

void BM_EvaluateTerm(benchmark::State& state) {
    auto u = wide_universe();
    testkit::Rng rng(2);
    LinkageTerm term = testkit::random_term(rng, *u, int(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_term(term, u));
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_EvaluateTerm)->Arg(4)->Arg(8)->Arg(12);

void BM_CollectGarbage(benchmark::State& state) {
    auto u = wide_universe();
    testkit::Rng rng(3);
    DataLinkage l = testkit::random_state(rng, u, std::size_t(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(collect_garbage(l));
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_CollectGarbage)->Arg(16)->Arg(128);

// a chain of allocations and field writes, decided at the head
ThreadGraph builder_chain(const UniversePtr& u, int cells) {
    ThreadSpec spec;
    spec.start = "X0";
    int n = 0;
    auto var = [](int i) { return "X" + std::to_string(i); };
    for (int i = 0; i < cells; ++i) {
        ThreadSpec::Equation alloc;
        alloc.name = var(n);
        alloc.rhs = ThreadSpec::Equation::Rhs::Post;
        alloc.action = ThreadAction::heap(get_fresh(1), *u);
        alloc.yes = ThreadSpec::Branch::var(var(n + 1));
        alloc.no = ThreadSpec::Branch::dead();
        spec.equations.push_back(alloc);

        ThreadSpec::Equation copy;
        copy.name = var(n + 1);
        copy.rhs = ThreadSpec::Equation::Rhs::Post;
        copy.action = ThreadAction::heap(set_spot(0, 1), *u);
        copy.yes = i + 1 < cells ? ThreadSpec::Branch::var(var(n + 2)) : ThreadSpec::Branch::stop();
        copy.no = ThreadSpec::Branch::dead();
        spec.equations.push_back(copy);
        n += 2;
    }
    return ThreadGraph::build(spec);
}

// alternating allocations never read their spots again, so the safety
// search explores the full unshed/shed tree of every prefix
ThreadGraph alloc_chain(const UniversePtr& u, int length) {
    ThreadSpec spec;
    spec.start = "X0";
    auto var = [](int i) { return "X" + std::to_string(i); };
    for (int i = 0; i < length; ++i) {
        ThreadSpec::Equation eq;
        eq.name = var(i);
        eq.rhs = ThreadSpec::Equation::Rhs::Post;
        eq.action = ThreadAction::heap(get_fresh(i % 2), *u);
        eq.yes = i + 1 < length ? ThreadSpec::Branch::var(var(i + 1)) : ThreadSpec::Branch::stop();
        eq.no = ThreadSpec::Branch::dead();
        spec.equations.push_back(eq);
    }
    return ThreadGraph::build(spec);
}

void BM_ShedCheckChain(benchmark::State& state) {
    auto u = Universe::make({"s", "t"}, {"f"}, {"a", "b", "c", "d"}, {"v"});
    ThreadGraph g = alloc_chain(u, int(state.range(0)));
    DataLinkage initial(u);
    for (auto _ : state) benchmark::DoNotOptimize(check_shed_safe(g, g.root(), initial));
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ShedCheckChain)->Arg(4)->Arg(8)->Arg(12);

void BM_RunPlainService(benchmark::State& state) {
    auto u = Universe::make({"s", "t"}, {"f"}, {"a", "b", "c", "d"}, {"v"});
    ThreadGraph g = builder_chain(u, int(state.range(0)));
    DataLinkage initial(u);
    for (auto _ : state) {
        Trace t = run_thread(g, g.root(), kHeapFocus, ForecastingService::plain(initial), {},
                             10'000);
        benchmark::DoNotOptimize(t);
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_RunPlainService)->Arg(4)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
