// linkdyn: run threads against linkage state services, check whether a
// spot or field may be dropped at an update, normalize linkage
// expressions, and render heap snapshots.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "linkdyn/error.hpp"
#include "linkdyn/service.hpp"
#include "linkdyn/shedding.hpp"
#include "linkdyn/term.hpp"
#include "linkdyn/testkit.hpp"
#include "linkdyn/workspace.hpp"

namespace {

using namespace linkdyn;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Workspace load(const std::string& path) { return parse_workspace(read_file(path), path); }

int cmd_run(const std::string& path, const std::string& service, bool with_states,
            std::size_t fuel_override) {
    Workspace ws = load(path);
    std::size_t fuel = fuel_override ? fuel_override : ws.fuel;
    ForecastingService h = service == "shed" ? ForecastingService::shedding(ws.initial)
                                             : ForecastingService::plain(ws.initial);
    Trace trace = run_thread(ws.thread, ws.thread.root(), kHeapFocus, std::move(h),
                             ws.foreign_replies, fuel);
    std::cout << format_trace(trace, with_states);
    std::cout << format_garbage_report(trace);
    return trace.out_of_fuel() ? 2 : 0;
}

int cmd_shed_check(const std::string& path, std::size_t bound) {
    Workspace ws = load(path);
    ShedVerdict v = check_shed_safe(ws.thread, ws.thread.root(), ws.initial, bound);
    std::cout << format_verdict(v);
    return 0;
}

int cmd_normalize(const std::string& path, const std::string& term_text) {
    Workspace ws = load(path);
    DataLinkage norm = evaluate_term(parse_term(term_text, *ws.universe), ws.universe);
    std::cout << term_to_text(linkage_to_term(norm), *ws.universe) << '\n';
    return 0;
}

int cmd_dot(const std::string& path) {
    Workspace ws = load(path);
    std::cout << render_dot(ws.initial);
    return 0;
}

int cmd_selftest(std::uint64_t seed, bool quick) {
    using testkit::SuiteResult;
    const std::size_t per_axiom = quick ? 100 : 1000;
    const std::size_t terms = quick ? 1000 : 10000;
    const std::size_t states = quick ? 500 : 5000;
    const std::size_t samples = quick ? 500 : 5000;

    std::vector<SuiteResult> results;
    results.push_back(testkit::axiom_suite(seed, per_axiom));
    results.push_back(testkit::normalization_suite(seed, terms, 6));
    results.push_back(testkit::collector_suite(seed, states));
    results.push_back(testkit::conformance_suite(seed, ServiceKind::Plain, samples));
    results.push_back(testkit::conformance_suite(seed, ServiceKind::Mimic, samples));
    results.push_back(testkit::conformance_suite(seed, ServiceKind::Shedding, samples));

    bool ok = true;
    for (const SuiteResult& r : results) {
        std::cout << r.name << ": " << (r.passed() ? "pass" : "FAIL") << " (" << r.checked
                  << " checks, " << r.failures.size() << " violations)\n";
        for (std::size_t i = 0; i < r.failures.size() && i < 5; ++i)
            std::cout << "  " << r.failures[i] << '\n';
        ok = ok && r.passed();
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"linkage dynamics interpreter and shedding analyzer"};
    app.require_subcommand(1);

    std::string ws_path, service = "plain", term_text;
    bool with_states = false, quick = false;
    std::size_t fuel = 0, bound = 1'000'000;
    std::uint64_t seed = 20080917;

    CLI::App* run = app.add_subcommand("run", "execute a workspace and print its trace");
    run->add_option("workspace", ws_path, "workspace file")->required();
    run->add_option("--service", service, "plain or shed")
        ->check(CLI::IsMember({"plain", "shed"}));
    run->add_flag("--states", with_states, "print the state after each event");
    run->add_option("--fuel", fuel, "override the workspace step budget");

    CLI::App* shed = app.add_subcommand("shed-check", "decide drop safety at the first update");
    shed->add_option("workspace", ws_path, "workspace file")->required();
    shed->add_option("--bound", bound, "exploration bound in pairs");

    CLI::App* norm = app.add_subcommand("normalize", "canonicalize a linkage expression");
    norm->add_option("workspace", ws_path, "workspace file providing the universe")->required();
    norm->add_option("term", term_text, "linkage expression")->required();

    CLI::App* dot = app.add_subcommand("dot", "render the initial state as DOT");
    dot->add_option("workspace", ws_path, "workspace file")->required();

    CLI::App* self = app.add_subcommand("selftest", "randomized algebra and service suites");
    self->add_option("--seed", seed, "suite seed");
    self->add_flag("--quick", quick, "smaller sample sizes");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(ws_path, service, with_states, fuel);
        if (shed->parsed()) return cmd_shed_check(ws_path, bound);
        if (norm->parsed()) return cmd_normalize(ws_path, term_text);
        if (dot->parsed()) return cmd_dot(ws_path);
        if (self->parsed()) return cmd_selftest(seed, quick);
    } catch (const linkdyn::BoundExceeded& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const linkdyn::InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
