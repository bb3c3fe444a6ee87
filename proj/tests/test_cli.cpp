// Behaviour of the installed command-line tool: exit codes, output
// shapes, fuel and bound handling. Needs LINKDYN_BIN / LINKDYN_WS.

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

namespace {

std::string bin_path() {
    const char* env = std::getenv("LINKDYN_BIN");
    return env ? env : "./build/tools/linkdyn";
}

std::string ws_dir() {
    const char* env = std::getenv("LINKDYN_WS");
    return env ? env : "./workspaces";
}

struct CmdResult {
    int exit_code = -1;
    std::string out;
};

CmdResult capture(const std::string& command) {
    CmdResult result;
    FILE* pipe = popen((command + " 2>/dev/null").c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) result.out.append(buf, n);
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = "/tmp/linkdyn_cli_" + name;
    std::ofstream out(path);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("normalize prints canonical forms") {
    const std::string ws = ws_dir() + "/example1.ws";
    CHECK(capture(bin_path() + " normalize " + ws + " \"empty (+) (s = a)\"").out == "s = a\n");
    // example1 declares a single atom; use a wider universe for displacement
    std::string wide = write_temp("wide.ws",
                                  "[universe]\n"
                                  "spots = s t\nfields = f\natoms = a b\nvalues = v\n"
                                  "[thread]\nstart X\nX := stop\n");
    CHECK(capture(bin_path() + " normalize " + wide + " \"(s = a) (>) (s = b)\"").out ==
          "s = b\n");

    // the printed form normalizes to itself
    CmdResult first = capture(bin_path() + " normalize " + wide +
                              " \"(t = a) (+) (s = b) (+) (a . f)\"");
    CHECK(first.exit_code == 0);
    std::string printed = first.out.substr(0, first.out.size() - 1);
    CmdResult again = capture(bin_path() + " normalize " + wide + " \"" + printed + "\"");
    CHECK(again.out == first.out);
}

TEST_CASE("shed-check reports the safe verdict for the losing race") {
    CmdResult check = capture(bin_path() + " shed-check " + ws_dir() + "/example1.ws");
    CHECK(check.exit_code == 0);
    CHECK(check.out.rfind("member: true\n", 0) == 0);
    CHECK(check.out.find("explored: ") != std::string::npos);
}

TEST_CASE("input errors exit with 1") {
    CHECK(capture(bin_path() + " run /tmp/linkdyn_no_such_file.ws").exit_code == 1);

    std::string bad = write_temp("bad.ws", "[universe]\nspots = s\n");
    CHECK(capture(bin_path() + " run " + bad).exit_code == 1);

    const std::string ws = ws_dir() + "/example1.ws";
    CHECK(capture(bin_path() + " normalize " + ws + " \"s = nosuch\"").exit_code == 1);
}

TEST_CASE("exhausted budgets exit with 2") {
    std::string spin = write_temp("spin.ws",
                                  "[universe]\n"
                                  "spots = s\nfields = f\natoms = a\nvalues = v\n"
                                  "[thread]\nstart X\nX := <X> dld(undef s) <X>\n");
    CmdResult run = capture(bin_path() + " run " + spin + " --fuel 3");
    CHECK(run.exit_code == 2);
    CHECK(run.out.find("fuel\n") != std::string::npos);

    CmdResult check = capture(bin_path() + " shed-check " + ws_dir() + "/example1.ws --bound 1");
    CHECK(check.exit_code == 2);
}

TEST_CASE("dot output for the example heap") {
    std::string heap = write_temp("heap.ws",
                                  "[universe]\n"
                                  "spots = s\nfields = f\natoms = a b\nvalues = v\n"
                                  "[state]\ns = a\na . f = b\n"
                                  "[thread]\nstart X\nX := stop\n");
    CmdResult dot = capture(bin_path() + " dot " + heap);
    CHECK(dot.exit_code == 0);
    CHECK(dot.out.find("\"spot:s\"") != std::string::npos);
    CHECK(dot.out.find("\"atom:a\" -> \"atom:b\"") != std::string::npos);
}
