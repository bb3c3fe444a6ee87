#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "linkdyn/action.hpp"

namespace linkdyn {

// The reserved focus for requests against a linkage state service.
inline constexpr const char* kHeapFocus = "dld";

// One thread step: the internal step tau, a heap action at the reserved
// focus, or a request to some other service.
struct ThreadAction {
    enum class Kind : std::uint8_t { Tau, Heap, Foreign };

    Kind kind = Kind::Tau;
    Action action{};           // Heap
    std::string focus, method;  // Foreign; Heap carries focus "dld" and the canonical action text

    static ThreadAction tau();
    static ThreadAction heap(const Action& a, const Universe& u);
    static ThreadAction foreign(std::string focus, std::string method);

    bool operator==(const ThreadAction& other) const;
};

using NodeId = std::uint32_t;

enum class NodeKind : std::uint8_t { Stop, Dead, Post };

struct ThreadNode {
    NodeKind kind = NodeKind::Stop;
    ThreadAction action{};  // Post only
    NodeId yes = 0, no = 0; // Post only: continuations on true / false replies
};

// A named guarded recursive thread specification. Right-hand sides are
// termination, deadlock, a tau prefix, or one action with two branch
// continuations; branches refer to defined names or the two constants.
struct ThreadSpec {
    struct Branch {
        enum class Kind : std::uint8_t { Var, Stop, Dead };
        Kind kind = Kind::Stop;
        std::string name;  // Var

        static Branch var(std::string n) { return {Kind::Var, std::move(n)}; }
        static Branch stop() { return {Kind::Stop, {}}; }
        static Branch dead() { return {Kind::Dead, {}}; }
    };

    struct Equation {
        enum class Rhs : std::uint8_t { Stop, Dead, Post, TauPrefix };
        std::string name;
        Rhs rhs = Rhs::Stop;
        ThreadAction action{};  // Post
        Branch yes{}, no{};     // Post; TauPrefix uses yes only
    };

    std::string start;
    std::vector<Equation> equations;
};

struct ThreadStep {
    enum class Kind : std::uint8_t { Terminated, Deadlocked, Next };
    Kind kind = Kind::Terminated;
    ThreadAction action{};  // Next
    NodeId next = 0;        // Next
};

// A finite thread graph: the regular threads. Nodes stay valid for the
// lifetime of the graph; the graph is immutable after build.
class ThreadGraph {
public:
    // Ties the equations of a well-formed spec into a graph. Every
    // variable used must be defined exactly once; tau nodes get equal
    // branches, so the internal step never branches on its reply.
    static ThreadGraph build(const ThreadSpec& spec);

    NodeId root() const { return root_; }
    std::size_t node_count() const { return nodes_.size(); }
    const ThreadNode& node(NodeId n) const { return nodes_.at(n); }

    // Node and both continuations of every reachable step, from `n`.
    std::vector<NodeId> residuals(NodeId n) const;

    ThreadStep step(NodeId n, bool reply) const;

    // Nodes with bisimilar unfoldings share a class; class ids are
    // meaningful within this graph only.
    std::uint32_t structure_class(NodeId n) const { return classes_.at(n); }
    std::uint32_t class_count() const { return class_count_; }

    // A text token equal across graphs exactly for structurally
    // identical (bisimilar) unfoldings.
    const std::string& canonical_token(NodeId n) const { return tokens_.at(n); }

private:
    ThreadGraph() = default;
    void minimize();

    std::vector<ThreadNode> nodes_;
    NodeId root_ = 0;
    std::vector<std::uint32_t> classes_;
    std::uint32_t class_count_ = 0;
    std::vector<std::string> tokens_;
};

// Thread file syntax, one statement per line:
//   start X
//   X := stop
//   X := dead
//   X := tau; Y
//   X := <Y> focus(method) <Z>
// Branches in angle brackets are names or the literals stop/dead. The
// yes branch comes first. Methods at focus dld must parse as actions
// legal for `u`. `line_offset` shifts reported line numbers.
ThreadSpec parse_thread_spec(const std::vector<std::string>& lines, const Universe& u,
                             int line_offset = 0);

ThreadSpec parse_thread_spec(std::string_view text, const Universe& u);

// Canonical listing of the reachable graph in the file syntax.
std::string thread_to_text(const ThreadGraph& g);

}  // namespace linkdyn
