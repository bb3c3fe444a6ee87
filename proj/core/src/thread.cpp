#include "linkdyn/thread.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "linkdyn/error.hpp"

namespace linkdyn {

ThreadAction ThreadAction::tau() { return ThreadAction{}; }

ThreadAction ThreadAction::heap(const Action& a, const Universe& u) {
    ThreadAction t;
    t.kind = Kind::Heap;
    t.action = a;
    t.focus = kHeapFocus;
    t.method = action_to_text(a, u);
    return t;
}

ThreadAction ThreadAction::foreign(std::string focus, std::string method) {
    ThreadAction t;
    t.kind = Kind::Foreign;
    t.focus = std::move(focus);
    t.method = std::move(method);
    return t;
}

bool ThreadAction::operator==(const ThreadAction& other) const {
    if (kind != other.kind) return false;
    switch (kind) {
        case Kind::Tau:
            return true;
        case Kind::Heap:
            return action == other.action;
        case Kind::Foreign:
            return focus == other.focus && method == other.method;
    }
    return false;
}

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

}  // namespace

ThreadGraph ThreadGraph::build(const ThreadSpec& spec) {
    using Eq = ThreadSpec::Equation;
    ThreadGraph g;

    std::unordered_map<std::string, NodeId> ids;
    for (const Eq& eq : spec.equations) {
        if (eq.name.empty()) throw InputError("thread: equation with an empty name");
        if (!ids.emplace(eq.name, NodeId(ids.size())).second)
            throw InputError("thread: '" + eq.name + "' is defined twice");
    }
    if (!ids.count(spec.start))
        throw InputError("thread: start variable '" + spec.start + "' is not defined");

    g.nodes_.resize(spec.equations.size());
    NodeId stop_node = 0, dead_node = 0;
    bool have_stop = false, have_dead = false;
    auto constant_node = [&](NodeKind kind) -> NodeId {
        bool& have = kind == NodeKind::Stop ? have_stop : have_dead;
        NodeId& id = kind == NodeKind::Stop ? stop_node : dead_node;
        if (!have) {
            id = NodeId(g.nodes_.size());
            g.nodes_.push_back(ThreadNode{kind, {}, 0, 0});
            have = true;
        }
        return id;
    };
    auto resolve = [&](const ThreadSpec::Branch& b, const std::string& owner) -> NodeId {
        switch (b.kind) {
            case ThreadSpec::Branch::Kind::Stop:
                return constant_node(NodeKind::Stop);
            case ThreadSpec::Branch::Kind::Dead:
                return constant_node(NodeKind::Dead);
            case ThreadSpec::Branch::Kind::Var: {
                auto it = ids.find(b.name);
                if (it == ids.end())
                    throw InputError("thread: '" + owner + "' refers to undefined '" + b.name + "'");
                return it->second;
            }
        }
        throw InputError("thread: corrupt branch");
    };

    for (std::size_t i = 0; i < spec.equations.size(); ++i) {
        const Eq& eq = spec.equations[i];
        // resolve may append constant nodes, so build the value first
        ThreadNode node;
        switch (eq.rhs) {
            case Eq::Rhs::Stop:
                node = ThreadNode{NodeKind::Stop, {}, 0, 0};
                break;
            case Eq::Rhs::Dead:
                node = ThreadNode{NodeKind::Dead, {}, 0, 0};
                break;
            case Eq::Rhs::TauPrefix: {
                NodeId next = resolve(eq.yes, eq.name);
                node = ThreadNode{NodeKind::Post, ThreadAction::tau(), next, next};
                break;
            }
            case Eq::Rhs::Post: {
                if (eq.action.kind == ThreadAction::Kind::Tau) {
                    // the internal step ignores its reply
                    NodeId next = resolve(eq.yes, eq.name);
                    node = ThreadNode{NodeKind::Post, ThreadAction::tau(), next, next};
                } else {
                    NodeId yes = resolve(eq.yes, eq.name);
                    NodeId no = resolve(eq.no, eq.name);
                    node = ThreadNode{NodeKind::Post, eq.action, yes, no};
                }
                break;
            }
        }
        g.nodes_[i] = std::move(node);
    }

    g.root_ = ids.at(spec.start);
    g.minimize();
    return g;
}

std::vector<NodeId> ThreadGraph::residuals(NodeId n) const {
    std::vector<NodeId> order;
    std::set<NodeId> seen;
    std::vector<NodeId> stack{n};
    while (!stack.empty()) {
        NodeId cur = stack.back();
        stack.pop_back();
        if (!seen.insert(cur).second) continue;
        order.push_back(cur);
        const ThreadNode& node = nodes_.at(cur);
        if (node.kind == NodeKind::Post) {
            stack.push_back(node.no);
            stack.push_back(node.yes);
        }
    }
    std::sort(order.begin(), order.end());
    return order;
}

ThreadStep ThreadGraph::step(NodeId n, bool reply) const {
    const ThreadNode& node = nodes_.at(n);
    switch (node.kind) {
        case NodeKind::Stop:
            return {ThreadStep::Kind::Terminated, {}, 0};
        case NodeKind::Dead:
            return {ThreadStep::Kind::Deadlocked, {}, 0};
        case NodeKind::Post:
            return {ThreadStep::Kind::Next, node.action, reply ? node.yes : node.no};
    }
    throw InputError("thread: corrupt node");
}

void ThreadGraph::minimize() {
    const std::size_t n = nodes_.size();
    classes_.assign(n, 0);

    // Initial partition: node kind plus action identity.
    std::map<std::tuple<int, int, Action, std::string, std::string>, std::uint32_t> initial;
    for (std::size_t i = 0; i < n; ++i) {
        const ThreadNode& node = nodes_[i];
        std::tuple<int, int, Action, std::string, std::string> sig{
            int(node.kind),
            node.kind == NodeKind::Post ? int(node.action.kind) : -1,
            node.kind == NodeKind::Post ? node.action.action : Action{},
            node.kind == NodeKind::Post ? node.action.focus : std::string{},
            node.kind == NodeKind::Post ? node.action.method : std::string{}};
        auto [it, added] = initial.emplace(sig, std::uint32_t(initial.size()));
        classes_[i] = it->second;
        (void)added;
    }

    // Refine until two nodes share a class only when their branches do.
    std::size_t prev_count = initial.size();
    for (;;) {
        std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, std::uint32_t> next;
        std::vector<std::uint32_t> refined(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const ThreadNode& node = nodes_[i];
            std::tuple<std::uint32_t, std::uint32_t, std::uint32_t> sig{
                classes_[i],
                node.kind == NodeKind::Post ? classes_[node.yes] : 0,
                node.kind == NodeKind::Post ? classes_[node.no] : 0};
            auto [it, added] = next.emplace(sig, std::uint32_t(next.size()));
            refined[i] = it->second;
            (void)added;
        }
        classes_ = refined;
        if (next.size() == prev_count) {
            class_count_ = std::uint32_t(next.size());
            break;
        }
        prev_count = next.size();
    }

    // Canonical token per node: the reachable class graph serialized in
    // first-visit order, so equal tokens mean bisimilar unfoldings even
    // across separately built graphs.
    tokens_.assign(n, {});
    std::vector<NodeId> representative(class_count_, 0);
    for (std::size_t i = n; i-- > 0;) representative[classes_[i]] = NodeId(i);

    for (std::size_t i = 0; i < n; ++i) {
        std::map<std::uint32_t, int> numbering;
        std::ostringstream out;
        std::vector<std::uint32_t> todo{classes_[i]};
        // breadth-first over classes, numbered on discovery
        std::size_t head = 0;
        numbering[classes_[i]] = 0;
        while (head < todo.size()) {
            std::uint32_t cls = todo[head++];
            const ThreadNode& node = nodes_[representative[cls]];
            out << numbering[cls] << ':';
            switch (node.kind) {
                case NodeKind::Stop:
                    out << "stop";
                    break;
                case NodeKind::Dead:
                    out << "dead";
                    break;
                case NodeKind::Post: {
                    const ThreadAction& a = node.action;
                    if (a.kind == ThreadAction::Kind::Tau)
                        out << "tau";
                    else
                        out << a.focus << '(' << a.method << ')';
                    for (NodeId branch : {node.yes, node.no}) {
                        std::uint32_t bc = classes_[branch];
                        auto [it, added] = numbering.emplace(bc, int(numbering.size()));
                        if (added) todo.push_back(bc);
                        out << (branch == node.yes ? '<' : '>') << it->second;
                    }
                    break;
                }
            }
            out << ';';
        }
        tokens_[i] = out.str();
    }
}

namespace {

[[noreturn]] void line_fail(int line, const std::string& what) {
    throw InputError("thread line " + std::to_string(line) + ": " + what);
}

bool valid_var(const std::string& n) {
    if (n.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(n[0])) && n[0] != '_') return false;
    return std::all_of(n.begin(), n.end(),
                       [](unsigned char c) { return std::isalnum(c) || c == '_'; });
}

ThreadSpec::Branch parse_branch(const std::string& text, int line) {
    if (text == "stop") return ThreadSpec::Branch::stop();
    if (text == "dead") return ThreadSpec::Branch::dead();
    if (!valid_var(text)) line_fail(line, "invalid branch '" + text + "'");
    return ThreadSpec::Branch::var(text);
}

// <branch> starting at `pos`; advances pos past the closing '>'.
ThreadSpec::Branch parse_angle_branch(const std::string& text, std::size_t& pos, int line) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos >= text.size() || text[pos] != '<') line_fail(line, "expected '<'");
    std::size_t close = text.find('>', pos);
    if (close == std::string::npos) line_fail(line, "missing '>'");
    std::string inner = trim(std::string_view(text).substr(pos + 1, close - pos - 1));
    pos = close + 1;
    return parse_branch(inner, line);
}

}  // namespace

ThreadSpec parse_thread_spec(const std::vector<std::string>& lines, const Universe& u,
                             int line_offset) {
    ThreadSpec spec;
    bool saw_start = false;

    for (std::size_t i = 0; i < lines.size(); ++i) {
        const int line = line_offset + int(i) + 1;
        std::string text = trim(lines[i]);
        if (text.empty() || text[0] == '#') continue;

        if (text.rfind("start", 0) == 0 &&
            (text.size() == 5 || std::isspace(static_cast<unsigned char>(text[5])))) {
            std::string name = trim(std::string_view(text).substr(5));
            if (!valid_var(name)) line_fail(line, "invalid start variable '" + name + "'");
            if (saw_start) line_fail(line, "duplicate start directive");
            spec.start = name;
            saw_start = true;
            continue;
        }

        std::size_t def = text.find(":=");
        if (def == std::string::npos) line_fail(line, "expected 'start X' or 'X := ...'");
        std::string name = trim(std::string_view(text).substr(0, def));
        if (!valid_var(name)) line_fail(line, "invalid variable '" + name + "'");
        std::string rhs = trim(std::string_view(text).substr(def + 2));
        if (rhs.empty()) line_fail(line, "empty right-hand side");

        ThreadSpec::Equation eq;
        eq.name = name;

        if (rhs == "stop") {
            eq.rhs = ThreadSpec::Equation::Rhs::Stop;
        } else if (rhs == "dead") {
            eq.rhs = ThreadSpec::Equation::Rhs::Dead;
        } else if (rhs.rfind("tau", 0) == 0 && rhs.size() > 3) {
            std::string rest = trim(std::string_view(rhs).substr(3));
            if (rest.empty() || rest[0] != ';') line_fail(line, "expected 'tau; X'");
            eq.rhs = ThreadSpec::Equation::Rhs::TauPrefix;
            eq.yes = parse_branch(trim(std::string_view(rest).substr(1)), line);
        } else if (rhs[0] == '<') {
            eq.rhs = ThreadSpec::Equation::Rhs::Post;
            std::size_t pos = 0;
            eq.yes = parse_angle_branch(rhs, pos, line);
            while (pos < rhs.size() && std::isspace(static_cast<unsigned char>(rhs[pos]))) ++pos;
            std::size_t open = rhs.find('(', pos);
            if (open == std::string::npos) line_fail(line, "expected 'focus(method)'");
            std::string focus = trim(std::string_view(rhs).substr(pos, open - pos));
            if (!valid_var(focus)) line_fail(line, "invalid focus '" + focus + "'");
            std::size_t close = rhs.rfind(')');
            if (close == std::string::npos || close < open) line_fail(line, "missing ')'");
            std::string method = trim(std::string_view(rhs).substr(open + 1, close - open - 1));
            if (method.empty()) line_fail(line, "empty method");
            if (focus == kHeapFocus) {
                Action a;
                try {
                    a = parse_action(method, u);
                } catch (const InputError& e) {
                    line_fail(line, e.what());
                }
                eq.action = ThreadAction::heap(a, u);
            } else {
                if (method.find('(') != std::string::npos || method.find(')') != std::string::npos)
                    line_fail(line, "foreign method must not contain parentheses");
                eq.action = ThreadAction::foreign(focus, method);
            }
            std::size_t pos2 = close + 1;
            eq.no = parse_angle_branch(rhs, pos2, line);
            if (!trim(std::string_view(rhs).substr(pos2)).empty())
                line_fail(line, "trailing input after the second branch");
        } else {
            line_fail(line, "expected stop, dead, 'tau; X' or '<Y> focus(m) <Z>'");
        }
        spec.equations.push_back(std::move(eq));
    }

    if (!saw_start) throw InputError("thread: missing start directive");
    return spec;
}

ThreadSpec parse_thread_spec(std::string_view text, const Universe& u) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            lines.emplace_back(text.substr(start));
            break;
        }
        lines.emplace_back(text.substr(start, end - start));
        start = end + 1;
    }
    return parse_thread_spec(lines, u, 0);
}

std::string thread_to_text(const ThreadGraph& g) {
    // stable names in first-visit order from the root
    std::map<NodeId, std::string> names;
    std::vector<NodeId> order;
    std::vector<NodeId> todo{g.root()};
    std::set<NodeId> seen;
    while (!todo.empty()) {
        NodeId n = todo.front();
        todo.erase(todo.begin());
        if (!seen.insert(n).second) continue;
        order.push_back(n);
        const ThreadNode& node = g.node(n);
        if (node.kind == NodeKind::Post) {
            todo.push_back(node.yes);
            todo.push_back(node.no);
        }
    }
    for (std::size_t i = 0; i < order.size(); ++i)
        names[order[i]] = "N" + std::to_string(i);

    std::ostringstream out;
    out << "start " << names[g.root()] << '\n';
    for (NodeId n : order) {
        const ThreadNode& node = g.node(n);
        out << names[n] << " := ";
        switch (node.kind) {
            case NodeKind::Stop:
                out << "stop";
                break;
            case NodeKind::Dead:
                out << "dead";
                break;
            case NodeKind::Post:
                if (node.action.kind == ThreadAction::Kind::Tau) {
                    out << "tau; " << names[node.yes];
                } else {
                    out << '<' << names[node.yes] << "> " << node.action.focus << '('
                        << node.action.method << ") <" << names[node.no] << '>';
                }
                break;
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace linkdyn
