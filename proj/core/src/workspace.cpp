#include "linkdyn/workspace.hpp"

#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "linkdyn/error.hpp"
#include "linkdyn/semantics.hpp"
#include "linkdyn/term.hpp"

namespace linkdyn {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string strip_comment(std::string_view line) {
    std::size_t hash = line.find('#');
    return trim(hash == std::string_view::npos ? line : line.substr(0, hash));
}

std::vector<std::string> split_names(const std::string& list) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : list) {
        if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

struct NumberedLine {
    int number;
    std::string text;
};

}  // namespace

Workspace parse_workspace(std::string_view text, const std::string& origin) {
    auto fail = [&](int line, const std::string& what) -> void {
        throw InputError(origin + ":" + std::to_string(line) + ": " + what);
    };

    // gather sections
    std::map<std::string, std::vector<NumberedLine>> sections;
    const std::set<std::string> known = {"universe", "state", "thread", "oracle", "fuel"};
    std::string current;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        std::string raw(end == std::string_view::npos ? text.substr(start)
                                                      : text.substr(start, end - start));
        ++line_no;
        std::string line = strip_comment(raw);
        if (!line.empty()) {
            if (line.front() == '[') {
                if (line.back() != ']') fail(line_no, "malformed section header");
                std::string name = trim(std::string_view(line).substr(1, line.size() - 2));
                if (!known.count(name)) fail(line_no, "unknown section [" + name + "]");
                if (sections.count(name)) fail(line_no, "duplicate section [" + name + "]");
                sections[name];
                current = name;
            } else {
                if (current.empty()) fail(line_no, "content before the first section header");
                sections[current].push_back({line_no, line});
            }
        }
        if (end == std::string_view::npos) break;
        start = end + 1;
    }

    if (!sections.count("universe")) throw InputError(origin + ": missing [universe] section");
    if (!sections.count("thread")) throw InputError(origin + ": missing [thread] section");

    // universe
    std::map<std::string, std::vector<std::string>> name_sets;
    for (const NumberedLine& nl : sections["universe"]) {
        std::size_t eq = nl.text.find('=');
        if (eq == std::string::npos) fail(nl.number, "expected '<set> = <names>'");
        std::string key = trim(std::string_view(nl.text).substr(0, eq));
        if (key != "spots" && key != "fields" && key != "atoms" && key != "values")
            fail(nl.number, "unknown universe key '" + key + "'");
        if (name_sets.count(key)) fail(nl.number, "duplicate universe key '" + key + "'");
        name_sets[key] = split_names(trim(std::string_view(nl.text).substr(eq + 1)));
    }
    for (const char* key : {"spots", "fields", "atoms", "values"})
        if (!name_sets.count(key) || name_sets[key].empty())
            throw InputError(origin + ": [universe] needs a non-empty '" + key + "' list");

    UniversePtr universe;
    try {
        universe = Universe::make(name_sets["spots"], name_sets["fields"], name_sets["atoms"],
                                  name_sets["values"]);
    } catch (const InputError& e) {
        throw InputError(origin + ": " + e.what());
    }

    // state
    std::vector<AtomicLink> links;
    if (sections.count("state")) {
        for (const NumberedLine& nl : sections["state"]) {
            try {
                links.push_back(parse_link(nl.text, *universe));
            } catch (const InputError& e) {
                fail(nl.number, e.what());
            }
        }
    }
    DataLinkage initial(universe, std::move(links));

    // thread; blank filler lines keep reported numbers aligned with the file
    const auto& body = sections["thread"];
    std::vector<std::string> lines;
    int offset = body.empty() ? 0 : body.front().number - 1;
    int expected = offset + 1;
    for (const NumberedLine& nl : body) {
        while (expected < nl.number) {
            lines.emplace_back();
            ++expected;
        }
        lines.push_back(nl.text);
        ++expected;
    }
    ThreadSpec thread_spec;
    try {
        thread_spec = parse_thread_spec(lines, *universe, offset);
    } catch (const InputError& e) {
        throw InputError(origin + ": " + e.what());
    }
    ThreadGraph thread = ThreadGraph::build(thread_spec);

    // oracle
    std::vector<bool> foreign_replies;
    if (sections.count("oracle")) {
        for (const NumberedLine& nl : sections["oracle"]) {
            for (const std::string& tok : split_names(nl.text)) {
                if (tok == "true")
                    foreign_replies.push_back(true);
                else if (tok == "false")
                    foreign_replies.push_back(false);
                else
                    fail(nl.number, "oracle entries are 'true' or 'false', got '" + tok + "'");
            }
        }
    }

    // fuel
    std::size_t fuel = 10'000;
    if (sections.count("fuel")) {
        const auto& fuel_body = sections["fuel"];
        if (fuel_body.size() != 1) throw InputError(origin + ": [fuel] needs exactly one line");
        const NumberedLine& nl = fuel_body.front();
        try {
            std::size_t pos = 0;
            long v = std::stol(nl.text, &pos);
            if (pos != nl.text.size() || v <= 0) throw std::invalid_argument("range");
            fuel = std::size_t(v);
        } catch (const std::exception&) {
            fail(nl.number, "fuel must be a positive integer");
        }
    }

    return Workspace{std::move(universe), std::move(initial), std::move(thread_spec),
                     std::move(thread),   std::move(foreign_replies), fuel};
}

GarbageStep measure_garbage(const DataLinkage& l) {
    std::set<NameId> occupied, reachable;
    for (const AtomicLink& x : l.links()) {
        switch (x.kind) {
            case LinkKind::Spot:
                if (!is_special_atom(x.b)) occupied.insert(x.b);
                break;
            case LinkKind::PartialField:
            case LinkKind::Value:
                if (!is_special_atom(x.a)) occupied.insert(x.a);
                break;
            case LinkKind::Field:
                if (!is_special_atom(x.a)) occupied.insert(x.a);
                if (!is_special_atom(x.c)) occupied.insert(x.c);
                break;
        }
    }
    // same reachability as collection; the markers count as roots but not
    // as occupants
    for (const AtomicLink& x : l.links())
        if (x.kind == LinkKind::Spot) reachable.insert(x.b);
    if (l.universe()->mimic()) {
        reachable.insert(kPsoAtom);
        reachable.insert(kSsoAtom);
    }
    for (bool grew = true; grew;) {
        grew = false;
        for (const AtomicLink& x : l.links())
            if (x.kind == LinkKind::Field && reachable.count(x.a) && !reachable.count(x.c)) {
                reachable.insert(x.c);
                grew = true;
            }
    }
    GarbageStep g;
    g.links = l.size();
    g.occupied = occupied.size();
    std::size_t reachable_real = 0;
    for (NameId a : reachable)
        if (!is_special_atom(a) && occupied.count(a)) ++reachable_real;
    g.reachable = reachable_real;
    g.reclaimable = g.occupied - g.reachable;
    return g;
}

std::vector<std::optional<GarbageStep>> garbage_report(const Trace& trace) {
    std::vector<std::optional<GarbageStep>> out;
    out.reserve(trace.states.size());
    for (const auto& state : trace.states) {
        if (state)
            out.push_back(measure_garbage(*state));
        else
            out.push_back(std::nullopt);
    }
    return out;
}

namespace {

std::string event_line(const TraceEvent& ev) {
    switch (ev.kind) {
        case TraceEvent::Kind::TauProcessed:
            return "tau " + ev.method + " -> " + (ev.reply ? "true" : "false");
        case TraceEvent::Kind::TauLiteral:
            return "tau";
        case TraceEvent::Kind::Foreign:
            return "foreign " + ev.focus + "(" + ev.method + ") -> " +
                   (ev.reply ? "true" : "false");
        case TraceEvent::Kind::Terminated:
            return "stop";
        case TraceEvent::Kind::Deadlocked:
            return "dead";
        case TraceEvent::Kind::FuelExhausted:
            return "fuel";
    }
    throw InputError("format_trace: corrupt event");
}

}  // namespace

std::string format_trace(const Trace& trace, bool with_states) {
    std::ostringstream out;
    for (std::size_t i = 0; i < trace.events.size(); ++i) {
        out << event_line(trace.events[i]) << '\n';
        if (with_states) {
            const auto& state = trace.states.at(i);
            out << "  state: " << (state ? linkage_to_text(*state) : "blocked") << '\n';
        }
    }
    return out.str();
}

std::string format_garbage_report(const Trace& trace) {
    std::ostringstream out;
    auto rows = garbage_report(trace);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const TraceEvent::Kind kind = trace.events.at(i).kind;
        if (kind == TraceEvent::Kind::Terminated || kind == TraceEvent::Kind::Deadlocked ||
            kind == TraceEvent::Kind::FuelExhausted)
            continue;
        out << "gc " << i + 1 << ": ";
        if (rows[i]) {
            out << "links=" << rows[i]->links << " occupied=" << rows[i]->occupied
                << " reachable=" << rows[i]->reachable << " reclaimable=" << rows[i]->reclaimable;
        } else {
            out << "blocked";
        }
        out << '\n';
    }
    return out.str();
}

std::string format_verdict(const ShedVerdict& v) {
    std::ostringstream out;
    out << "member: " << (v.member ? "true" : "false") << '\n';
    out << "explored: " << v.explored << '\n';
    if (!v.member) {
        out << "witness:\n";
        int i = 0;
        for (const ShedStep& step : v.witness) {
            out << "  [" << ++i << "] ";
            if (step.failure) {
                out << step.action << ": neither error-free nor secondary at state "
                    << step.state_after;
            } else {
                out << step.action << " ~> " << step.performed << " -> "
                    << (step.reply ? "true" : "false") << "; state: " << step.state_after;
            }
            out << '\n';
        }
    }
    return out.str();
}

std::string render_dot(const DataLinkage& l) {
    const Universe& u = *l.universe();
    std::set<NameId> atoms;
    std::set<NameId> spots;
    std::map<NameId, std::vector<NameId>> values;  // carrier -> value ids
    for (const AtomicLink& x : l.links()) {
        switch (x.kind) {
            case LinkKind::Spot:
                spots.insert(x.a);
                atoms.insert(x.b);
                break;
            case LinkKind::PartialField:
                atoms.insert(x.a);
                break;
            case LinkKind::Field:
                atoms.insert(x.a);
                atoms.insert(x.c);
                break;
            case LinkKind::Value:
                atoms.insert(x.a);
                values[x.a].push_back(x.b);
                break;
        }
    }

    std::ostringstream out;
    out << "digraph linkage {\n";
    out << "  rankdir=LR;\n";
    for (NameId a : atoms) {
        out << "  \"atom:" << u.atom_name(a) << "\" [shape=circle label=\"" << u.atom_name(a);
        if (values.count(a))
            for (NameId v : values[a]) out << "\\n: " << u.value_name(v);
        out << "\"];\n";
    }
    for (NameId s : spots)
        out << "  \"spot:" << u.spot_name(s) << "\" [shape=box label=\"" << u.spot_name(s)
            << "\"];\n";
    for (const AtomicLink& x : l.links()) {
        switch (x.kind) {
            case LinkKind::Spot:
                out << "  \"spot:" << u.spot_name(x.a) << "\" -> \"atom:" << u.atom_name(x.b)
                    << "\";\n";
                break;
            case LinkKind::Field:
                out << "  \"atom:" << u.atom_name(x.a) << "\" -> \"atom:" << u.atom_name(x.c)
                    << "\" [label=\"" << u.field_name(x.b) << "\"];\n";
                break;
            case LinkKind::PartialField:
                out << "  \"stub:" << u.atom_name(x.a) << '.' << u.field_name(x.b)
                    << "\" [shape=point];\n";
                out << "  \"atom:" << u.atom_name(x.a) << "\" -> \"stub:" << u.atom_name(x.a)
                    << '.' << u.field_name(x.b) << "\" [label=\"" << u.field_name(x.b)
                    << "\" style=dashed];\n";
                break;
            case LinkKind::Value:
                break;
        }
    }
    out << "}\n";
    return out.str();
}

}  // namespace linkdyn
