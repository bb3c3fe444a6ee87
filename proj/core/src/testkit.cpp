#include "linkdyn/testkit.hpp"

#include <array>
#include <functional>

#include "linkdyn/error.hpp"
#include "linkdyn/semantics.hpp"

namespace linkdyn::testkit {

namespace {

std::size_t pick(Rng& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

NameId pick_spot(Rng& rng, const Universe& u) { return NameId(pick(rng, u.spots().size())); }
NameId pick_field(Rng& rng, const Universe& u) { return NameId(pick(rng, u.fields().size())); }
NameId pick_value(Rng& rng, const Universe& u) { return NameId(pick(rng, u.values().size())); }

NameId pick_atom(Rng& rng, const Universe& u) {
    if (u.mimic() && pick(rng, 5) == 0) return pick(rng, 2) == 0 ? kPsoAtom : kSsoAtom;
    return NameId(pick(rng, u.atoms().size()));
}

}  // namespace

UniversePtr suite_universe() {
    return Universe::make({"s", "t", "u"}, {"f", "g"}, {"a", "b", "c"}, {"one", "two"});
}

AtomicLink random_link(Rng& rng, const Universe& u) {
    switch (pick(rng, 4)) {
        case 0:
            return spot_link(pick_spot(rng, u), pick_atom(rng, u));
        case 1:
            return partial_field_link(pick_atom(rng, u), pick_field(rng, u));
        case 2:
            return field_link(pick_atom(rng, u), pick_field(rng, u), pick_atom(rng, u));
        default:
            return value_assoc(pick_atom(rng, u), pick_value(rng, u));
    }
}

DataLinkage random_state(Rng& rng, const UniversePtr& u, std::size_t max_links) {
    std::vector<AtomicLink> links;
    std::size_t n = pick(rng, max_links + 1);
    links.reserve(n);
    for (std::size_t i = 0; i < n; ++i) links.push_back(random_link(rng, *u));
    return DataLinkage(u, std::move(links));
}

LinkageTerm random_term(Rng& rng, const Universe& u, int max_depth) {
    if (max_depth <= 0 || pick(rng, 4) == 0) {
        if (pick(rng, 5) == 0) return LinkageTerm::empty();
        return LinkageTerm::constant(random_link(rng, u));
    }
    LinkageTerm l = random_term(rng, u, max_depth - 1);
    LinkageTerm r = random_term(rng, u, max_depth - 1);
    return pick(rng, 2) == 0 ? LinkageTerm::combined(std::move(l), std::move(r))
                             : LinkageTerm::overridden(std::move(l), std::move(r));
}

Action random_action(Rng& rng, const Universe& u) {
    std::vector<ActionKind> kinds = {
        ActionKind::GetFresh,  ActionKind::SetSpot,   ActionKind::ClearSpot,
        ActionKind::EqualTest, ActionKind::UndefTest, ActionKind::AddField,
        ActionKind::RemoveField, ActionKind::HasField, ActionKind::SetField,
        ActionKind::ClearField, ActionKind::GetField, ActionKind::CollectGarbage};
    if (u.mimic()) {
        kinds.insert(kinds.end(), {ActionKind::SetSpotPso, ActionKind::SetSpotSso,
                                   ActionKind::SetFieldPso, ActionKind::SetFieldSso});
    }
    Action a;
    a.kind = kinds[pick(rng, kinds.size())];
    switch (a.kind) {
        case ActionKind::GetFresh:
        case ActionKind::ClearSpot:
        case ActionKind::UndefTest:
        case ActionKind::SetSpotPso:
        case ActionKind::SetSpotSso:
            a.s = pick_spot(rng, u);
            break;
        case ActionKind::SetSpot:
        case ActionKind::EqualTest:
            a.s = pick_spot(rng, u);
            a.t = pick_spot(rng, u);
            break;
        case ActionKind::AddField:
        case ActionKind::RemoveField:
        case ActionKind::HasField:
        case ActionKind::ClearField:
        case ActionKind::SetFieldPso:
        case ActionKind::SetFieldSso:
            a.s = pick_spot(rng, u);
            a.f = pick_field(rng, u);
            break;
        case ActionKind::SetField:
        case ActionKind::GetField:
            a.s = pick_spot(rng, u);
            a.t = pick_spot(rng, u);
            a.f = pick_field(rng, u);
            break;
        case ActionKind::CollectGarbage:
            break;
    }
    return a;
}

ThreadGraph random_thread(Rng& rng, const UniversePtr& u, std::size_t max_posts,
                          bool allow_foreign) {
    std::size_t posts = 1 + pick(rng, max_posts);
    ThreadSpec spec;
    spec.start = "X0";
    for (std::size_t i = 0; i < posts; ++i) {
        ThreadSpec::Equation eq;
        eq.name = "X" + std::to_string(i);
        auto branch = [&]() -> ThreadSpec::Branch {
            switch (pick(rng, 4)) {
                case 0:
                    return ThreadSpec::Branch::stop();
                case 1:
                    return ThreadSpec::Branch::dead();
                default:
                    return ThreadSpec::Branch::var("X" + std::to_string(pick(rng, posts)));
            }
        };
        if (allow_foreign && pick(rng, 8) == 0) {
            eq.rhs = ThreadSpec::Equation::Rhs::TauPrefix;
            eq.yes = branch();
        } else if (allow_foreign && pick(rng, 6) == 0) {
            eq.rhs = ThreadSpec::Equation::Rhs::Post;
            eq.action = ThreadAction::foreign("aux", "m" + std::to_string(pick(rng, 3)));
            eq.yes = branch();
            eq.no = branch();
        } else {
            eq.rhs = ThreadSpec::Equation::Rhs::Post;
            eq.action = ThreadAction::heap(random_action(rng, *u), *u);
            eq.yes = branch();
            eq.no = branch();
        }
        spec.equations.push_back(std::move(eq));
    }
    return ThreadGraph::build(spec);
}

namespace {

struct EquationScheme {
    std::string name;
    // draws names, builds both sides, returns them
    std::function<std::pair<DataLinkage, DataLinkage>(Rng&, const UniversePtr&)> instantiate;
};

DataLinkage one(const UniversePtr& u, const AtomicLink& l) { return DataLinkage(u, {l}); }

std::vector<EquationScheme> equation_schemes() {
    using L = DataLinkage;
    auto ovr = [](const L& a, const L& b) { return override_combine(a, b); };
    auto comb = [](const L& a, const L& b) { return combine(a, b); };

    // name pickers local to the schemes; X, Y, Z are drawn by the caller
    auto sp = [](Rng& rng, const Universe& u) { return pick_spot(rng, u); };
    auto fd = [](Rng& rng, const Universe& u) { return pick_field(rng, u); };
    auto at = [](Rng& rng, const Universe& u) { return NameId(pick(rng, u.atoms().size())); };
    auto vl = [](Rng& rng, const Universe& u) { return pick_value(rng, u); };

    std::vector<EquationScheme> schemes;
    auto add = [&](std::string name,
                   std::function<std::pair<L, L>(Rng&, const UniversePtr&, const L&, const L&,
                                                 const L&)> body) {
        schemes.push_back(
            {std::move(name), [body](Rng& rng, const UniversePtr& u) {
                 L x = random_state(rng, u, 6);
                 L y = random_state(rng, u, 6);
                 L z = random_state(rng, u, 6);
                 return body(rng, u, x, y, z);
             }});
    };

    add("combine-commutative", [comb](Rng&, const UniversePtr&, const L& x, const L& y, const L&) {
        return std::pair{comb(x, y), comb(y, x)};
    });
    add("combine-associative",
        [comb](Rng&, const UniversePtr&, const L& x, const L& y, const L& z) {
            return std::pair{comb(x, comb(y, z)), comb(comb(x, y), z)};
        });
    add("combine-idempotent", [comb](Rng&, const UniversePtr&, const L& x, const L&, const L&) {
        return std::pair{comb(x, x), x};
    });
    add("combine-unit", [comb](Rng&, const UniversePtr& u, const L& x, const L&, const L&) {
        return std::pair{comb(x, L(u)), x};
    });
    add("override-left-unit", [ovr](Rng&, const UniversePtr& u, const L& x, const L&, const L&) {
        return std::pair{ovr(L(u), x), x};
    });
    add("override-right-unit", [ovr](Rng&, const UniversePtr& u, const L& x, const L&, const L&) {
        return std::pair{ovr(x, L(u)), x};
    });
    // distribution decomposes a compound update into its links; the empty
    // update is governed by the unit law instead, so both parts are drawn
    // non-empty here
    schemes.push_back({"override-distributes", [ovr, comb](Rng& rng, const UniversePtr& u) {
                           L x = random_state(rng, u, 6);
                           L y = random_state(rng, u, 6);
                           L z = random_state(rng, u, 6);
                           while (y.empty()) y = random_state(rng, u, 6);
                           while (z.empty()) z = random_state(rng, u, 6);
                           return std::pair{ovr(x, comb(y, z)), comb(ovr(x, y), ovr(x, z))};
                       }});

    // same-key displacement: (X + lhs) over rhs = X over rhs
    auto displaced = [&add, ovr, comb](std::string name,
                                       std::function<std::pair<AtomicLink, AtomicLink>(
                                           Rng&, const Universe&)> draw) {
        add(std::move(name), [ovr, comb, draw](Rng& rng, const UniversePtr& u, const L& x,
                                               const L&, const L&) {
            auto [lhs, rhs] = draw(rng, *u);
            return std::pair{ovr(comb(x, one(u, lhs)), one(u, rhs)), ovr(x, one(u, rhs))};
        });
    };

    displaced("override-spot-displaces", [sp, at](Rng& rng, const Universe& u) {
        NameId s = sp(rng, u);
        return std::pair{spot_link(s, at(rng, u)), spot_link(s, at(rng, u))};
    });
    displaced("override-partial-displaces-partial", [at, fd](Rng& rng, const Universe& u) {
        NameId a = at(rng, u), f = fd(rng, u);
        return std::pair{partial_field_link(a, f), partial_field_link(a, f)};
    });
    displaced("override-partial-displaces-field", [at, fd](Rng& rng, const Universe& u) {
        NameId a = at(rng, u), f = fd(rng, u);
        return std::pair{field_link(a, f, at(rng, u)), partial_field_link(a, f)};
    });
    displaced("override-field-displaces-partial", [at, fd](Rng& rng, const Universe& u) {
        NameId a = at(rng, u), f = fd(rng, u);
        return std::pair{partial_field_link(a, f), field_link(a, f, at(rng, u))};
    });
    displaced("override-field-displaces-field", [at, fd](Rng& rng, const Universe& u) {
        NameId a = at(rng, u), f = fd(rng, u);
        return std::pair{field_link(a, f, at(rng, u)), field_link(a, f, at(rng, u))};
    });
    displaced("override-value-displaces", [at, vl](Rng& rng, const Universe& u) {
        NameId a = at(rng, u);
        return std::pair{value_assoc(a, vl(rng, u)), value_assoc(a, vl(rng, u))};
    });

    // unrelated keys commute out: (X + extra) over upd = (X over upd) + extra
    auto commutes = [&add, ovr, comb](std::string name,
                                      std::function<std::pair<AtomicLink, AtomicLink>(
                                          Rng&, const Universe&)> draw) {
        add(std::move(name), [ovr, comb, draw](Rng& rng, const UniversePtr& u, const L& x,
                                               const L&, const L&) {
            auto [extra, upd] = draw(rng, *u);
            return std::pair{ovr(comb(x, one(u, extra)), one(u, upd)),
                             comb(ovr(x, one(u, upd)), one(u, extra))};
        });
    };

    commutes("override-spot-skips-other-spot", [sp, at](Rng& rng, const Universe& u) {
        NameId s = sp(rng, u), t = sp(rng, u);
        while (t == s) t = sp(rng, u);
        return std::pair{spot_link(s, at(rng, u)), spot_link(t, at(rng, u))};
    });
    commutes("override-spot-skips-partial", [sp, at, fd](Rng& rng, const Universe& u) {
        return std::pair{partial_field_link(at(rng, u), fd(rng, u)),
                         spot_link(sp(rng, u), at(rng, u))};
    });
    commutes("override-spot-skips-field", [sp, at, fd](Rng& rng, const Universe& u) {
        return std::pair{field_link(at(rng, u), fd(rng, u), at(rng, u)),
                         spot_link(sp(rng, u), at(rng, u))};
    });
    commutes("override-spot-skips-value", [sp, at, vl](Rng& rng, const Universe& u) {
        return std::pair{value_assoc(at(rng, u), vl(rng, u)), spot_link(sp(rng, u), at(rng, u))};
    });
    commutes("override-partial-skips-spot", [sp, at, fd](Rng& rng, const Universe& u) {
        return std::pair{spot_link(sp(rng, u), at(rng, u)),
                         partial_field_link(at(rng, u), fd(rng, u))};
    });
    commutes("override-partial-skips-other-partial", [at, fd](Rng& rng, const Universe& u) {
        NameId a = at(rng, u), f = fd(rng, u);
        NameId b = at(rng, u), g = fd(rng, u);
        while (a == b && f == g) {
            b = at(rng, u);
            g = fd(rng, u);
        }
        return std::pair{partial_field_link(a, f), partial_field_link(b, g)};
    });
    commutes("override-partial-skips-other-field", [at, fd](Rng& rng, const Universe& u) {
        NameId a = at(rng, u), f = fd(rng, u);
        NameId c = at(rng, u), g = fd(rng, u);
        while (a == c && f == g) {
            c = at(rng, u);
            g = fd(rng, u);
        }
        return std::pair{field_link(a, f, at(rng, u)), partial_field_link(c, g)};
    });
    commutes("override-partial-skips-value", [at, fd, vl](Rng& rng, const Universe& u) {
        return std::pair{value_assoc(at(rng, u), vl(rng, u)),
                         partial_field_link(at(rng, u), fd(rng, u))};
    });
    commutes("override-field-skips-spot", [sp, at, fd](Rng& rng, const Universe& u) {
        return std::pair{spot_link(sp(rng, u), at(rng, u)),
                         field_link(at(rng, u), fd(rng, u), at(rng, u))};
    });
    commutes("override-field-skips-other-partial", [at, fd](Rng& rng, const Universe& u) {
        NameId a = at(rng, u), f = fd(rng, u);
        NameId b = at(rng, u), g = fd(rng, u);
        while (a == b && f == g) {
            b = at(rng, u);
            g = fd(rng, u);
        }
        return std::pair{partial_field_link(a, f), field_link(b, g, at(rng, u))};
    });
    commutes("override-field-skips-other-field", [at, fd](Rng& rng, const Universe& u) {
        NameId a = at(rng, u), f = fd(rng, u);
        NameId c = at(rng, u), g = fd(rng, u);
        while (a == c && f == g) {
            c = at(rng, u);
            g = fd(rng, u);
        }
        return std::pair{field_link(a, f, at(rng, u)), field_link(c, g, at(rng, u))};
    });
    commutes("override-field-skips-value", [at, fd, vl](Rng& rng, const Universe& u) {
        return std::pair{value_assoc(at(rng, u), vl(rng, u)),
                         field_link(at(rng, u), fd(rng, u), at(rng, u))};
    });
    commutes("override-value-skips-spot", [sp, at, vl](Rng& rng, const Universe& u) {
        return std::pair{spot_link(sp(rng, u), at(rng, u)), value_assoc(at(rng, u), vl(rng, u))};
    });
    commutes("override-value-skips-partial", [at, fd, vl](Rng& rng, const Universe& u) {
        return std::pair{partial_field_link(at(rng, u), fd(rng, u)),
                         value_assoc(at(rng, u), vl(rng, u))};
    });
    commutes("override-value-skips-field", [at, fd, vl](Rng& rng, const Universe& u) {
        return std::pair{field_link(at(rng, u), fd(rng, u), at(rng, u)),
                         value_assoc(at(rng, u), vl(rng, u))};
    });
    commutes("override-value-skips-other-value", [at, vl](Rng& rng, const Universe& u) {
        NameId a = at(rng, u), b = at(rng, u);
        while (b == a) b = at(rng, u);
        return std::pair{value_assoc(a, vl(rng, u)), value_assoc(b, vl(rng, u))};
    });

    return schemes;
}

}  // namespace

SuiteResult axiom_suite(std::uint64_t seed, std::size_t per_equation) {
    SuiteResult result{"axioms", 0, {}};
    UniversePtr u = suite_universe();
    auto schemes = equation_schemes();
    for (const EquationScheme& scheme : schemes) {
        Rng rng(seed ^ std::hash<std::string>{}(scheme.name));
        for (std::size_t i = 0; i < per_equation; ++i) {
            auto [lhs, rhs] = scheme.instantiate(rng, u);
            ++result.checked;
            if (!(lhs == rhs)) {
                result.failures.push_back(scheme.name + " instance " + std::to_string(i) +
                                          ": " + linkage_to_text(lhs) + "  !=  " +
                                          linkage_to_text(rhs));
                if (result.failures.size() > 20) return result;
            }
        }
    }
    return result;
}

SuiteResult normalization_suite(std::uint64_t seed, std::size_t terms, int max_depth) {
    SuiteResult result{"normalization", 0, {}};
    UniversePtr u = suite_universe();
    Rng rng(seed);
    for (std::size_t i = 0; i < terms; ++i) {
        ++result.checked;
        try {
            LinkageTerm t = random_term(rng, *u, max_depth);
            DataLinkage norm = evaluate_term(t, u);
            // canonical form survives print / parse / evaluate
            LinkageTerm again = linkage_to_term(norm);
            std::string text = term_to_text(again, *u);
            DataLinkage back = evaluate_term(parse_term(text, *u), u);
            if (!(back == norm)) {
                result.failures.push_back("round trip changed '" + text + "'");
            } else if (!(evaluate_term(parse_term(term_to_text(t, *u), *u), u) == norm)) {
                result.failures.push_back("reparsing the source term changed its value");
            }
        } catch (const std::exception& e) {
            result.failures.push_back("instance " + std::to_string(i) + ": " + e.what());
        }
        if (result.failures.size() > 20) return result;
    }
    return result;
}

SuiteResult collector_suite(std::uint64_t seed, std::size_t states) {
    SuiteResult result{"collector", 0, {}};
    UniversePtr u = suite_universe();
    Rng rng(seed);
    for (std::size_t i = 0; i < states; ++i) {
        ++result.checked;
        DataLinkage l = random_state(rng, u, 10);
        ActionResult out = apply_action(collect_garbage_action(), l);
        auto note = [&](const std::string& what) {
            result.failures.push_back("state '" + linkage_to_text(l) + "': " + what);
        };
        if (!out.reply) note("collection replied false");
        if (!(collect_garbage(out.state) == out.state)) note("collection is not idempotent");
        for (const AtomicLink& x : l.links())
            if (x.kind == LinkKind::Spot && !out.state.contains(x)) note("dropped a spot link");
        // every surviving non-spot link sits on a reachable carrier
        std::vector<NameId> roots;
        for (const AtomicLink& x : out.state.links())
            if (x.kind == LinkKind::Spot) roots.push_back(x.b);
        auto reachable = [&](NameId atom) {
            std::vector<NameId> todo = roots;
            std::vector<NameId> seen;
            while (!todo.empty()) {
                NameId cur = todo.back();
                todo.pop_back();
                if (cur == atom) return true;
                if (std::find(seen.begin(), seen.end(), cur) != seen.end()) continue;
                seen.push_back(cur);
                for (const AtomicLink& x : out.state.links())
                    if (x.kind == LinkKind::Field && x.a == cur) todo.push_back(x.c);
            }
            return false;
        };
        for (const AtomicLink& x : out.state.links())
            if (x.kind != LinkKind::Spot && !reachable(x.a))
                note("kept a link on unreachable carrier");
        if (result.failures.size() > 20) return result;
    }
    return result;
}

SuiteResult conformance_suite(std::uint64_t seed, ServiceKind kind, std::size_t samples) {
    const char* names[] = {"conformance-plain", "conformance-mimic", "conformance-shedding"};
    SuiteResult result{names[int(kind)], 0, {}};

    UniversePtr plain = Universe::make({"s", "t"}, {"f"}, {"a", "b"}, {"one"});
    UniversePtr u = kind == ServiceKind::Mimic ? plain->mimic_twin() : plain;

    Rng rng(seed + std::uint64_t(kind));
    std::vector<ConformanceSample> batch;
    batch.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        ConformanceSample sample{
            /*method=*/{},
            /*state=*/std::nullopt,
            /*thread=*/random_thread(rng, u, 3, true),
            /*node=*/0,
        };
        sample.node = sample.thread.root();
        if (pick(rng, 10) != 0) sample.state = random_state(rng, u, 4);

        switch (pick(rng, 10)) {
            case 0:
                sample.method = "bogus";
                break;
            case 1:
                sample.method = "m" + std::to_string(pick(rng, 3));
                break;
            case 2:
                // mimic-write text; out of scope for the plain universes
                sample.method = action_to_text(set_spot_pso(0), *plain->mimic_twin());
                break;
            case 3:
                sample.method = action_to_text(random_action(rng, *u), *u);
                break;
            default: {
                // usually the thread's own first action, for accepted requests
                const ThreadNode& node = sample.thread.node(sample.node);
                sample.method = node.kind == NodeKind::Post &&
                                        node.action.kind != ThreadAction::Kind::Tau
                                    ? node.action.method
                                    : action_to_text(random_action(rng, *u), *u);
                break;
            }
        }
        batch.push_back(std::move(sample));
    }

    result.checked = batch.size();
    result.failures = check_service_conditions(kind, u, batch);
    return result;
}

}  // namespace linkdyn::testkit
