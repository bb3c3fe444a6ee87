#pragma once

#include <compare>
#include <string>
#include <string_view>

#include "linkdyn/universe.hpp"

namespace linkdyn {

// The basic actions for structuring data dynamically, plus full garbage
// collection and the four mimic-universe write actions used while
// simulating the dropping of spot/field contents.
enum class ActionKind : std::uint8_t {
    GetFresh,        // s = fresh
    SetSpot,         // s = t
    ClearSpot,       // clr s
    EqualTest,       // s == t
    UndefTest,       // undef s
    AddField,        // s +. f
    RemoveField,     // s -. f
    HasField,        // s ?. f
    SetField,        // s.f = t
    ClearField,      // clr s.f
    GetField,        // s = t.f
    CollectGarbage,  // fgc
    SetSpotPso,      // s = !pso      (mimic only)
    SetSpotSso,      // s = !sso      (mimic only)
    SetFieldPso,     // s.f = !pso    (mimic only)
    SetFieldSso,     // s.f = !sso    (mimic only)
};

// Slot roles: s = written/first spot, t = read/second spot, f = field.
//   GetFresh(s)  SetSpot(s := t)  ClearSpot(s)  EqualTest(s, t)
//   UndefTest(s) AddField(s, f)   RemoveField(s, f)  HasField(s, f)
//   SetField(s.f := t)  ClearField(s, f)  GetField(s := t.f)
struct Action {
    ActionKind kind = ActionKind::CollectGarbage;
    NameId s = -3, t = -3, f = -3;

    friend auto operator<=>(const Action&, const Action&) = default;
};

Action get_fresh(NameId s);
Action set_spot(NameId s, NameId t);
Action clear_spot(NameId s);
Action equal_test(NameId s, NameId t);
Action undef_test(NameId s);
Action add_field(NameId s, NameId f);
Action remove_field(NameId s, NameId f);
Action has_field(NameId s, NameId f);
Action set_field(NameId s, NameId f, NameId t);
Action clear_field(NameId s, NameId f);
Action get_field(NameId s, NameId t, NameId f);
Action collect_garbage_action();
Action set_spot_pso(NameId s);
Action set_spot_sso(NameId s);
Action set_field_pso(NameId s, NameId f);
Action set_field_sso(NameId s, NameId f);

// True for the four mimic-universe write actions.
bool is_mimic_only(ActionKind k);

// True for the four actions that change the content of a spot or field
// to something new: the ones eligible for dropping on update.
bool updates_content(ActionKind k);

// Names in range, variant permits the kind.
bool action_is_legal(const Action& a, const Universe& u);

// Surface syntax: `s = fresh`, `s = t`, `clr s`, `s == t`, `undef s`,
// `s +. f`, `s -. f`, `s ?. f`, `s.f = t`, `clr s.f`, `s = t.f`, `fgc`,
// and in mimic universes `s = !pso`, `s = !sso`, `s.f = !pso`,
// `s.f = !sso`. Whitespace-insensitive.
Action parse_action(std::string_view text, const Universe& u);

std::string action_to_text(const Action& a, const Universe& u);

}  // namespace linkdyn
