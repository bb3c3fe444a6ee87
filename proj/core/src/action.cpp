#include "linkdyn/action.hpp"

#include <cctype>
#include <vector>

#include "linkdyn/error.hpp"

namespace linkdyn {

Action get_fresh(NameId s) { return {ActionKind::GetFresh, s, -3, -3}; }
Action set_spot(NameId s, NameId t) { return {ActionKind::SetSpot, s, t, -3}; }
Action clear_spot(NameId s) { return {ActionKind::ClearSpot, s, -3, -3}; }
Action equal_test(NameId s, NameId t) { return {ActionKind::EqualTest, s, t, -3}; }
Action undef_test(NameId s) { return {ActionKind::UndefTest, s, -3, -3}; }
Action add_field(NameId s, NameId f) { return {ActionKind::AddField, s, -3, f}; }
Action remove_field(NameId s, NameId f) { return {ActionKind::RemoveField, s, -3, f}; }
Action has_field(NameId s, NameId f) { return {ActionKind::HasField, s, -3, f}; }
Action set_field(NameId s, NameId f, NameId t) { return {ActionKind::SetField, s, t, f}; }
Action clear_field(NameId s, NameId f) { return {ActionKind::ClearField, s, -3, f}; }
Action get_field(NameId s, NameId t, NameId f) { return {ActionKind::GetField, s, t, f}; }
Action collect_garbage_action() { return {ActionKind::CollectGarbage, -3, -3, -3}; }
Action set_spot_pso(NameId s) { return {ActionKind::SetSpotPso, s, -3, -3}; }
Action set_spot_sso(NameId s) { return {ActionKind::SetSpotSso, s, -3, -3}; }
Action set_field_pso(NameId s, NameId f) { return {ActionKind::SetFieldPso, s, -3, f}; }
Action set_field_sso(NameId s, NameId f) { return {ActionKind::SetFieldSso, s, -3, f}; }

bool is_mimic_only(ActionKind k) {
    return k == ActionKind::SetSpotPso || k == ActionKind::SetSpotSso ||
           k == ActionKind::SetFieldPso || k == ActionKind::SetFieldSso;
}

bool updates_content(ActionKind k) {
    return k == ActionKind::GetFresh || k == ActionKind::SetSpot || k == ActionKind::SetField ||
           k == ActionKind::GetField;
}

bool action_is_legal(const Action& a, const Universe& u) {
    if (is_mimic_only(a.kind) && !u.mimic()) return false;
    switch (a.kind) {
        case ActionKind::GetFresh:
        case ActionKind::ClearSpot:
        case ActionKind::UndefTest:
        case ActionKind::SetSpotPso:
        case ActionKind::SetSpotSso:
            return u.valid_spot(a.s);
        case ActionKind::SetSpot:
        case ActionKind::EqualTest:
            return u.valid_spot(a.s) && u.valid_spot(a.t);
        case ActionKind::AddField:
        case ActionKind::RemoveField:
        case ActionKind::HasField:
        case ActionKind::ClearField:
        case ActionKind::SetFieldPso:
        case ActionKind::SetFieldSso:
            return u.valid_spot(a.s) && u.valid_field(a.f);
        case ActionKind::SetField:
            return u.valid_spot(a.s) && u.valid_field(a.f) && u.valid_spot(a.t);
        case ActionKind::GetField:
            return u.valid_spot(a.s) && u.valid_spot(a.t) && u.valid_field(a.f);
        case ActionKind::CollectGarbage:
            return true;
    }
    return false;
}

namespace {

struct ActionLexer {
    enum class Tok : std::uint8_t {
        Ident, Special, Equals, EqualsEquals, Dot, PlusDot, MinusDot, QueryDot, End
    };

    std::string_view text;
    std::size_t pos = 0;
    Tok tok = Tok::End;
    std::string value;

    explicit ActionLexer(std::string_view t) : text(t) { next(); }

    [[noreturn]] void fail(const std::string& what) const {
        throw InputError("action: " + what + " in '" + std::string(text) + "'");
    }

    void next() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        value.clear();
        if (pos >= text.size()) { tok = Tok::End; return; }
        char c = text[pos];
        if (c == '=') {
            if (pos + 1 < text.size() && text[pos + 1] == '=') { pos += 2; tok = Tok::EqualsEquals; return; }
            ++pos; tok = Tok::Equals; return;
        }
        if (c == '.') { ++pos; tok = Tok::Dot; return; }
        if (c == '+' && pos + 1 < text.size() && text[pos + 1] == '.') { pos += 2; tok = Tok::PlusDot; return; }
        if (c == '-' && pos + 1 < text.size() && text[pos + 1] == '.') { pos += 2; tok = Tok::MinusDot; return; }
        if (c == '?' && pos + 1 < text.size() && text[pos + 1] == '.') { pos += 2; tok = Tok::QueryDot; return; }
        if (c == '!') {
            std::size_t start = pos++;
            while (pos < text.size() && std::isalnum(static_cast<unsigned char>(text[pos]))) ++pos;
            value = std::string(text.substr(start, pos - start));
            if (value != "!pso" && value != "!sso") fail("unknown marker '" + value + "'");
            tok = Tok::Special;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos;
            while (pos < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
                ++pos;
            value = std::string(text.substr(start, pos - start));
            tok = Tok::Ident;
            return;
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

NameId need_spot(const ActionLexer& lex, const Universe& u, const std::string& name) {
    NameId s = u.spot_id(name);
    if (s == -3) lex.fail("unknown spot '" + name + "'");
    return s;
}

NameId need_field(const ActionLexer& lex, const Universe& u, const std::string& name) {
    NameId f = u.field_id(name);
    if (f == -3) lex.fail("unknown field '" + name + "'");
    return f;
}

}  // namespace

Action parse_action(std::string_view text, const Universe& u) {
    ActionLexer lex(text);
    auto expect_end = [&](Action a) {
        if (lex.tok != ActionLexer::Tok::End) lex.fail("trailing input");
        if (!action_is_legal(a, u)) lex.fail("action is not legal for this universe");
        return a;
    };

    if (lex.tok != ActionLexer::Tok::Ident) lex.fail("expected an action");
    std::string head = lex.value;
    lex.next();

    if (head == "fgc") return expect_end(collect_garbage_action());

    if (head == "clr") {
        if (lex.tok != ActionLexer::Tok::Ident) lex.fail("expected a spot after 'clr'");
        NameId s = need_spot(lex, u, lex.value);
        lex.next();
        if (lex.tok == ActionLexer::Tok::Dot) {
            lex.next();
            if (lex.tok != ActionLexer::Tok::Ident) lex.fail("expected a field name");
            NameId f = need_field(lex, u, lex.value);
            lex.next();
            return expect_end(clear_field(s, f));
        }
        return expect_end(clear_spot(s));
    }

    if (head == "undef") {
        if (lex.tok != ActionLexer::Tok::Ident) lex.fail("expected a spot after 'undef'");
        NameId s = need_spot(lex, u, lex.value);
        lex.next();
        return expect_end(undef_test(s));
    }

    NameId s = need_spot(lex, u, head);

    switch (lex.tok) {
        case ActionLexer::Tok::EqualsEquals: {
            lex.next();
            if (lex.tok != ActionLexer::Tok::Ident) lex.fail("expected a spot after '=='");
            NameId t = need_spot(lex, u, lex.value);
            lex.next();
            return expect_end(equal_test(s, t));
        }
        case ActionLexer::Tok::PlusDot:
        case ActionLexer::Tok::MinusDot:
        case ActionLexer::Tok::QueryDot: {
            auto op = lex.tok;
            lex.next();
            if (lex.tok != ActionLexer::Tok::Ident) lex.fail("expected a field name");
            NameId f = need_field(lex, u, lex.value);
            lex.next();
            if (op == ActionLexer::Tok::PlusDot) return expect_end(add_field(s, f));
            if (op == ActionLexer::Tok::MinusDot) return expect_end(remove_field(s, f));
            return expect_end(has_field(s, f));
        }
        case ActionLexer::Tok::Dot: {
            // s.f = <spot | !pso | !sso>
            lex.next();
            if (lex.tok != ActionLexer::Tok::Ident) lex.fail("expected a field name");
            NameId f = need_field(lex, u, lex.value);
            lex.next();
            if (lex.tok != ActionLexer::Tok::Equals) lex.fail("expected '=' after the field");
            lex.next();
            if (lex.tok == ActionLexer::Tok::Special) {
                bool pso = lex.value == "!pso";
                lex.next();
                return expect_end(pso ? set_field_pso(s, f) : set_field_sso(s, f));
            }
            if (lex.tok != ActionLexer::Tok::Ident) lex.fail("expected a spot or marker");
            NameId t = need_spot(lex, u, lex.value);
            lex.next();
            return expect_end(set_field(s, f, t));
        }
        case ActionLexer::Tok::Equals: {
            lex.next();
            if (lex.tok == ActionLexer::Tok::Special) {
                bool pso = lex.value == "!pso";
                lex.next();
                return expect_end(pso ? set_spot_pso(s) : set_spot_sso(s));
            }
            if (lex.tok != ActionLexer::Tok::Ident) lex.fail("expected a source after '='");
            std::string src = lex.value;
            lex.next();
            if (src == "fresh") return expect_end(get_fresh(s));
            if (lex.tok == ActionLexer::Tok::Dot) {
                lex.next();
                NameId t = need_spot(lex, u, src);
                if (lex.tok != ActionLexer::Tok::Ident) lex.fail("expected a field name");
                NameId f = need_field(lex, u, lex.value);
                lex.next();
                return expect_end(get_field(s, t, f));
            }
            NameId t = need_spot(lex, u, src);
            return expect_end(set_spot(s, t));
        }
        default:
            lex.fail("expected an action operator after '" + head + "'");
    }
}

std::string action_to_text(const Action& a, const Universe& u) {
    switch (a.kind) {
        case ActionKind::GetFresh:
            return u.spot_name(a.s) + " = fresh";
        case ActionKind::SetSpot:
            return u.spot_name(a.s) + " = " + u.spot_name(a.t);
        case ActionKind::ClearSpot:
            return "clr " + u.spot_name(a.s);
        case ActionKind::EqualTest:
            return u.spot_name(a.s) + " == " + u.spot_name(a.t);
        case ActionKind::UndefTest:
            return "undef " + u.spot_name(a.s);
        case ActionKind::AddField:
            return u.spot_name(a.s) + " +. " + u.field_name(a.f);
        case ActionKind::RemoveField:
            return u.spot_name(a.s) + " -. " + u.field_name(a.f);
        case ActionKind::HasField:
            return u.spot_name(a.s) + " ?. " + u.field_name(a.f);
        case ActionKind::SetField:
            return u.spot_name(a.s) + "." + u.field_name(a.f) + " = " + u.spot_name(a.t);
        case ActionKind::ClearField:
            return "clr " + u.spot_name(a.s) + "." + u.field_name(a.f);
        case ActionKind::GetField:
            return u.spot_name(a.s) + " = " + u.spot_name(a.t) + "." + u.field_name(a.f);
        case ActionKind::CollectGarbage:
            return "fgc";
        case ActionKind::SetSpotPso:
            return u.spot_name(a.s) + " = !pso";
        case ActionKind::SetSpotSso:
            return u.spot_name(a.s) + " = !sso";
        case ActionKind::SetFieldPso:
            return u.spot_name(a.s) + "." + u.field_name(a.f) + " = !pso";
        case ActionKind::SetFieldSso:
            return u.spot_name(a.s) + "." + u.field_name(a.f) + " = !sso";
    }
    throw InputError("action_to_text: corrupt action kind");
}

}  // namespace linkdyn
