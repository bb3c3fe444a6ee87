#include "linkdyn/term.hpp"

#include <cctype>
#include <utility>
#include <vector>

#include "linkdyn/error.hpp"

namespace linkdyn {

LinkageTerm LinkageTerm::empty() { return LinkageTerm{}; }

LinkageTerm LinkageTerm::constant(AtomicLink l) {
    LinkageTerm t;
    t.kind = Kind::Link;
    t.link = l;
    return t;
}

LinkageTerm LinkageTerm::combined(LinkageTerm l, LinkageTerm r) {
    LinkageTerm t;
    t.kind = Kind::Combine;
    t.lhs = std::make_unique<LinkageTerm>(std::move(l));
    t.rhs = std::make_unique<LinkageTerm>(std::move(r));
    return t;
}

LinkageTerm LinkageTerm::overridden(LinkageTerm l, LinkageTerm r) {
    LinkageTerm t;
    t.kind = Kind::Override;
    t.lhs = std::make_unique<LinkageTerm>(std::move(l));
    t.rhs = std::make_unique<LinkageTerm>(std::move(r));
    return t;
}

namespace {

// Token stream over the term syntax.
struct Lexer {
    enum class Tok : std::uint8_t { Ident, Special, Equals, Dot, Colon, LParen, RParen, OpCombine, OpOverride, End };

    std::string_view text;
    std::size_t pos = 0;
    Tok tok = Tok::End;
    std::string value;  // Ident name or Special ("!pso"/"!sso")

    explicit Lexer(std::string_view t) : text(t) { next(); }

    [[noreturn]] void fail(const std::string& what) const {
        throw InputError("term: " + what + " at offset " + std::to_string(pos));
    }

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    void next() {
        skip_ws();
        value.clear();
        if (pos >= text.size()) {
            tok = Tok::End;
            return;
        }
        char c = text[pos];
        if (c == '(') {
            // "(+)" / "(>)" are operator tokens; anything else is a paren.
            std::size_t look = pos + 1;
            while (look < text.size() && std::isspace(static_cast<unsigned char>(text[look]))) ++look;
            if (look < text.size() && (text[look] == '+' || text[look] == '>')) {
                char op = text[look];
                std::size_t close = look + 1;
                while (close < text.size() && std::isspace(static_cast<unsigned char>(text[close]))) ++close;
                if (close < text.size() && text[close] == ')') {
                    pos = close + 1;
                    tok = op == '+' ? Tok::OpCombine : Tok::OpOverride;
                    return;
                }
            }
            ++pos;
            tok = Tok::LParen;
            return;
        }
        if (c == ')') { ++pos; tok = Tok::RParen; return; }
        if (c == '=') { ++pos; tok = Tok::Equals; return; }
        if (c == '.') { ++pos; tok = Tok::Dot; return; }
        if (c == ':') { ++pos; tok = Tok::Colon; return; }
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

struct TermParser {
    Lexer lex;
    const Universe& u;

    TermParser(std::string_view text, const Universe& universe) : lex(text), u(universe) {}

    NameId atom_ref() {
        if (lex.tok == Lexer::Tok::Special) {
            if (!u.mimic()) lex.fail("'" + lex.value + "' needs a mimic universe");
            NameId id = lex.value == "!pso" ? kPsoAtom : kSsoAtom;
            lex.next();
            return id;
        }
        if (lex.tok != Lexer::Tok::Ident) lex.fail("expected an atom name");
        NameId id = u.atom_id(lex.value);
        if (id == -3) lex.fail("unknown atom '" + lex.value + "'");
        lex.next();
        return id;
    }

    // ident already consumed into `name`; parse the rest of a link constant.
    LinkageTerm link_after_ident(const std::string& name) {
        if (lex.tok == Lexer::Tok::Equals) {
            lex.next();
            NameId s = u.spot_id(name);
            if (s == -3) lex.fail("unknown spot '" + name + "'");
            return LinkageTerm::constant(spot_link(s, atom_ref()));
        }
        if (lex.tok == Lexer::Tok::Dot) {
            lex.next();
            NameId carrier = u.atom_id(name);
            if (carrier == -3) lex.fail("unknown atom '" + name + "'");
            if (lex.tok != Lexer::Tok::Ident) lex.fail("expected a field name");
            NameId f = u.field_id(lex.value);
            if (f == -3) lex.fail("unknown field '" + lex.value + "'");
            lex.next();
            if (lex.tok == Lexer::Tok::Equals) {
                lex.next();
                return LinkageTerm::constant(field_link(carrier, f, atom_ref()));
            }
            return LinkageTerm::constant(partial_field_link(carrier, f));
        }
        if (lex.tok == Lexer::Tok::Colon) {
            lex.next();
            NameId carrier = u.atom_id(name);
            if (carrier == -3) lex.fail("unknown atom '" + name + "'");
            if (lex.tok != Lexer::Tok::Ident) lex.fail("expected a value name");
            NameId v = u.value_id(lex.value);
            if (v == -3) lex.fail("unknown value '" + lex.value + "'");
            lex.next();
            return LinkageTerm::constant(value_assoc(carrier, v));
        }
        lex.fail("expected '=', '.' or ':' after '" + name + "'");
    }

    LinkageTerm primary() {
        if (lex.tok == Lexer::Tok::LParen) {
            lex.next();
            LinkageTerm t = expr();
            if (lex.tok != Lexer::Tok::RParen) lex.fail("expected ')'");
            lex.next();
            return t;
        }
        if (lex.tok == Lexer::Tok::Special) {
            // field links may be carried by the mimic markers
            std::string special = lex.value;
            if (!u.mimic()) lex.fail("'" + special + "' needs a mimic universe");
            lex.next();
            if (lex.tok != Lexer::Tok::Dot) lex.fail("expected '.' after '" + special + "'");
            lex.next();
            NameId carrier = special == "!pso" ? kPsoAtom : kSsoAtom;
            if (lex.tok != Lexer::Tok::Ident) lex.fail("expected a field name");
            NameId f = u.field_id(lex.value);
            if (f == -3) lex.fail("unknown field '" + lex.value + "'");
            lex.next();
            if (lex.tok == Lexer::Tok::Equals) {
                lex.next();
                return LinkageTerm::constant(field_link(carrier, f, atom_ref()));
            }
            return LinkageTerm::constant(partial_field_link(carrier, f));
        }
        if (lex.tok == Lexer::Tok::Ident) {
            std::string name = lex.value;
            lex.next();
            if (name == "empty") return LinkageTerm::empty();
            return link_after_ident(name);
        }
        lex.fail("expected a term");
    }

    LinkageTerm expr() {
        LinkageTerm t = primary();
        while (lex.tok == Lexer::Tok::OpCombine || lex.tok == Lexer::Tok::OpOverride) {
            bool comb = lex.tok == Lexer::Tok::OpCombine;
            lex.next();
            LinkageTerm r = primary();
            t = comb ? LinkageTerm::combined(std::move(t), std::move(r))
                     : LinkageTerm::overridden(std::move(t), std::move(r));
        }
        return t;
    }
};

}  // namespace

LinkageTerm parse_term(std::string_view text, const Universe& u) {
    TermParser p(text, u);
    LinkageTerm t = p.expr();
    if (p.lex.tok != Lexer::Tok::End) p.lex.fail("trailing input");
    return t;
}

AtomicLink parse_link(std::string_view text, const Universe& u) {
    LinkageTerm t = parse_term(text, u);
    if (t.kind != LinkageTerm::Kind::Link)
        throw InputError("expected a single link, got a compound term");
    return t.link;
}

std::string term_to_text(const LinkageTerm& t, const Universe& u) {
    switch (t.kind) {
        case LinkageTerm::Kind::Empty:
            return "empty";
        case LinkageTerm::Kind::Link:
            return link_to_text(t.link, u);
        case LinkageTerm::Kind::Combine:
        case LinkageTerm::Kind::Override: {
            const char* op = t.kind == LinkageTerm::Kind::Combine ? " (+) " : " (>) ";
            return "(" + term_to_text(*t.lhs, u) + ")" + op + "(" + term_to_text(*t.rhs, u) + ")";
        }
    }
    throw InputError("term_to_text: corrupt term");
}

DataLinkage evaluate_term(const LinkageTerm& t, UniversePtr u) {
    switch (t.kind) {
        case LinkageTerm::Kind::Empty:
            return DataLinkage(std::move(u));
        case LinkageTerm::Kind::Link:
            return DataLinkage(std::move(u), {t.link});
        case LinkageTerm::Kind::Combine:
            return combine(evaluate_term(*t.lhs, u), evaluate_term(*t.rhs, u));
        case LinkageTerm::Kind::Override:
            return override_combine(evaluate_term(*t.lhs, u), evaluate_term(*t.rhs, u));
    }
    throw InputError("evaluate_term: corrupt term");
}

LinkageTerm linkage_to_term(const DataLinkage& l) {
    if (l.empty()) return LinkageTerm::empty();
    LinkageTerm t;
    bool first = true;
    for (const AtomicLink& x : l.links()) {
        if (first) {
            t = LinkageTerm::constant(x);
            first = false;
        } else {
            t = LinkageTerm::combined(std::move(t), LinkageTerm::constant(x));
        }
    }
    return t;
}

}  // namespace linkdyn
