#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "linkdyn/linkage.hpp"

namespace linkdyn {

// Closed linkage expression: link constants, `empty`, binary combine
// and overriding combine.
struct LinkageTerm {
    enum class Kind : std::uint8_t { Empty, Link, Combine, Override };

    Kind kind = Kind::Empty;
    AtomicLink link{};  // Kind::Link
    std::unique_ptr<LinkageTerm> lhs, rhs;

    static LinkageTerm empty();
    static LinkageTerm constant(AtomicLink l);
    static LinkageTerm combined(LinkageTerm l, LinkageTerm r);
    static LinkageTerm overridden(LinkageTerm l, LinkageTerm r);
};

// Surface syntax: `empty`, `s = a`, `a . f`, `a . f = b`, `a : n`,
// infix `(+)` (combine) and `(>)` (overriding combine), parentheses.
// Whitespace-insensitive; the two operators share one precedence level
// and associate to the left.
LinkageTerm parse_term(std::string_view text, const Universe& u);

// A single link constant, as used in workspace state sections.
AtomicLink parse_link(std::string_view text, const Universe& u);

std::string term_to_text(const LinkageTerm& t, const Universe& u);

// Bottom-up evaluation to the canonical link set the term denotes.
DataLinkage evaluate_term(const LinkageTerm& t, UniversePtr u);

// The canonical representative term of a linkage: its links combined
// left to right, or `empty`. Evaluating it gives back the linkage.
LinkageTerm linkage_to_term(const DataLinkage& l);

}  // namespace linkdyn
