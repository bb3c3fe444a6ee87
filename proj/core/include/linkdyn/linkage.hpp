#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "linkdyn/universe.hpp"

namespace linkdyn {

enum class LinkKind : std::uint8_t { Spot, PartialField, Field, Value };

// One atomic link. Slot roles per kind:
//   Spot         a = spot,    b = atom
//   PartialField a = carrier, b = field
//   Field        a = carrier, b = field, c = target
//   Value        a = carrier, b = value
struct AtomicLink {
    LinkKind kind{};
    NameId a{}, b{}, c{};

    friend auto operator<=>(const AtomicLink&, const AtomicLink&) = default;
};

inline AtomicLink spot_link(NameId spot, NameId atom) {
    return {LinkKind::Spot, spot, atom, 0};
}
inline AtomicLink partial_field_link(NameId carrier, NameId field) {
    return {LinkKind::PartialField, carrier, field, 0};
}
inline AtomicLink field_link(NameId carrier, NameId field, NameId target) {
    return {LinkKind::Field, carrier, field, target};
}
inline AtomicLink value_assoc(NameId carrier, NameId value) {
    return {LinkKind::Value, carrier, value, 0};
}

// The overriding key of a link: spot links group per spot, partial and
// full field links group per (carrier, field), value associations per
// carrier. A right operand of the overriding combination displaces
// exactly the links sharing its key.
struct LinkKey {
    enum class Kind : std::uint8_t { Spot, Field, Value };
    Kind kind{};
    NameId a{}, b{};

    friend auto operator<=>(const LinkKey&, const LinkKey&) = default;
};

LinkKey link_key(const AtomicLink& l);

// A canonical finite set of atomic links over a fixed universe; the
// machine state. Immutable: every operation builds a new value.
class DataLinkage {
public:
    explicit DataLinkage(UniversePtr universe);
    DataLinkage(UniversePtr universe, std::vector<AtomicLink> links);

    const UniversePtr& universe() const { return universe_; }
    std::span<const AtomicLink> links() const { return links_; }
    bool empty() const { return links_.empty(); }
    std::size_t size() const { return links_.size(); }
    bool contains(const AtomicLink& l) const;
    std::size_t hash() const { return hash_; }

    // Same link set; both values must live over equal universes.
    bool operator==(const DataLinkage& other) const;
    bool operator!=(const DataLinkage& other) const { return !(*this == other); }

    // The same links viewed over the mimic twin of a plain universe.
    DataLinkage embed_mimic() const;

private:
    void canonicalize();

    UniversePtr universe_;
    std::vector<AtomicLink> links_;  // sorted, duplicate-free
    std::size_t hash_ = 0;
};

// Set union of two linkages over the same universe.
DataLinkage combine(const DataLinkage& l, const DataLinkage& r);

// Overriding combination: distributes over the links of `update`, each
// displacing the same-key links of `base`. With a multi-link update,
// links displaced by one update link may re-enter through another; the
// algebra demands exactly that.
DataLinkage override_combine(const DataLinkage& base, const DataLinkage& update);

// Single-link overriding step: base minus the key group of `l`, plus `l`.
DataLinkage override_one(const DataLinkage& base, const AtomicLink& l);

struct SpotContent {
    enum class Status : std::uint8_t { Undefined, Unique, Multiple };
    Status status = Status::Undefined;
    NameId atom = -3;  // meaningful only when Unique
};

struct FieldGroup {
    enum class Status : std::uint8_t { Absent, UndefinedContent, Unique, Multiple };
    Status status = Status::Absent;
    NameId target = -3;  // meaningful only when Unique
};

SpotContent content_of_spot(const DataLinkage& l, NameId spot);
FieldGroup field_group(const DataLinkage& l, NameId carrier, NameId field);

// A spot is locally deterministic when it carries exactly one link; a
// field group when it is a single full link or a single partial link
// (present with undefined content).
bool is_locally_deterministic_spot(const DataLinkage& l, NameId spot);
bool is_locally_deterministic_field(const DataLinkage& l, NameId carrier, NameId field);

// Surface text. Links print as `s = a`, `a . f`, `a . f = b`, `a : n`;
// a whole linkage prints links in canonical order joined by ",", or
// "empty" when there are none.
std::string link_to_text(const AtomicLink& l, const Universe& u);
std::string linkage_to_text(const DataLinkage& l);

}  // namespace linkdyn

template <>
struct std::hash<linkdyn::DataLinkage> {
    std::size_t operator()(const linkdyn::DataLinkage& l) const { return l.hash(); }
};
