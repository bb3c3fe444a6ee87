#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace linkdyn {

// Index of a declared name within its universe set. Atom slots may also
// hold the two reserved mimic markers below.
using NameId = std::int32_t;

// Reserved atoms available in mimic universes only. They mark the
// contents of spots/fields whose dropping is being simulated: kPsoAtom
// for the spot/field under scrutiny, kSsoAtom for any other one dropped
// along the way. Negative so they never collide with declared indices.
inline constexpr NameId kPsoAtom = -2;
inline constexpr NameId kSsoAtom = -1;

inline bool is_special_atom(NameId a) { return a == kPsoAtom || a == kSsoAtom; }

enum class UniverseVariant : std::uint8_t { Plain, Mimic };

class Universe;
using UniversePtr = std::shared_ptr<const Universe>;

// The fixed name supply of a machine: spots (reference cells), fields,
// atomic objects and values. All four sets are non-empty; the declared
// order of atoms doubles as the allocation preference order.
class Universe {
public:
    static UniversePtr make(std::vector<std::string> spots,
                            std::vector<std::string> fields,
                            std::vector<std::string> atoms,
                            std::vector<std::string> values,
                            UniverseVariant variant = UniverseVariant::Plain);

    UniverseVariant variant() const { return variant_; }
    bool mimic() const { return variant_ == UniverseVariant::Mimic; }

    const std::vector<std::string>& spots() const { return spots_; }
    const std::vector<std::string>& fields() const { return fields_; }
    const std::vector<std::string>& atoms() const { return atoms_; }
    const std::vector<std::string>& values() const { return values_; }

    // Same names, mimic variant. Used to host states during drop-safety
    // simulation; plain states embed unchanged.
    UniversePtr mimic_twin() const;

    // Name lookup; -3 when absent (never a valid id).
    NameId spot_id(std::string_view name) const;
    NameId field_id(std::string_view name) const;
    NameId atom_id(std::string_view name) const;  // handles "!pso"/"!sso" in mimic universes
    NameId value_id(std::string_view name) const;

    const std::string& spot_name(NameId id) const;
    const std::string& field_name(NameId id) const;
    std::string atom_name(NameId id) const;  // "!pso"/"!sso" for the specials
    const std::string& value_name(NameId id) const;

    bool valid_spot(NameId id) const { return id >= 0 && id < NameId(spots_.size()); }
    bool valid_field(NameId id) const { return id >= 0 && id < NameId(fields_.size()); }
    bool valid_value(NameId id) const { return id >= 0 && id < NameId(values_.size()); }
    bool valid_atom(NameId id) const {
        if (is_special_atom(id)) return mimic();
        return id >= 0 && id < NameId(atoms_.size());
    }

    bool operator==(const Universe& other) const;

private:
    Universe() = default;

    std::vector<std::string> spots_, fields_, atoms_, values_;
    UniverseVariant variant_ = UniverseVariant::Plain;
    std::unordered_map<std::string, NameId> spot_ids_, field_ids_, atom_ids_, value_ids_;
};

// True when two linkage values may take part in the same operation.
bool same_universe(const UniversePtr& a, const UniversePtr& b);

}  // namespace linkdyn
