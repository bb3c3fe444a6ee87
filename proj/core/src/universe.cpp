#include "linkdyn/universe.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "linkdyn/error.hpp"

namespace linkdyn {

namespace {

// Keywords of the surface syntaxes; allowing them as names would make
// terms, actions and thread files ambiguous.
const std::unordered_set<std::string> kReservedNames = {
    "empty", "fresh", "clr", "undef", "fgc", "stop", "dead", "tau", "start", "true", "false",
};

bool valid_name(const std::string& n) {
    if (n.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(n[0])) && n[0] != '_') return false;
    return std::all_of(n.begin(), n.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_';
    });
}

void check_name_set(const char* what, const std::vector<std::string>& names,
                    std::unordered_map<std::string, NameId>& ids) {
    if (names.empty()) throw InputError(std::string("universe: ") + what + " set is empty");
    for (std::size_t i = 0; i < names.size(); ++i) {
        const std::string& n = names[i];
        if (!valid_name(n)) throw InputError(std::string("universe: invalid ") + what + " name '" + n + "'");
        if (kReservedNames.count(n))
            throw InputError(std::string("universe: reserved word '") + n + "' used as " + what + " name");
        if (!ids.emplace(n, NameId(i)).second)
            throw InputError(std::string("universe: duplicate ") + what + " name '" + n + "'");
    }
}

}  // namespace

UniversePtr Universe::make(std::vector<std::string> spots, std::vector<std::string> fields,
                           std::vector<std::string> atoms, std::vector<std::string> values,
                           UniverseVariant variant) {
    auto u = std::shared_ptr<Universe>(new Universe());
    u->spots_ = std::move(spots);
    u->fields_ = std::move(fields);
    u->atoms_ = std::move(atoms);
    u->values_ = std::move(values);
    u->variant_ = variant;
    check_name_set("spot", u->spots_, u->spot_ids_);
    check_name_set("field", u->fields_, u->field_ids_);
    check_name_set("atom", u->atoms_, u->atom_ids_);
    check_name_set("value", u->values_, u->value_ids_);
    return u;
}

UniversePtr Universe::mimic_twin() const {
    if (mimic()) throw InputError("universe: mimic_twin of a mimic universe");
    return make(spots_, fields_, atoms_, values_, UniverseVariant::Mimic);
}

namespace {
NameId find_id(const std::unordered_map<std::string, NameId>& m, std::string_view name) {
    auto it = m.find(std::string(name));
    return it == m.end() ? NameId(-3) : it->second;
}
}  // namespace

NameId Universe::spot_id(std::string_view name) const { return find_id(spot_ids_, name); }
NameId Universe::field_id(std::string_view name) const { return find_id(field_ids_, name); }
NameId Universe::value_id(std::string_view name) const { return find_id(value_ids_, name); }

NameId Universe::atom_id(std::string_view name) const {
    if (mimic()) {
        if (name == "!pso") return kPsoAtom;
        if (name == "!sso") return kSsoAtom;
    }
    return find_id(atom_ids_, name);
}

const std::string& Universe::spot_name(NameId id) const { return spots_.at(std::size_t(id)); }
const std::string& Universe::field_name(NameId id) const { return fields_.at(std::size_t(id)); }
const std::string& Universe::value_name(NameId id) const { return values_.at(std::size_t(id)); }

std::string Universe::atom_name(NameId id) const {
    if (id == kPsoAtom) return "!pso";
    if (id == kSsoAtom) return "!sso";
    return atoms_.at(std::size_t(id));
}

bool Universe::operator==(const Universe& other) const {
    return variant_ == other.variant_ && spots_ == other.spots_ && fields_ == other.fields_ &&
           atoms_ == other.atoms_ && values_ == other.values_;
}

bool same_universe(const UniversePtr& a, const UniversePtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

}  // namespace linkdyn
