#include "linkdyn/linkage.hpp"

#include <algorithm>

#include "linkdyn/error.hpp"

namespace linkdyn {

LinkKey link_key(const AtomicLink& l) {
    switch (l.kind) {
        case LinkKind::Spot:
            return {LinkKey::Kind::Spot, l.a, 0};
        case LinkKind::PartialField:
        case LinkKind::Field:
            return {LinkKey::Kind::Field, l.a, l.b};
        case LinkKind::Value:
            return {LinkKey::Kind::Value, l.a, 0};
    }
    throw InputError("link_key: corrupt link kind");
}

namespace {

void validate_link(const AtomicLink& l, const Universe& u) {
    auto bad = [&](const char* what) {
        throw InputError(std::string("linkage: link references an unknown ") + what);
    };
    switch (l.kind) {
        case LinkKind::Spot:
            if (!u.valid_spot(l.a)) bad("spot");
            if (!u.valid_atom(l.b)) bad("atom");
            break;
        case LinkKind::PartialField:
            if (!u.valid_atom(l.a)) bad("atom");
            if (!u.valid_field(l.b)) bad("field");
            break;
        case LinkKind::Field:
            if (!u.valid_atom(l.a)) bad("atom");
            if (!u.valid_field(l.b)) bad("field");
            if (!u.valid_atom(l.c)) bad("atom");
            break;
        case LinkKind::Value:
            if (!u.valid_atom(l.a)) bad("atom");
            if (!u.valid_value(l.b)) bad("value");
            break;
    }
}

std::size_t hash_links(const std::vector<AtomicLink>& links) {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (const AtomicLink& l : links) {
        std::size_t k = (std::size_t(std::uint8_t(l.kind)) << 48) ^
                        (std::size_t(std::uint32_t(l.a)) << 32) ^
                        (std::size_t(std::uint32_t(l.b)) << 16) ^ std::size_t(std::uint32_t(l.c));
        h ^= k + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
}

}  // namespace

DataLinkage::DataLinkage(UniversePtr universe) : universe_(std::move(universe)) {
    if (!universe_) throw InputError("linkage: null universe");
    hash_ = hash_links(links_);
}

DataLinkage::DataLinkage(UniversePtr universe, std::vector<AtomicLink> links)
    : universe_(std::move(universe)), links_(std::move(links)) {
    if (!universe_) throw InputError("linkage: null universe");
    for (const AtomicLink& l : links_) validate_link(l, *universe_);
    canonicalize();
}

void DataLinkage::canonicalize() {
    std::sort(links_.begin(), links_.end());
    links_.erase(std::unique(links_.begin(), links_.end()), links_.end());
    hash_ = hash_links(links_);
}

bool DataLinkage::contains(const AtomicLink& l) const {
    return std::binary_search(links_.begin(), links_.end(), l);
}

bool DataLinkage::operator==(const DataLinkage& other) const {
    if (!same_universe(universe_, other.universe_))
        throw InputError("linkage: comparing values over different universes");
    return links_ == other.links_;
}

DataLinkage DataLinkage::embed_mimic() const {
    if (universe_->mimic()) return *this;
    return DataLinkage(universe_->mimic_twin(), links_);
}

DataLinkage combine(const DataLinkage& l, const DataLinkage& r) {
    if (!same_universe(l.universe(), r.universe()))
        throw InputError("combine: operands over different universes");
    std::vector<AtomicLink> out(l.links().begin(), l.links().end());
    out.insert(out.end(), r.links().begin(), r.links().end());
    return DataLinkage(l.universe(), std::move(out));
}

DataLinkage override_one(const DataLinkage& base, const AtomicLink& l) {
    const LinkKey key = link_key(l);
    std::vector<AtomicLink> out;
    out.reserve(base.size() + 1);
    for (const AtomicLink& b : base.links())
        if (link_key(b) != key) out.push_back(b);
    out.push_back(l);
    return DataLinkage(base.universe(), std::move(out));
}

DataLinkage override_combine(const DataLinkage& base, const DataLinkage& update) {
    if (!same_universe(base.universe(), update.universe()))
        throw InputError("override_combine: operands over different universes");
    if (update.empty()) return base;
    // Distribute over the update links, then union the per-link results.
    std::vector<AtomicLink> out;
    for (const AtomicLink& u : update.links()) {
        DataLinkage part = override_one(base, u);
        out.insert(out.end(), part.links().begin(), part.links().end());
    }
    return DataLinkage(base.universe(), std::move(out));
}

SpotContent content_of_spot(const DataLinkage& l, NameId spot) {
    SpotContent res;
    int count = 0;
    for (const AtomicLink& x : l.links()) {
        if (x.kind == LinkKind::Spot && x.a == spot) {
            ++count;
            res.atom = x.b;
        }
    }
    if (count == 0) {
        res.status = SpotContent::Status::Undefined;
        res.atom = -3;
    } else if (count == 1) {
        res.status = SpotContent::Status::Unique;
    } else {
        res.status = SpotContent::Status::Multiple;
        res.atom = -3;
    }
    return res;
}

FieldGroup field_group(const DataLinkage& l, NameId carrier, NameId field) {
    int partials = 0, fulls = 0;
    NameId target = -3;
    for (const AtomicLink& x : l.links()) {
        if (x.a != carrier || x.b != field) continue;
        if (x.kind == LinkKind::PartialField) ++partials;
        if (x.kind == LinkKind::Field) {
            ++fulls;
            target = x.c;
        }
    }
    FieldGroup res;
    if (partials == 0 && fulls == 0) {
        res.status = FieldGroup::Status::Absent;
    } else if (partials == 1 && fulls == 0) {
        res.status = FieldGroup::Status::UndefinedContent;
    } else if (partials == 0 && fulls == 1) {
        res.status = FieldGroup::Status::Unique;
        res.target = target;
    } else {
        res.status = FieldGroup::Status::Multiple;
    }
    return res;
}

bool is_locally_deterministic_spot(const DataLinkage& l, NameId spot) {
    return content_of_spot(l, spot).status == SpotContent::Status::Unique;
}

bool is_locally_deterministic_field(const DataLinkage& l, NameId carrier, NameId field) {
    auto st = field_group(l, carrier, field).status;
    return st == FieldGroup::Status::Unique || st == FieldGroup::Status::UndefinedContent;
}

std::string link_to_text(const AtomicLink& l, const Universe& u) {
    switch (l.kind) {
        case LinkKind::Spot:
            return u.spot_name(l.a) + " = " + u.atom_name(l.b);
        case LinkKind::PartialField:
            return u.atom_name(l.a) + " . " + u.field_name(l.b);
        case LinkKind::Field:
            return u.atom_name(l.a) + " . " + u.field_name(l.b) + " = " + u.atom_name(l.c);
        case LinkKind::Value:
            return u.atom_name(l.a) + " : " + u.value_name(l.b);
    }
    throw InputError("link_to_text: corrupt link kind");
}

std::string linkage_to_text(const DataLinkage& l) {
    if (l.empty()) return "empty";
    std::string out;
    for (const AtomicLink& x : l.links()) {
        if (!out.empty()) out += ", ";
        out += link_to_text(x, *l.universe());
    }
    return out;
}

}  // namespace linkdyn
