#include "pencil/access.hpp"

#include <algorithm>

namespace pencil {

std::string access_kind_name(AccessKind k) {
    switch (k) {
        case AccessKind::Read: return "READ";
        case AccessKind::MustWrite: return "MUST_WRITE";
        case AccessKind::MayWrite: return "MAY_WRITE";
    }
    return "?";
}

static std::vector<AccessRecord>& bucket(AccessRelationTriple& t, AccessKind k) {
    switch (k) {
        case AccessKind::Read: return t.read;
        case AccessKind::MustWrite: return t.must_write;
        default: return t.may_write;
    }
}

void AccessRelationTriple::insert(AccessRecord rec) {
    auto& v = bucket(*this, rec.kind);
    for (const auto& r : v) {
        if (r.same_cell(rec) && r.stmt_label == rec.stmt_label && r.compound_op == rec.compound_op)
            return;
    }
    v.push_back(std::move(rec));
}

void AccessRelationTriple::merge(const AccessRelationTriple& other) {
    for (const auto& r : other.read) insert(r);
    for (const auto& r : other.must_write) insert(r);
    for (const auto& r : other.may_write) insert(r);
}

bool AccessRelationTriple::contains(AccessKind kind, const std::string& array,
                                    const std::vector<long long>& index) const {
    const auto& v = bucket(const_cast<AccessRelationTriple&>(*this), kind);
    return std::any_of(v.begin(), v.end(), [&](const AccessRecord& r) {
        return !r.unknown_index && r.array == array && r.index == index;
    });
}

}  // namespace pencil
