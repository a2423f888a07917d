#pragma once

#include <map>
#include <string>
#include <vector>

#include "pencil/diag.hpp"

namespace pencil {

/// Concrete values for one interpretation: every scalar parameter of the
/// interpreted function must be bound; array parameters are bound by name,
/// with contents supplied only when indices must be looked up through them
/// (e.g. indirection tables).
struct ParamBinding {
    std::map<std::string, long long> scalars;
    std::map<std::string, std::vector<long long>> arrays;
};

enum class AccessKind { Read, MustWrite, MayWrite };

std::string access_kind_name(AccessKind k);

struct AccessRecord {
    std::string array;
    std::vector<long long> index;  // empty for scalar memory
    AccessKind kind = AccessKind::Read;
    std::vector<long long> iter;  // enclosing loop-counter values
    bool unknown_index = false;   // index not evaluable under the binding
    char compound_op = 0;         // '+','-','*','/' when from `x op= e`
    std::string stmt_label;       // nearest enclosing statement label

    bool same_cell(const AccessRecord& o) const {
        return array == o.array && index == o.index && unknown_index == o.unknown_index;
    }
};

/// The three access relations. must_write is always a subset of may_write.
struct AccessRelationTriple {
    std::vector<AccessRecord> read;
    std::vector<AccessRecord> must_write;
    std::vector<AccessRecord> may_write;

    bool empty() const { return read.empty() && must_write.empty() && may_write.empty(); }
    size_t size() const { return read.size() + must_write.size() + may_write.size(); }

    /// Set-insert keyed on (array, index, label, op); keeps first iter.
    void insert(AccessRecord rec);
    void merge(const AccessRelationTriple& other);

    bool contains(AccessKind kind, const std::string& array,
                  const std::vector<long long>& index) const;
};

struct AccessResult {
    AccessRelationTriple triple;
    std::vector<Diagnostic> warnings;  // E-BOUNDS
};

}  // namespace pencil
