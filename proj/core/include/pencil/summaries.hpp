#pragma once

#include <map>
#include <string>
#include <vector>

#include "pencil/access.hpp"
#include "pencil/ast.hpp"

namespace pencil {

inline constexpr long long kDefaultBudget = 1'000'000;

/// Validated ACCESS bindings: caller function name -> its binding.
struct ResolvedSummaries {
    std::map<std::string, const AccessBinding*> bindings;
    std::vector<Diagnostic> diagnostics;  // E-SUMMARY-ARITY / E-SUMMARY-UNDEF

    const AccessBinding* find(const std::string& fn) const {
        auto it = bindings.find(fn);
        return it == bindings.end() ? nullptr : it->second;
    }
};

ResolvedSummaries resolve_access_bindings(const Ast& ast);

/// Abstractly executes a summary function body under concrete scalar
/// bindings: loops run over their ranges, branches take the evaluated
/// side, and each DEF/USE/MAY_DEF emits access records. Throws
/// E-NONAFFINE when control flow or an index needs array contents or an
/// unbound value, E-NESTED-SUMMARY on a call to an in-unit function, and
/// E-BUDGET past `budget` records. Out-of-range indices are recorded and
/// flagged with an E-BOUNDS warning.
AccessResult interpret_summary(const Ast& ast, const FunctionDef& summary,
                               const ParamBinding& binding, long long budget = kDefaultBudget);

/// Access triple of a call, in the caller's frame: whitelisted externals
/// give an empty triple; a callee with an ACCESS binding is routed through
/// its summary; a callee with a plain body has its accesses derived from
/// the body. Array names in the result are the caller's. Throws
/// E-NO-SUMMARY when none of those routes exist.
AccessResult summarize_call(const Ast& ast, const ResolvedSummaries& resolved,
                            const std::string& callee, const std::vector<ExprPtr>& args,
                            const ParamBinding& caller_binding,
                            long long budget = kDefaultBudget);

/// Unknown-tolerant access collection over an arbitrary statement, used by
/// the dependence analyzer: non-evaluable indices become records with the
/// unknown-index marker, and writes under a non-evaluable condition are
/// demoted to may-writes. `extra_scalars` extends the binding (typically
/// with the loop counter).
AccessResult collect_accesses(const Ast& ast, const ResolvedSummaries& resolved, const Stmt& stmt,
                              const ParamBinding& binding,
                              const std::map<std::string, long long>& extra_scalars,
                              long long budget = kDefaultBudget);

}  // namespace pencil
