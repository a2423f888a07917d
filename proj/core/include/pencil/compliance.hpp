#pragma once

#include <string>
#include <vector>

#include "pencil/ast.hpp"

namespace pencil {

/// Externals a unit may call without defining them. `exp` is pure;
/// `rand` is side-effect-free for memory but value-unknown.
bool is_whitelisted_external(const std::string& name);

struct CallEdge {
    std::string caller;
    std::string callee;
    SourceLoc loc;
};

struct CallGraph {
    std::vector<std::string> nodes;  // defined functions, declaration order
    std::vector<CallEdge> edges;     // one per textual call site
};

/// One edge per call site; ACCESS bindings are not edges. Calls to
/// unknown non-whitelisted functions produce E-UNDEF diagnostics.
CallGraph build_call_graph(const Ast& ast, std::vector<Diagnostic>* diags = nullptr);

/// One R6 diagnostic per strongly-connected component that contains a
/// cycle (size > 1, or a self-loop), listing the member functions.
std::vector<Diagnostic> check_no_recursion(const CallGraph& graph);

/// All PENCIL coding-rule violations, sorted by location:
///   R1  array parameter missing restrict/const (error) or static (warning)
///   R2  pointer parameter that is not a `const restrict` scalar pointer
///   R3  local pointer declaration
///   R4  pointer arithmetic, address-of, or pointer reseating
///   R5  goto
///   R6  recursion, direct or indirect
///   R7  DEF/USE/MAY_DEF outside an access-summary function
///   R8  array-of-pointers parameter
/// An empty result means the unit is PENCIL-compliant.
std::vector<Diagnostic> check_compliance(const Ast& ast);

}  // namespace pencil
