#pragma once

#include <map>
#include <string>
#include <vector>

#include "pencil/ast.hpp"
#include "pencil/depanalysis.hpp"
#include "pencil/summaries.hpp"

namespace pencil {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kReportSchema = "report-v1";

/// Canonical source form; output re-parses to a structurally identical
/// Ast, pragmas and ACCESS annotations included.
std::string pretty_print(const Ast& ast);
std::string pretty_print(const Expr& e);

struct LoweredSource {
    std::string text;
    std::map<int, int> pragma_lines;  // loop id -> line of the inserted omp pragma
};

/// Emits C with OpenMP annotations driven by the dependence reports:
/// `#pragma omp parallel for` for PARALLEL / ASSUMED_PARALLEL for-loops,
/// a reduction clause for PARALLEL_WITH_REDUCTION, a structured comment
/// marker for ASSUMED_PARALLEL while-loops, and no change otherwise.
/// Throws PencilError("E-EMIT") if a reduction variable is not in scope.
LoweredSource emit_openmp(const Ast& ast, const std::vector<DependenceReport>& reports);

struct FunctionSummaryEntry {
    std::string function;
    AccessResult result;
};

/// Deterministic JSON report (byte-identical across runs on equal input).
std::string emit_report(const Ast& ast, const std::vector<Diagnostic>& diagnostics,
                        const std::vector<FunctionSummaryEntry>& summaries,
                        const std::vector<DependenceReport>& loops,
                        const std::map<std::string, bool>& flags);

}  // namespace pencil
