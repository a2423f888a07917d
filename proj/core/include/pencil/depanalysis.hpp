#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pencil/access.hpp"
#include "pencil/ast.hpp"
#include "pencil/summaries.hpp"

namespace pencil {

enum class Verdict { Parallel, ParallelWithReduction, Serial, Unknown, AssumedParallel };
enum class Basis { Enumeration, Affine, Directive };

std::string verdict_name(Verdict v);
std::string basis_name(Basis b);

struct IterationAccess {
    long long iteration = 0;
    AccessRelationTriple triple;
};

enum class DepKind { RAW, WAR, WAW };

std::string dep_kind_name(DepKind k);

struct DependenceWitness {
    DepKind kind = DepKind::RAW;
    long long src_iter = 0;
    long long sink_iter = 0;  // src_iter < sink_iter
    std::string array;
    std::vector<long long> index;
    std::string src_label, sink_label;
    char src_op = 0, sink_op = 0;  // compound-assignment operators, if any

    bool operator==(const DependenceWitness& o) const {
        return kind == o.kind && src_iter == o.src_iter && sink_iter == o.sink_iter &&
               array == o.array && index == o.index;
    }
};

struct DependenceReport {
    int loop_id = -1;
    SourceLoc loc;
    Verdict verdict = Verdict::Unknown;
    Basis basis = Basis::Enumeration;
    std::vector<DependenceWitness> witnesses;     // SERIAL
    std::vector<std::string> reduction_vars;      // reduction verdicts
    std::string note;
};

/// One triple per iteration of the (normalized) loop. Loop bounds must be
/// evaluable under the binding; accesses through values the binding cannot
/// resolve come back with the unknown-index marker.
std::vector<IterationAccess> collect_iteration_accesses(const Ast& ast,
                                                        const ResolvedSummaries& resolved,
                                                        const Stmt& loop,
                                                        const ParamBinding& binding,
                                                        long long budget = kDefaultBudget);

/// Exact all-pairs oracle. Throws E-UNKNOWN-INDEX if any record carries
/// the unknown-index marker.
std::vector<DependenceWitness> brute_force_dependences(const std::vector<IterationAccess>& accesses);

/// Syntactic fast path for straight-line bodies whose accesses all index
/// by a*i+b: PARALLEL when no array can overlap across distinct
/// iterations, nothing otherwise.
std::optional<Verdict> affine_fast_path(const Stmt& loop);

/// Per-loop verdict, precedence: independent directive, reduction filter,
/// affine fast path, enumeration, UNKNOWN.
DependenceReport analyze_loop(const Ast& ast, const ResolvedSummaries& resolved, const Stmt& loop,
                              const ParamBinding* binding, long long budget = kDefaultBudget);

/// While loops: ASSUMED_PARALLEL under an independent directive, UNKNOWN
/// otherwise (their trip counts are not statically enumerable here).
DependenceReport analyze_while(const Stmt& loop);

/// Analyzes every loop in the unit (loop ids must be assigned).
std::vector<DependenceReport> analyze_unit(const Ast& ast, const ResolvedSummaries& resolved,
                                           const ParamBinding* binding,
                                           long long budget = kDefaultBudget);

}  // namespace pencil
