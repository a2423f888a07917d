#include <algorithm>

#include "json.hpp"
#include "pencil/lowering.hpp"

namespace pencil {

namespace {

using json = nlohmann::ordered_json;

json loc_json(const SourceLoc& loc) {
    return json{{"line", loc.line}, {"column", loc.column}};
}

json diag_json(const Diagnostic& d) {
    json j;
    j["code"] = d.code;
    j["severity"] = d.severity == Severity::Error ? "error" : "warning";
    j["message"] = d.message;
    j["loc"] = loc_json(d.loc);
    return j;
}

json records_json(const std::vector<AccessRecord>& recs) {
    // sort on (array, index) so the report does not depend on traversal order
    std::vector<const AccessRecord*> sorted;
    sorted.reserve(recs.size());
    for (const auto& r : recs) sorted.push_back(&r);
    std::stable_sort(sorted.begin(), sorted.end(), [](const AccessRecord* a, const AccessRecord* b) {
        if (a->array != b->array) return a->array < b->array;
        return a->index < b->index;
    });
    json arr = json::array();
    for (const auto* r : sorted) {
        json j;
        j["array"] = r->array;
        j["index"] = r->index;
        if (r->unknown_index) j["unknown_index"] = true;
        arr.push_back(std::move(j));
    }
    return arr;
}

json witness_json(const DependenceWitness& w) {
    json j;
    j["kind"] = dep_kind_name(w.kind);
    j["src_iteration"] = w.src_iter;
    j["sink_iteration"] = w.sink_iter;
    j["array"] = w.array;
    j["index"] = w.index;
    return j;
}

}  // namespace

std::string emit_report(const Ast& ast, const std::vector<Diagnostic>& diagnostics,
                        const std::vector<FunctionSummaryEntry>& summaries,
                        const std::vector<DependenceReport>& loops,
                        const std::map<std::string, bool>& flags) {
    json root;
    root["schema"] = kReportSchema;
    root["tool_version"] = kToolVersion;

    json fns = json::array();
    for (const auto& fn : ast.functions) {
        json j;
        j["name"] = fn.name;
        j["params"] = json::array();
        for (const auto& p : fn.params) j["params"].push_back(p.name);
        if (fn.access) j["access_summary"] = fn.access->callee;
        fns.push_back(std::move(j));
    }
    root["functions"] = std::move(fns);

    json diags = json::array();
    for (const auto& d : diagnostics) diags.push_back(diag_json(d));
    root["diagnostics"] = std::move(diags);

    json sums = json::array();
    for (const auto& entry : summaries) {
        json j;
        j["function"] = entry.function;
        j["read"] = records_json(entry.result.triple.read);
        j["must_write"] = records_json(entry.result.triple.must_write);
        j["may_write"] = records_json(entry.result.triple.may_write);
        json warn = json::array();
        for (const auto& w : entry.result.warnings) warn.push_back(diag_json(w));
        j["warnings"] = std::move(warn);
        sums.push_back(std::move(j));
    }
    root["summaries"] = std::move(sums);

    json lps = json::array();
    for (const auto& r : loops) {
        json j;
        j["loop_id"] = r.loop_id;
        j["loc"] = loc_json(r.loc);
        j["verdict"] = verdict_name(r.verdict);
        j["basis"] = basis_name(r.basis);
        json ws = json::array();
        for (const auto& w : r.witnesses) ws.push_back(witness_json(w));
        j["witnesses"] = std::move(ws);
        if (!r.reduction_vars.empty()) j["reduction_vars"] = r.reduction_vars;
        if (!r.note.empty()) j["note"] = r.note;
        lps.push_back(std::move(j));
    }
    root["loops"] = std::move(lps);

    json fl = json::object();
    for (const auto& [k, v] : flags) fl[k] = v;  // std::map keeps keys sorted
    root["flags"] = std::move(fl);

    return root.dump(2) + "\n";
}

}  // namespace pencil
