// pencilc: PENCIL front-end driver.
//
//   pencilc check      file.c            rule compliance
//   pencilc summarize  file.c [--param]  + access summaries
//   pencilc analyze    file.c [--param]  + loop dependence verdicts
//   pencilc lower      file.c [--param]  + OpenMP-annotated C
//   pencilc op2        model.json        mesh-loop translation pipeline
//   pencilc optiml     construct.json    control-structure templates
//
// Exit codes: 0 clean, 1 findings (report still written), 2 usage/IO.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pencil/compliance.hpp"
#include "pencil/depanalysis.hpp"
#include "pencil/lowering.hpp"
#include "pencil/op2.hpp"
#include "pencil/optiml.hpp"
#include "pencil/parser.hpp"

namespace {

using namespace pencil;

struct Options {
    std::string input;
    std::vector<std::string> params;
    std::vector<std::string> arrays;
    std::string output;
    std::string report_path;
    std::string format = "text";
    bool exact = false;
    bool run_reference = false;
};

long long budget_from_env() {
    if (const char* e = std::getenv("PENCILC_BUDGET")) {
        try {
            long long v = std::stoll(e);
            if (v > 0) return v;
        } catch (...) {
        }
        std::cerr << "pencilc: ignoring bad PENCILC_BUDGET value '" << e << "'\n";
    }
    return kDefaultBudget;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PencilError("E-IO", "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw PencilError("E-IO", "cannot write '" + path + "'");
    out << text;
}

ParamBinding parse_bindings(const Options& opt) {
    ParamBinding b;
    for (const auto& p : opt.params) {
        auto eq = p.find('=');
        if (eq == std::string::npos) throw PencilError("E-USAGE", "--param expects name=value");
        b.scalars[p.substr(0, eq)] = std::stoll(p.substr(eq + 1));
    }
    for (const auto& a : opt.arrays) {
        auto eq = a.find('=');
        if (eq == std::string::npos)
            throw PencilError("E-USAGE", "--array expects name=v0,v1,...");
        std::vector<long long> vals;
        std::stringstream ss(a.substr(eq + 1));
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) vals.push_back(std::stoll(item));
        b.arrays[a.substr(0, eq)] = std::move(vals);
    }
    return b;
}

void print_diagnostic(const Diagnostic& d) {
    std::cout << d.loc.line << ":" << d.loc.column << ": "
              << (d.severity == Severity::Error ? "error" : "warning") << "[" << d.code
              << "]: " << d.message << "\n";
}

std::string triple_text(const std::vector<AccessRecord>& recs) {
    std::string out = "{";
    bool first = true;
    for (const auto& r : recs) {
        if (!first) out += ", ";
        first = false;
        out += r.array;
        if (r.unknown_index) {
            out += "[?]";
        } else {
            for (long long v : r.index) out += "[" + std::to_string(v) + "]";
        }
    }
    return out + "}";
}

enum class Stage { Check, Summarize, Analyze, Lower };

int run_pipeline(const Options& opt, Stage stage, const Ast& parsed_ast,
                 std::vector<Diagnostic> diagnostics) {
    long long budget = budget_from_env();
    Ast ast = parsed_ast.clone();

    auto attach = attach_directives(ast);
    diagnostics.insert(diagnostics.end(), attach.begin(), attach.end());
    assign_loop_ids(ast);

    auto rules = check_compliance(ast);
    diagnostics.insert(diagnostics.end(), rules.begin(), rules.end());

    ResolvedSummaries resolved;
    std::vector<FunctionSummaryEntry> summaries;
    std::vector<DependenceReport> loops;
    ParamBinding binding = parse_bindings(opt);
    bool have_binding = !binding.scalars.empty() || !binding.arrays.empty();
    if (opt.exact && !have_binding)
        throw PencilError("E-USAGE", "--exact requires --param/--array bindings");

    if (stage >= Stage::Summarize) {
        resolved = resolve_access_bindings(ast);
        diagnostics.insert(diagnostics.end(), resolved.diagnostics.begin(),
                           resolved.diagnostics.end());
        for (const auto& fn : ast.functions) {
            if (!fn.access) continue;
            std::vector<ExprPtr> args;
            for (const auto& p : fn.params) args.push_back(make_var(p.name));
            FunctionSummaryEntry entry;
            entry.function = fn.name;
            try {
                entry.result = summarize_call(ast, resolved, fn.name, args, binding, budget);
                summaries.push_back(std::move(entry));
            } catch (const PencilError& e) {
                if (opt.exact || e.code() != "E-NONAFFINE") throw;
                // without bindings some summaries are not enumerable; skip
            }
        }
    }

    if (stage >= Stage::Analyze)
        loops = analyze_unit(ast, resolved, have_binding ? &binding : nullptr, budget);

    std::string lowered;
    if (stage >= Stage::Lower) lowered = emit_openmp(ast, loops).text;

    std::map<std::string, bool> flags;
    flags["fp-reduction-reorders-results"] = std::any_of(
        loops.begin(), loops.end(), [](const DependenceReport& r) {
            return r.verdict == Verdict::ParallelWithReduction;
        });

    std::string report = emit_report(ast, diagnostics, summaries, loops, flags);
    if (!opt.report_path.empty()) write_file(opt.report_path, report);

    if (opt.format == "json") {
        std::cout << report;
    } else {
        for (const auto& d : diagnostics) print_diagnostic(d);
        for (const auto& s : summaries) {
            std::cout << "summary " << s.function << ": read " << triple_text(s.result.triple.read)
                      << " must_write " << triple_text(s.result.triple.must_write)
                      << " may_write " << triple_text(s.result.triple.may_write) << "\n";
            for (const auto& w : s.result.warnings) print_diagnostic(w);
        }
        for (const auto& r : loops) {
            std::cout << "loop " << r.loop_id << " at " << r.loc.line << ":" << r.loc.column
                      << ": " << verdict_name(r.verdict) << " (" << basis_name(r.basis) << ")";
            if (!r.reduction_vars.empty()) {
                std::cout << " reduction:";
                for (const auto& v : r.reduction_vars) std::cout << " " << v;
            }
            std::cout << "\n";
            for (const auto& w : r.witnesses) {
                std::cout << "  " << dep_kind_name(w.kind) << " " << w.array;
                for (long long v : w.index) std::cout << "[" << v << "]";
                std::cout << " between iterations " << w.src_iter << " and " << w.sink_iter
                          << "\n";
            }
        }
    }

    if (stage >= Stage::Lower) {
        if (!opt.output.empty()) {
            write_file(opt.output, lowered);
        } else if (opt.format != "json") {
            std::cout << lowered;
        }
    }

    return has_errors(diagnostics) ? 1 : 0;
}

int run_source_command(const Options& opt, Stage stage) {
    std::string source = read_file(opt.input);
    ParseResult res = parse_source(source);
    if (!res.ast) {
        for (const auto& d : res.diagnostics) print_diagnostic(d);
        if (!opt.report_path.empty())
            write_file(opt.report_path, emit_report(Ast{}, res.diagnostics, {}, {}, {}));
        return 1;
    }
    return run_pipeline(opt, stage, *res.ast, res.diagnostics);
}

int run_op2(const Options& opt) {
    Op2Model model = load_op2_model(read_file(opt.input));
    Op2Lowered lowered = lower_op2_model(model);

    if (opt.run_reference) {
        auto final_dats = interpret_op2_reference(model);
        for (const auto& d : model.dats) {
            std::cout << d.name << " = [";
            const auto& vals = final_dats.at(d.name);
            for (size_t i = 0; i < vals.size(); ++i) std::cout << (i ? ", " : "") << vals[i];
            std::cout << "]\n";
        }
    }

    Options inner = opt;
    inner.params.clear();
    inner.arrays.clear();
    for (const auto& drv : lowered.drivers) {
        const FunctionDef* fn = lowered.ast.find_function(drv.function);
        for (size_t i = 0; i < drv.args.size(); ++i) {
            const auto& a = drv.args[i];
            if (a.is_array) {
                std::string vals;
                const Op2Dat* dat = model.find_dat(a.array);
                const std::vector<long long>* src =
                    dat ? &dat->data : &model.find_map(a.array)->table;
                for (size_t k = 0; k < src->size(); ++k)
                    vals += (k ? "," : "") + std::to_string((*src)[k]);
                inner.arrays.push_back(fn->params[i].name + "=" + vals);
            } else {
                inner.params.push_back(fn->params[i].name + "=" + std::to_string(a.value));
            }
        }
    }
    return run_pipeline(inner, Stage::Lower, lowered.ast, {});
}

int run_optiml(const Options& opt) {
    OptimlConstruct c = load_optiml_construct(read_file(opt.input));
    Ast ast = lower_optiml(c);
    return run_pipeline(opt, Stage::Lower, ast, {});
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PENCIL front-end, analyzer and lowering driver"};
    app.require_subcommand(1);

    Options opt;
    std::map<std::string, Stage> stages = {{"check", Stage::Check},
                                           {"summarize", Stage::Summarize},
                                           {"analyze", Stage::Analyze},
                                           {"lower", Stage::Lower}};
    std::vector<CLI::App*> subs;
    for (const char* name : {"check", "summarize", "analyze", "lower", "op2", "optiml"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("input", opt.input, "input file")->required();
        sub->add_option("--param", opt.params, "scalar binding name=value");
        sub->add_option("--array", opt.arrays, "array binding name=v0,v1,...");
        sub->add_option("-o,--output", opt.output, "lowered C output path");
        sub->add_option("--report", opt.report_path, "machine-readable report path");
        sub->add_option("--format", opt.format, "text | json")
            ->check(CLI::IsMember({"text", "json"}));
        sub->add_flag("--exact", opt.exact, "require bindings; fail instead of approximating");
        if (std::string(name) == "op2")
            sub->add_flag("--run-reference", opt.run_reference,
                          "execute the model sequentially and print final dat values");
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        const std::string cmd = app.get_subcommands().front()->get_name();
        if (cmd == "op2") return run_op2(opt);
        if (cmd == "optiml") return run_optiml(opt);
        return run_source_command(opt, stages.at(cmd));
    } catch (const PencilError& e) {
        std::cerr << "pencilc: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "pencilc: " << e.what() << "\n";
        return 2;
    }
}
