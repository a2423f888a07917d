#include <algorithm>
#include <set>

#include "json.hpp"
#include "pencil/compliance.hpp"
#include "pencil/interp.hpp"
#include "pencil/op2.hpp"
#include "pencil/parser.hpp"

namespace pencil {

namespace {

using json = nlohmann::json;

[[noreturn]] void shape_error(const std::string& msg) { throw PencilError("E-OP2-SHAPE", msg); }
[[noreturn]] void range_error(const std::string& msg) { throw PencilError("E-OP2-RANGE", msg); }

long long require_int(const json& j, const char* what) {
    if (!j.is_number_integer()) shape_error(std::string(what) + " must be an integer");
    return j.get<long long>();
}

std::string require_string(const json& j, const char* what) {
    if (!j.is_string()) shape_error(std::string(what) + " must be a string");
    return j.get<std::string>();
}

std::vector<long long> require_int_list(const json& j, const char* what) {
    if (!j.is_array()) shape_error(std::string(what) + " must be a list");
    std::vector<long long> out;
    out.reserve(j.size());
    for (const auto& e : j) out.push_back(require_int(e, what));
    return out;
}

Op2Access parse_access(const std::string& s) {
    if (s == "OP_READ") return Op2Access::Read;
    if (s == "OP_WRITE") return Op2Access::Write;
    if (s == "OP_RW") return Op2Access::RW;
    if (s == "OP_INC") return Op2Access::Inc;
    shape_error("unknown access hint '" + s + "'");
}

}  // namespace

std::string op2_access_name(Op2Access a) {
    switch (a) {
        case Op2Access::Read: return "OP_READ";
        case Op2Access::Write: return "OP_WRITE";
        case Op2Access::RW: return "OP_RW";
        case Op2Access::Inc: return "OP_INC";
    }
    return "?";
}

const Op2Set* Op2Model::find_set(const std::string& n) const {
    for (const auto& s : sets)
        if (s.name == n) return &s;
    return nullptr;
}
const Op2Map* Op2Model::find_map(const std::string& n) const {
    for (const auto& m : maps)
        if (m.name == n) return &m;
    return nullptr;
}
const Op2Dat* Op2Model::find_dat(const std::string& n) const {
    for (const auto& d : dats)
        if (d.name == n) return &d;
    return nullptr;
}
const Op2Kernel* Op2Model::find_kernel(const std::string& n) const {
    for (const auto& k : kernels)
        if (k.name == n) return &k;
    return nullptr;
}

Op2Model load_op2_model(const std::string& json_text) {
    json doc = json::parse(json_text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) shape_error("input is not a JSON object");

    Op2Model model;

    for (const auto& j : doc.value("sets", json::array())) {
        Op2Set s;
        s.name = require_string(j.at("name"), "set name");
        s.size = require_int(j.at("size"), "set size");
        if (s.size < 0) shape_error("set '" + s.name + "' has negative size");
        if (model.find_set(s.name)) shape_error("duplicate set '" + s.name + "'");
        model.sets.push_back(std::move(s));
    }

    for (const auto& j : doc.value("maps", json::array())) {
        Op2Map m;
        m.name = require_string(j.at("name"), "map name");
        m.from = require_string(j.at("from"), "map from-set");
        m.to = require_string(j.at("to"), "map to-set");
        m.arity = static_cast<int>(require_int(j.at("arity"), "map arity"));
        m.table = require_int_list(j.at("table"), "map table entry");
        const Op2Set* from = model.find_set(m.from);
        const Op2Set* to = model.find_set(m.to);
        if (!from) shape_error("map '" + m.name + "': unknown from-set '" + m.from + "'");
        if (!to) shape_error("map '" + m.name + "': unknown to-set '" + m.to + "'");
        if (m.arity < 1) shape_error("map '" + m.name + "': arity must be positive");
        if ((long long)m.table.size() != from->size * m.arity)
            shape_error("map '" + m.name + "': table has " + std::to_string(m.table.size()) +
                        " entries, expected " + std::to_string(from->size * m.arity));
        for (long long e : m.table)
            if (e < 0 || e >= to->size)
                range_error("map '" + m.name + "': entry " + std::to_string(e) +
                            " outside target set '" + m.to + "' of size " +
                            std::to_string(to->size));
        if (model.find_map(m.name)) shape_error("duplicate map '" + m.name + "'");
        model.maps.push_back(std::move(m));
    }

    for (const auto& j : doc.value("dats", json::array())) {
        Op2Dat d;
        d.name = require_string(j.at("name"), "dat name");
        d.set = require_string(j.at("set"), "dat set");
        d.dim = static_cast<int>(j.value("dim", 1));
        d.data = require_int_list(j.at("data"), "dat value");
        const Op2Set* set = model.find_set(d.set);
        if (!set) shape_error("dat '" + d.name + "': unknown set '" + d.set + "'");
        if (d.dim < 1) shape_error("dat '" + d.name + "': dim must be positive");
        if ((long long)d.data.size() != set->size * d.dim)
            shape_error("dat '" + d.name + "': " + std::to_string(d.data.size()) +
                        " values, expected " + std::to_string(set->size * d.dim));
        if (model.find_dat(d.name)) shape_error("duplicate dat '" + d.name + "'");
        model.dats.push_back(std::move(d));
    }

    for (const auto& j : doc.value("kernels", json::array())) {
        Op2Kernel k;
        k.name = require_string(j.at("name"), "kernel name");
        k.source = require_string(j.at("source"), "kernel source");
        model.kernels.push_back(std::move(k));
    }

    for (const auto& j : doc.value("par_loops", json::array())) {
        Op2ParLoop loop;
        loop.kernel = require_string(j.at("kernel"), "par_loop kernel");
        loop.iter_set = require_string(j.at("set"), "par_loop set");
        if (!model.find_set(loop.iter_set))
            shape_error("par_loop: unknown iteration set '" + loop.iter_set + "'");
        if (!j.contains("args") || !j.at("args").is_array())
            shape_error("par_loop must carry an args list");
        for (const auto& a : j.at("args")) {
            Op2Arg arg;
            arg.dat = require_string(a.at("dat"), "arg dat");
            if (!model.find_dat(arg.dat)) shape_error("arg: unknown dat '" + arg.dat + "'");
            arg.access = parse_access(require_string(a.at("access"), "arg access"));
            if (a.contains("map") && !a.at("map").is_null()) {
                arg.map = require_string(a.at("map"), "arg map");
                const Op2Map* m = model.find_map(arg.map);
                if (!m) shape_error("arg: unknown map '" + arg.map + "'");
                if (m->from != loop.iter_set)
                    shape_error("arg: map '" + arg.map + "' is not indexed by set '" +
                                loop.iter_set + "'");
                arg.offset = static_cast<int>(require_int(a.at("offset"), "arg offset"));
                if (arg.offset < 0 || arg.offset >= m->arity)
                    range_error("arg: offset " + std::to_string(arg.offset) +
                                " outside map '" + arg.map + "' of arity " +
                                std::to_string(m->arity));
            }
            loop.args.push_back(std::move(arg));
        }
        model.par_loops.push_back(std::move(loop));
    }

    return model;
}

// ---------------------------------------------------------------------------
// Lowering
// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void kernel_error(const std::string& msg) { throw PencilError("E-OP2-KERNEL", msg); }

std::vector<std::string> distinct_dats(const Op2ParLoop& loop) {
    std::vector<std::string> out;
    for (const auto& a : loop.args)
        if (std::find(out.begin(), out.end(), a.dat) == out.end()) out.push_back(a.dat);
    return out;
}

std::vector<std::string> distinct_maps(const Op2ParLoop& loop) {
    std::vector<std::string> out;
    for (const auto& a : loop.args)
        if (!a.direct() && std::find(out.begin(), out.end(), a.map) == out.end())
            out.push_back(a.map);
    return out;
}

void check_conflicts(const Op2ParLoop& loop) {
    for (const auto& a : loop.args) {
        if (a.access != Op2Access::Inc) continue;
        for (const auto& b : loop.args) {
            if (b.dat == a.dat && (b.access == Op2Access::RW || b.access == Op2Access::Write))
                throw PencilError("E-OP2-CONFLICT",
                                  "dat '" + a.dat +
                                      "' is both incremented and written in one par_loop");
        }
    }
}

Param scalar_param(const std::string& name) {
    Param p;
    p.name = name;
    p.kind = ParamKind::Scalar;
    return p;
}

Param array_param(const std::string& name, const std::string& extent) {
    Param p;
    p.name = name;
    p.kind = ParamKind::Array;
    p.extents.push_back(make_var(extent));
    p.has_restrict = p.has_const = p.has_static = true;
    return p;
}

// The kernel's rewritten, pointer-free signature: one size scalar and one
// array per distinct dat (in first-appearance order), then one index
// scalar per par_loop argument.
void check_kernel_signature(const FunctionDef& fn, const Op2ParLoop& loop) {
    auto dats = distinct_dats(loop);
    size_t m = dats.size(), n = loop.args.size();
    if (fn.params.size() != 2 * m + n)
        kernel_error("kernel '" + fn.name + "' takes " + std::to_string(fn.params.size()) +
                     " parameters, expected " + std::to_string(2 * m + n) + " for " +
                     std::to_string(n) + " args over " + std::to_string(m) + " dats");
    for (size_t i = 0; i < fn.params.size(); ++i) {
        bool want_array = i >= m && i < 2 * m;
        bool is_array = fn.params[i].kind == ParamKind::Array;
        if (want_array != is_array)
            kernel_error("kernel '" + fn.name + "' parameter '" + fn.params[i].name +
                         "' should be " + (want_array ? "an array" : "a scalar"));
    }
}

void append_driver(Ast& ast, const Op2Model& model, const Op2ParLoop& loop,
                   std::vector<Op2DriverCall>& drivers) {
    check_conflicts(loop);
    const FunctionDef* kernel = ast.find_function(loop.kernel);
    if (!kernel) kernel_error("kernel '" + loop.kernel + "' is not defined in the model");
    check_kernel_signature(*kernel, loop);

    auto dats = distinct_dats(loop);
    auto maps = distinct_maps(loop);
    const Op2Set* iter = model.find_set(loop.iter_set);

    FunctionDef drv;
    drv.name = loop.kernel + "_loop";
    Op2DriverCall call;
    call.function = drv.name;

    drv.params.push_back(scalar_param("n_iter"));
    call.args.push_back({false, "", iter->size});
    for (const auto& d : dats) {
        drv.params.push_back(scalar_param("n_" + d));
        const Op2Dat* dat = model.find_dat(d);
        call.args.push_back({false, "", (long long)dat->data.size()});
    }
    for (const auto& mn : maps) {
        drv.params.push_back(scalar_param("n_" + mn));
        const Op2Map* m = model.find_map(mn);
        call.args.push_back({false, "", (long long)m->table.size()});
    }
    for (const auto& d : dats) {
        drv.params.push_back(array_param(d, "n_" + d));
        call.args.push_back({true, d, 0});
    }
    for (const auto& mn : maps) {
        drv.params.push_back(array_param(mn, "n_" + mn));
        call.args.push_back({true, mn, 0});
    }

    // kernel(n_D..., D..., idx...) with idx = i or map[arity*i + offset]
    std::vector<ExprPtr> kargs;
    for (const auto& d : dats) kargs.push_back(make_var("n_" + d));
    for (const auto& d : dats) kargs.push_back(make_var(d));
    for (const auto& a : loop.args) {
        if (a.direct()) {
            kargs.push_back(make_var("i"));
        } else {
            const Op2Map* m = model.find_map(a.map);
            std::vector<ExprPtr> sub;
            sub.push_back(make_binary(
                BinOp::Add, make_binary(BinOp::Mul, make_int(m->arity), make_var("i")),
                make_int(a.offset)));
            kargs.push_back(make_index(a.map, std::move(sub)));
        }
    }

    auto call_stmt = std::make_unique<Stmt>();
    call_stmt->kind = StmtKind::CallStmt;
    call_stmt->call = make_call(loop.kernel, std::move(kargs));

    auto loop_body = std::make_unique<Stmt>();
    loop_body->kind = StmtKind::Block;
    loop_body->stmts.push_back(std::move(call_stmt));

    auto for_stmt = std::make_unique<Stmt>();
    for_stmt->kind = StmtKind::For;
    for_stmt->name = "i";
    for_stmt->lo = make_int(0);
    for_stmt->hi = make_var("n_iter");
    for_stmt->body = std::move(loop_body);

    std::vector<std::string> inc_dats;
    bool indirect_write = false;
    for (const auto& a : loop.args) {
        if (a.access == Op2Access::Inc &&
            std::find(inc_dats.begin(), inc_dats.end(), a.dat) == inc_dats.end())
            inc_dats.push_back(a.dat);
        if (!a.direct() && (a.access == Op2Access::Write || a.access == Op2Access::RW))
            indirect_write = true;
    }
    if (!inc_dats.empty()) {
        Directive d;
        d.kind = Directive::Kind::Reduction;
        d.reduction_op = "+";
        d.scalars = inc_dats;
        for_stmt->directives.push_back(std::move(d));
    } else if (indirect_write) {
        Directive d;
        d.kind = Directive::Kind::Independent;
        for_stmt->directives.push_back(std::move(d));
    }

    auto decl_i = std::make_unique<Stmt>();
    decl_i->kind = StmtKind::Decl;
    decl_i->decl_type = Type::Int;
    decl_i->name = "i";

    drv.body = std::make_unique<Stmt>();
    drv.body->kind = StmtKind::Block;
    drv.body->stmts.push_back(std::move(decl_i));
    drv.body->stmts.push_back(std::move(for_stmt));

    ast.functions.push_back(std::move(drv));
    drivers.push_back(std::move(call));
}

Ast parse_kernels(const Op2Model& model) {
    Ast ast;
    for (const auto& k : model.kernels) {
        ParseResult res = parse_source(k.source);
        if (!res.ast)
            kernel_error("kernel '" + k.name + "' does not parse: " +
                         (res.diagnostics.empty() ? "unknown error"
                                                  : res.diagnostics.front().message));
        bool found = false;
        for (auto& fn : res.ast->functions) {
            if (fn.name == k.name) found = true;
            ast.functions.push_back(std::move(fn));
        }
        if (!found) kernel_error("kernel source does not define '" + k.name + "'");
    }
    return ast;
}

}  // namespace

Op2Lowered lower_op2_par_loop(const Op2Model& model, const Op2ParLoop& loop) {
    Op2Lowered out;
    const Op2Kernel* k = model.find_kernel(loop.kernel);
    if (!k) kernel_error("no kernel named '" + loop.kernel + "'");
    Op2Model just_kernel = model;
    just_kernel.kernels = {*k};
    out.ast = parse_kernels(just_kernel);
    append_driver(out.ast, model, loop, out.drivers);
    assign_loop_ids(out.ast);
    return out;
}

Op2Lowered lower_op2_model(const Op2Model& model) {
    Op2Lowered out;
    out.ast = parse_kernels(model);
    for (const auto& loop : model.par_loops) append_driver(out.ast, model, loop, out.drivers);
    assign_loop_ids(out.ast);
    return out;
}

std::map<std::string, std::vector<long long>> interpret_op2_reference(const Op2Model& model) {
    Ast kernels = parse_kernels(model);
    Interpreter interp(kernels);
    for (const auto& d : model.dats) {
        std::vector<Value> vals(d.data.begin(), d.data.end());
        interp.set_array(d.name, std::move(vals));
    }

    for (const auto& loop : model.par_loops) {
        check_conflicts(loop);
        const FunctionDef* kernel = kernels.find_function(loop.kernel);
        if (!kernel) kernel_error("kernel '" + loop.kernel + "' is not defined in the model");
        check_kernel_signature(*kernel, loop);

        auto dats = distinct_dats(loop);
        const Op2Set* iter = model.find_set(loop.iter_set);
        for (long long i = 0; i < iter->size; ++i) {
            std::vector<Interpreter::Arg> args;
            for (const auto& d : dats)
                args.push_back(
                    Interpreter::Arg::scalar((long long)model.find_dat(d)->data.size()));
            for (const auto& d : dats) args.push_back(Interpreter::Arg::array(d));
            for (const auto& a : loop.args) {
                long long idx = i;
                if (!a.direct()) {
                    const Op2Map* m = model.find_map(a.map);
                    idx = m->table[m->arity * i + a.offset];
                }
                args.push_back(Interpreter::Arg::scalar(idx));
            }
            interp.call(loop.kernel, args);
        }
    }

    std::map<std::string, std::vector<long long>> out;
    for (const auto& d : model.dats) {
        std::vector<long long> vals;
        for (const auto& v : interp.arrays().at(d.name)) vals.push_back(as_int(v));
        out[d.name] = std::move(vals);
    }
    return out;
}

}  // namespace pencil
