#include "pencil/interp.hpp"

#include <cmath>

namespace pencil {

double as_double(const Value& v) {
    if (std::holds_alternative<long long>(v)) return static_cast<double>(std::get<long long>(v));
    return std::get<double>(v);
}

long long as_int(const Value& v) {
    if (std::holds_alternative<long long>(v)) return std::get<long long>(v);
    double d = std::get<double>(v);
    long long i = static_cast<long long>(d);
    if (static_cast<double>(i) != d)
        throw PencilError("E-INTERP", "non-integral value where an integer is required");
    return i;
}

namespace {

bool either_double(const Value& a, const Value& b) {
    return std::holds_alternative<double>(a) || std::holds_alternative<double>(b);
}

Value arith(BinOp op, const Value& a, const Value& b) {
    if (op == BinOp::Mod) {
        long long rb = as_int(b);
        if (rb == 0) throw PencilError("E-INTERP", "modulo by zero");
        return as_int(a) % rb;
    }
    if (either_double(a, b)) {
        double x = as_double(a), y = as_double(b);
        switch (op) {
            case BinOp::Add: return x + y;
            case BinOp::Sub: return x - y;
            case BinOp::Mul: return x * y;
            case BinOp::Div:
                if (y == 0.0) throw PencilError("E-INTERP", "division by zero");
                return x / y;
            case BinOp::Lt: return (long long)(x < y);
            case BinOp::Le: return (long long)(x <= y);
            case BinOp::Gt: return (long long)(x > y);
            case BinOp::Ge: return (long long)(x >= y);
            case BinOp::Eq: return (long long)(x == y);
            case BinOp::Ne: return (long long)(x != y);
            default: break;
        }
    } else {
        long long x = std::get<long long>(a), y = std::get<long long>(b);
        switch (op) {
            case BinOp::Add: return x + y;
            case BinOp::Sub: return x - y;
            case BinOp::Mul: return x * y;
            case BinOp::Div:
                if (y == 0) throw PencilError("E-INTERP", "division by zero");
                return x / y;
            case BinOp::Lt: return (long long)(x < y);
            case BinOp::Le: return (long long)(x <= y);
            case BinOp::Gt: return (long long)(x > y);
            case BinOp::Ge: return (long long)(x >= y);
            case BinOp::Eq: return (long long)(x == y);
            case BinOp::Ne: return (long long)(x != y);
            default: break;
        }
    }
    bool ba = as_double(a) != 0.0, bb = as_double(b) != 0.0;
    if (op == BinOp::LogAnd) return (long long)(ba && bb);
    if (op == BinOp::LogOr) return (long long)(ba || bb);
    throw PencilError("E-INTERP", "unsupported operator");
}

Value apply_compound(AssignOp op, const Value& old, const Value& rhs) {
    switch (op) {
        case AssignOp::Set: return rhs;
        case AssignOp::Add: return arith(BinOp::Add, old, rhs);
        case AssignOp::Sub: return arith(BinOp::Sub, old, rhs);
        case AssignOp::Mul: return arith(BinOp::Mul, old, rhs);
        case AssignOp::Div: return arith(BinOp::Div, old, rhs);
    }
    return rhs;
}

}  // namespace

struct Interpreter::Frame {
    std::map<std::string, Value> scalars;
    std::map<std::string, std::string> array_alias;            // param -> store name
    std::map<std::string, std::vector<Value>> local_arrays;
    bool returned = false;
    Value return_value = 0ll;
};

Value Interpreter::call(const std::string& fn, const std::vector<Arg>& args) {
    const FunctionDef* def = ast_.find_function(fn);
    if (!def) throw PencilError("E-INTERP", "no function named '" + fn + "'");
    return exec_call(*def, args, nullptr);
}

Value Interpreter::exec_call(const FunctionDef& fn, const std::vector<Arg>& args, Frame* caller) {
    if (args.size() != fn.params.size())
        throw PencilError("E-INTERP", "wrong argument count for '" + fn.name + "'", fn.loc);
    Frame f;
    for (size_t i = 0; i < args.size(); ++i) {
        const Param& p = fn.params[i];
        if (p.kind == ParamKind::Array || p.kind == ParamKind::PointerArray) {
            if (!args[i].is_array)
                throw PencilError("E-INTERP", "parameter '" + p.name + "' needs an array", p.loc);
            std::string store = args[i].array_name;
            if (caller) {
                auto it = caller->array_alias.find(store);
                if (it != caller->array_alias.end()) store = it->second;
            }
            f.array_alias[p.name] = store;
        } else {
            f.scalars[p.name] = args[i].is_array ? Value{0ll} : args[i].value;
        }
    }
    if (fn.body) exec(*fn.body, f);
    return f.return_value;
}

std::vector<Value>& Interpreter::array_storage(const std::string& name, Frame& f,
                                               std::string* canonical) {
    auto la = f.local_arrays.find(name);
    if (la != f.local_arrays.end()) {
        if (canonical) *canonical = "";
        return la->second;
    }
    std::string store = name;
    auto it = f.array_alias.find(name);
    if (it != f.array_alias.end()) store = it->second;
    if (canonical) *canonical = store;
    auto g = arrays_.find(store);
    if (g == arrays_.end()) throw PencilError("E-INTERP", "no array storage for '" + store + "'");
    return g->second;
}

void Interpreter::step(SourceLoc loc) {
    if (++steps_ > step_budget_)
        throw PencilError("E-INTERP", "execution step budget exceeded", loc);
}

void Interpreter::exec(const Stmt& s, Frame& f) {
    if (f.returned) return;
    step(s.loc);
    switch (s.kind) {
        case StmtKind::Block:
            for (const auto& c : s.stmts) {
                exec(*c, f);
                if (f.returned) return;
            }
            return;
        case StmtKind::Decl:
            if (!s.decl_extents.empty()) {
                long long total = 1;
                for (const auto& e : s.decl_extents) total *= as_int(eval(*e, f));
                if (total < 0 || total > 100'000'000)
                    throw PencilError("E-INTERP", "unreasonable local array size", s.loc);
                Value init = s.decl_type == Type::Int ? Value{0ll} : Value{0.0};
                f.local_arrays[s.name] = std::vector<Value>(static_cast<size_t>(total), init);
            } else {
                f.scalars[s.name] =
                    s.rhs ? eval(*s.rhs, f)
                          : (s.decl_type == Type::Int ? Value{0ll} : Value{0.0});
            }
            return;
        case StmtKind::Assign: {
            Value rhs = eval(*s.rhs, f);
            const Expr& lv = *s.lvalue;
            if (lv.kind == ExprKind::Var) {
                auto it = f.scalars.find(lv.name);
                if (it == f.scalars.end())
                    throw PencilError("E-INTERP", "assignment to unbound '" + lv.name + "'",
                                      s.loc);
                it->second = apply_compound(s.assign_op, it->second, rhs);
                return;
            }
            if (lv.kind == ExprKind::Unary && lv.un_op == UnOp::Deref &&
                lv.args[0]->kind == ExprKind::Var) {
                std::string canonical;
                auto& store = array_storage(lv.args[0]->name, f, &canonical);
                if (store.empty()) throw PencilError("E-INTERP", "empty pointee", s.loc);
                store[0] = apply_compound(s.assign_op, store[0], rhs);
                return;
            }
            if (lv.kind != ExprKind::Index)
                throw PencilError("E-INTERP", "unsupported lvalue", s.loc);
            std::string canonical;
            auto& store = array_storage(lv.name, f, &canonical);
            std::vector<long long> index;
            for (const auto& sub : lv.args) index.push_back(as_int(eval(*sub, f)));
            if (index.size() != 1)
                throw PencilError("E-INTERP", "multi-dimensional access unsupported here", s.loc);
            long long flat = index[0];
            if (flat < 0 || flat >= (long long)store.size())
                throw PencilError("E-INTERP",
                                  "store to " + lv.name + "[" + std::to_string(flat) +
                                      "] is out of bounds (size " +
                                      std::to_string(store.size()) + ")",
                                  s.loc);
            if (trace_on_ && !canonical.empty()) trace_.push_back({canonical, index, true});
            store[(size_t)flat] = apply_compound(s.assign_op, store[(size_t)flat], rhs);
            return;
        }
        case StmtKind::For: {
            long long lo = as_int(eval(*s.lo, f));
            long long hi = as_int(eval(*s.hi, f));
            for (long long v = lo; v < hi; ++v) {
                step(s.loc);
                f.scalars[s.name] = v;
                exec(*s.body, f);
                if (f.returned) return;
            }
            return;
        }
        case StmtKind::While:
            while (as_double(eval(*s.cond, f)) != 0.0) {
                step(s.loc);
                exec(*s.body, f);
                if (f.returned) return;
            }
            return;
        case StmtKind::If:
            if (as_double(eval(*s.cond, f)) != 0.0) {
                if (s.then_branch) exec(*s.then_branch, f);
            } else if (s.else_branch) {
                exec(*s.else_branch, f);
            }
            return;
        case StmtKind::CallStmt:
            eval(*s.call, f);
            return;
        case StmtKind::Return:
            if (s.rhs) f.return_value = eval(*s.rhs, f);
            f.returned = true;
            return;
        case StmtKind::Labeled:
            exec(*s.body, f);
            return;
        case StmtKind::SummaryAccess:
            return;  // built-ins with no runtime effect
        case StmtKind::Goto:
            throw PencilError("E-INTERP", "goto is not executable", s.loc);
    }
}

long long Interpreter::next_rand() {
    if (rand_pos_ < rand_values_.size()) return rand_values_[rand_pos_++];
    rng_state_ = rng_state_ * 6364136223846793005ull + 1442695040888963407ull;
    return (long long)((rng_state_ >> 33) & 0x7fffffff);
}

Value Interpreter::eval(const Expr& e, Frame& f) {
    switch (e.kind) {
        case ExprKind::IntLit:
            return e.int_val;
        case ExprKind::FloatLit:
            return e.float_val;
        case ExprKind::Var: {
            auto it = f.scalars.find(e.name);
            if (it == f.scalars.end())
                throw PencilError("E-INTERP", "unbound variable '" + e.name + "'", e.loc);
            return it->second;
        }
        case ExprKind::Index: {
            std::string canonical;
            auto& store = array_storage(e.name, f, &canonical);
            std::vector<long long> index;
            for (const auto& sub : e.args) index.push_back(as_int(eval(*sub, f)));
            long long flat = index.size() == 1 ? index[0] : 0;
            if (index.size() != 1)
                throw PencilError("E-INTERP", "multi-dimensional access unsupported here", e.loc);
            if (flat < 0 || flat >= (long long)store.size())
                throw PencilError("E-INTERP",
                                  "load from " + e.name + "[" + std::to_string(flat) +
                                      "] is out of bounds",
                                  e.loc);
            if (trace_on_ && !canonical.empty()) trace_.push_back({canonical, index, false});
            return store[(size_t)flat];
        }
        case ExprKind::Binary:
            return arith(e.bin_op, eval(*e.args[0], f), eval(*e.args[1], f));
        case ExprKind::Unary:
            switch (e.un_op) {
                case UnOp::Neg: {
                    Value v = eval(*e.args[0], f);
                    if (std::holds_alternative<double>(v)) return -std::get<double>(v);
                    return -std::get<long long>(v);
                }
                case UnOp::LogNot:
                    return (long long)(as_double(eval(*e.args[0], f)) == 0.0);
                case UnOp::Deref: {
                    if (e.args[0]->kind != ExprKind::Var)
                        throw PencilError("E-INTERP", "unsupported dereference", e.loc);
                    std::string canonical;
                    auto& store = array_storage(e.args[0]->name, f, &canonical);
                    if (store.empty()) throw PencilError("E-INTERP", "empty pointee", e.loc);
                    return store[0];
                }
                case UnOp::AddrOf:
                    throw PencilError("E-INTERP", "address-of is not executable", e.loc);
            }
            return 0ll;
        case ExprKind::Call: {
            if (e.name == "exp") {
                if (e.args.size() != 1)
                    throw PencilError("E-INTERP", "exp takes one argument", e.loc);
                return std::exp(as_double(eval(*e.args[0], f)));
            }
            if (e.name == "rand") return next_rand();
            const FunctionDef* callee = ast_.find_function(e.name);
            if (!callee) throw PencilError("E-INTERP", "call to unknown '" + e.name + "'", e.loc);
            std::vector<Arg> args;
            for (size_t i = 0; i < e.args.size(); ++i) {
                bool is_array_param = i < callee->params.size() &&
                                      (callee->params[i].kind == ParamKind::Array ||
                                       callee->params[i].kind == ParamKind::PointerArray);
                if (is_array_param) {
                    if (e.args[i]->kind != ExprKind::Var)
                        throw PencilError("E-INTERP", "array argument must be a name",
                                          e.args[i]->loc);
                    args.push_back(Arg::array(e.args[i]->name));
                } else {
                    args.push_back(Arg::scalar(eval(*e.args[i], f)));
                }
            }
            return exec_call(*callee, args, &f);
        }
    }
    return 0ll;
}

}  // namespace pencil
