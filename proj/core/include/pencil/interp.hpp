#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "pencil/ast.hpp"

namespace pencil {

using Value = std::variant<long long, double>;

double as_double(const Value& v);
long long as_int(const Value& v);  // throws E-INTERP on a non-integral double

struct MemTrace {
    std::string array;
    std::vector<long long> index;
    bool is_write = false;
};

/// Concrete sequential executor for PENCIL units. Arrays live in a global
/// store and are passed to functions by name; scalars are passed by value.
/// `rand` is deterministic: it pops a configured sequence, then falls back
/// to an LCG.
class Interpreter {
  public:
    struct Arg {
        static Arg scalar(Value v) { return {v, "", false}; }
        static Arg array(std::string name) { return {{}, std::move(name), true}; }

        Value value;
        std::string array_name;
        bool is_array = false;
    };

    explicit Interpreter(const Ast& ast) : ast_(ast) {}

    std::map<std::string, std::vector<Value>>& arrays() { return arrays_; }
    void set_array(const std::string& name, std::vector<Value> data) {
        arrays_[name] = std::move(data);
    }

    void set_rand_sequence(std::vector<long long> values) { rand_values_ = std::move(values); }
    void enable_trace(bool on) { trace_on_ = on; }
    const std::vector<MemTrace>& trace() const { return trace_; }

    /// Runs a unit function. Throws PencilError("E-INTERP") on runtime
    /// faults (out-of-bounds store access, unbound names, step budget).
    Value call(const std::string& fn, const std::vector<Arg>& args);

  private:
    struct Frame;

    Value exec_call(const FunctionDef& fn, const std::vector<Arg>& args, Frame* caller);
    void exec(const Stmt& s, Frame& f);
    Value eval(const Expr& e, Frame& f);
    std::vector<Value>& array_storage(const std::string& name, Frame& f, std::string* canonical);
    long long next_rand();
    void step(SourceLoc loc);

    const Ast& ast_;
    std::map<std::string, std::vector<Value>> arrays_;
    std::vector<long long> rand_values_;
    size_t rand_pos_ = 0;
    unsigned long long rng_state_ = 0x9e3779b97f4a7c15ull;
    bool trace_on_ = false;
    std::vector<MemTrace> trace_;
    long long steps_ = 0;
    long long step_budget_ = 100'000'000;
};

}  // namespace pencil
