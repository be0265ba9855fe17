#pragma once

#include "state.hpp"

#include <optional>
#include <span>
#include <utility>

namespace cexclass {

struct SourceLoc {
    int line = 0;
    int col = 0;
};

enum class ExprKind : std::uint8_t {
    constant,   // literal value
    var_ref,    // state variable, possibly primed
    param_ref,  // predicate value parameter (field_offset >= 0 selects a record field)
    state_at,   // state variable at a trace position given by a position parameter
    pos_ref,    // position parameter as an ordinal
    pos_local,  // position variable bound by an enclosing forall (de Bruijn index)
    logic_not,
    logic_and,
    logic_or,
    logic_implies,
    cmp_eq,
    cmp_ne,
    cmp_lt,
    cmp_le,
    cmp_gt,
    cmp_ge,
    add,
    sub,
    set_union,
    set_member, // lhs symbol in rhs set
    set_lit,    // children are the element expressions
    forall_between // kids: lo, hi (positions), body; bound var strictly between
};

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    ExprKind kind;
    SourceLoc loc{};
    Value literal{};
    int var = -1;           // var_ref/state_at: flat variable index; param_ref/pos_ref: parameter index
    int field_offset = -1;  // param_ref into a record parameter
    int pos_param = -1;     // state_at: position parameter index (or -depth-1 for a forall-bound position)
    bool primed = false;
    std::vector<Expr> kids;
};

inline Expr make_node(ExprKind k, std::vector<Expr> kids = {}) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->kids = std::move(kids);
    return n;
}

inline Expr make_const(Value v) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::constant;
    n->literal = v;
    return n;
}

inline Expr make_var(int var, bool primed = false) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::var_ref;
    n->var = var;
    n->primed = primed;
    return n;
}

inline Expr make_binary(ExprKind k, Expr a, Expr b) { return make_node(k, {std::move(a), std::move(b)}); }

/// Everything an expression may need at evaluation time. Which fields are
/// populated depends on the context: system predicates use cur/next,
/// predicate bodies use trace plus parameter bindings.
struct EvalEnv {
    const State* cur = nullptr;
    const State* next = nullptr;
    const Trace* trace = nullptr;
    // value parameter bindings: (first flat variable index, position)
    std::span<const std::pair<int, int>> value_args{};
    std::span<const int> pos_args{};
    std::vector<int> pos_locals{}; // innermost last
};

namespace detail {

inline const Value& state_value(const EvalEnv& env, const ExprNode& n) {
    const State* s = n.primed ? env.next : env.cur;
    if (!s) throw eval_error(n.primed ? "primed variable outside a transition context"
                                      : "no state bound for variable reference");
    if (n.var < 0 || static_cast<std::size_t>(n.var) >= s->values.size())
        throw eval_error("unknown variable index");
    return s->values[static_cast<std::size_t>(n.var)];
}

inline int resolve_position(const EvalEnv& env, int pos_param) {
    if (pos_param >= 0) {
        if (static_cast<std::size_t>(pos_param) >= env.pos_args.size())
            throw eval_error("unbound position parameter");
        return env.pos_args[static_cast<std::size_t>(pos_param)];
    }
    int depth = -pos_param - 1;
    if (depth < 0 || static_cast<std::size_t>(depth) >= env.pos_locals.size())
        throw eval_error("unbound quantified position");
    return env.pos_locals[env.pos_locals.size() - 1 - static_cast<std::size_t>(depth)];
}

} // namespace detail

inline Value eval(const Expr& e, EvalEnv& env);

namespace detail {

inline std::int64_t eval_position(const Expr& e, EvalEnv& env) {
    switch (e->kind) {
        case ExprKind::pos_ref: return resolve_position(env, e->var);
        case ExprKind::pos_local: return resolve_position(env, -e->var - 1);
        default: return eval(e, env).as_int();
    }
}

inline bool is_position_expr(const Expr& e) {
    return e->kind == ExprKind::pos_ref || e->kind == ExprKind::pos_local;
}

} // namespace detail

/// Standard (total) evaluation. Throws eval_error on type or scope errors.
inline Value eval(const Expr& e, EvalEnv& env) {
    const ExprNode& n = *e;
    switch (n.kind) {
        case ExprKind::constant: return n.literal;
        case ExprKind::var_ref: return detail::state_value(env, n);
        case ExprKind::param_ref: {
            if (n.var < 0 || static_cast<std::size_t>(n.var) >= env.value_args.size())
                throw eval_error("unbound predicate parameter");
            auto [base, pos] = env.value_args[static_cast<std::size_t>(n.var)];
            int flat = base + (n.field_offset >= 0 ? n.field_offset : 0);
            if (!env.trace) throw eval_error("parameter reference outside a trace context");
            if (pos < 0 || static_cast<std::size_t>(pos) >= env.trace->positions())
                throw std::logic_error("parameter bound to an out-of-range position");
            return env.trace->states[static_cast<std::size_t>(pos)].values[static_cast<std::size_t>(flat)];
        }
        case ExprKind::state_at: {
            if (!env.trace) throw eval_error("positional access outside a trace context");
            int pos = detail::resolve_position(env, n.pos_param);
            if (pos < 0 || static_cast<std::size_t>(pos) >= env.trace->positions())
                throw std::logic_error("position index out of trace range");
            return env.trace->states[static_cast<std::size_t>(pos)].values[static_cast<std::size_t>(n.var)];
        }
        case ExprKind::pos_ref: return Value::integer(detail::resolve_position(env, n.var));
        case ExprKind::pos_local: return Value::integer(detail::resolve_position(env, -n.var - 1));
        case ExprKind::logic_not: return Value::boolean(!eval(n.kids[0], env).as_bool());
        case ExprKind::logic_and: {
            for (const auto& k : n.kids)
                if (!eval(k, env).as_bool()) return Value::boolean(false);
            return Value::boolean(true);
        }
        case ExprKind::logic_or: {
            for (const auto& k : n.kids)
                if (eval(k, env).as_bool()) return Value::boolean(true);
            return Value::boolean(false);
        }
        case ExprKind::logic_implies:
            return Value::boolean(!eval(n.kids[0], env).as_bool() || eval(n.kids[1], env).as_bool());
        case ExprKind::cmp_eq:
        case ExprKind::cmp_ne: {
            bool eq;
            if (detail::is_position_expr(n.kids[0]) || detail::is_position_expr(n.kids[1])) {
                eq = detail::eval_position(n.kids[0], env) == detail::eval_position(n.kids[1], env);
            } else {
                Value a = eval(n.kids[0], env), b = eval(n.kids[1], env);
                if (a.kind != b.kind || a.type_id != b.type_id)
                    throw eval_error("equality between values of different types");
                eq = a == b;
            }
            return Value::boolean(n.kind == ExprKind::cmp_eq ? eq : !eq);
        }
        case ExprKind::cmp_lt:
        case ExprKind::cmp_le:
        case ExprKind::cmp_gt:
        case ExprKind::cmp_ge: {
            std::int64_t a = detail::eval_position(n.kids[0], env);
            std::int64_t b = detail::eval_position(n.kids[1], env);
            switch (n.kind) {
                case ExprKind::cmp_lt: return Value::boolean(a < b);
                case ExprKind::cmp_le: return Value::boolean(a <= b);
                case ExprKind::cmp_gt: return Value::boolean(a > b);
                default: return Value::boolean(a >= b);
            }
        }
        case ExprKind::add: return Value::integer(eval(n.kids[0], env).as_int() + eval(n.kids[1], env).as_int());
        case ExprKind::sub: return Value::integer(eval(n.kids[0], env).as_int() - eval(n.kids[1], env).as_int());
        case ExprKind::set_union: {
            Value a = eval(n.kids[0], env), b = eval(n.kids[1], env);
            if (a.kind != ValueKind::symbol_set || b.kind != ValueKind::symbol_set || a.type_id != b.type_id)
                throw eval_error("union requires sets over the same enumeration");
            return Value::symbol_set(a.type_id, a.as_mask() | b.as_mask());
        }
        case ExprKind::set_member: {
            Value el = eval(n.kids[0], env), set = eval(n.kids[1], env);
            if (el.kind != ValueKind::symbol || set.kind != ValueKind::symbol_set || el.type_id != set.type_id)
                throw eval_error("membership requires a symbol and a set over the same enumeration");
            return Value::boolean((set.as_mask() >> el.raw) & 1);
        }
        case ExprKind::set_lit: {
            std::uint64_t mask = 0;
            std::int16_t tid = static_cast<std::int16_t>(n.var);
            for (const auto& k : n.kids) {
                Value el = eval(k, env);
                if (el.kind != ValueKind::symbol || (tid >= 0 && el.type_id != tid))
                    throw eval_error("set literal element of wrong type");
                tid = el.type_id;
                mask |= std::uint64_t{1} << el.raw;
            }
            return Value::symbol_set(tid, mask);
        }
        case ExprKind::forall_between: {
            std::int64_t lo = detail::eval_position(n.kids[0], env);
            std::int64_t hi = detail::eval_position(n.kids[1], env);
            for (std::int64_t t = lo + 1; t < hi; ++t) {
                env.pos_locals.push_back(static_cast<int>(t));
                bool ok = eval(n.kids[2], env).as_bool();
                env.pos_locals.pop_back();
                if (!ok) return Value::boolean(false);
            }
            return Value::boolean(true);
        }
    }
    throw std::logic_error("unhandled expression kind");
}

/// Three-valued evaluation of a transition predicate against a current
/// state and a prefix of the successor assignment (variables [0, known)
/// assigned in `next`). Returns nullopt while the truth value still
/// depends on unassigned successor variables. Used to prune successor
/// search; only system predicates (no positional constructs) reach it.
inline std::optional<Value> partial_eval(const Expr& e, const State& cur, const State& next, std::size_t known) {
    const ExprNode& n = *e;
    switch (n.kind) {
        case ExprKind::constant: return n.literal;
        case ExprKind::var_ref: {
            if (!n.primed) return cur.values[static_cast<std::size_t>(n.var)];
            if (static_cast<std::size_t>(n.var) < known) return next.values[static_cast<std::size_t>(n.var)];
            return std::nullopt;
        }
        case ExprKind::logic_not: {
            auto v = partial_eval(n.kids[0], cur, next, known);
            if (!v) return std::nullopt;
            return Value::boolean(!v->as_bool());
        }
        case ExprKind::logic_and: {
            bool unknown = false;
            for (const auto& k : n.kids) {
                auto v = partial_eval(k, cur, next, known);
                if (!v) { unknown = true; continue; }
                if (!v->as_bool()) return Value::boolean(false);
            }
            if (unknown) return std::nullopt;
            return Value::boolean(true);
        }
        case ExprKind::logic_or: {
            bool unknown = false;
            for (const auto& k : n.kids) {
                auto v = partial_eval(k, cur, next, known);
                if (!v) { unknown = true; continue; }
                if (v->as_bool()) return Value::boolean(true);
            }
            if (unknown) return std::nullopt;
            return Value::boolean(false);
        }
        case ExprKind::logic_implies: {
            auto a = partial_eval(n.kids[0], cur, next, known);
            if (a && !a->as_bool()) return Value::boolean(true);
            auto b = partial_eval(n.kids[1], cur, next, known);
            if (b && b->as_bool()) return Value::boolean(true);
            if (!a || !b) return std::nullopt;
            return Value::boolean(b->as_bool());
        }
        case ExprKind::cmp_eq:
        case ExprKind::cmp_ne: {
            auto a = partial_eval(n.kids[0], cur, next, known);
            auto b = partial_eval(n.kids[1], cur, next, known);
            if (!a || !b) return std::nullopt;
            bool eq = *a == *b;
            return Value::boolean(n.kind == ExprKind::cmp_eq ? eq : !eq);
        }
        case ExprKind::cmp_lt:
        case ExprKind::cmp_le:
        case ExprKind::cmp_gt:
        case ExprKind::cmp_ge: {
            auto a = partial_eval(n.kids[0], cur, next, known);
            auto b = partial_eval(n.kids[1], cur, next, known);
            if (!a || !b) return std::nullopt;
            std::int64_t x = a->as_int(), y = b->as_int();
            switch (n.kind) {
                case ExprKind::cmp_lt: return Value::boolean(x < y);
                case ExprKind::cmp_le: return Value::boolean(x <= y);
                case ExprKind::cmp_gt: return Value::boolean(x > y);
                default: return Value::boolean(x >= y);
            }
        }
        case ExprKind::add:
        case ExprKind::sub: {
            auto a = partial_eval(n.kids[0], cur, next, known);
            auto b = partial_eval(n.kids[1], cur, next, known);
            if (!a || !b) return std::nullopt;
            std::int64_t r = n.kind == ExprKind::add ? a->as_int() + b->as_int() : a->as_int() - b->as_int();
            return Value::integer(r);
        }
        case ExprKind::set_union: {
            auto a = partial_eval(n.kids[0], cur, next, known);
            auto b = partial_eval(n.kids[1], cur, next, known);
            if (!a || !b) return std::nullopt;
            return Value::symbol_set(a->type_id, a->as_mask() | b->as_mask());
        }
        case ExprKind::set_member: {
            auto el = partial_eval(n.kids[0], cur, next, known);
            auto set = partial_eval(n.kids[1], cur, next, known);
            if (!el || !set) return std::nullopt;
            return Value::boolean((set->as_mask() >> el->raw) & 1);
        }
        case ExprKind::set_lit: {
            std::uint64_t mask = 0;
            std::int16_t tid = static_cast<std::int16_t>(n.var);
            for (const auto& k : n.kids) {
                auto el = partial_eval(k, cur, next, known);
                if (!el) return std::nullopt;
                tid = el->type_id;
                mask |= std::uint64_t{1} << el->raw;
            }
            return Value::symbol_set(tid, mask);
        }
        default:
            throw eval_error("positional construct in a system predicate");
    }
}

/// Collect the flat indices of every state variable an expression reads.
inline void collect_vars(const Expr& e, std::vector<bool>& mask) {
    if (e->kind == ExprKind::var_ref || e->kind == ExprKind::state_at)
        if (e->var >= 0 && static_cast<std::size_t>(e->var) < mask.size()) mask[static_cast<std::size_t>(e->var)] = true;
    for (const auto& k : e->kids) collect_vars(k, mask);
}

/// Rewrite every unprimed variable reference to its primed twin. Turns a
/// single-state predicate into one evaluable through the two-state partial
/// evaluator (the state under construction plays the successor role).
inline Expr prime_all_vars(const Expr& e) {
    auto n = std::make_shared<ExprNode>(*e);
    if (n->kind == ExprKind::var_ref) {
        if (n->primed) throw eval_error("predicate already references primed variables");
        n->primed = true;
    }
    n->kids.clear();
    for (const auto& k : e->kids) n->kids.push_back(prime_all_vars(k));
    return n;
}

} // namespace cexclass
