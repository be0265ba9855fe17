#pragma once

#include "expr.hpp"

namespace cexclass {

/// (X, I, T): typed state variables, initial-state predicate over X, and
/// transition predicate over X and the primed copies X'.
struct SymbolicTransitionSystem {
    std::shared_ptr<const VarLayout> layout;
    Expr init;
    Expr trans;
};

/// Invariant property G(inv): every state of every trace must satisfy inv.
struct Property {
    Expr inv;
};

/// Evaluate a state predicate. Result is usually boolean but any value
/// expression works (the spec's boolean-or-value contract).
inline Value eval_state(const Expr& e, const State& s) {
    EvalEnv env;
    env.cur = &s;
    return eval(e, env);
}

inline bool eval_state_bool(const Expr& e, const State& s) { return eval_state(e, s).as_bool(); }

inline bool eval_transition(const Expr& e, const State& s, const State& s_next) {
    EvalEnv env;
    env.cur = &s;
    env.next = &s_next;
    return eval(e, env).as_bool();
}

inline bool state_satisfies(const State& s, const Property& p) { return eval_state_bool(p.inv, s); }

inline bool trace_satisfies_property(const Trace& rho, const Property& phi) {
    for (const auto& s : rho.states)
        if (!state_satisfies(s, phi)) return false;
    return true;
}

} // namespace cexclass
