// Independent reference implementations used to cross-check the engine.
// Deliberately naive: direct domain products and recursive expansion, no
// pruning, no caching, no shared code with the implementation paths they
// validate.
#pragma once

#include "cexclass/classify.hpp"

#include <set>

namespace oracles {

using namespace cexclass;

inline std::vector<State> all_states(const std::shared_ptr<const VarLayout>& layout) {
    std::vector<State> out;
    State cur{layout, std::vector<Value>(layout->size())};
    std::vector<std::size_t> idx(layout->size(), 0);
    while (true) {
        for (std::size_t i = 0; i < layout->size(); ++i) cur.values[i] = layout->var(i).domain.value_at(idx[i]);
        out.push_back(cur);
        std::size_t k = layout->size();
        while (k > 0) {
            if (++idx[k - 1] < layout->var(k - 1).domain.size()) break;
            idx[k - 1] = 0;
            --k;
        }
        if (k == 0 || layout->size() == 0) break;
    }
    return out;
}

/// Every trace of length <= max_len by plain recursive expansion over the
/// full state space.
inline std::vector<Trace> enumerate_naive(const SymbolicTransitionSystem& sts, int max_len) {
    std::vector<State> universe = all_states(sts.layout);
    std::vector<Trace> out;
    std::vector<Trace> frontier;
    for (const State& s : universe)
        if (eval_state_bool(sts.init, s)) frontier.push_back(Trace{{s}});
    for (int len = 0; len <= max_len; ++len) {
        std::vector<Trace> next;
        for (const Trace& t : frontier) {
            out.push_back(t);
            if (len == max_len) continue;
            for (const State& s : universe) {
                if (eval_transition(sts.trans, t.states.back(), s)) {
                    Trace ext = t;
                    ext.states.push_back(s);
                    next.push_back(std::move(ext));
                }
            }
        }
        frontier = std::move(next);
    }
    return out;
}

inline std::vector<Trace> counterexamples_naive(const SymbolicTransitionSystem& sts, const Property& phi,
                                                int max_len) {
    std::vector<Trace> out;
    for (const Trace& t : enumerate_naive(sts, max_len))
        if (!trace_satisfies_property(t, phi)) out.push_back(t);
    return out;
}

/// Brute-force binding enumeration over (len+1)^k, no propagation.
inline bool satisfies_naive(const Trace& rho, const TraceConstraint& w) {
    const int k = w.position_vars;
    const int n = static_cast<int>(rho.positions());
    std::vector<int> binding(static_cast<std::size_t>(k), 0);
    auto check = [&]() {
        for (const auto& f : w.conjuncts)
            if (!cexclass::detail::eval_fact_at(f, rho, &binding)) return false;
        return true;
    };
    if (k == 0) return check();
    while (true) {
        if (check()) return true;
        int i = k;
        while (i > 0) {
            if (++binding[static_cast<std::size_t>(i - 1)] < n) break;
            binding[static_cast<std::size_t>(i - 1)] = 0;
            --i;
        }
        if (i == 0) return false;
    }
}

/// Exhaustive re-generation of every permitted fact instantiation, used to
/// check completeness of facts(). Follows the binding-scheme definition
/// with plain nested loops, independent of the generation code.
inline std::vector<AtomicFact> all_true_facts_naive(const Trace& rho, const PredicateSet& V, const ModelFile& model) {
    std::vector<AtomicFact> out;
    const VarLayout& layout = *model.layout();
    const int n_pos = static_cast<int>(rho.positions());
    const int n_vars = static_cast<int>(layout.size());

    for (const auto& pred : V.preds) {
        // every combination of (var@pos | record@pos | pos) per parameter,
        // filtered by typecheck and truth
        std::vector<std::vector<FactArg>> all_args(pred->params.size());
        for (std::size_t pi = 0; pi < pred->params.size(); ++pi) {
            if (pred->params[pi].is_position()) {
                for (int p = 0; p < n_pos; ++p) all_args[pi].push_back(FactArg::position(p));
            } else if (pred->params[pi].type.tag == TypeRef::Tag::record) {
                for (const auto& rv : model.record_vars)
                    for (int p = 0; p < n_pos; ++p) all_args[pi].push_back(FactArg::var_at(rv.first_flat, p));
            } else {
                for (int v = 0; v < n_vars; ++v)
                    for (int p = 0; p < n_pos; ++p) all_args[pi].push_back(FactArg::var_at(v, p));
            }
        }
        std::vector<std::size_t> idx(pred->params.size(), 0);
        bool done = pred->params.empty();
        while (true) {
            AtomicFact f;
            f.kind = FactKind::user_pred;
            f.pred = pred;
            for (std::size_t i = 0; i < idx.size(); ++i) f.args.push_back(all_args[i][idx[i]]);
            if (typecheck_binding(*pred, f.args, model) && eval_fact(f, rho)) out.push_back(f);
            if (done) break;
            std::size_t k = idx.size();
            while (k > 0) {
                if (++idx[k - 1] < all_args[k - 1].size()) break;
                idx[k - 1] = 0;
                --k;
            }
            if (k == 0) break;
        }
    }
    if (V.use_eq || V.use_ne) {
        for (int p = 0; p < n_pos; ++p)
            for (int v = 0; v < n_vars; ++v) {
                const Domain& d = layout.var(static_cast<std::size_t>(v)).domain;
                Value obs = rho.states[static_cast<std::size_t>(p)].values[static_cast<std::size_t>(v)];
                if (V.use_eq) {
                    AtomicFact f;
                    f.kind = FactKind::eq_const;
                    f.args = {FactArg::var_at(v, p), FactArg::constant_of(obs)};
                    out.push_back(f);
                }
                if (V.use_ne)
                    for (std::size_t ci = 0; ci < d.size(); ++ci)
                        if (!(d.value_at(ci) == obs)) {
                            AtomicFact f;
                            f.kind = FactKind::ne_const;
                            f.args = {FactArg::var_at(v, p), FactArg::constant_of(d.value_at(ci))};
                            out.push_back(f);
                        }
            }
        for (int p = 0; p < n_pos; ++p)
            for (int q = p; q < n_pos; ++q)
                for (int v1 = 0; v1 < n_vars; ++v1)
                    for (int v2 = 0; v2 < n_vars; ++v2) {
                        if (p == q && v1 >= v2) continue;
                        if (!layout.var(static_cast<std::size_t>(v1))
                                 .domain.same_domain(layout.var(static_cast<std::size_t>(v2)).domain))
                            continue;
                        Value a = rho.states[static_cast<std::size_t>(p)].values[static_cast<std::size_t>(v1)];
                        Value b = rho.states[static_cast<std::size_t>(q)].values[static_cast<std::size_t>(v2)];
                        if (V.use_eq && a == b) {
                            AtomicFact f;
                            f.kind = FactKind::eq_pair;
                            f.args = {FactArg::var_at(v1, p), FactArg::var_at(v2, q)};
                            out.push_back(f);
                        }
                        if (V.use_ne && a != b) {
                            AtomicFact f;
                            f.kind = FactKind::ne_pair;
                            f.args = {FactArg::var_at(v1, p), FactArg::var_at(v2, q)};
                            out.push_back(f);
                        }
                    }
    }
    if (V.use_lt)
        for (int p = 0; p + 1 < n_pos; ++p) {
            AtomicFact f;
            f.kind = FactKind::pos_less;
            f.args = {FactArg::position(p), FactArg::position(p + 1)};
            out.push_back(f);
        }
    return out;
}

/// Materialize the member indices of each class over an explicit
/// counterexample list.
inline std::vector<std::vector<std::size_t>> materialize(const std::vector<Trace>& cexs,
                                                         const std::vector<TraceConstraint>& classes) {
    std::vector<std::vector<std::size_t>> out(classes.size());
    for (std::size_t c = 0; c < classes.size(); ++c)
        for (std::size_t i = 0; i < cexs.size(); ++i)
            if (satisfies_naive(cexs[i], classes[c])) out[c].push_back(i);
    return out;
}

} // namespace oracles
