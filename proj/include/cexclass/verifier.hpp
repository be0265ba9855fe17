#pragma once

#include "trace_constraint.hpp"

#include <chrono>
#include <deque>
#include <unordered_map>

namespace cexclass {

/// Maximum number of transitions per enumerated trace.
struct Bound {
    int max_len = 0;
    bool exact = false; // yield only traces of exactly max_len transitions

    Bound() = default;
    Bound(int len) : max_len(len) {} // NOLINT(google-explicit-constructor)
    Bound(int len, bool exact_length) : max_len(len), exact(exact_length) {}
};

/// Assumption passed to the verifier: every yielded trace satisfies all
/// `require` constraints and no `block` constraint.
struct ConstraintSet {
    std::vector<TraceConstraint> require;
    std::vector<TraceConstraint> block;
};

/// What to check of each trace: the property itself or its complement
/// (Algorithm 1 calls the verifier with both Phi and not-Phi).
struct Objective {
    Property property;
    bool complement = false;

    Objective(Property p) : property(std::move(p)) {} // NOLINT(google-explicit-constructor)
    Objective(Property p, bool compl_) : property(std::move(p)), complement(compl_) {}

    bool accepts(const Trace& rho) const {
        bool sat = trace_satisfies_property(rho, property);
        return complement ? !sat : sat;
    }
};

struct VerifyOutcome {
    enum class Status { ok, violated } status = Status::ok;
    std::optional<Trace> witness;

    bool ok() const { return status == Status::ok; }
};

enum class Walk { next, stop };

/// Deterministic bounded explicit-state engine. Enumerates the traces of
/// an STS in canonical order: shorter traces first, ties broken
/// lexicographically by state sequence under declaration/value order.
/// Blocked constraints prune whole subtrees (extension-monotone), require
/// constraints filter at yield. A state filter restricts every state of
/// every trace (used to walk only invariant-satisfying traces).
class Engine {
public:
    explicit Engine(const SymbolicTransitionSystem& sts) : sts_(sts), primed_init_(prime_all_vars(sts.init)) {}

    const SymbolicTransitionSystem& system() const { return sts_; }

    template <typename Fn> // Fn: (const Trace&) -> Walk
    void for_each_trace(Bound bound, const ConstraintSet& assume, const Expr* state_filter, Fn&& fn) {
        auto t0 = std::chrono::steady_clock::now();
        struct Node {
            State state;
            const Node* parent;
            int depth;
        };
        std::deque<Node> arena;
        std::vector<const Node*> level, next_level;

        auto trace_of = [](const Node* n) {
            Trace t;
            for (const Node* p = n; p; p = p->parent) t.states.push_back(p->state);
            std::reverse(t.states.begin(), t.states.end());
            return t;
        };
        auto blocked = [&](const Trace& t) {
            for (const auto& w : assume.block)
                if (satisfies(t, w)) return true;
            return false;
        };
        auto required = [&](const Trace& t) {
            for (const auto& w : assume.require)
                if (!satisfies(t, w)) return false;
            return true;
        };

        bool stopped = false;
        for_each_initial(state_filter, [&](const State& s) {
            arena.push_back(Node{s, nullptr, 0});
            level.push_back(&arena.back());
        });

        for (int depth = 0; depth <= bound.max_len && !stopped && !level.empty(); ++depth) {
            next_level.clear();
            for (const Node* n : level) {
                Trace t = trace_of(n);
                if (blocked(t)) continue; // every extension stays blocked
                bool yield = (!bound.exact || depth == bound.max_len) && required(t);
                if (yield && fn(static_cast<const Trace&>(t)) == Walk::stop) {
                    stopped = true;
                    break;
                }
                if (depth < bound.max_len) {
                    for (const State& succ : successors(n->state)) {
                        if (state_filter && !eval_state_bool(*state_filter, succ)) continue;
                        arena.push_back(Node{succ, n, depth + 1});
                        next_level.push_back(&arena.back());
                    }
                }
            }
            level.swap(next_level);
        }
        elapsed_ += std::chrono::steady_clock::now() - t0;
    }

    std::vector<Trace> enumerate(Bound bound, const ConstraintSet& assume = {}) {
        std::vector<Trace> out;
        for_each_trace(bound, assume, nullptr, [&](const Trace& t) {
            out.push_back(t);
            return Walk::next;
        });
        return out;
    }

    /// OK iff every enumerated trace under `assume` meets the objective;
    /// otherwise Violated with the first offender in canonical order.
    VerifyOutcome verify(const ConstraintSet& assume, const Objective& goal, Bound bound) {
        VerifyOutcome out;
        for_each_trace(bound, assume, nullptr, [&](const Trace& t) {
            if (!goal.accepts(t)) {
                out.status = VerifyOutcome::Status::violated;
                out.witness = t;
                return Walk::stop;
            }
            return Walk::next;
        });
        return out;
    }

    std::optional<Trace> first_counterexample(const ConstraintSet& assume, const Objective& goal, Bound bound) {
        return verify(assume, goal, bound).witness;
    }

    std::uint64_t count_counterexamples(const Property& phi, Bound bound) {
        std::uint64_t n = 0;
        for_each_trace(bound, {}, nullptr, [&](const Trace& t) {
            if (!trace_satisfies_property(t, phi)) ++n;
            return Walk::next;
        });
        return n;
    }

    /// First trace (canonical order) whose states all satisfy the
    /// property's invariant; the cheap accepting-trace existence check.
    std::optional<Trace> first_accepting(const Property& phi, Bound bound) {
        std::optional<Trace> out;
        for_each_trace(bound, {}, &phi.inv, [&](const Trace& t) {
            out = t;
            return Walk::stop;
        });
        return out;
    }

    double verify_millis() const {
        return std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(elapsed_).count();
    }

    /// All states s' with (s, s') |= T, in canonical value order. Memoized.
    const std::vector<State>& successors(const State& s) {
        auto it = succ_cache_.find(s);
        if (it != succ_cache_.end()) return it->second;
        std::vector<State> out;
        const auto& layout = sts_.layout;
        State next{layout, std::vector<Value>(layout->size())};
        expand(sts_.trans, s, next, 0, out, /*use_two_state=*/true);
        return succ_cache_.emplace(s, std::move(out)).first->second;
    }

    std::vector<State> initial_states() {
        std::vector<State> out;
        for_each_initial(nullptr, [&](const State& s) { out.push_back(s); });
        return out;
    }

private:
    template <typename Fn>
    void for_each_initial(const Expr* state_filter, Fn&& fn) {
        if (init_cache_.empty()) {
            const auto& layout = sts_.layout;
            State dummy{layout, {}};
            State cand{layout, std::vector<Value>(layout->size())};
            expand(primed_init_, dummy, cand, 0, init_cache_, /*use_two_state=*/true);
            init_done_ = true;
        }
        for (const State& s : init_cache_) {
            if (state_filter && !eval_state_bool(*state_filter, s)) continue;
            fn(s);
        }
    }

    void expand(const Expr& pred, const State& cur, State& next, std::size_t var, std::vector<State>& out,
                bool use_two_state) {
        auto v = partial_eval(pred, cur, next, var);
        if (v && !v->as_bool()) return;
        if (var == next.values.size()) {
            if (v && v->as_bool()) out.push_back(next);
            return;
        }
        const Domain& d = sts_.layout->var(var).domain;
        for (std::size_t i = 0; i < d.size(); ++i) {
            next.values[var] = d.value_at(i);
            expand(pred, cur, next, var + 1, out, use_two_state);
        }
    }

    const SymbolicTransitionSystem& sts_;
    Expr primed_init_;
    std::unordered_map<State, std::vector<State>, StateHash> succ_cache_;
    std::vector<State> init_cache_;
    bool init_done_ = false;
    std::chrono::steady_clock::duration elapsed_{};
};

// ---- one-shot convenience wrappers (the spec's free operations) --------

inline std::vector<Trace> enumerate_traces(const SymbolicTransitionSystem& sts, Bound bound,
                                           const ConstraintSet& assume = {}) {
    Engine e(sts);
    return e.enumerate(bound, assume);
}

inline VerifyOutcome verify(const SymbolicTransitionSystem& sts, const ConstraintSet& assume, const Objective& goal,
                            Bound bound) {
    Engine e(sts);
    return e.verify(assume, goal, bound);
}

inline std::optional<Trace> counterexample(const SymbolicTransitionSystem& sts, const ConstraintSet& assume,
                                           const Objective& goal, Bound bound) {
    Engine e(sts);
    return e.first_counterexample(assume, goal, bound);
}

inline std::uint64_t count_counterexamples(const SymbolicTransitionSystem& sts, const Property& phi, Bound bound) {
    Engine e(sts);
    return e.count_counterexamples(phi, bound);
}

} // namespace cexclass
