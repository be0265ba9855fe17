#pragma once

#include "minimize.hpp"

#include <variant>

namespace cexclass {

/// block(W): admit only traces outside every discovered class.
inline ConstraintSet block(std::vector<TraceConstraint> w) {
    ConstraintSet cs;
    cs.block = std::move(w);
    return cs;
}

struct ClassEntry {
    TraceConstraint constraint;
    Trace representative;                  // the counterexample that spawned the class
    std::optional<Trace> canonical_witness; // satisfies this class and no other
    bool seeded = false;                   // produced by a seeded phase; pinned through redundancy removal
};

struct Classification {
    std::vector<ClassEntry> classes;
    int iterations = 0;
    Bound bound{0};
    std::string predicate_label;
};

struct ClassifyError {
    enum class Kind { insufficient_facts, insufficient_predicates, no_accepting_trace };
    Kind kind = Kind::insufficient_facts;
    std::optional<Trace> offending;
    bool capped = false;
    std::string message;
};

using ClassifyResult = std::variant<Classification, ClassifyError>;

struct ClassifyOptions {
    Bound bound{0};
    FactGenConfig factgen{};
    std::vector<std::string> seed_preds; // explicit seeding; empty + auto_seed: all positional preds in V
    bool auto_seed = true;
    bool compute_witnesses = true;
};

namespace detail {

inline ClassifyError make_insufficient(ClassifyError::Kind kind, const Trace& rho, bool capped) {
    ClassifyError e;
    e.kind = kind;
    e.offending = rho;
    e.capped = capped;
    e.message = "V cannot sufficiently characterize the violation in the counterexample";
    if (capped)
        e.message += " (note: fact generation was capped by max-arity/equality-window; "
                     "a solution may exist under an uncapped search)";
    return e;
}

/// The seed constraint for predicate q: exists positions, q holds.
inline TraceConstraint seed_constraint(const std::shared_ptr<const PredicateDef>& q) {
    TraceConstraint tc;
    tc.position_vars = q->arity();
    AtomicFact f;
    f.kind = FactKind::user_pred;
    f.pred = q;
    for (int i = 0; i < q->arity(); ++i) f.args.push_back(FactArg::position(i));
    tc.conjuncts.push_back(std::move(f));
    return tc;
}

} // namespace detail

/// Iterative redundancy elimination over trace constraints (discovery
/// order): a class is removed when the remaining ones already cover every
/// bounded counterexample it covers. Pinned classes are kept but still
/// count as coverage for the others.
inline std::vector<std::size_t> remove_redundant_indices(Engine& engine, const std::vector<TraceConstraint>& w,
                                                         const Property& phi, Bound bound,
                                                         const std::vector<bool>* pinned = nullptr) {
    std::vector<bool> kept(w.size(), true);
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (pinned && i < pinned->size() && (*pinned)[i]) continue;
        std::vector<TraceConstraint> others;
        for (std::size_t j = 0; j < w.size(); ++j)
            if (j != i && kept[j]) others.push_back(w[j]);
        // redundant iff no counterexample escapes the other classes
        VerifyOutcome out = engine.verify(block(std::move(others)), Objective{phi}, bound);
        if (out.ok()) kept[i] = false;
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < w.size(); ++i)
        if (kept[i]) out.push_back(i);
    return out;
}

inline std::vector<TraceConstraint> remove_redundant(Engine& engine, const std::vector<TraceConstraint>& w,
                                                     const Property& phi, Bound bound) {
    std::vector<TraceConstraint> out;
    for (std::size_t i : remove_redundant_indices(engine, w, phi, bound)) out.push_back(w[i]);
    return out;
}

inline std::vector<TraceConstraint> remove_redundant(const SymbolicTransitionSystem& sts,
                                                     const std::vector<TraceConstraint>& w, const Property& phi,
                                                     Bound bound) {
    Engine e(sts);
    return remove_redundant(e, w, phi, bound);
}

/// A bounded trace that satisfies class `idx` and no other class, if any.
inline std::optional<Trace> canonical_counterexample(Engine& engine, const std::vector<TraceConstraint>& w,
                                                     std::size_t idx, Bound bound) {
    std::vector<TraceConstraint> others;
    for (std::size_t j = 0; j < w.size(); ++j)
        if (j != idx) others.push_back(w[j]);
    std::optional<Trace> found;
    ConstraintSet assume = block(std::move(others));
    engine.for_each_trace(bound, assume, nullptr, [&](const Trace& t) {
        if (satisfies(t, w[idx])) {
            found = t;
            return Walk::stop;
        }
        return Walk::next;
    });
    return found;
}

inline std::optional<Trace> canonical_counterexample(const SymbolicTransitionSystem& sts,
                                                     const std::vector<TraceConstraint>& w, std::size_t idx,
                                                     Bound bound) {
    Engine e(sts);
    return canonical_counterexample(e, w, idx, bound);
}

// ---- semantic oracles over explicit finite classes ----------------------

/// First class (by index) contained in the union of the others, if any.
/// Classes are explicit member-id sets.
inline std::optional<std::size_t> find_redundant_class(const std::vector<std::vector<std::size_t>>& classes) {
    for (std::size_t i = 0; i < classes.size(); ++i) {
        bool covered = true;
        for (std::size_t m : classes[i]) {
            bool elsewhere = false;
            for (std::size_t j = 0; j < classes.size() && !elsewhere; ++j) {
                if (j == i) continue;
                for (std::size_t o : classes[j])
                    if (o == m) {
                        elsewhere = true;
                        break;
                    }
            }
            if (!elsewhere) {
                covered = false;
                break;
            }
        }
        if (covered) return i;
    }
    return std::nullopt;
}

inline bool is_redundant_semantic(const std::vector<std::vector<std::size_t>>& classes) {
    return find_redundant_class(classes).has_value();
}

/// Repeatedly remove classes covered by the union of the remaining ones.
inline std::vector<std::vector<std::size_t>> make_nonredundant_semantic(std::vector<std::vector<std::size_t>> classes) {
    while (auto victim = find_redundant_class(classes)) classes.erase(classes.begin() + static_cast<long>(*victim));
    return classes;
}

// ---- the classification loop (Algorithm 1) ------------------------------

struct ClassifyStats {
    double verify_ms = 0;
    double total_ms = 0;
};

inline ClassifyResult classify(const ModelFile& model, const Property& phi, const PredicateSet& V_in,
                               const ClassifyOptions& opts, ClassifyStats* stats = nullptr) {
    auto t0 = std::chrono::steady_clock::now();
    Engine engine(model.system);
    Bound bound = opts.bound;

    // normalize an empty V by injecting a predicate that always holds
    PredicateSet V = V_in;
    if (V.empty()) {
        auto top = std::make_shared<PredicateDef>();
        top->name = "alwaysTrue";
        top->body = make_const(Value::boolean(true));
        V.preds.push_back(top);
    }

    auto finish = [&](ClassifyResult r) {
        if (stats) {
            stats->verify_ms = engine.verify_millis();
            stats->total_ms =
                std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(std::chrono::steady_clock::now() - t0)
                    .count();
        }
        return r;
    };

    // precondition: some trace must satisfy the property, otherwise every
    // class degenerates to "all traces"
    if (!engine.first_accepting(phi, bound)) {
        ClassifyError e;
        e.kind = ClassifyError::Kind::no_accepting_trace;
        e.message = "no bounded trace satisfies the property; classification assumes accepting traces exist";
        return finish(e);
    }

    std::vector<TraceConstraint> w_set;
    std::vector<bool> seeded_flags;
    std::vector<Trace> representatives;
    int iterations = 0;

    auto classify_one = [&](const Trace& rho, const std::shared_ptr<const PredicateDef>& protect)
        -> std::optional<ClassifyError> {
        FactSet gamma = facts(rho, V, model, opts.factgen);
        if (gamma.empty())
            return detail::make_insufficient(ClassifyError::Kind::insufficient_facts, rho, gamma.capped);
        TraceConstraint w = make_trace_constraint(gamma, rho);
        if (!implies_violation(engine, w, phi, bound))
            return detail::make_insufficient(ClassifyError::Kind::insufficient_predicates, rho, gamma.capped);
        std::vector<bool> protect_mask;
        if (protect) {
            protect_mask.resize(w.conjuncts.size(), false);
            for (std::size_t i = 0; i < w.conjuncts.size(); ++i)
                if (w.conjuncts[i].kind == FactKind::user_pred && w.conjuncts[i].pred == protect)
                    protect_mask[i] = true;
        }
        TraceConstraint minimized = minimize_tc(engine, w, phi, bound, protect ? &protect_mask : nullptr);
        for (const auto& existing : w_set)
            if (equal_up_to_renaming(existing, minimized))
                throw std::logic_error("classification produced a duplicate class; blocking failed");
        w_set.push_back(std::move(minimized));
        seeded_flags.push_back(protect != nullptr);
        representatives.push_back(rho);
        return std::nullopt;
    };

    // seeded phases: classify the traces satisfying each chosen predicate
    // first, mirroring the paper's replay-first exploration
    std::vector<std::shared_ptr<const PredicateDef>> seeds;
    if (!opts.seed_preds.empty()) {
        for (const auto& name : opts.seed_preds) {
            bool found = false;
            for (const auto& p : V.preds)
                if (p->name == name) {
                    seeds.push_back(p);
                    found = true;
                }
            if (!found) throw std::invalid_argument("seed predicate not in V: " + name);
        }
    } else if (opts.auto_seed) {
        for (const auto& p : V.preds)
            if (p->positional()) seeds.push_back(p);
    }

    for (const auto& q : seeds) {
        while (true) {
            ConstraintSet assume = block(w_set);
            assume.require.push_back(detail::seed_constraint(q));
            VerifyOutcome out = engine.verify(assume, Objective{phi}, bound);
            if (out.ok()) break;
            ++iterations;
            if (iterations > 100000) throw std::logic_error("classification failed to make progress");
            if (auto err = classify_one(*out.witness, q)) return finish(*err);
        }
    }

    // main loop
    while (true) {
        VerifyOutcome out = engine.verify(block(w_set), Objective{phi}, bound);
        if (out.ok()) break;
        ++iterations;
        if (iterations > 100000) throw std::logic_error("classification failed to make progress");
        if (auto err = classify_one(*out.witness, nullptr)) return finish(*err);
    }

    std::vector<std::size_t> kept = remove_redundant_indices(engine, w_set, phi, bound, &seeded_flags);

    Classification result;
    result.iterations = iterations;
    result.bound = bound;
    result.predicate_label = V.label;
    for (std::size_t i : kept) {
        ClassEntry entry;
        entry.constraint = w_set[i];
        entry.representative = representatives[i];
        entry.seeded = seeded_flags[i];
        result.classes.push_back(std::move(entry));
    }
    if (opts.compute_witnesses) {
        std::vector<TraceConstraint> final_w;
        for (const auto& c : result.classes) final_w.push_back(c.constraint);
        for (std::size_t i = 0; i < result.classes.size(); ++i)
            result.classes[i].canonical_witness = canonical_counterexample(engine, final_w, i, bound);
    }
    return finish(result);
}

} // namespace cexclass
