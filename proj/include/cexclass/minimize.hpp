#pragma once

#include "verifier.hpp"

namespace cexclass {

class minimize_error : public std::runtime_error {
public:
    explicit minimize_error(const std::string& what) : std::runtime_error(what) {}
};

/// Does every bounded trace satisfying w violate the property? Checked by
/// walking only invariant-satisfying traces (a bad state prunes the whole
/// subtree) and searching for one that satisfies w.
inline bool implies_violation(Engine& engine, const TraceConstraint& w, const Property& phi, Bound bound) {
    bool implies = true;
    engine.for_each_trace(bound, {}, &phi.inv, [&](const Trace& t) {
        if (satisfies(t, w)) {
            implies = false;
            return Walk::stop;
        }
        return Walk::next;
    });
    return implies;
}

inline bool implies_violation(const SymbolicTransitionSystem& sts, const TraceConstraint& w, const Property& phi,
                              Bound bound) {
    Engine e(sts);
    return implies_violation(e, w, phi, bound);
}

namespace detail {

/// Fixed deletion priority for conjuncts. Facts touching a variable the
/// property mentions go first (they restate the violation itself and must
/// not survive as the whole class), then user-predicate facts, position
/// orderings, variable pairs and finally per-position constants in
/// generation order.
inline std::vector<std::size_t> deletion_order(const TraceConstraint& w, const Property& phi,
                                               std::size_t layout_size) {
    std::vector<bool> phi_vars(layout_size, false);
    collect_vars(phi.inv, phi_vars);
    auto touches_phi = [&](const AtomicFact& f) {
        for (const auto& a : f.args)
            if (a.tag == FactArg::Tag::var_at && phi_vars[static_cast<std::size_t>(a.var)]) return true;
        if (f.kind == FactKind::user_pred) {
            std::vector<bool> body_vars(layout_size, false);
            collect_vars(f.pred->body, body_vars);
            for (std::size_t i = 0; i < layout_size; ++i)
                if (body_vars[i] && phi_vars[i]) return true;
        }
        return false;
    };
    auto category = [](const AtomicFact& f) {
        switch (f.kind) {
            case FactKind::user_pred: return 0;
            case FactKind::pos_less: return 1;
            case FactKind::eq_pair:
            case FactKind::ne_pair: return 2;
            case FactKind::eq_const:
            case FactKind::ne_const: return 3;
        }
        return 4;
    };
    std::vector<std::size_t> order(w.conjuncts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const AtomicFact& fa = w.conjuncts[a];
        const AtomicFact& fb = w.conjuncts[b];
        int ta = touches_phi(fa) ? 0 : 1;
        int tb = touches_phi(fb) ? 0 : 1;
        if (ta != tb) return ta < tb;
        return category(fa) < category(fb);
    });
    return order;
}

} // namespace detail

/// Deletion-based minimization: drop, in a fixed priority order, every
/// conjunct whose removal keeps the violation guarantee. The result is
/// subset-minimal (removing any remaining unprotected conjunct breaks the
/// guarantee) and has its position variables renormalized. Conjuncts whose
/// index is set in `protected_mask` are never candidates.
inline TraceConstraint minimize_tc(Engine& engine, const TraceConstraint& w, const Property& phi, Bound bound,
                                   const std::vector<bool>* protected_mask = nullptr) {
    if (!implies_violation(engine, w, phi, bound))
        throw minimize_error("Gamma does not sufficiently characterize the violation");

    std::vector<bool> active(w.conjuncts.size(), true);
    auto candidate = [&](std::size_t skip) {
        TraceConstraint c;
        c.position_vars = w.position_vars;
        for (std::size_t i = 0; i < w.conjuncts.size(); ++i)
            if (active[i] && i != skip) c.conjuncts.push_back(w.conjuncts[i]);
        return c;
    };

    for (std::size_t idx : detail::deletion_order(w, phi, engine.system().layout->size())) {
        if (protected_mask && idx < protected_mask->size() && (*protected_mask)[idx]) continue;
        TraceConstraint without = candidate(idx);
        if (implies_violation(engine, without, phi, bound)) active[idx] = false;
    }

    TraceConstraint out;
    out.position_vars = w.position_vars;
    for (std::size_t i = 0; i < w.conjuncts.size(); ++i)
        if (active[i]) out.conjuncts.push_back(w.conjuncts[i]);
    return normalize(out);
}

inline TraceConstraint minimize_tc(const SymbolicTransitionSystem& sts, const TraceConstraint& w, const Property& phi,
                                   Bound bound) {
    Engine e(sts);
    return minimize_tc(e, w, phi, bound);
}

} // namespace cexclass
