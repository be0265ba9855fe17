#pragma once

#include "fact.hpp"

namespace cexclass {

/// An existentially quantified conjunction of atomic facts:
///   exists i1..ik in [0..len(rho)] : xi_0 /\ ... /\ xi_n
/// Conjunct args carry position variable ids in their `pos` fields.
struct TraceConstraint {
    int position_vars = 0;
    std::vector<AtomicFact> conjuncts;

    bool empty() const { return conjuncts.empty(); }
};

/// Generalize a fact set over its originating trace: every distinct
/// concrete index used by Gamma becomes one existential position variable
/// (ascending index order), and the conjunction is Gamma itself.
inline TraceConstraint make_trace_constraint(const FactSet& gamma, const Trace& rho) {
    (void)rho;
    TraceConstraint tc;
    std::vector<int> index_of(gamma.positions_used.empty() ? 0 : gamma.positions_used.back() + 1, -1);
    for (std::size_t i = 0; i < gamma.positions_used.size(); ++i)
        index_of[static_cast<std::size_t>(gamma.positions_used[i])] = static_cast<int>(i);
    tc.position_vars = static_cast<int>(gamma.positions_used.size());
    tc.conjuncts = gamma.facts;
    for (auto& f : tc.conjuncts)
        for (auto& a : f.args)
            if (a.tag != FactArg::Tag::constant && a.pos >= 0) a.pos = index_of[static_cast<std::size_t>(a.pos)];
    return tc;
}

/// Drop position variables no conjunct references and renumber the rest by
/// first occurrence. Canonical form for structural comparison.
inline TraceConstraint normalize(const TraceConstraint& w) {
    std::vector<int> remap(static_cast<std::size_t>(w.position_vars), -1);
    int next = 0;
    TraceConstraint out;
    out.conjuncts = w.conjuncts;
    for (auto& f : out.conjuncts)
        for (auto& a : f.args)
            if (a.tag != FactArg::Tag::constant && a.pos >= 0) {
                if (remap[static_cast<std::size_t>(a.pos)] < 0) remap[static_cast<std::size_t>(a.pos)] = next++;
                a.pos = remap[static_cast<std::size_t>(a.pos)];
            }
    out.position_vars = next;
    return out;
}

/// Structural equality up to position-variable renaming (first-occurrence
/// canonical form on both sides).
inline bool equal_up_to_renaming(const TraceConstraint& a, const TraceConstraint& b) {
    TraceConstraint na = normalize(a), nb = normalize(b);
    return na.position_vars == nb.position_vars && na.conjuncts == nb.conjuncts;
}

namespace detail {

/// Backtracking search for a witness binding of the position variables.
/// Unary conjuncts prefilter each variable's candidate indices; the rest
/// are checked as soon as their last variable is bound.
class SatisfiesSearch {
public:
    SatisfiesSearch(const Trace& rho, const TraceConstraint& w) : rho_(rho), w_(w) {}

    bool run() {
        const int k = w_.position_vars;
        const int n_pos = static_cast<int>(rho_.positions());
        // conjuncts with no position variables at all
        for (const auto& f : w_.conjuncts) {
            std::vector<int> ps;
            f.positions(ps);
            if (ps.empty()) {
                if (!eval_ground(f)) return false;
            }
        }
        if (k == 0) return true;

        std::vector<std::vector<int>> candidates(static_cast<std::size_t>(k));
        for (int v = 0; v < k; ++v) {
            for (int idx = 0; idx < n_pos; ++idx) {
                bool ok = true;
                for (const auto& f : w_.conjuncts) {
                    if (!unary_on(f, v)) continue;
                    if (!eval_with_single(f, v, idx)) {
                        ok = false;
                        break;
                    }
                }
                if (ok) candidates[static_cast<std::size_t>(v)].push_back(idx);
            }
            if (candidates[static_cast<std::size_t>(v)].empty()) return false;
        }

        // conjuncts grouped by the highest position variable they mention
        by_max_var_.assign(static_cast<std::size_t>(k), {});
        for (std::size_t ci = 0; ci < w_.conjuncts.size(); ++ci) {
            std::vector<int> ps;
            w_.conjuncts[ci].positions(ps);
            if (ps.empty()) continue;
            int mx = *std::max_element(ps.begin(), ps.end());
            bool unary = std::all_of(ps.begin(), ps.end(), [&](int p) { return p == ps[0]; });
            if (unary) continue; // already folded into candidate domains
            by_max_var_[static_cast<std::size_t>(mx)].push_back(ci);
        }

        binding_.assign(static_cast<std::size_t>(k), -1);
        return extend(0, candidates);
    }

private:
    bool unary_on(const AtomicFact& f, int v) const {
        std::vector<int> ps;
        f.positions(ps);
        if (ps.empty()) return false;
        return std::all_of(ps.begin(), ps.end(), [&](int p) { return p == v; });
    }

    bool eval_ground(const AtomicFact& f) const {
        std::vector<int> dummy;
        return detail::eval_fact_at(f, rho_, &dummy);
    }

    bool eval_with_single(const AtomicFact& f, int v, int idx) const {
        std::vector<int> binding(static_cast<std::size_t>(w_.position_vars), 0);
        binding[static_cast<std::size_t>(v)] = idx;
        return detail::eval_fact_at(f, rho_, &binding);
    }

    bool extend(int v, const std::vector<std::vector<int>>& candidates) {
        if (v == w_.position_vars) return true;
        for (int idx : candidates[static_cast<std::size_t>(v)]) {
            binding_[static_cast<std::size_t>(v)] = idx;
            bool ok = true;
            for (std::size_t ci : by_max_var_[static_cast<std::size_t>(v)]) {
                if (!detail::eval_fact_at(w_.conjuncts[ci], rho_, &binding_)) {
                    ok = false;
                    break;
                }
            }
            if (ok && extend(v + 1, candidates)) return true;
        }
        binding_[static_cast<std::size_t>(v)] = -1;
        return false;
    }

    const Trace& rho_;
    const TraceConstraint& w_;
    std::vector<int> binding_;
    std::vector<std::vector<std::size_t>> by_max_var_;
};

} // namespace detail

/// rho |= w : some assignment of the position variables into
/// [0..len(rho)] makes every conjunct true.
inline bool satisfies(const Trace& rho, const TraceConstraint& w) {
    return detail::SatisfiesSearch(rho, w).run();
}

inline std::string position_var_name(int i) { return "i" + std::to_string(i + 1); }

/// Canonical text rendering, e.g.
///   exists i1, i2 : lessThanOne[a@i2] /\ i1 < i2
inline std::string render(const TraceConstraint& w, const VarLayout& layout) {
    std::string out;
    if (w.position_vars > 0) {
        out += "exists ";
        for (int i = 0; i < w.position_vars; ++i) {
            if (i) out += ", ";
            out += position_var_name(i);
        }
        out += " : ";
    }
    if (w.conjuncts.empty()) {
        out += "true";
        return out;
    }
    auto arg_str = [&](const FactArg& a) -> std::string {
        switch (a.tag) {
            case FactArg::Tag::position: return position_var_name(a.pos);
            case FactArg::Tag::var_at:
                return layout.var(static_cast<std::size_t>(a.var)).name + "@" + position_var_name(a.pos);
            case FactArg::Tag::constant: {
                // render via a synthetic domain-independent form
                switch (a.constant.kind) {
                    case ValueKind::boolean: return a.constant.raw ? "true" : "false";
                    case ValueKind::integer: return std::to_string(a.constant.raw);
                    default: break;
                }
                return "?";
            }
        }
        return "?";
    };
    auto const_str = [&](int var, const Value& c) -> std::string {
        return layout.var(static_cast<std::size_t>(var)).domain.render(c);
    };
    for (std::size_t i = 0; i < w.conjuncts.size(); ++i) {
        if (i) out += " /\\ ";
        const AtomicFact& f = w.conjuncts[i];
        switch (f.kind) {
            case FactKind::eq_const:
                out += arg_str(f.args[0]) + " = " + const_str(f.args[0].var, f.args[1].constant);
                break;
            case FactKind::ne_const:
                out += arg_str(f.args[0]) + " != " + const_str(f.args[0].var, f.args[1].constant);
                break;
            case FactKind::eq_pair:
                out += arg_str(f.args[0]) + " = " + arg_str(f.args[1]);
                break;
            case FactKind::ne_pair:
                out += arg_str(f.args[0]) + " != " + arg_str(f.args[1]);
                break;
            case FactKind::pos_less:
                out += position_var_name(f.args[0].pos) + " < " + position_var_name(f.args[1].pos);
                break;
            case FactKind::user_pred: {
                out += f.pred->name;
                out += "[";
                for (std::size_t j = 0; j < f.args.size(); ++j) {
                    if (j) out += ", ";
                    out += arg_str(f.args[j]);
                }
                out += "]";
                break;
            }
        }
    }
    return out;
}

} // namespace cexclass
