#pragma once

#include "model.hpp"

#include <algorithm>

namespace cexclass {

enum class FactKind : std::uint8_t { user_pred, eq_const, eq_pair, ne_const, ne_pair, pos_less };

/// One bound argument of an atomic fact. In a FactSet, `pos` is a concrete
/// trace index; inside a TraceConstraint the same field holds a position
/// variable id instead.
struct FactArg {
    enum class Tag : std::uint8_t { var_at, constant, position };
    Tag tag = Tag::position;
    int var = -1;    // var_at: first flat variable index of the bound variable
    int pos = -1;    // var_at/position
    Value constant{};

    static FactArg var_at(int var, int pos) { return {Tag::var_at, var, pos, {}}; }
    static FactArg constant_of(Value v) { return {Tag::constant, -1, -1, v}; }
    static FactArg position(int pos) { return {Tag::position, -1, pos, {}}; }

    friend bool operator==(const FactArg& a, const FactArg& b) {
        return a.tag == b.tag && a.var == b.var && a.pos == b.pos && a.constant == b.constant;
    }
};

/// A true instantiation of a predicate over indexed state variables
/// (atomic fact) or over positions only (atomic position fact).
struct AtomicFact {
    FactKind kind = FactKind::eq_const;
    std::shared_ptr<const PredicateDef> pred; // user_pred only
    std::vector<FactArg> args;
    // eq_const/ne_const: [var_at, constant]
    // eq_pair/ne_pair:   [var_at, var_at]
    // pos_less:          [position, position]
    // user_pred:         one arg per parameter (var_at for values, position for positions)

    bool mentions_var(int v) const {
        for (const auto& a : args)
            if (a.tag == FactArg::Tag::var_at && a.var == v) return true;
        return false;
    }

    bool mentions_pos(int p) const {
        for (const auto& a : args)
            if (a.tag != FactArg::Tag::constant && a.pos == p) return true;
        return false;
    }

    void positions(std::vector<int>& out) const {
        for (const auto& a : args)
            if (a.tag != FactArg::Tag::constant && a.pos >= 0) out.push_back(a.pos);
    }

    friend bool operator==(const AtomicFact& a, const AtomicFact& b) {
        return a.kind == b.kind && a.pred == b.pred && a.args == b.args;
    }
};

/// The set Gamma of all facts true on one trace, in canonical generation
/// order: user predicates (V order, lexicographic bindings), then built-in
/// equality constants, equality pairs, inequality constants and pairs, and
/// finally consecutive position orderings.
struct FactSet {
    std::vector<AtomicFact> facts;
    std::vector<int> positions_used;
    bool capped = false; // some candidate instantiation was skipped by a cap

    bool empty() const { return facts.empty(); }
};

struct FactGenConfig {
    int max_arity = 3;        // user predicates above this arity are skipped (capped)
    int equality_window = 12; // max position distance for pair facts; negative = unlimited
};

namespace detail {

inline bool record_fields_scalar_match(const RecordDef& rd, const VarLayout& layout, int first_flat) {
    (void)rd; (void)layout; (void)first_flat;
    return true;
}

/// Evaluate one fact given a mapping of its `pos` fields to trace indices.
/// When `binding` is null, args carry concrete indices already.
inline bool eval_fact_at(const AtomicFact& f, const Trace& rho, const std::vector<int>* binding) {
    auto pos_of = [&](int p) -> int {
        int idx = binding ? (*binding)[static_cast<std::size_t>(p)] : p;
        if (idx < 0 || static_cast<std::size_t>(idx) >= rho.positions())
            throw std::logic_error("fact position out of trace range");
        return idx;
    };
    auto value_of = [&](const FactArg& a) -> Value {
        if (a.tag == FactArg::Tag::constant) return a.constant;
        int idx = pos_of(a.pos);
        return rho.states[static_cast<std::size_t>(idx)].values[static_cast<std::size_t>(a.var)];
    };
    switch (f.kind) {
        case FactKind::eq_const:
        case FactKind::eq_pair: return value_of(f.args[0]) == value_of(f.args[1]);
        case FactKind::ne_const:
        case FactKind::ne_pair: return value_of(f.args[0]) != value_of(f.args[1]);
        case FactKind::pos_less: return pos_of(f.args[0].pos) < pos_of(f.args[1].pos);
        case FactKind::user_pred: {
            EvalEnv env;
            env.trace = &rho;
            std::vector<std::pair<int, int>> value_args;
            std::vector<int> pos_args;
            for (std::size_t i = 0; i < f.args.size(); ++i) {
                const auto& a = f.args[i];
                if (f.pred->params[i].is_position()) {
                    pos_args.push_back(pos_of(a.pos));
                } else {
                    value_args.emplace_back(a.var, pos_of(a.pos));
                }
            }
            // parameter indices must line up with the predicate's parameter list
            std::vector<std::pair<int, int>> vslots;
            std::vector<int> pslots;
            std::size_t vi = 0, pi = 0;
            vslots.resize(f.args.size(), {-1, -1});
            pslots.resize(f.args.size(), -1);
            for (std::size_t i = 0; i < f.args.size(); ++i) {
                if (f.pred->params[i].is_position())
                    pslots[i] = pos_args[pi++];
                else
                    vslots[i] = value_args[vi++];
            }
            env.value_args = vslots;
            env.pos_args = pslots;
            return eval(f.pred->body, env).as_bool();
        }
    }
    throw std::logic_error("unhandled fact kind");
}

} // namespace detail

/// Truth of an instantiated fact on a trace (concrete positions).
inline bool eval_fact(const AtomicFact& f, const Trace& rho) { return detail::eval_fact_at(f, rho, nullptr); }

/// Does a candidate binding typecheck against the predicate's parameters?
/// Value slots are (variable, position) pairs; position slots are indices.
inline bool typecheck_binding(const PredicateDef& pred, const std::vector<FactArg>& args, const ModelFile& model) {
    if (args.size() != pred.params.size()) return false;
    const VarLayout& layout = *model.layout();
    for (std::size_t i = 0; i < args.size(); ++i) {
        const Param& p = pred.params[i];
        const FactArg& a = args[i];
        if (p.is_position()) {
            if (a.tag != FactArg::Tag::position || a.pos < 0) return false;
            continue;
        }
        if (a.tag != FactArg::Tag::var_at || a.pos < 0) return false;
        switch (p.type.tag) {
            case TypeRef::Tag::boolean:
                if (layout.var(static_cast<std::size_t>(a.var)).domain.kind() != Domain::Kind::boolean) return false;
                break;
            case TypeRef::Tag::integer:
                if (layout.var(static_cast<std::size_t>(a.var)).domain.kind() != Domain::Kind::integer) return false;
                break;
            case TypeRef::Tag::enum_sym: {
                const Domain& d = layout.var(static_cast<std::size_t>(a.var)).domain;
                if (d.kind() != Domain::Kind::enumeration || d.type_id() != p.type.tid) return false;
                break;
            }
            case TypeRef::Tag::sym_set: {
                const Domain& d = layout.var(static_cast<std::size_t>(a.var)).domain;
                if (d.kind() != Domain::Kind::symbol_set || d.type_id() != p.type.tid) return false;
                break;
            }
            case TypeRef::Tag::record: {
                const RecordVar* rv = nullptr;
                for (const auto& r : model.record_vars)
                    if (r.first_flat == a.var) { rv = &r; break; }
                if (!rv || rv->record_id != p.type.record_id) return false;
                break;
            }
            case TypeRef::Tag::position: return false;
        }
    }
    return true;
}

namespace detail {

template <typename Fn>
inline void for_each_tuple(std::size_t arity, std::size_t n_choices, Fn&& fn) {
    std::vector<std::size_t> idx(arity, 0);
    if (arity == 0) {
        fn(idx);
        return;
    }
    while (true) {
        fn(idx);
        std::size_t k = arity;
        while (k > 0) {
            if (++idx[k - 1] < n_choices) break;
            idx[k - 1] = 0;
            --k;
        }
        if (k == 0) break;
    }
}

} // namespace detail

/// Instantiate V over a trace: the set Gamma of every true, typechecked
/// atomic fact and atomic position fact. Deterministic order.
inline FactSet facts(const Trace& rho, const PredicateSet& V, const ModelFile& model,
                     const FactGenConfig& cfg = {}) {
    FactSet out;
    if (rho.states.empty()) throw std::invalid_argument("facts() requires a non-empty trace");
    const VarLayout& layout = *model.layout();
    const int n_pos = static_cast<int>(rho.positions());
    const int n_vars = static_cast<int>(layout.size());

    // user predicates, in V order
    for (const auto& pred : V.preds) {
        if (pred->arity() > cfg.max_arity && cfg.max_arity >= 0) {
            out.capped = true;
            continue;
        }
        if (pred->positional()) {
            detail::for_each_tuple(static_cast<std::size_t>(pred->arity()), static_cast<std::size_t>(n_pos),
                                   [&](const std::vector<std::size_t>& idx) {
                                       AtomicFact f;
                                       f.kind = FactKind::user_pred;
                                       f.pred = pred;
                                       for (std::size_t i = 0; i < idx.size(); ++i)
                                           f.args.push_back(FactArg::position(static_cast<int>(idx[i])));
                                       if (eval_fact(f, rho)) out.facts.push_back(std::move(f));
                                   });
        } else {
            // candidate (variable, position) bindings per parameter
            std::vector<std::vector<FactArg>> cands(pred->params.size());
            for (std::size_t pi = 0; pi < pred->params.size(); ++pi) {
                const Param& p = pred->params[pi];
                if (p.type.tag == TypeRef::Tag::record) {
                    for (const auto& rv : model.record_vars)
                        if (rv.record_id == p.type.record_id)
                            for (int pos = 0; pos < n_pos; ++pos)
                                cands[pi].push_back(FactArg::var_at(rv.first_flat, pos));
                } else {
                    for (int v = 0; v < n_vars; ++v) {
                        std::vector<FactArg> probe{FactArg::var_at(v, 0)};
                        std::vector<FactArg> full(pred->params.size(), FactArg::position(0));
                        full[pi] = probe[0];
                        // reuse typecheck for the single slot by checking domains directly
                        const Domain& d = layout.var(static_cast<std::size_t>(v)).domain;
                        bool ok = false;
                        switch (p.type.tag) {
                            case TypeRef::Tag::boolean: ok = d.kind() == Domain::Kind::boolean; break;
                            case TypeRef::Tag::integer: ok = d.kind() == Domain::Kind::integer; break;
                            case TypeRef::Tag::enum_sym:
                                ok = d.kind() == Domain::Kind::enumeration && d.type_id() == p.type.tid;
                                break;
                            case TypeRef::Tag::sym_set:
                                ok = d.kind() == Domain::Kind::symbol_set && d.type_id() == p.type.tid;
                                break;
                            default: ok = false;
                        }
                        if (!ok) continue;
                        // record fields belong to their record parameter, not scalar slots
                        for (int pos = 0; pos < n_pos; ++pos) cands[pi].push_back(FactArg::var_at(v, pos));
                    }
                }
            }
            bool any_empty = false;
            for (const auto& c : cands)
                if (c.empty()) any_empty = true;
            if (any_empty) continue;
            std::vector<std::size_t> idx(pred->params.size(), 0);
            while (true) {
                AtomicFact f;
                f.kind = FactKind::user_pred;
                f.pred = pred;
                for (std::size_t i = 0; i < idx.size(); ++i) f.args.push_back(cands[i][idx[i]]);
                if (eval_fact(f, rho)) out.facts.push_back(std::move(f));
                std::size_t k = idx.size();
                while (k > 0) {
                    if (++idx[k - 1] < cands[k - 1].size()) break;
                    idx[k - 1] = 0;
                    --k;
                }
                if (k == 0) break;
            }
        }
    }

    // built-in = : per-position observed constants
    if (V.use_eq) {
        for (int pos = 0; pos < n_pos; ++pos)
            for (int v = 0; v < n_vars; ++v) {
                AtomicFact f;
                f.kind = FactKind::eq_const;
                f.args = {FactArg::var_at(v, pos),
                          FactArg::constant_of(rho.states[static_cast<std::size_t>(pos)].values[static_cast<std::size_t>(v)])};
                out.facts.push_back(std::move(f));
            }
        // same-domain variable pairs across positions p <= q within the window
        for (int p = 0; p < n_pos; ++p)
            for (int q = p; q < n_pos; ++q) {
                if (cfg.equality_window >= 0 && q - p > cfg.equality_window) {
                    out.capped = true;
                    continue;
                }
                for (int v1 = 0; v1 < n_vars; ++v1)
                    for (int v2 = 0; v2 < n_vars; ++v2) {
                        if (p == q && v1 >= v2) continue; // same position: unordered distinct pair
                        if (p < q && v1 == v2) {
                            // same variable across positions: emit once
                        }
                        const Domain& d1 = layout.var(static_cast<std::size_t>(v1)).domain;
                        const Domain& d2 = layout.var(static_cast<std::size_t>(v2)).domain;
                        if (!d1.same_domain(d2)) continue;
                        Value a = rho.states[static_cast<std::size_t>(p)].values[static_cast<std::size_t>(v1)];
                        Value b = rho.states[static_cast<std::size_t>(q)].values[static_cast<std::size_t>(v2)];
                        if (a == b) {
                            AtomicFact f;
                            f.kind = FactKind::eq_pair;
                            f.args = {FactArg::var_at(v1, p), FactArg::var_at(v2, q)};
                            out.facts.push_back(std::move(f));
                        }
                    }
            }
    }

    // built-in != : off by default
    if (V.use_ne) {
        for (int pos = 0; pos < n_pos; ++pos)
            for (int v = 0; v < n_vars; ++v) {
                const Domain& d = layout.var(static_cast<std::size_t>(v)).domain;
                Value observed = rho.states[static_cast<std::size_t>(pos)].values[static_cast<std::size_t>(v)];
                for (std::size_t i = 0; i < d.size(); ++i) {
                    Value c = d.value_at(i);
                    if (c == observed) continue;
                    AtomicFact f;
                    f.kind = FactKind::ne_const;
                    f.args = {FactArg::var_at(v, pos), FactArg::constant_of(c)};
                    out.facts.push_back(std::move(f));
                }
            }
        for (int p = 0; p < n_pos; ++p)
            for (int q = p; q < n_pos; ++q) {
                if (cfg.equality_window >= 0 && q - p > cfg.equality_window) {
                    out.capped = true;
                    continue;
                }
                for (int v1 = 0; v1 < n_vars; ++v1)
                    for (int v2 = 0; v2 < n_vars; ++v2) {
                        if (p == q && v1 >= v2) continue;
                        const Domain& d1 = layout.var(static_cast<std::size_t>(v1)).domain;
                        const Domain& d2 = layout.var(static_cast<std::size_t>(v2)).domain;
                        if (!d1.same_domain(d2)) continue;
                        Value a = rho.states[static_cast<std::size_t>(p)].values[static_cast<std::size_t>(v1)];
                        Value b = rho.states[static_cast<std::size_t>(q)].values[static_cast<std::size_t>(v2)];
                        if (a != b) {
                            AtomicFact f;
                            f.kind = FactKind::ne_pair;
                            f.args = {FactArg::var_at(v1, p), FactArg::var_at(v2, q)};
                            out.facts.push_back(std::move(f));
                        }
                    }
            }
    }

    // built-in < on positions: consecutive facts only
    if (V.use_lt) {
        for (int p = 0; p + 1 < n_pos; ++p) {
            AtomicFact f;
            f.kind = FactKind::pos_less;
            f.args = {FactArg::position(p), FactArg::position(p + 1)};
            out.facts.push_back(std::move(f));
        }
    }

    std::vector<int> used;
    for (const auto& f : out.facts) f.positions(used);
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    out.positions_used = std::move(used);
    return out;
}

} // namespace cexclass
