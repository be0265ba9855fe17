#pragma once

#include "expr.hpp"

#include <string>
#include <vector>

namespace cexclass {

/// Static type of an expression or predicate parameter.
struct TypeRef {
    enum class Tag : std::uint8_t { boolean, integer, enum_sym, sym_set, record, position };
    Tag tag = Tag::boolean;
    std::int16_t tid = -1; // enum_sym / sym_set: enumeration id
    int record_id = -1;    // record

    static TypeRef boolean() { return {Tag::boolean, -1, -1}; }
    static TypeRef integer() { return {Tag::integer, -1, -1}; }
    static TypeRef enum_sym(std::int16_t tid) { return {Tag::enum_sym, tid, -1}; }
    static TypeRef sym_set(std::int16_t tid) { return {Tag::sym_set, tid, -1}; }
    static TypeRef record(int rid) { return {Tag::record, -1, rid}; }
    static TypeRef position() { return {Tag::position, -1, -1}; }

    friend bool operator==(const TypeRef& a, const TypeRef& b) {
        return a.tag == b.tag && a.tid == b.tid && a.record_id == b.record_id;
    }
};

struct Param {
    std::string name;
    TypeRef type;
    bool is_position() const { return type.tag == TypeRef::Tag::position; }
};

/// A user-defined predicate. Either a value predicate (parameters bind to
/// variable occurrences at trace positions) or a positional predicate
/// (parameters are trace positions; the body reads state variables via @).
/// The two flavours never mix parameters.
struct PredicateDef {
    std::string name;
    std::vector<Param> params;
    Expr body;
    SourceLoc loc{};

    bool positional() const {
        for (const auto& p : params)
            if (p.is_position()) return true;
        return false;
    }
    int arity() const { return static_cast<int>(params.size()); }
};

/// The predicate set V handed to fact generation: built-in toggles plus
/// user-defined predicates. `label` is only for reporting.
struct PredicateSet {
    bool use_eq = false;
    bool use_lt = false;
    bool use_ne = false;
    std::vector<std::shared_ptr<const PredicateDef>> preds;
    std::string label;

    bool empty() const { return !use_eq && !use_lt && !use_ne && preds.empty(); }
};

} // namespace cexclass
