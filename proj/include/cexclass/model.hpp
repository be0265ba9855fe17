#pragma once

#include "predicate.hpp"
#include "system.hpp"

#include <map>
#include <optional>

namespace cexclass {

struct EnumTypeDef {
    std::string name;
    std::shared_ptr<const std::vector<std::string>> symbols;
};

struct RecordField {
    std::string name;
    TypeRef type;
    Domain domain;
};

struct RecordDef {
    std::string name;
    std::vector<RecordField> fields;

    int field_index(const std::string& f) const {
        for (std::size_t i = 0; i < fields.size(); ++i)
            if (fields[i].name == f) return static_cast<int>(i);
        return -1;
    }
};

/// A record-typed variable after desugaring: its fields occupy contiguous
/// flat variables starting at first_flat.
struct RecordVar {
    std::string name;
    int record_id;
    int first_flat;
};

/// A fully parsed and typechecked model: the transition system, its named
/// invariant properties, user-defined predicates, and named predicate sets.
struct ModelFile {
    SymbolicTransitionSystem system;
    std::map<std::string, Property> properties;
    std::map<std::string, std::shared_ptr<const PredicateDef>> predicates;
    std::map<std::string, std::vector<std::string>> predsets;

    std::vector<EnumTypeDef> enums;
    std::vector<RecordDef> records;
    std::vector<RecordVar> record_vars;

    const std::shared_ptr<const VarLayout>& layout() const { return system.layout; }

    int enum_id(const std::string& name) const {
        for (std::size_t i = 0; i < enums.size(); ++i)
            if (enums[i].name == name) return static_cast<int>(i);
        return -1;
    }

    int record_id(const std::string& name) const {
        for (std::size_t i = 0; i < records.size(); ++i)
            if (records[i].name == name) return static_cast<int>(i);
        return -1;
    }

    const RecordVar* find_record_var(const std::string& name) const {
        for (const auto& rv : record_vars)
            if (rv.name == name) return &rv;
        return nullptr;
    }

    /// Resolve a bare identifier to an enumeration symbol value.
    std::optional<Value> resolve_symbol(const std::string& name) const {
        for (std::size_t t = 0; t < enums.size(); ++t) {
            const auto& syms = *enums[t].symbols;
            for (std::size_t i = 0; i < syms.size(); ++i)
                if (syms[i] == name) return Value::symbol(static_cast<std::int16_t>(t), static_cast<std::int64_t>(i));
        }
        return std::nullopt;
    }

    const Property& property(const std::string& name) const {
        auto it = properties.find(name);
        if (it == properties.end()) throw std::invalid_argument("unknown property: " + name);
        return it->second;
    }

    /// The only property, when the model declares exactly one.
    const std::pair<const std::string, Property>& sole_property() const {
        if (properties.size() != 1)
            throw std::invalid_argument("model declares " + std::to_string(properties.size()) +
                                        " properties; select one by name");
        return *properties.begin();
    }
};

} // namespace cexclass
