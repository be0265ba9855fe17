#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace cexclass {

/// Raised when an expression is evaluated against a state it is not
/// well-typed for (unknown variable, kind mismatch). A parsed and
/// typechecked model never triggers this; seeing it means the model was
/// assembled by hand and is malformed.
class eval_error : public std::runtime_error {
public:
    explicit eval_error(const std::string& what) : std::runtime_error(what) {}
};

enum class ValueKind : std::uint8_t { boolean, integer, symbol, symbol_set };

/// A single runtime value. Enumeration symbols are stored as an index into
/// their type's symbol table, sets of symbols as a bitmask over the same
/// table. `type_id` identifies the enumeration a symbol/set belongs to so
/// that values of unrelated enumerations never compare equal.
struct Value {
    ValueKind kind = ValueKind::boolean;
    std::int16_t type_id = -1;
    std::int64_t raw = 0;

    static Value boolean(bool b) { return {ValueKind::boolean, -1, b ? 1 : 0}; }
    static Value integer(std::int64_t v) { return {ValueKind::integer, -1, v}; }
    static Value symbol(std::int16_t tid, std::int64_t index) { return {ValueKind::symbol, tid, index}; }
    static Value symbol_set(std::int16_t tid, std::uint64_t mask) {
        return {ValueKind::symbol_set, tid, static_cast<std::int64_t>(mask)};
    }

    bool as_bool() const {
        if (kind != ValueKind::boolean) throw eval_error("value is not a boolean");
        return raw != 0;
    }
    std::int64_t as_int() const {
        if (kind != ValueKind::integer) throw eval_error("value is not an integer");
        return raw;
    }
    std::uint64_t as_mask() const {
        if (kind != ValueKind::symbol_set) throw eval_error("value is not a set");
        return static_cast<std::uint64_t>(raw);
    }

    friend bool operator==(const Value& a, const Value& b) {
        return a.kind == b.kind && a.type_id == b.type_id && a.raw == b.raw;
    }
    friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }
};

/// A finite variable domain: booleans, bounded integers, enumerations, or
/// small sets of enumeration symbols. Values are totally ordered by
/// `value_at` index; that order is the canonical one used everywhere
/// (successor generation, golden outputs).
class Domain {
public:
    enum class Kind : std::uint8_t { boolean, integer, enumeration, symbol_set };

    static Domain boolean() {
        Domain d;
        d.kind_ = Kind::boolean;
        return d;
    }

    static Domain integer(std::int64_t lo, std::int64_t hi) {
        if (lo > hi) throw std::invalid_argument("integer domain requires lo <= hi");
        Domain d;
        d.kind_ = Kind::integer;
        d.lo_ = lo;
        d.hi_ = hi;
        return d;
    }

    static Domain enumeration(std::int16_t tid, std::shared_ptr<const std::vector<std::string>> symbols) {
        if (!symbols || symbols->empty()) throw std::invalid_argument("enumeration requires at least one symbol");
        Domain d;
        d.kind_ = Kind::enumeration;
        d.tid_ = tid;
        d.symbols_ = std::move(symbols);
        return d;
    }

    static Domain symbol_set(std::int16_t tid, std::shared_ptr<const std::vector<std::string>> symbols) {
        if (!symbols || symbols->empty()) throw std::invalid_argument("set domain requires at least one symbol");
        if (symbols->size() > 16) throw std::invalid_argument("set domain limited to 16 symbols");
        Domain d;
        d.kind_ = Kind::symbol_set;
        d.tid_ = tid;
        d.symbols_ = std::move(symbols);
        return d;
    }

    Kind kind() const { return kind_; }
    std::int64_t lo() const { return lo_; }
    std::int64_t hi() const { return hi_; }
    std::int16_t type_id() const { return tid_; }
    const std::vector<std::string>& symbols() const { return *symbols_; }
    std::shared_ptr<const std::vector<std::string>> symbols_ptr() const { return symbols_; }

    std::size_t size() const {
        switch (kind_) {
            case Kind::boolean: return 2;
            case Kind::integer: return static_cast<std::size_t>(hi_ - lo_ + 1);
            case Kind::enumeration: return symbols_->size();
            case Kind::symbol_set: return std::size_t{1} << symbols_->size();
        }
        return 0;
    }

    Value value_at(std::size_t i) const {
        switch (kind_) {
            case Kind::boolean: return Value::boolean(i != 0);
            case Kind::integer: return Value::integer(lo_ + static_cast<std::int64_t>(i));
            case Kind::enumeration: return Value::symbol(tid_, static_cast<std::int64_t>(i));
            case Kind::symbol_set: return Value::symbol_set(tid_, static_cast<std::uint64_t>(i));
        }
        throw std::logic_error("bad domain kind");
    }

    bool contains(const Value& v) const {
        switch (kind_) {
            case Kind::boolean: return v.kind == ValueKind::boolean;
            case Kind::integer: return v.kind == ValueKind::integer && v.raw >= lo_ && v.raw <= hi_;
            case Kind::enumeration:
                return v.kind == ValueKind::symbol && v.type_id == tid_ && v.raw >= 0 &&
                       v.raw < static_cast<std::int64_t>(symbols_->size());
            case Kind::symbol_set:
                return v.kind == ValueKind::symbol_set && v.type_id == tid_ &&
                       (v.as_mask() >> symbols_->size()) == 0;
        }
        return false;
    }

    bool same_domain(const Domain& o) const {
        if (kind_ != o.kind_) return false;
        switch (kind_) {
            case Kind::boolean: return true;
            case Kind::integer: return lo_ == o.lo_ && hi_ == o.hi_;
            case Kind::enumeration:
            case Kind::symbol_set: return tid_ == o.tid_;
        }
        return false;
    }

    std::string render(const Value& v) const {
        switch (kind_) {
            case Kind::boolean: return v.raw ? "true" : "false";
            case Kind::integer: return std::to_string(v.raw);
            case Kind::enumeration: return (*symbols_)[static_cast<std::size_t>(v.raw)];
            case Kind::symbol_set: {
                std::string out = "{";
                bool first = true;
                for (std::size_t i = 0; i < symbols_->size(); ++i) {
                    if (v.as_mask() & (std::uint64_t{1} << i)) {
                        if (!first) out += ", ";
                        out += (*symbols_)[i];
                        first = false;
                    }
                }
                out += "}";
                return out;
            }
        }
        return "?";
    }

private:
    Kind kind_ = Kind::boolean;
    std::int64_t lo_ = 0, hi_ = 0;
    std::int16_t tid_ = -1;
    std::shared_ptr<const std::vector<std::string>> symbols_;
};

} // namespace cexclass
