#pragma once

#include "domain.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <unordered_map>

namespace cexclass {

struct VarDecl {
    std::string name;
    Domain domain;
};

/// The ordered variable table of a system. States only carry values; this
/// table gives them names and domains. Shared (immutable) between the
/// system and every state/trace derived from it.
class VarLayout {
public:
    explicit VarLayout(std::vector<VarDecl> vars) : vars_(std::move(vars)) {
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            auto [it, fresh] = index_.emplace(vars_[i].name, static_cast<int>(i));
            if (!fresh) throw std::invalid_argument("duplicate variable name: " + vars_[i].name);
        }
    }

    std::size_t size() const { return vars_.size(); }
    const VarDecl& var(std::size_t i) const { return vars_[i]; }
    const std::vector<VarDecl>& vars() const { return vars_; }

    int find(const std::string& name) const {
        auto it = index_.find(name);
        return it == index_.end() ? -1 : it->second;
    }

    int require(const std::string& name) const {
        int i = find(name);
        if (i < 0) throw eval_error("unknown variable: " + name);
        return i;
    }

private:
    std::vector<VarDecl> vars_;
    std::unordered_map<std::string, int> index_;
};

/// A total assignment of every variable in a layout.
struct State {
    std::shared_ptr<const VarLayout> layout;
    std::vector<Value> values;

    const Value& operator[](std::size_t i) const { return values[i]; }
    const Value& at(const std::string& name) const { return values[static_cast<std::size_t>(layout->require(name))]; }

    bool in_domain() const {
        for (std::size_t i = 0; i < values.size(); ++i)
            if (!layout->var(i).domain.contains(values[i])) return false;
        return true;
    }

    friend bool operator==(const State& a, const State& b) { return a.values == b.values; }
    friend bool operator!=(const State& a, const State& b) { return !(a == b); }

    /// Lexicographic by variable order, values by canonical domain order.
    friend bool operator<(const State& a, const State& b) {
        for (std::size_t i = 0; i < a.values.size() && i < b.values.size(); ++i) {
            if (a.values[i].raw != b.values[i].raw) return a.values[i].raw < b.values[i].raw;
        }
        return a.values.size() < b.values.size();
    }

    std::string render() const {
        std::string out = "(";
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) out += ", ";
            out += layout->var(i).name;
            out += "=";
            out += layout->var(i).domain.render(values[i]);
        }
        out += ")";
        return out;
    }
};

struct StateHash {
    std::size_t operator()(const State& s) const {
        std::size_t h = 0x9e3779b97f4a7c15ull;
        for (const auto& v : s.values) {
            std::size_t x = static_cast<std::size_t>(v.raw) * 0xff51afd7ed558ccdull +
                            static_cast<std::size_t>(v.kind) * 31 + static_cast<std::size_t>(v.type_id + 1);
            h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return h;
    }
};

/// A finite run: non-empty state sequence. length() counts transitions.
struct Trace {
    std::vector<State> states;

    std::size_t length() const { return states.empty() ? 0 : states.size() - 1; }
    std::size_t positions() const { return states.size(); }
    const State& operator[](std::size_t i) const { return states[i]; }

    friend bool operator==(const Trace& a, const Trace& b) { return a.states == b.states; }
    friend bool operator!=(const Trace& a, const Trace& b) { return !(a == b); }

    std::string render(const std::string& sep = " -> ") const {
        std::string out;
        for (std::size_t i = 0; i < states.size(); ++i) {
            if (i) out += sep;
            out += states[i].render();
        }
        return out;
    }
};

struct TraceHash {
    std::size_t operator()(const Trace& t) const {
        std::size_t h = t.states.size();
        StateHash sh;
        for (const auto& s : t.states) h ^= sh(s) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        return h;
    }
};

} // namespace cexclass
