#pragma once

#include "trace_constraint.hpp"

#include <cctype>
#include <climits>
#include <sstream>

namespace cexclass {

struct ParseError {
    int line = 1;
    int col = 1;
    std::string message;
    std::string token;
};

class parse_error : public std::runtime_error {
public:
    explicit parse_error(ParseError e)
        : std::runtime_error(std::to_string(e.line) + ":" + std::to_string(e.col) + ": " + e.message +
                             (e.token.empty() ? "" : " (at '" + e.token + "')")),
          info(std::move(e)) {}
    ParseError info;
};

namespace detail {

enum class Tok : std::uint8_t {
    ident, number,
    kw_type, kw_record, kw_vars, kw_init, kw_trans, kw_invariant, kw_pred, kw_predset,
    kw_bool, kw_int, kw_set, kw_pos, kw_forall, kw_exists,
    lit_true, lit_false,
    lparen, rparen, lbracket, rbracket, lbrace, rbrace,
    comma, colon, at, prime, dot, dotdot,
    op_eq, op_ne, op_lt, op_le, op_gt, op_ge,
    op_plus, op_minus, op_and, op_or, op_not, op_implies,
    op_in, op_notin, op_union,
    end
};

struct Token {
    Tok kind = Tok::end;
    std::string text;
    int line = 1;
    int col = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw parse_error(ParseError{line_, col_, msg, std::string(1, pos_ < src_.size() ? src_[pos_] : ' ')});
    }

    bool starts_with(const char* s) const {
        std::string_view v(s);
        return src_.substr(pos_, v.size()) == v;
    }

    void consume_bytes(std::size_t n) {
        pos_ += n;
        ++col_;
    }

    void advance() {
        // skip whitespace and -- comments
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '\n') {
                ++pos_;
                ++line_;
                col_ = 1;
            } else if (c == ' ' || c == '\t' || c == '\r') {
                ++pos_;
                ++col_;
            } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
                while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= src_.size()) {
            tok_ = {Tok::end, "", line_, col_};
            return;
        }

        struct Glyph {
            const char* utf8;
            Tok kind;
            const char* text;
        };
        static const Glyph glyphs[] = {
            {"∧", Tok::op_and, "and"},     {"∨", Tok::op_or, "or"},
            {"¬", Tok::op_not, "not"},     {"→", Tok::op_implies, "implies"},
            {"≠", Tok::op_ne, "!="},       {"≤", Tok::op_le, "<="},
            {"≥", Tok::op_ge, ">="},       {"∈", Tok::op_in, "in"},
            {"∉", Tok::op_notin, "notin"}, {"∪", Tok::op_union, "union"},
            {"′", Tok::prime, "'"},        {"⊤", Tok::lit_true, "true"},
            {"⊥", Tok::lit_false, "false"},{"−", Tok::op_minus, "-"},
        };
        for (const auto& g : glyphs) {
            if (starts_with(g.utf8)) {
                tok_ = {g.kind, g.text, line_, col_};
                consume_bytes(std::string_view(g.utf8).size());
                return;
            }
        }

        char c = src_[pos_];
        auto two = [&](char a, char b) {
            return c == a && pos_ + 1 < src_.size() && src_[pos_ + 1] == b;
        };
        if (two('.', '.')) { tok_ = {Tok::dotdot, "..", line_, col_}; pos_ += 2; col_ += 2; return; }
        if (two('!', '=')) { tok_ = {Tok::op_ne, "!=", line_, col_}; pos_ += 2; col_ += 2; return; }
        if (two('<', '=')) { tok_ = {Tok::op_le, "<=", line_, col_}; pos_ += 2; col_ += 2; return; }
        if (two('>', '=')) { tok_ = {Tok::op_ge, ">=", line_, col_}; pos_ += 2; col_ += 2; return; }
        if (two('=', '>')) { tok_ = {Tok::op_implies, "=>", line_, col_}; pos_ += 2; col_ += 2; return; }
        if (two('/', '\\')) { tok_ = {Tok::op_and, "/\\", line_, col_}; pos_ += 2; col_ += 2; return; }
        if (two('\\', '/')) { tok_ = {Tok::op_or, "\\/", line_, col_}; pos_ += 2; col_ += 2; return; }

        switch (c) {
            case '(': tok_ = {Tok::lparen, "(", line_, col_}; consume_bytes(1); return;
            case ')': tok_ = {Tok::rparen, ")", line_, col_}; consume_bytes(1); return;
            case '[': tok_ = {Tok::lbracket, "[", line_, col_}; consume_bytes(1); return;
            case ']': tok_ = {Tok::rbracket, "]", line_, col_}; consume_bytes(1); return;
            case '{': tok_ = {Tok::lbrace, "{", line_, col_}; consume_bytes(1); return;
            case '}': tok_ = {Tok::rbrace, "}", line_, col_}; consume_bytes(1); return;
            case ',': tok_ = {Tok::comma, ",", line_, col_}; consume_bytes(1); return;
            case ':': tok_ = {Tok::colon, ":", line_, col_}; consume_bytes(1); return;
            case '@': tok_ = {Tok::at, "@", line_, col_}; consume_bytes(1); return;
            case '\'': tok_ = {Tok::prime, "'", line_, col_}; consume_bytes(1); return;
            case '.': tok_ = {Tok::dot, ".", line_, col_}; consume_bytes(1); return;
            case '=': tok_ = {Tok::op_eq, "=", line_, col_}; consume_bytes(1); return;
            case '<': tok_ = {Tok::op_lt, "<", line_, col_}; consume_bytes(1); return;
            case '>': tok_ = {Tok::op_gt, ">", line_, col_}; consume_bytes(1); return;
            case '+': tok_ = {Tok::op_plus, "+", line_, col_}; consume_bytes(1); return;
            case '-': tok_ = {Tok::op_minus, "-", line_, col_}; consume_bytes(1); return;
            case '!': tok_ = {Tok::op_not, "!", line_, col_}; consume_bytes(1); return;
            default: break;
        }

        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string num;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                num += src_[pos_++];
                ++col_;
            }
            tok_ = {Tok::number, num, tok_.line, tok_.col};
            return;
        }

        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || static_cast<unsigned char>(c) >= 0x80) {
            std::string id;
            while (pos_ < src_.size()) {
                char d = src_[pos_];
                if (std::isalnum(static_cast<unsigned char>(d)) || d == '_') {
                    id += d;
                    ++pos_;
                    ++col_;
                } else if (static_cast<unsigned char>(d) >= 0x80) {
                    bool glyph = false;
                    for (const auto& g : glyphs)
                        if (starts_with(g.utf8)) glyph = true;
                    if (glyph) break;
                    // continuation bytes do not advance the column
                    id += d;
                    bool continuation = (static_cast<unsigned char>(d) & 0xC0) == 0x80;
                    ++pos_;
                    if (!continuation) ++col_;
                } else {
                    break;
                }
            }
            static const std::pair<const char*, Tok> keywords[] = {
                {"type", Tok::kw_type},     {"record", Tok::kw_record}, {"vars", Tok::kw_vars},
                {"init", Tok::kw_init},     {"trans", Tok::kw_trans},   {"invariant", Tok::kw_invariant},
                {"pred", Tok::kw_pred},     {"predset", Tok::kw_predset}, {"bool", Tok::kw_bool},
                {"int", Tok::kw_int},       {"set", Tok::kw_set},       {"pos", Tok::kw_pos},
                {"forall", Tok::kw_forall}, {"exists", Tok::kw_exists}, {"true", Tok::lit_true},
                {"false", Tok::lit_false},  {"and", Tok::op_and},       {"or", Tok::op_or},
                {"not", Tok::op_not},       {"implies", Tok::op_implies}, {"in", Tok::op_in},
                {"notin", Tok::op_notin},   {"union", Tok::op_union},
            };
            for (const auto& [kw, kind] : keywords)
                if (id == kw) {
                    tok_ = {kind, id, tok_.line, tok_.col};
                    return;
                }
            tok_ = {Tok::ident, id, tok_.line, tok_.col};
            return;
        }
        fail("unexpected character");
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;
};

/// Expression parsing context: which references are legal and how
/// identifiers resolve.
struct ExprScope {
    enum class Kind { init, trans, invariant, value_pred, pos_pred } kind;
    const ModelFile* model = nullptr;
    const std::vector<Param>* params = nullptr;          // pred bodies
    std::vector<std::string>* forall_locals = nullptr;   // pos_pred bodies, innermost last
};

struct Typed {
    Expr e;
    TypeRef t;
};

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src) {}

    ModelFile parse_model() {
        ModelFile m;
        if (lex_.peek().kind == Tok::end)
            fail(lex_.peek(), "expected a declaration (vars, init, trans, invariant, pred, ...)");
        while (lex_.peek().kind != Tok::end) parse_item(m, /*library=*/false);
        finalize_layout(m);
        if (!m.system.init) fail(lex_.peek(), "model has no init section");
        if (!m.system.trans) fail(lex_.peek(), "model has no trans section");
        return m;
    }

    /// Predicates and predsets only, merged into an existing model.
    void parse_library(ModelFile& m) {
        while (lex_.peek().kind != Tok::end) {
            const Token& t = lex_.peek();
            if (t.kind != Tok::kw_pred && t.kind != Tok::kw_predset)
                fail(t, "predicate libraries may only declare pred and predset");
            parse_item(m, /*library=*/true);
        }
    }

    std::shared_ptr<const PredicateDef> parse_single_pred(const ModelFile& m) {
        expect(Tok::kw_pred, "expected 'pred'");
        auto p = parse_pred_body(m);
        if (lex_.peek().kind != Tok::end) fail(lex_.peek(), "trailing input after predicate");
        return p;
    }

    TraceConstraint parse_constraint(const ModelFile& m) {
        TraceConstraint tc = parse_constraint_body(m);
        if (lex_.peek().kind != Tok::end) fail(lex_.peek(), "trailing input after constraint");
        return tc;
    }

private:
    [[noreturn]] void fail(const Token& t, const std::string& msg) {
        throw parse_error(ParseError{t.line, t.col, msg, t.text});
    }

    Token expect(Tok k, const std::string& msg) {
        if (lex_.peek().kind != k) fail(lex_.peek(), msg);
        return lex_.take();
    }

    bool accept(Tok k) {
        if (lex_.peek().kind == k) {
            lex_.take();
            return true;
        }
        return false;
    }

    /// Identifier, also accepting keyword spellings that commonly appear
    /// as field or variable names in models ported from papers.
    Token expect_name(const std::string& msg) {
        Tok k = lex_.peek().kind;
        if (k == Tok::ident || k == Tok::kw_type || k == Tok::kw_set || k == Tok::kw_pos) return lex_.take();
        fail(lex_.peek(), msg);
    }

    // ---- declarations ------------------------------------------------

    void parse_item(ModelFile& m, bool library) {
        const Token& t = lex_.peek();
        switch (t.kind) {
            case Tok::kw_type: parse_type_decl(m); return;
            case Tok::kw_record: parse_record_decl(m); return;
            case Tok::kw_vars: parse_vars_block(m); return;
            case Tok::kw_init: {
                Token kw = lex_.take();
                finalize_layout(m);
                if (m.system.init) fail(kw, "duplicate init section");
                ExprScope scope{ExprScope::Kind::init, &m};
                m.system.init = parse_bool_expr(scope);
                return;
            }
            case Tok::kw_trans: {
                Token kw = lex_.take();
                finalize_layout(m);
                if (m.system.trans) fail(kw, "duplicate trans section");
                ExprScope scope{ExprScope::Kind::trans, &m};
                m.system.trans = parse_bool_expr(scope);
                return;
            }
            case Tok::kw_invariant: {
                lex_.take();
                finalize_layout(m);
                Token name = expect_name("expected property name");
                expect(Tok::colon, "expected ':' after property name");
                ExprScope scope{ExprScope::Kind::invariant, &m};
                Expr e = parse_bool_expr(scope);
                if (m.properties.count(name.text)) fail(name, "duplicate property name");
                m.properties.emplace(name.text, Property{e});
                return;
            }
            case Tok::kw_pred: {
                lex_.take();
                if (!library) finalize_layout(m);
                auto p = parse_pred_body(m);
                if (m.predicates.count(p->name))
                    throw parse_error(ParseError{p->loc.line, p->loc.col, "duplicate predicate name", p->name});
                m.predicates.emplace(p->name, p);
                return;
            }
            case Tok::kw_predset: {
                lex_.take();
                Token name = expect_name("expected predicate-set name");
                expect(Tok::op_eq, "expected '=' in predset declaration");
                std::vector<std::string> members;
                members.push_back(predset_member());
                while (accept(Tok::comma)) members.push_back(predset_member());
                if (m.predsets.count(name.text)) fail(name, "duplicate predset name");
                m.predsets.emplace(name.text, std::move(members));
                return;
            }
            default: fail(t, "expected a declaration (type, record, vars, init, trans, invariant, pred, predset)");
        }
    }

    std::string predset_member() {
        const Token& t = lex_.peek();
        if (t.kind == Tok::ident) return lex_.take().text;
        if (t.kind == Tok::op_eq) { lex_.take(); return "eq"; }
        if (t.kind == Tok::op_lt) { lex_.take(); return "lt"; }
        if (t.kind == Tok::op_ne) { lex_.take(); return "ne"; }
        fail(t, "expected predicate name or builtin (=, <, !=)");
    }

    void parse_type_decl(ModelFile& m) {
        lex_.take();
        Token name = expect_name("expected type name");
        expect(Tok::op_eq, "expected '=' in type declaration");
        expect(Tok::lbrace, "expected '{' to open symbol list");
        auto syms = std::make_shared<std::vector<std::string>>();
        syms->push_back(expect_name("expected symbol name").text);
        while (accept(Tok::comma)) syms->push_back(expect_name("expected symbol name").text);
        expect(Tok::rbrace, "expected '}' to close symbol list");
        for (std::size_t i = 0; i < syms->size(); ++i)
            for (std::size_t j = i + 1; j < syms->size(); ++j)
                if ((*syms)[i] == (*syms)[j]) fail(name, "duplicate symbol '" + (*syms)[i] + "' in type");
        if (m.enum_id(name.text) >= 0) fail(name, "duplicate type name");
        for (const auto& e : m.enums)
            for (const auto& s : *e.symbols)
                for (const auto& s2 : *syms)
                    if (s == s2) fail(name, "symbol '" + s + "' already declared in type " + e.name);
        m.enums.push_back(EnumTypeDef{name.text, syms});
    }

    void parse_record_decl(ModelFile& m) {
        lex_.take();
        Token name = expect_name("expected record name");
        expect(Tok::lbrace, "expected '{' to open field list");
        RecordDef rd;
        rd.name = name.text;
        do {
            Token fname = expect_name("expected field name");
            expect(Tok::colon, "expected ':' after field name");
            Token where = lex_.peek();
            TypeRef t = parse_type_ref(m, /*allow_record=*/false);
            if (rd.field_index(fname.text) >= 0) fail(fname, "duplicate field name");
            rd.fields.push_back(RecordField{fname.text, t, domain_from(t, m, where)});
        } while (accept(Tok::comma));
        expect(Tok::rbrace, "expected '}' to close field list");
        if (m.record_id(rd.name) >= 0) fail(name, "duplicate record name");
        m.records.push_back(std::move(rd));
    }

    TypeRef parse_type_ref(const ModelFile& m, bool allow_record) {
        const Token t = lex_.take();
        switch (t.kind) {
            case Tok::kw_bool: return TypeRef::boolean();
            case Tok::kw_int: {
                if (!accept(Tok::lbracket)) return TypeRef::integer(); // unbounded: predicate params only
                std::int64_t lo = parse_signed_int();
                expect(Tok::dotdot, "expected '..' in integer range");
                std::int64_t hi = parse_signed_int();
                expect(Tok::rbracket, "expected ']' after integer range");
                if (lo > hi) fail(t, "integer range requires lo <= hi");
                TypeRef r = TypeRef::integer();
                r.tid = -1;
                pending_int_range_ = {lo, hi};
                has_pending_range_ = true;
                return r;
            }
            case Tok::kw_set: {
                expect(Tok::lbracket, "expected '[' after 'set'");
                Token en = expect_name("expected enumeration name");
                int tid = m.enum_id(en.text);
                if (tid < 0) fail(en, "unknown type '" + en.text + "'");
                expect(Tok::rbracket, "expected ']' after set element type");
                return TypeRef::sym_set(static_cast<std::int16_t>(tid));
            }
            case Tok::ident: {
                int tid = m.enum_id(t.text);
                if (tid >= 0) return TypeRef::enum_sym(static_cast<std::int16_t>(tid));
                int rid = m.record_id(t.text);
                if (rid >= 0) {
                    if (!allow_record) fail(t, "record type not allowed here");
                    return TypeRef::record(rid);
                }
                fail(t, "unknown type '" + t.text + "'");
            }
            default: fail(t, "expected a type");
        }
    }

    std::int64_t parse_signed_int() {
        bool neg = accept(Tok::op_minus);
        Token n = expect(Tok::number, "expected integer");
        std::int64_t v = std::stoll(n.text);
        return neg ? -v : v;
    }

    Domain domain_from(const TypeRef& t, const ModelFile& m, const Token& where) {
        switch (t.tag) {
            case TypeRef::Tag::boolean: return Domain::boolean();
            case TypeRef::Tag::integer: {
                if (!has_pending_range_) fail(where, "variable of type int requires a range, e.g. int[0..3]");
                has_pending_range_ = false;
                return Domain::integer(pending_int_range_.first, pending_int_range_.second);
            }
            case TypeRef::Tag::enum_sym:
                return Domain::enumeration(t.tid, m.enums[static_cast<std::size_t>(t.tid)].symbols);
            case TypeRef::Tag::sym_set:
                return Domain::symbol_set(t.tid, m.enums[static_cast<std::size_t>(t.tid)].symbols);
            default: fail(where, "invalid variable type");
        }
    }

    void parse_vars_block(ModelFile& m) {
        Token kw = lex_.take();
        if (m.system.layout) fail(kw, "vars section must precede init/trans/invariant");
        while (lex_.peek().kind == Tok::ident) {
            Token name = lex_.take();
            expect(Tok::colon, "expected ':' after variable name");
            for (const auto& vd : pending_vars_)
                if (vd.name == name.text || vd.name.rfind(name.text + ".", 0) == 0)
                    fail(name, "duplicate variable name");
            Token where = lex_.peek();
            TypeRef t = parse_type_ref(m, /*allow_record=*/true);
            if (t.tag == TypeRef::Tag::record) {
                const RecordDef& rd = m.records[static_cast<std::size_t>(t.record_id)];
                RecordVar rv{name.text, t.record_id, static_cast<int>(pending_vars_.size())};
                for (const auto& field : rd.fields)
                    pending_vars_.push_back(VarDecl{name.text + "." + field.name, field.domain});
                m.record_vars.push_back(rv);
            } else {
                pending_vars_.push_back(VarDecl{name.text, domain_from(t, m, where)});
            }
        }
        if (pending_vars_.empty()) fail(kw, "vars section declares no variables");
    }

    void finalize_layout(ModelFile& m) {
        if (m.system.layout) return;
        if (pending_vars_.empty())
            fail(lex_.peek(), "no variables declared before this section");
        m.system.layout = std::make_shared<VarLayout>(pending_vars_);
    }

    std::shared_ptr<const PredicateDef> parse_pred_body(const ModelFile& m) {
        Token name = expect_name("expected predicate name");
        auto def = std::make_shared<PredicateDef>();
        def->name = name.text;
        def->loc = {name.line, name.col};
        expect(Tok::lbracket, "expected '[' to open parameter list");
        if (!accept(Tok::rbracket)) {
            do {
                Token pn = expect_name("expected parameter name");
                expect(Tok::colon, "expected ':' after parameter name");
                TypeRef t;
                if (lex_.peek().kind == Tok::kw_pos) {
                    lex_.take();
                    t = TypeRef::position();
                } else {
                    Token where = lex_.peek();
                    t = parse_type_ref(m, /*allow_record=*/true);
                    if (has_pending_range_) fail(where, "predicate int parameters take no range");
                }
                for (const auto& p : def->params)
                    if (p.name == pn.text) fail(pn, "duplicate parameter name");
                def->params.push_back(Param{pn.text, t});
            } while (accept(Tok::comma));
            expect(Tok::rbracket, "expected ']' to close parameter list");
        }
        bool has_pos = false, has_val = false;
        for (const auto& p : def->params) (p.is_position() ? has_pos : has_val) = true;
        if (has_pos && has_val)
            fail(name, "a predicate takes either position parameters or value parameters, not both");
        expect(Tok::lbrace, "expected '{' to open predicate body");
        std::vector<std::string> locals;
        ExprScope scope{has_pos ? ExprScope::Kind::pos_pred : ExprScope::Kind::value_pred, &m, &def->params, &locals};
        def->body = parse_bool_expr(scope);
        expect(Tok::rbrace, "expected '}' to close predicate body");
        return def;
    }

    // ---- expressions --------------------------------------------------

    Expr parse_bool_expr(ExprScope& scope) {
        Typed t = parse_implies(scope);
        if (t.t.tag != TypeRef::Tag::boolean)
            throw parse_error(ParseError{t.e->loc.line, t.e->loc.col, "expected a boolean expression", ""});
        return t.e;
    }

    Typed parse_implies(ExprScope& scope) {
        Typed lhs = parse_or(scope);
        if (lex_.peek().kind == Tok::op_implies) {
            Token op = lex_.take();
            require_bool(lhs, op);
            Typed rhs = parse_implies(scope);
            require_bool(rhs, op);
            return {locate(make_binary(ExprKind::logic_implies, lhs.e, rhs.e), op), TypeRef::boolean()};
        }
        return lhs;
    }

    Typed parse_or(ExprScope& scope) {
        Typed lhs = parse_and(scope);
        while (lex_.peek().kind == Tok::op_or) {
            Token op = lex_.take();
            require_bool(lhs, op);
            Typed rhs = parse_and(scope);
            require_bool(rhs, op);
            lhs = {locate(make_binary(ExprKind::logic_or, lhs.e, rhs.e), op), TypeRef::boolean()};
        }
        return lhs;
    }

    Typed parse_and(ExprScope& scope) {
        Typed lhs = parse_not(scope);
        while (lex_.peek().kind == Tok::op_and) {
            Token op = lex_.take();
            require_bool(lhs, op);
            Typed rhs = parse_not(scope);
            require_bool(rhs, op);
            lhs = {locate(make_binary(ExprKind::logic_and, lhs.e, rhs.e), op), TypeRef::boolean()};
        }
        return lhs;
    }

    Typed parse_not(ExprScope& scope) {
        if (lex_.peek().kind == Tok::op_not) {
            Token op = lex_.take();
            Typed v = parse_not(scope);
            require_bool(v, op);
            return {locate(make_node(ExprKind::logic_not, {v.e}), op), TypeRef::boolean()};
        }
        return parse_comparison(scope);
    }

    bool is_position_type(const TypeRef& t) const { return t.tag == TypeRef::Tag::position; }

    Typed parse_comparison(ExprScope& scope) {
        Typed lhs = parse_additive(scope);
        Tok k = lex_.peek().kind;
        if (k == Tok::op_eq || k == Tok::op_ne || k == Tok::op_lt || k == Tok::op_le || k == Tok::op_gt ||
            k == Tok::op_ge || k == Tok::op_in || k == Tok::op_notin) {
            Token op = lex_.take();
            Typed rhs = parse_additive(scope);
            switch (op.kind) {
                case Tok::op_in:
                case Tok::op_notin: {
                    if (lhs.t.tag != TypeRef::Tag::enum_sym || rhs.t.tag != TypeRef::Tag::sym_set ||
                        (rhs.t.tid >= 0 && lhs.t.tid != rhs.t.tid))
                        fail(op, "membership requires a symbol and a set over the same enumeration");
                    Expr e = make_binary(ExprKind::set_member, lhs.e, patch_set_tid(rhs.e, lhs.t.tid));
                    if (op.kind == Tok::op_notin) e = make_node(ExprKind::logic_not, {e});
                    return {locate(e, op), TypeRef::boolean()};
                }
                case Tok::op_eq:
                case Tok::op_ne: {
                    bool both_pos = is_position_type(lhs.t) && is_position_type(rhs.t);
                    if (!both_pos) {
                        if (is_position_type(lhs.t) || is_position_type(rhs.t))
                            fail(op, "cannot compare a position with a value");
                        if (!unify(lhs, rhs)) fail(op, "equality between incompatible types");
                    }
                    ExprKind ek = op.kind == Tok::op_eq ? ExprKind::cmp_eq : ExprKind::cmp_ne;
                    return {locate(make_binary(ek, lhs.e, rhs.e), op), TypeRef::boolean()};
                }
                default: {
                    bool both_pos = is_position_type(lhs.t) && is_position_type(rhs.t);
                    bool both_int = lhs.t.tag == TypeRef::Tag::integer && rhs.t.tag == TypeRef::Tag::integer;
                    if (!both_pos && !both_int) fail(op, "ordering requires two integers or two positions");
                    ExprKind ek = op.kind == Tok::op_lt   ? ExprKind::cmp_lt
                                  : op.kind == Tok::op_le ? ExprKind::cmp_le
                                  : op.kind == Tok::op_gt ? ExprKind::cmp_gt
                                                          : ExprKind::cmp_ge;
                    return {locate(make_binary(ek, lhs.e, rhs.e), op), TypeRef::boolean()};
                }
            }
        }
        return lhs;
    }

    Typed parse_additive(ExprScope& scope) {
        Typed lhs = parse_primary(scope);
        while (true) {
            Tok k = lex_.peek().kind;
            if (k == Tok::op_plus || k == Tok::op_minus) {
                Token op = lex_.take();
                Typed rhs = parse_primary(scope);
                if (lhs.t.tag != TypeRef::Tag::integer || rhs.t.tag != TypeRef::Tag::integer)
                    fail(op, "arithmetic requires integers");
                lhs = {locate(make_binary(k == Tok::op_plus ? ExprKind::add : ExprKind::sub, lhs.e, rhs.e), op),
                       TypeRef::integer()};
            } else if (k == Tok::op_union) {
                Token op = lex_.take();
                Typed rhs = parse_primary(scope);
                if (lhs.t.tag != TypeRef::Tag::sym_set || rhs.t.tag != TypeRef::Tag::sym_set)
                    fail(op, "union requires two sets");
                if (lhs.t.tid >= 0 && rhs.t.tid >= 0 && lhs.t.tid != rhs.t.tid)
                    fail(op, "union requires sets over the same enumeration");
                std::int16_t tid = lhs.t.tid >= 0 ? lhs.t.tid : rhs.t.tid;
                lhs = {locate(make_binary(ExprKind::set_union, patch_set_tid(lhs.e, tid), patch_set_tid(rhs.e, tid)), op),
                       TypeRef::sym_set(tid)};
            } else {
                break;
            }
        }
        return lhs;
    }

    Typed parse_primary(ExprScope& scope) {
        const Token t = lex_.peek();
        switch (t.kind) {
            case Tok::lit_true: lex_.take(); return {locate(make_const(Value::boolean(true)), t), TypeRef::boolean()};
            case Tok::lit_false: lex_.take(); return {locate(make_const(Value::boolean(false)), t), TypeRef::boolean()};
            case Tok::number:
            case Tok::op_minus: {
                std::int64_t v = parse_signed_int();
                return {locate(make_const(Value::integer(v)), t), TypeRef::integer()};
            }
            case Tok::lparen: {
                lex_.take();
                Typed inner = parse_implies(scope);
                expect(Tok::rparen, "expected ')'");
                return inner;
            }
            case Tok::lbrace: {
                lex_.take();
                std::vector<Expr> elems;
                std::int16_t tid = -1;
                if (!accept(Tok::rbrace)) {
                    do {
                        Typed el = parse_implies(scope);
                        if (el.t.tag != TypeRef::Tag::enum_sym)
                            fail(t, "set literal elements must be enumeration symbols");
                        if (tid >= 0 && el.t.tid != tid) fail(t, "set literal mixes enumerations");
                        tid = el.t.tid;
                        elems.push_back(el.e);
                    } while (accept(Tok::comma));
                    expect(Tok::rbrace, "expected '}' to close set literal");
                }
                auto n = std::make_shared<ExprNode>();
                n->kind = ExprKind::set_lit;
                n->var = tid;
                n->kids = std::move(elems);
                n->loc = {t.line, t.col};
                return {n, TypeRef::sym_set(tid)};
            }
            case Tok::kw_forall: {
                if (scope.kind != ExprScope::Kind::pos_pred)
                    fail(t, "forall is only available in positional predicate bodies");
                lex_.take();
                Token bound = expect_name("expected quantified position name");
                expect(Tok::op_in, "expected 'in' after quantified position");
                expect(Tok::lparen, "expected '(' for the open interval");
                Typed lo = parse_primary(scope);
                expect(Tok::comma, "expected ',' between interval bounds");
                Typed hi = parse_primary(scope);
                expect(Tok::rparen, "expected ')'");
                if (!is_position_type(lo.t) || !is_position_type(hi.t))
                    fail(t, "forall bounds must be positions");
                expect(Tok::lbrace, "expected '{' to open forall body");
                scope.forall_locals->push_back(bound.text);
                Typed body = parse_implies(scope);
                scope.forall_locals->pop_back();
                require_bool(body, t);
                expect(Tok::rbrace, "expected '}' to close forall body");
                return {locate(make_node(ExprKind::forall_between, {lo.e, hi.e, body.e}), t), TypeRef::boolean()};
            }
            case Tok::ident:
            case Tok::kw_type: // contextual: common field name
                return parse_path(scope);
            default: fail(t, "expected an expression");
        }
    }

    Typed parse_path(ExprScope& scope) {
        Token head = expect_name("expected identifier");
        std::vector<Token> segs{head};
        while (lex_.peek().kind == Tok::dot) {
            lex_.take();
            segs.push_back(expect_name("expected field name after '.'"));
        }
        bool primed = accept(Tok::prime);
        bool has_at = false;
        Token at_pos{};
        if (lex_.peek().kind == Tok::at) {
            lex_.take();
            at_pos = expect_name("expected position parameter after '@'");
            has_at = true;
        }
        std::string joined = segs[0].text;
        for (std::size_t i = 1; i < segs.size(); ++i) joined += "." + segs[i].text;

        const ModelFile& m = *scope.model;

        auto type_of_domain = [&](const Domain& d) -> TypeRef {
            switch (d.kind()) {
                case Domain::Kind::boolean: return TypeRef::boolean();
                case Domain::Kind::integer: return TypeRef::integer();
                case Domain::Kind::enumeration: return TypeRef::enum_sym(d.type_id());
                case Domain::Kind::symbol_set: return TypeRef::sym_set(d.type_id());
            }
            return TypeRef::boolean();
        };

        switch (scope.kind) {
            case ExprScope::Kind::init:
            case ExprScope::Kind::trans:
            case ExprScope::Kind::invariant: {
                if (has_at) fail(at_pos, "positional access is only available in predicate bodies");
                int var = m.layout()->find(joined);
                if (var >= 0) {
                    if (primed && scope.kind != ExprScope::Kind::trans)
                        fail(head, "primed variables are only legal in the transition predicate");
                    Expr e = make_var(var, primed);
                    return {locate(e, head), type_of_domain(m.layout()->var(static_cast<std::size_t>(var)).domain)};
                }
                if (primed) fail(head, "unknown variable '" + joined + "'");
                if (segs.size() == 1) {
                    if (auto sym = m.resolve_symbol(joined))
                        return {locate(make_const(*sym), head), TypeRef::enum_sym(sym->type_id)};
                    if (m.find_record_var(joined)) fail(head, "record variable '" + joined + "' needs a field access");
                }
                fail(head, "unknown variable '" + joined + "'");
            }
            case ExprScope::Kind::value_pred: {
                if (primed) fail(head, "primed variables are not allowed in predicate bodies");
                if (has_at) fail(at_pos, "value predicates do not take positional access");
                // parameter reference, possibly with a record field
                for (std::size_t i = 0; i < scope.params->size(); ++i) {
                    const Param& p = (*scope.params)[i];
                    if (p.name != segs[0].text) continue;
                    if (p.type.tag == TypeRef::Tag::record) {
                        if (segs.size() != 2) fail(head, "record parameter requires exactly one field access");
                        const RecordDef& rd = m.records[static_cast<std::size_t>(p.type.record_id)];
                        int fi = rd.field_index(segs[1].text);
                        if (fi < 0) fail(segs[1], "record " + rd.name + " has no field '" + segs[1].text + "'");
                        auto n = std::make_shared<ExprNode>();
                        n->kind = ExprKind::param_ref;
                        n->var = static_cast<int>(i);
                        n->field_offset = fi;
                        n->loc = {head.line, head.col};
                        return {n, rd.fields[static_cast<std::size_t>(fi)].type};
                    }
                    if (segs.size() != 1) fail(head, "scalar parameter takes no field access");
                    auto n = std::make_shared<ExprNode>();
                    n->kind = ExprKind::param_ref;
                    n->var = static_cast<int>(i);
                    n->loc = {head.line, head.col};
                    return {n, p.type};
                }
                if (segs.size() == 1)
                    if (auto sym = m.resolve_symbol(joined))
                        return {locate(make_const(*sym), head), TypeRef::enum_sym(sym->type_id)};
                fail(head, "unknown parameter or symbol '" + joined + "'");
            }
            case ExprScope::Kind::pos_pred: {
                if (primed) fail(head, "primed variables are not allowed in predicate bodies");
                if (has_at) {
                    int var = m.layout()->find(joined);
                    if (var < 0) fail(head, "unknown variable '" + joined + "'");
                    int pp = resolve_position_name(scope, at_pos);
                    auto n = std::make_shared<ExprNode>();
                    n->kind = ExprKind::state_at;
                    n->var = var;
                    n->pos_param = pp;
                    n->loc = {head.line, head.col};
                    return {n, type_of_domain(m.layout()->var(static_cast<std::size_t>(var)).domain)};
                }
                if (segs.size() == 1) {
                    // position parameter or forall-bound position
                    int pp = try_resolve_position_name(scope, segs[0]);
                    if (pp != INT_MIN) {
                        auto n = std::make_shared<ExprNode>();
                        if (pp >= 0) {
                            n->kind = ExprKind::pos_ref;
                            n->var = pp;
                        } else {
                            n->kind = ExprKind::pos_local;
                            n->var = -pp - 1;
                        }
                        n->loc = {head.line, head.col};
                        return {n, TypeRef::position()};
                    }
                    if (auto sym = m.resolve_symbol(joined))
                        return {locate(make_const(*sym), head), TypeRef::enum_sym(sym->type_id)};
                    if (m.layout()->find(joined) >= 0 || m.find_record_var(joined))
                        fail(head, "state variables in predicate bodies require @position access");
                }
                if (m.layout()->find(joined) >= 0)
                    fail(head, "state variables in predicate bodies require @position access");
                fail(head, "unknown position, parameter or symbol '" + joined + "'");
            }
        }
        fail(head, "unresolvable reference");
    }

    // Returns parameter index >= 0, or -(depth+1) for forall locals
    // (innermost depth 0), or INT_MIN when not a position name.
    int try_resolve_position_name(ExprScope& scope, const Token& name) {
        if (scope.forall_locals) {
            for (std::size_t i = 0; i < scope.forall_locals->size(); ++i) {
                std::size_t from_inner = scope.forall_locals->size() - 1 - i;
                if ((*scope.forall_locals)[from_inner] == name.text) return -static_cast<int>(i) - 1;
            }
        }
        if (scope.params) {
            for (std::size_t i = 0; i < scope.params->size(); ++i)
                if ((*scope.params)[i].name == name.text && (*scope.params)[i].is_position())
                    return static_cast<int>(i);
        }
        return INT_MIN;
    }

    int resolve_position_name(ExprScope& scope, const Token& name) {
        int r = try_resolve_position_name(scope, name);
        if (r == INT_MIN) fail(name, "unknown position parameter '" + name.text + "'");
        return r;
    }

    void require_bool(const Typed& t, const Token& where) {
        if (t.t.tag != TypeRef::Tag::boolean) fail(where, "expected a boolean operand");
    }

    bool unify(Typed& a, Typed& b) {
        if (a.t.tag != b.t.tag) return false;
        switch (a.t.tag) {
            case TypeRef::Tag::boolean:
            case TypeRef::Tag::integer: return true;
            case TypeRef::Tag::enum_sym: return a.t.tid == b.t.tid;
            case TypeRef::Tag::sym_set: {
                if (a.t.tid >= 0 && b.t.tid >= 0) return a.t.tid == b.t.tid;
                std::int16_t tid = a.t.tid >= 0 ? a.t.tid : b.t.tid;
                a.e = patch_set_tid(a.e, tid);
                b.e = patch_set_tid(b.e, tid);
                a.t.tid = b.t.tid = tid;
                return true;
            }
            default: return false;
        }
    }

    /// Rewrite untyped (empty) set literals once their enumeration is known.
    Expr patch_set_tid(const Expr& e, std::int16_t tid) {
        if (tid < 0) return e;
        if (e->kind == ExprKind::set_lit && e->var < 0) {
            auto n = std::make_shared<ExprNode>(*e);
            n->var = tid;
            n->literal = Value::symbol_set(tid, 0);
            return n;
        }
        if (e->kind == ExprKind::set_union) {
            auto n = std::make_shared<ExprNode>(*e);
            n->kids = {patch_set_tid(e->kids[0], tid), patch_set_tid(e->kids[1], tid)};
            return n;
        }
        return e;
    }

    Expr locate(Expr e, const Token& t) {
        auto n = std::const_pointer_cast<ExprNode>(e);
        n->loc = {t.line, t.col};
        return n;
    }

    // ---- trace constraints (text form used by --block files) ----------

    TraceConstraint parse_constraint_body(const ModelFile& m) {
        TraceConstraint tc;
        std::vector<std::string> pos_names;
        if (accept(Tok::kw_exists)) {
            do {
                pos_names.push_back(expect_name("expected position variable name").text);
            } while (accept(Tok::comma));
            expect(Tok::colon, "expected ':' after quantifier prefix");
        }
        tc.position_vars = static_cast<int>(pos_names.size());
        auto pos_id = [&](const Token& t) -> int {
            for (std::size_t i = 0; i < pos_names.size(); ++i)
                if (pos_names[i] == t.text) return static_cast<int>(i);
            fail(t, "unknown position variable '" + t.text + "'");
        };
        if (lex_.peek().kind == Tok::lit_true) {
            lex_.take();
            return tc;
        }
        do {
            tc.conjuncts.push_back(parse_constraint_atom(m, pos_id));
        } while (accept(Tok::op_and));
        return tc;
    }

    template <typename PosId>
    AtomicFact parse_constraint_atom(const ModelFile& m, PosId&& pos_id) {
        Token head = expect_name("expected fact");
        // predicate instance?
        if (lex_.peek().kind == Tok::lbracket) {
            auto it = m.predicates.find(head.text);
            if (it == m.predicates.end()) fail(head, "unknown predicate '" + head.text + "'");
            AtomicFact f;
            f.kind = FactKind::user_pred;
            f.pred = it->second;
            lex_.take();
            if (!accept(Tok::rbracket)) {
                do {
                    f.args.push_back(parse_constraint_arg(m, pos_id, f.pred, f.args.size()));
                } while (accept(Tok::comma));
                expect(Tok::rbracket, "expected ']'");
            }
            if (!typecheck_binding(*f.pred, f.args, m))
                fail(head, "arguments do not typecheck against predicate '" + head.text + "'");
            return f;
        }
        // var@i or position name
        if (lex_.peek().kind == Tok::at || lex_.peek().kind == Tok::dot) {
            std::vector<Token> segs{head};
            while (accept(Tok::dot)) segs.push_back(expect_name("expected field name"));
            expect(Tok::at, "expected '@'");
            Token pv = expect_name("expected position variable");
            std::string joined = segs[0].text;
            for (std::size_t i = 1; i < segs.size(); ++i) joined += "." + segs[i].text;
            int var = m.layout()->find(joined);
            if (var < 0) fail(head, "unknown variable '" + joined + "'");
            int lhs_pos = pos_id(pv);
            Token op = lex_.take();
            if (op.kind != Tok::op_eq && op.kind != Tok::op_ne) fail(op, "expected '=' or '!='");
            AtomicFact f;
            f.args.push_back(FactArg::var_at(var, lhs_pos));
            // rhs: constant or var@pos
            if (lex_.peek().kind == Tok::number || lex_.peek().kind == Tok::op_minus ||
                lex_.peek().kind == Tok::lit_true || lex_.peek().kind == Tok::lit_false ||
                lex_.peek().kind == Tok::lbrace) {
                Value c = parse_constraint_constant(m, var);
                f.kind = op.kind == Tok::op_eq ? FactKind::eq_const : FactKind::ne_const;
                f.args.push_back(FactArg::constant_of(c));
                return f;
            }
            Token rh = expect_name("expected constant or variable");
            // enum symbol constant?
            if (lex_.peek().kind != Tok::at && lex_.peek().kind != Tok::dot) {
                auto sym = m.resolve_symbol(rh.text);
                if (!sym) fail(rh, "unknown symbol '" + rh.text + "'");
                f.kind = op.kind == Tok::op_eq ? FactKind::eq_const : FactKind::ne_const;
                f.args.push_back(FactArg::constant_of(*sym));
                return f;
            }
            std::vector<Token> rsegs{rh};
            while (accept(Tok::dot)) rsegs.push_back(expect_name("expected field name"));
            expect(Tok::at, "expected '@'");
            Token pv2 = expect_name("expected position variable");
            std::string rjoined = rsegs[0].text;
            for (std::size_t i = 1; i < rsegs.size(); ++i) rjoined += "." + rsegs[i].text;
            int var2 = m.layout()->find(rjoined);
            if (var2 < 0) fail(rh, "unknown variable '" + rjoined + "'");
            f.kind = op.kind == Tok::op_eq ? FactKind::eq_pair : FactKind::ne_pair;
            f.args.push_back(FactArg::var_at(var2, pos_id(pv2)));
            return f;
        }
        // position comparison: i < j
        int p1 = pos_id(head);
        expect(Tok::op_lt, "expected '<' between positions");
        Token p2t = expect_name("expected position variable");
        AtomicFact f;
        f.kind = FactKind::pos_less;
        f.args = {FactArg::position(p1), FactArg::position(pos_id(p2t))};
        return f;
    }

    template <typename PosId>
    FactArg parse_constraint_arg(const ModelFile& m, PosId&& pos_id, const std::shared_ptr<const PredicateDef>& pred,
                                 std::size_t index) {
        if (index >= pred->params.size())
            fail(lex_.peek(), "too many arguments for predicate '" + pred->name + "'");
        if (pred->params[index].is_position()) {
            Token pv = expect_name("expected position variable");
            return FactArg::position(pos_id(pv));
        }
        std::vector<Token> segs{expect_name("expected variable")};
        while (accept(Tok::dot)) segs.push_back(expect_name("expected field name"));
        std::string joined = segs[0].text;
        for (std::size_t i = 1; i < segs.size(); ++i) joined += "." + segs[i].text;
        int var = m.layout()->find(joined);
        if (var < 0) {
            const RecordVar* rv = m.find_record_var(joined);
            if (!rv) fail(segs[0], "unknown variable '" + joined + "'");
            var = rv->first_flat;
        }
        expect(Tok::at, "expected '@' on predicate argument");
        Token pv = expect_name("expected position variable");
        return FactArg::var_at(var, pos_id(pv));
    }

    Value parse_constraint_constant(const ModelFile& m, int var) {
        const Domain& d = m.layout()->var(static_cast<std::size_t>(var)).domain;
        const Token t = lex_.peek();
        if (t.kind == Tok::lit_true || t.kind == Tok::lit_false) {
            lex_.take();
            return Value::boolean(t.kind == Tok::lit_true);
        }
        if (t.kind == Tok::number || t.kind == Tok::op_minus) return Value::integer(parse_signed_int());
        if (t.kind == Tok::lbrace) {
            lex_.take();
            std::uint64_t mask = 0;
            if (!accept(Tok::rbrace)) {
                do {
                    Token s = expect_name("expected symbol");
                    auto sym = m.resolve_symbol(s.text);
                    if (!sym || sym->type_id != d.type_id()) fail(s, "unknown symbol '" + s.text + "'");
                    mask |= std::uint64_t{1} << sym->raw;
                } while (accept(Tok::comma));
                expect(Tok::rbrace, "expected '}'");
            }
            return Value::symbol_set(d.type_id(), mask);
        }
        fail(t, "expected a constant");
    }

    Lexer lex_;
    std::vector<VarDecl> pending_vars_;
    std::pair<std::int64_t, std::int64_t> pending_int_range_{0, 0};
    bool has_pending_range_ = false;
};

} // namespace detail

/// Parse a full model file (.ccm): either a typechecked ModelFile or the
/// first error in document order, thrown as parse_error.
inline ModelFile parse_model(std::string_view source) {
    detail::Parser p(source);
    return p.parse_model();
}

/// Parse a predicate library (.ccp) into an existing model.
inline void parse_library(std::string_view source, ModelFile& model) {
    detail::Parser p(source);
    p.parse_library(model);
}

/// Parse a single `pred name[params] { body }` declaration.
inline std::shared_ptr<const PredicateDef> parse_predicate(std::string_view source, const ModelFile& context) {
    detail::Parser p(source);
    return p.parse_single_pred(context);
}

/// Parse the canonical text rendering of a trace constraint.
inline TraceConstraint parse_trace_constraint(std::string_view source, const ModelFile& context) {
    detail::Parser p(source);
    return p.parse_constraint(context);
}

} // namespace cexclass
