#include "cexclass/system.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace cexclass;

namespace {

std::shared_ptr<const VarLayout> xyz_layout() {
    return std::make_shared<VarLayout>(std::vector<VarDecl>{
        {"x", Domain::integer(0, 10)},
        {"y", Domain::integer(0, 10)},
        {"z", Domain::boolean()},
    });
}

State make_state(std::shared_ptr<const VarLayout> layout, std::vector<Value> vals) {
    return State{std::move(layout), std::move(vals)};
}

} // namespace

TEST_CASE("domains enumerate their values in canonical order") {
    Domain b = Domain::boolean();
    REQUIRE(b.size() == 2);
    CHECK(b.value_at(0) == Value::boolean(false));
    CHECK(b.value_at(1) == Value::boolean(true));

    Domain i = Domain::integer(-3, 3);
    REQUIRE(i.size() == 7);
    CHECK(i.value_at(0) == Value::integer(-3));
    CHECK(i.value_at(6) == Value::integer(3));
    CHECK(i.contains(Value::integer(0)));
    CHECK_FALSE(i.contains(Value::integer(4)));
    CHECK_THROWS_AS(Domain::integer(2, 1), std::invalid_argument);

    auto syms = std::make_shared<std::vector<std::string>>(std::vector<std::string>{"A", "B", "C"});
    Domain e = Domain::enumeration(0, syms);
    REQUIRE(e.size() == 3);
    CHECK(e.render(e.value_at(1)) == "B");

    Domain s = Domain::symbol_set(0, syms);
    REQUIRE(s.size() == 8);
    CHECK(s.render(s.value_at(0)) == "{}");
    CHECK(s.render(s.value_at(5)) == "{A, C}");
}

TEST_CASE("state predicate evaluation matches the textbook example") {
    auto layout = xyz_layout();
    // I = x < y /\ z
    Expr i = make_binary(ExprKind::logic_and, make_binary(ExprKind::cmp_lt, make_var(0), make_var(1)), make_var(2));

    State s1 = make_state(layout, {Value::integer(3), Value::integer(4), Value::boolean(true)});
    State s2 = make_state(layout, {Value::integer(3), Value::integer(1), Value::boolean(true)});
    CHECK(eval_state_bool(i, s1));
    CHECK_FALSE(eval_state_bool(i, s2));

    CHECK(eval_state_bool(make_const(Value::boolean(true)), s1));
}

TEST_CASE("transition predicate evaluation substitutes both state copies") {
    auto layout = std::make_shared<VarLayout>(std::vector<VarDecl>{{"x", Domain::integer(0, 5)}});
    // T = x' = x + 1
    Expr t = make_binary(ExprKind::cmp_eq, make_var(0, true),
                         make_binary(ExprKind::add, make_var(0), make_const(Value::integer(1))));
    State s0 = make_state(layout, {Value::integer(0)});
    State s1 = make_state(layout, {Value::integer(1)});
    State s2 = make_state(layout, {Value::integer(2)});
    CHECK(eval_transition(t, s0, s1));
    CHECK(eval_transition(t, s1, s2));
    CHECK_FALSE(eval_transition(t, s0, s2));
    CHECK(eval_transition(make_const(Value::boolean(true)), s0, s2));
}

TEST_CASE("trace satisfaction of an invariant checks every state") {
    auto layout = std::make_shared<VarLayout>(std::vector<VarDecl>{{"a", Domain::integer(0, 5)}});
    Property phi{make_binary(ExprKind::cmp_eq, make_var(0), make_const(Value::integer(1)))};

    Trace violating{{make_state(layout, {Value::integer(1)}), make_state(layout, {Value::integer(2)})}};
    CHECK_FALSE(trace_satisfies_property(violating, phi));

    Trace single{{make_state(layout, {Value::integer(1)})}};
    CHECK(trace_satisfies_property(single, phi));
    CHECK(single.length() == 0);
    CHECK(violating.length() == 1);

    // expansion equivalence: satisfies <=> every state satisfies
    for (const Trace& t : {violating, single}) {
        bool all = true;
        for (const auto& s : t.states) all = all && eval_state_bool(phi.inv, s);
        CHECK(trace_satisfies_property(t, phi) == all);
    }
}

TEST_CASE("evaluation errors signal malformed models") {
    auto layout = xyz_layout();
    State s = make_state(layout, {Value::integer(1), Value::integer(2), Value::boolean(false)});
    // type mismatch: x + z
    Expr bad = make_binary(ExprKind::add, make_var(0), make_var(2));
    CHECK_THROWS_AS(eval_state(bad, s), eval_error);
    // equality across kinds
    Expr bad_eq = make_binary(ExprKind::cmp_eq, make_var(0), make_var(2));
    CHECK_THROWS_AS(eval_state(bad_eq, s), eval_error);
    // unknown variable index
    Expr unknown = make_var(7);
    CHECK_THROWS_AS(eval_state(unknown, s), eval_error);
    // primed reference outside a transition context
    Expr primed = make_var(0, true);
    CHECK_THROWS_AS(eval_state(primed, s), eval_error);
    // state lookup by unknown name
    CHECK_THROWS_AS(s.at("nope"), eval_error);
}

TEST_CASE("evaluation is deterministic") {
    auto layout = xyz_layout();
    Expr e = make_binary(ExprKind::logic_or, make_binary(ExprKind::cmp_le, make_var(0), make_var(1)), make_var(2));
    State s = make_state(layout, {Value::integer(2), Value::integer(9), Value::boolean(false)});
    Value first = eval_state(e, s);
    for (int i = 0; i < 100; ++i) CHECK(eval_state(e, s) == first);
}
