"""Formula evaluation is checked two ways: pinned cases, and agreement with
a deliberately naive reference evaluator on randomly generated closed
formulas."""

import random

import pytest

from scalc.errors import (
    ArityMismatchError,
    UnboundStateVariableError,
    UnboundSymbolError,
)
from scalc.formulas import (
    Exists,
    FAnd,
    FIff,
    FImplies,
    FNot,
    FOr,
    Forall,
    PredApp,
    RelApp,
    eval_sformula,
    free_vars,
    symbol_arities,
)
from scalc.laws import abstract_space, random_predset, random_relation
from scalc.predicates import PredSet
from scalc.semantics import identity_relation


def reference_eval(f, env, space, assign):
    """Textbook recursion, no shortcuts; the oracle for eval_sformula."""
    if isinstance(f, PredApp):
        return assign[f.var] in env[f.symbol]
    if isinstance(f, RelApp):
        return env[f.symbol].has_pair(assign[f.var1], assign[f.var2])
    if isinstance(f, FNot):
        return not reference_eval(f.operand, env, space, assign)
    if isinstance(f, FAnd):
        return reference_eval(f.left, env, space, assign) and reference_eval(
            f.right, env, space, assign
        )
    if isinstance(f, FOr):
        return reference_eval(f.left, env, space, assign) or reference_eval(
            f.right, env, space, assign
        )
    if isinstance(f, FImplies):
        return (not reference_eval(f.left, env, space, assign)) or reference_eval(
            f.right, env, space, assign
        )
    if isinstance(f, FIff):
        return reference_eval(f.left, env, space, assign) == reference_eval(
            f.right, env, space, assign
        )
    if isinstance(f, Forall):
        return all(
            reference_eval(f.body, env, space, {**assign, f.var: k})
            for k in range(space.size)
        )
    if isinstance(f, Exists):
        return any(
            reference_eval(f.body, env, space, {**assign, f.var: k})
            for k in range(space.size)
        )
    raise AssertionError(f"unhandled node {f!r}")


class TestPinnedFormulas:
    def test_self_implication_tautology(self):
        sp = abstract_space(3)
        f = Forall("x", FImplies(PredApp("P", "x"), PredApp("P", "x")))
        for mask in range(8):
            assert eval_sformula(f, {"P": PredSet(3, mask)}, sp)

    def test_identity_relation_is_total(self):
        sp = abstract_space(4)
        f = Forall("x", Exists("y", RelApp("S", "x", "y")))
        assert eval_sformula(f, {"S": identity_relation(sp)}, sp)

    def test_quantifier_swap_500_random_relations(self):
        f = FImplies(
            Exists("x", Forall("y", RelApp("S", "x", "y"))),
            Forall("y", Exists("x", RelApp("S", "x", "y"))),
        )
        for trial in range(500):
            sp = abstract_space(1 + trial % 4)
            s = random_relation(sp, 0xABCD + trial)
            assert eval_sformula(f, {"S": s}, sp)

    def test_one_state_space_quantifiers(self):
        sp = abstract_space(1)
        body = PredApp("P", "x")
        assert not eval_sformula(Forall("x", body), {"P": PredSet.empty(1)}, sp)
        assert eval_sformula(Exists("x", body), {"P": PredSet.full(1)}, sp)


class TestShadowing:
    def test_inner_quantifier_restores_outer_binding(self):
        sp = abstract_space(2)
        # exists x (P(x) and forall x Q(x)): after the inner forall runs, the
        # outer x must still be visible to later conjuncts
        f = Exists(
            "x",
            FAnd(
                FAnd(PredApp("P", "x"), Forall("x", PredApp("Q", "x"))),
                PredApp("P", "x"),
            ),
        )
        env = {"P": PredSet(2, 0b01), "Q": PredSet.full(2)}
        assert eval_sformula(f, env, sp)
        env = {"P": PredSet(2, 0b01), "Q": PredSet(2, 0b01)}
        assert not eval_sformula(f, env, sp)


class TestErrors:
    def test_open_formula_rejected(self):
        sp = abstract_space(2)
        with pytest.raises(UnboundStateVariableError):
            eval_sformula(PredApp("P", "x"), {"P": PredSet.full(2)}, sp)

    def test_unbound_symbol(self):
        sp = abstract_space(2)
        with pytest.raises(UnboundSymbolError):
            eval_sformula(Forall("x", PredApp("P", "x")), {}, sp)

    def test_arity_mismatch_in_env(self):
        sp = abstract_space(2)
        f = Forall("x", PredApp("P", "x"))
        with pytest.raises(ArityMismatchError):
            eval_sformula(f, {"P": identity_relation(sp)}, sp)

    def test_mixed_arity_use_rejected(self):
        f = Forall(
            "x",
            Forall("y", FAnd(PredApp("S", "x"), RelApp("S", "x", "y"))),
        )
        with pytest.raises(ArityMismatchError):
            symbol_arities(f)

    def test_wrong_size_binding(self):
        sp = abstract_space(3)
        f = Forall("x", PredApp("P", "x"))
        with pytest.raises(ValueError):
            eval_sformula(f, {"P": PredSet.full(2)}, sp)


class TestFreeVars:
    def test_free_and_bound(self):
        f = Forall("x", RelApp("S", "x", "y"))
        assert free_vars(f) == frozenset({"y"})
        assert free_vars(Forall("y", f)) == frozenset()

    def test_arities(self):
        f = Forall("x", FAnd(PredApp("P", "x"), Exists("y", RelApp("S", "x", "y"))))
        assert symbol_arities(f) == {"P": 1, "S": 2}


def random_formula(rng, bound, depth):
    """A random formula whose atoms only mention variables in `bound`; with
    no bound variables yet, force a quantifier so the result is closed."""
    if depth == 0 and bound:
        if rng.random() < 0.5:
            return PredApp(rng.choice("PQ"), rng.choice(bound))
        return RelApp("S", rng.choice(bound), rng.choice(bound))
    if not bound or rng.random() < 0.35:
        var = rng.choice("uvw")
        ctor = Forall if rng.random() < 0.5 else Exists
        return ctor(var, random_formula(rng, bound + (var,), max(depth - 1, 0)))
    kind = rng.randrange(5)
    if kind == 0:
        return FNot(random_formula(rng, bound, depth - 1))
    ctor = (FAnd, FOr, FImplies, FIff)[kind - 1]
    return ctor(
        random_formula(rng, bound, depth - 1), random_formula(rng, bound, depth - 1)
    )


def test_agreement_with_reference_evaluator():
    rng = random.Random(0xF0F0)
    for trial in range(1000):
        size = rng.randrange(1, 5)
        sp = abstract_space(size)
        f = random_formula(rng, (), rng.randrange(1, 6))
        env = {}
        for sym, arity in symbol_arities(f).items():
            seed = rng.getrandbits(64)
            env[sym] = random_predset(sp, seed) if arity == 1 else random_relation(sp, seed)
        assert eval_sformula(f, env, sp) == reference_eval(f, env, sp, {}), (
            f"disagreement on trial {trial}: {f!r}"
        )


def test_evaluation_does_not_mutate_env():
    sp = abstract_space(2)
    env = {"P": PredSet.full(2)}
    before = dict(env)
    eval_sformula(Forall("x", PredApp("P", "x")), env, sp)
    assert env == before
