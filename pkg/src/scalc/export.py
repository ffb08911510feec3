"""SMT-LIB 2 export of verification conditions over unbounded integers.

The emitted document asserts the negation of the correctness condition, so
`unsat` from a solver means the condition is valid.  Programs are encoded
in single-assignment style: every assignment introduces a fresh constant
`v!n`, branches merge through `ite` terms, and a declaration introduces an
unconstrained fresh constant (havoc).  The whole condition is a single
`(assert ...)` followed by `(check-sat)` and the text is byte-deterministic
for identical inputs.

Two deliberate semantic gaps, both recorded in the document's comment
header:

* integers are unbounded here, so the finite-domain behavior where an
  out-of-range result leaves a state with no successor does not exist;
* loops are expanded a fixed number of times and executions that would
  iterate further are assumed away, so verdicts speak only about
  executions within the unroll bound.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .errors import UnknownVariableError, UnsupportedForExportError
from .predicates import Add, ArithExpr, BoolConst, Cmp, Const
from .predicates import And as PAnd
from .predicates import Iff as PIff
from .predicates import Implies as PImplies
from .predicates import InDomain, Mul, Neg
from .predicates import Not as PNot
from .predicates import Or as POr
from .predicates import PredExpr, Sub, Var
from .syntax import (
    Assign,
    Decl,
    IfThen,
    IfThenElse,
    Nop,
    Seq,
    Stmt,
    While,
    declared_vars,
    pretty_print,
)

_CMP_SMT = {
    "==": "=",
    "<": "<",
    "<=": "<=",
    ">": ">",
    ">=": ">=",
}


@dataclass(frozen=True)
class VCDocument:
    logic: str
    declarations: tuple[str, ...]
    assertion: str
    metadata: tuple[str, ...]
    mode: str
    unroll: int
    program_sha256: str

    def text(self) -> str:
        lines = list(self.metadata)
        lines.append(f"(set-logic {self.logic})")
        lines.extend(self.declarations)
        lines.append(f"(assert {self.assertion})")
        lines.append("(check-sat)")
        return "\n".join(lines) + "\n"

    def __str__(self) -> str:
        return self.text()


def _smt_int(n: int) -> str:
    return str(n) if n >= 0 else f"(- {-n})"


class _Encoder:
    def __init__(self, variables, unroll: int, allow_partial_unroll: bool):
        self.types = dict(variables)
        self.unroll = unroll
        self.allow_partial_unroll = allow_partial_unroll
        self.counters: dict[str, int] = {}
        self.env: dict[str, str] = {}
        self.decls: list[str] = []
        self.conjuncts: list[str] = []
        self.pruned_loops = 0
        for name, _ in variables:
            sym = self._fresh(name)
            self.env[name] = sym
            self._constrain_type(name, sym)

    def _fresh(self, name: str) -> str:
        n = self.counters.get(name, 0)
        self.counters[name] = n + 1
        sym = f"{name}!{n}"
        self.decls.append(f"(declare-const {sym} Int)")
        return sym

    def _constrain_type(self, name: str, sym: str):
        if self.types[name] == "bool":
            self.conjuncts.append(f"(and (<= 0 {sym}) (<= {sym} 1))")

    def _lookup(self, name: str) -> str:
        try:
            return self.env[name]
        except KeyError:
            raise UnknownVariableError(name) from None

    def arith(self, e: ArithExpr) -> str:
        if isinstance(e, Const):
            return _smt_int(e.value)
        if isinstance(e, Var):
            return self._lookup(e.name)
        if isinstance(e, Add):
            return f"(+ {self.arith(e.left)} {self.arith(e.right)})"
        if isinstance(e, Sub):
            return f"(- {self.arith(e.left)} {self.arith(e.right)})"
        if isinstance(e, Mul):
            return f"(* {self.arith(e.left)} {self.arith(e.right)})"
        if isinstance(e, Neg):
            return f"(- {self.arith(e.operand)})"
        raise UnsupportedForExportError(f"cannot encode arithmetic node {type(e).__name__}")

    def pred(self, p: PredExpr) -> str:
        if isinstance(p, BoolConst):
            return "true" if p.value else "false"
        if isinstance(p, Cmp):
            left, right = self.arith(p.left), self.arith(p.right)
            if p.op == "!=":
                return f"(not (= {left} {right}))"
            return f"({_CMP_SMT[p.op]} {left} {right})"
        if isinstance(p, PNot):
            return f"(not {self.pred(p.operand)})"
        if isinstance(p, PAnd):
            return f"(and {self.pred(p.left)} {self.pred(p.right)})"
        if isinstance(p, POr):
            return f"(or {self.pred(p.left)} {self.pred(p.right)})"
        if isinstance(p, PImplies):
            return f"(=> {self.pred(p.left)} {self.pred(p.right)})"
        if isinstance(p, PIff):
            return f"(= {self.pred(p.left)} {self.pred(p.right)})"
        if isinstance(p, InDomain):
            sym = self._lookup(p.var)
            if self.types.get(p.var) == "bool":
                return f"(and (<= 0 {sym}) (<= {sym} 1))"
            return "true"
        raise UnsupportedForExportError(f"cannot encode predicate node {type(p).__name__}")

    def stmt(self, s: Stmt, path: str):
        if isinstance(s, Nop):
            return
        if isinstance(s, Decl):
            sym = self._fresh(s.var)
            self.env[s.var] = sym
            self.types[s.var] = s.type_name
            self._constrain_type(s.var, sym)
            return
        if isinstance(s, Assign):
            rhs = self.arith(s.expr)
            sym = self._fresh(s.var)
            self.conjuncts.append(f"(= {sym} {rhs})")
            self.env[s.var] = sym
            return
        if isinstance(s, Seq):
            self.stmt(s.first, path)
            self.stmt(s.second, path)
            return
        if isinstance(s, IfThen):
            self._branch(s.cond, s.body, None, path)
            return
        if isinstance(s, IfThenElse):
            self._branch(s.cond, s.then_branch, s.else_branch, path)
            return
        if isinstance(s, While):
            self._loop(s, path)
            return
        raise UnsupportedForExportError(f"cannot encode statement {type(s).__name__}")

    def _branch(self, cond: PredExpr, then_branch: Stmt, else_branch, path: str):
        guard = self.pred(cond)
        before = dict(self.env)
        self.stmt(then_branch, _conj(path, guard))
        then_env = self.env
        self.env = dict(before)
        if else_branch is not None:
            self.stmt(else_branch, _conj(path, f"(not {guard})"))
        else_env = self.env
        merged = dict(else_env)
        for name, then_sym in then_env.items():
            else_sym = else_env.get(name)
            if else_sym == then_sym:
                continue
            if else_sym is None:
                # declared only inside the branch; visible afterward per the
                # flat scoping of the language
                merged[name] = then_sym
                continue
            sym = self._fresh(name)
            self.conjuncts.append(f"(= {sym} (ite {guard} {then_sym} {else_sym}))")
            merged[name] = sym
        self.env = merged

    def _loop(self, s: While, path: str):
        if not self.allow_partial_unroll:
            raise UnsupportedForExportError(
                "program contains a loop; bounded expansion must be requested explicitly"
            )
        for _ in range(self.unroll):
            self._branch(s.cond, s.body, None, path)
        guard = self.pred(s.cond)
        if path == "true":
            self.conjuncts.append(f"(not {guard})")
        else:
            self.conjuncts.append(f"(=> {path} (not {guard}))")
        self.pruned_loops += 1


def _conj(a: str, b: str) -> str:
    if a == "true":
        return b
    return f"(and {a} {b})"


def _nonlinear_arith(e: ArithExpr) -> bool:
    if isinstance(e, Mul):
        if not (isinstance(e.left, Const) or isinstance(e.right, Const)):
            return True
        return _nonlinear_arith(e.left) or _nonlinear_arith(e.right)
    if isinstance(e, (Add, Sub)):
        return _nonlinear_arith(e.left) or _nonlinear_arith(e.right)
    if isinstance(e, Neg):
        return _nonlinear_arith(e.operand)
    return False


def _nonlinear_pred(p: PredExpr) -> bool:
    if isinstance(p, Cmp):
        return _nonlinear_arith(p.left) or _nonlinear_arith(p.right)
    if isinstance(p, PNot):
        return _nonlinear_pred(p.operand)
    if isinstance(p, (PAnd, POr, PImplies, PIff)):
        return _nonlinear_pred(p.left) or _nonlinear_pred(p.right)
    return False


def _nonlinear_stmt(s: Stmt) -> bool:
    if isinstance(s, Assign):
        return _nonlinear_arith(s.expr)
    if isinstance(s, Seq):
        return _nonlinear_stmt(s.first) or _nonlinear_stmt(s.second)
    if isinstance(s, IfThen):
        return _nonlinear_pred(s.cond) or _nonlinear_stmt(s.body)
    if isinstance(s, IfThenElse):
        return (
            _nonlinear_pred(s.cond)
            or _nonlinear_stmt(s.then_branch)
            or _nonlinear_stmt(s.else_branch)
        )
    if isinstance(s, While):
        return _nonlinear_pred(s.cond) or _nonlinear_stmt(s.body)
    return False


def select_logic(program: Stmt, pre: PredExpr, post: PredExpr) -> str:
    """QF_LIA unless some multiplication has two non-constant operands."""
    if _nonlinear_stmt(program) or _nonlinear_pred(pre) or _nonlinear_pred(post):
        return "QF_NIA"
    return "QF_LIA"


def _contains_while(s: Stmt) -> bool:
    if isinstance(s, While):
        return True
    if isinstance(s, Seq):
        return _contains_while(s.first) or _contains_while(s.second)
    if isinstance(s, IfThen):
        return _contains_while(s.body)
    if isinstance(s, IfThenElse):
        return _contains_while(s.then_branch) or _contains_while(s.else_branch)
    return False


def export_vc(
    program: Stmt,
    pre: PredExpr,
    post: PredExpr,
    variables,
    mode: str = "total",
    unroll: int = 0,
    allow_partial_unroll: bool = False,
) -> VCDocument:
    """Build the negated-correctness document for `program` against
    (`pre`, `post`).

    `variables` is the ordered list of (name, type) pairs visible to the
    pre/postcondition; in-program declarations havoc on top of these.  With
    loops present, `allow_partial_unroll` must be set and each loop is
    expanded `unroll` times with deeper executions assumed away.
    """
    if mode not in ("total", "partial"):
        raise ValueError(f"unknown mode '{mode}'")
    if unroll < 0:
        raise ValueError("unroll bound must be nonnegative")
    has_loop = _contains_while(program)

    all_vars = list(variables)
    known = {name for name, _ in all_vars}
    for name, type_name in declared_vars(program):
        if name not in known:
            all_vars.append((name, type_name))
            known.add(name)

    enc = _Encoder(tuple(all_vars), unroll, allow_partial_unroll)
    pre_smt = enc.pred(pre)
    enc.conjuncts.append(pre_smt)
    enc.stmt(program, "true")
    post_smt = enc.pred(post)
    enc.conjuncts.append(f"(not {post_smt})")

    conjuncts = enc.conjuncts
    assertion = conjuncts[0] if len(conjuncts) == 1 else "(and " + " ".join(conjuncts) + ")"
    digest = hashlib.sha256(pretty_print(program).encode("utf-8")).hexdigest()
    metadata = [
        "; negated correctness condition: unsat means the condition holds",
        f"; program-sha256: {digest}",
        f"; mode: {mode}",
        f"; unroll: {unroll}",
        "; semantics: unbounded integers (finite-domain overflow not represented)",
    ]
    if has_loop:
        metadata.append(
            f"; coverage: executions with at most {unroll} iterations per loop; "
            "deeper executions are assumed away"
        )
    else:
        metadata.append("; coverage: all executions (loop-free)")
    logic = select_logic(program, pre, post)
    return VCDocument(
        logic=logic,
        declarations=tuple(enc.decls),
        assertion=assertion,
        metadata=tuple(metadata),
        mode=mode,
        unroll=unroll,
        program_sha256=digest,
    )
