"""A small saturation prover used as the bundled backend.

Refutation by binary resolution with factoring over clauses obtained
from negation normal form, inline skolemization and or-over-and
distribution.  Equality is handled by axiomatization: reflexivity,
symmetry, transitivity plus congruence clauses for every function and
predicate symbol that occurs alongside ``=``.

The prover is deliberately modest.  Clause length and clause count are
capped, so a run that exhausts its queue reports GaveUp rather than
CounterSatisfiable; it never claims a conjecture disprovable.  What it
does guarantee: an empty clause is a genuine refutation (soundness),
and the used-axiom list names exactly the input axioms reachable from
the empty clause's derivation tree.
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass
from heapq import heappop, heappush

from . import kif
from .kif import (
    And, Atom, Constant, Equal, Exists, Forall, Formula, Function, Iff,
    Implies, Not, Or, Term, Variable,
)
from .tptp import ProverResult, SzsStatus

NEGATED_CONJECTURE = "negated_conjecture"
EQUALITY_ORIGIN = "eq"


@dataclass(frozen=True)
class Literal:
    positive: bool
    predicate: str  # "=" for equality
    args: tuple[Term, ...]

    def negated(self) -> "Literal":
        return Literal(not self.positive, self.predicate, self.args)

    def __str__(self):
        if self.predicate == "=" and len(self.args) == 2:
            core = f"{_term_str(self.args[0])} = {_term_str(self.args[1])}"
        else:
            inner = ", ".join(_term_str(a) for a in self.args)
            core = f"{self.predicate}({inner})" if inner else self.predicate
        return core if self.positive else "~" + core


def _term_str(t: Term) -> str:
    if isinstance(t, Variable):
        return t.name
    if isinstance(t, Constant):
        return t.name
    inner = ", ".join(_term_str(a) for a in t.args)
    return f"{t.name}({inner})" if inner else t.name


class Clause:
    """Identity-based clause node; parents link the derivation tree."""

    __slots__ = ("literals", "origin", "parents", "seq")

    def __init__(self, literals, origin=None, parents=(), seq=0):
        self.literals = tuple(literals)
        self.origin = origin
        self.parents = tuple(parents)
        self.seq = seq

    def __str__(self):
        return " | ".join(str(l) for l in self.literals) if self.literals else "<empty>"


# --------------------------------------------------------------------------
# clausification


class _Fresh:
    """Name supply shared across one problem's clausification."""

    def __init__(self, skolem_start: int = 1):
        self.var_counter = 0
        self.skolem_counter = skolem_start

    def variable(self, base: str) -> str:
        self.var_counter += 1
        return f"{base}_{self.var_counter}"

    def skolem(self) -> str:
        name = f"sk{self.skolem_counter}"
        self.skolem_counter += 1
        return name


_SKOLEM_RE = re.compile(r"^sk(\d+)$")


def skolem_floor(formulas) -> int:
    """First free skN index given symbols already present in the input."""
    top = 0
    for f in formulas:
        for sym in kif.symbols(f):
            m = _SKOLEM_RE.match(sym)
            if m:
                top = max(top, int(m.group(1)))
    return top + 1


def _subst_term(t: Term, env: dict) -> Term:
    if isinstance(t, Variable):
        return env.get(t.name, t)
    if isinstance(t, Function):
        return Function(t.name, tuple(_subst_term(a, env) for a in t.args))
    return t


def _skolemize(f: Formula, env: dict, universals: tuple, fresh: _Fresh, used: set) -> Formula:
    """NNF in, quantifier-free matrix out.  Universal variables are renamed
    apart (so dropping the quantifiers is sound even under disjunction) and
    existential ones replaced by skolem terms over the universals in scope."""
    if isinstance(f, Atom):
        return Atom(f.predicate, tuple(_subst_term(a, env) for a in f.args))
    if isinstance(f, Equal):
        return Equal(_subst_term(f.left, env), _subst_term(f.right, env))
    if isinstance(f, Not):
        return Not(_skolemize(f.body, env, universals, fresh, used))
    if isinstance(f, And):
        return And(tuple(_skolemize(p, env, universals, fresh, used) for p in f.parts))
    if isinstance(f, Or):
        return Or(tuple(_skolemize(p, env, universals, fresh, used) for p in f.parts))
    if isinstance(f, Forall):
        inner = dict(env)
        new_universals = list(universals)
        for v in f.variables:
            name = v if v not in used else fresh.variable(v)
            used.add(name)
            var = Variable(name)
            inner[v] = var
            new_universals.append(var)
        return _skolemize(f.body, inner, tuple(new_universals), fresh, used)
    if isinstance(f, Exists):
        inner = dict(env)
        for v in f.variables:
            inner[v] = Function(fresh.skolem(), universals)
        return _skolemize(f.body, inner, universals, fresh, used)
    raise TypeError(f"clausifier expects NNF, found {type(f).__name__}")


def _matrix_to_clauses(f: Formula) -> list:
    """Distribute or over and; returns lists of literals."""
    if isinstance(f, Atom):
        return [[Literal(True, f.predicate, f.args)]]
    if isinstance(f, Equal):
        return [[Literal(True, "=", (f.left, f.right))]]
    if isinstance(f, Not):
        g = f.body
        if isinstance(g, Atom):
            return [[Literal(False, g.predicate, g.args)]]
        if isinstance(g, Equal):
            return [[Literal(False, "=", (g.left, g.right))]]
        raise TypeError("negation below NNF reached clausifier")
    if isinstance(f, And):
        out = []
        for p in f.parts:
            out.extend(_matrix_to_clauses(p))
        return out
    if isinstance(f, Or):
        acc: list = [[]]
        for p in f.parts:
            branch = _matrix_to_clauses(p)
            acc = [a + b for a in acc for b in branch]
        return acc
    raise TypeError(f"unexpected node in matrix: {type(f).__name__}")


def _is_tautology(lits) -> bool:
    pos = {(l.predicate, l.args) for l in lits if l.positive}
    for l in lits:
        if not l.positive and (l.predicate, l.args) in pos:
            return True
        if l.positive and l.predicate == "=" and l.args[0] == l.args[1]:
            return True
    return False


def clausify(f: Formula, origin, fresh: _Fresh) -> list:
    """Clauses for one closed formula; tautologies and duplicate literals
    are dropped on the way out."""
    matrix = _skolemize(kif.nnf(kif.universal_closure(f)), {}, (), fresh, set())
    clauses = []
    for lits in _matrix_to_clauses(matrix):
        unique = list(dict.fromkeys(lits))
        if _is_tautology(unique):
            continue
        clauses.append(Clause(unique, origin=origin))
    return clauses


# --------------------------------------------------------------------------
# unification


def _walk(t: Term, subst: dict) -> Term:
    while isinstance(t, Variable) and t.name in subst:
        t = subst[t.name]
    return t


def _occurs(name: str, t: Term, subst: dict) -> bool:
    t = _walk(t, subst)
    if isinstance(t, Variable):
        return t.name == name
    if isinstance(t, Function):
        return any(_occurs(name, a, subst) for a in t.args)
    return False


def unify(a: Term, b: Term, subst: dict | None = None):
    """Most general unifier as a dict, or None; occurs check included."""
    if subst is None:
        subst = {}
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        x, y = _walk(x, subst), _walk(y, subst)
        if x == y:
            continue
        if isinstance(x, Variable):
            if _occurs(x.name, y, subst):
                return None
            subst[x.name] = y
        elif isinstance(y, Variable):
            if _occurs(y.name, x, subst):
                return None
            subst[y.name] = x
        elif isinstance(x, Constant) and isinstance(y, Constant):
            return None  # distinct constants
        elif isinstance(x, Function) and isinstance(y, Function):
            if x.name != y.name or len(x.args) != len(y.args):
                return None
            stack.extend(zip(x.args, y.args))
        else:
            return None
    return subst


def _apply(t: Term, subst: dict) -> Term:
    t = _walk(t, subst)
    if isinstance(t, Function):
        return Function(t.name, tuple(_apply(a, subst) for a in t.args))
    return t


def _apply_lit(l: Literal, subst: dict) -> Literal:
    return Literal(l.positive, l.predicate, tuple(_apply(a, subst) for a in l.args))


def _rename_lits(lits, prefix: str):
    """Rewrite every variable into a reserved namespace by first occurrence.

    Stored clauses use the ``A`` namespace; a resolution partner is recast
    into ``B`` so the two sides can never share a variable, whatever the
    source formulas called theirs.
    """
    cache: dict = {}

    def rt(t: Term) -> Term:
        if isinstance(t, Variable):
            if t.name not in cache:
                cache[t.name] = Variable(f"{prefix}{len(cache)}")
            return cache[t.name]
        if isinstance(t, Function):
            return Function(t.name, tuple(rt(a) for a in t.args))
        return t

    return tuple(Literal(l.positive, l.predicate, tuple(rt(a) for a in l.args)) for l in lits)


# --------------------------------------------------------------------------
# canonical clause keys (dedup)


def _shape_key(t: Term):
    if isinstance(t, Variable):
        return ("v",)
    if isinstance(t, Constant):
        return ("c", t.name)
    return ("f", t.name) + tuple(_shape_key(a) for a in t.args)


def _lit_sort_key(l: Literal):
    return (l.predicate, not l.positive, tuple(_shape_key(a) for a in l.args))


def clause_key(lits) -> tuple:
    """Hashable key stable under variable renaming (best effort: clauses
    differing only in bound names usually collide, which is all dedup
    needs; a miss just keeps a redundant clause)."""
    ordered = sorted(lits, key=_lit_sort_key)
    names: dict = {}

    def rn(t: Term):
        if isinstance(t, Variable):
            if t.name not in names:
                names[t.name] = len(names)
            return ("V", names[t.name])
        if isinstance(t, Constant):
            return ("C", t.name)
        return ("F", t.name) + tuple(rn(a) for a in t.args)

    return tuple((l.positive, l.predicate) + tuple(rn(a) for a in l.args) for l in ordered)


# --------------------------------------------------------------------------
# equality axioms


def _collect_signature(clauses):
    functions: set = set()
    predicates: set = set()
    has_eq = False

    def walk(t: Term):
        if isinstance(t, Function):
            functions.add((t.name, len(t.args)))
            for a in t.args:
                walk(a)

    for c in clauses:
        for l in c.literals:
            if l.predicate == "=":
                has_eq = True
            else:
                predicates.add((l.predicate, len(l.args)))
            for a in l.args:
                walk(a)
    return has_eq, functions, predicates


def equality_clauses(clauses) -> list:
    """Reflexivity, symmetry, transitivity and congruence for the problem
    signature; empty when no equality literal occurs."""
    has_eq, functions, predicates = _collect_signature(clauses)
    if not has_eq:
        return []
    X, Y, Z = Variable("EQX"), Variable("EQY"), Variable("EQZ")
    out = [
        Clause([Literal(True, "=", (X, X))], origin=EQUALITY_ORIGIN),
        Clause(
            [Literal(False, "=", (X, Y)), Literal(True, "=", (Y, X))],
            origin=EQUALITY_ORIGIN,
        ),
        Clause(
            [
                Literal(False, "=", (X, Y)),
                Literal(False, "=", (Y, Z)),
                Literal(True, "=", (X, Z)),
            ],
            origin=EQUALITY_ORIGIN,
        ),
    ]
    for name, arity in sorted(functions):
        if arity == 0:
            continue
        xs = tuple(Variable(f"EQA{i}") for i in range(arity))
        ys = tuple(Variable(f"EQB{i}") for i in range(arity))
        lits = [Literal(False, "=", (x, y)) for x, y in zip(xs, ys)]
        lits.append(Literal(True, "=", (Function(name, xs), Function(name, ys))))
        out.append(Clause(lits, origin=EQUALITY_ORIGIN))
    for name, arity in sorted(predicates):
        if arity == 0:
            continue
        xs = tuple(Variable(f"EQA{i}") for i in range(arity))
        ys = tuple(Variable(f"EQB{i}") for i in range(arity))
        lits = [Literal(False, "=", (x, y)) for x, y in zip(xs, ys)]
        lits.append(Literal(False, name, xs))
        lits.append(Literal(True, name, ys))
        out.append(Clause(lits, origin=EQUALITY_ORIGIN))
    return out


# --------------------------------------------------------------------------
# saturation


def _resolvents(given: Clause, partner: Clause):
    """Binary resolvents between the given clause and a renamed partner."""
    plits = _rename_lits(partner.literals, "B")
    for i, li in enumerate(given.literals):
        for j, lj in enumerate(plits):
            if li.predicate != lj.predicate or li.positive == lj.positive:
                continue
            if len(li.args) != len(lj.args):
                continue
            subst: dict | None = {}
            for x, y in zip(li.args, lj.args):
                subst = unify(x, y, subst)
                if subst is None:
                    break
            if subst is None:
                continue
            rest = [
                _apply_lit(l, subst)
                for k, l in enumerate(given.literals)
                if k != i
            ] + [_apply_lit(l, subst) for k, l in enumerate(plits) if k != j]
            yield list(dict.fromkeys(rest))


def _factors(given: Clause):
    lits = given.literals
    for i in range(len(lits)):
        for j in range(i + 1, len(lits)):
            a, b = lits[i], lits[j]
            if a.positive != b.positive or a.predicate != b.predicate:
                continue
            if len(a.args) != len(b.args):
                continue
            subst: dict | None = {}
            for x, y in zip(a.args, b.args):
                subst = unify(x, y, subst)
                if subst is None:
                    break
            if subst is None:
                continue
            yield list(dict.fromkeys(_apply_lit(l, subst) for l in lits if l is not b))


def _used_axioms(empty: Clause) -> tuple:
    labels: set = set()
    stack = [empty]
    seen: set = set()
    while stack:
        c = stack.pop()
        if id(c) in seen:
            continue
        seen.add(id(c))
        if c.parents:
            stack.extend(c.parents)
        elif c.origin not in (None, EQUALITY_ORIGIN, NEGATED_CONJECTURE):
            labels.add(c.origin)
    return tuple(sorted(labels))


def prove(
    axioms,
    conjecture: Formula,
    limit_seconds: float = 600.0,
    max_literals: int = 12,
    max_clauses: int = 50000,
) -> ProverResult:
    """Refute the negated conjecture against labeled axioms.

    ``axioms`` is an iterable of (label, formula).  Returns Theorem with
    the axiom labels used, Timeout past ``limit_seconds``, or GaveUp when
    the clause queue empties or a cap trips.
    """
    start = time.monotonic()
    deadline = start + limit_seconds
    formulas = [f for _, f in axioms] + [conjecture]
    fresh = _Fresh(skolem_floor(formulas))
    initial: list = []
    for label, f in axioms:
        initial.extend(clausify(f, label, fresh))
    initial.extend(clausify(Not(kif.universal_closure(conjecture)), NEGATED_CONJECTURE, fresh))
    initial.extend(equality_clauses(initial))

    def finish(status, used=(), empty=None):
        wall = time.monotonic() - start
        if empty is not None:
            used = _used_axioms(empty)
        return ProverResult(szs=status, wall_seconds=wall, used_axioms=used)

    seq = 0
    heap: list = []
    known: set = set()
    for c in initial:
        if not c.literals:
            return finish(SzsStatus.THEOREM, empty=c)
        c.literals = _rename_lits(c.literals, "A")
        key = clause_key(c.literals)
        if key in known:
            continue
        known.add(key)
        c.seq = seq
        heappush(heap, (len(c.literals), seq, c))
        seq += 1

    processed: list = []

    while heap:
        if time.monotonic() > deadline:
            return finish(SzsStatus.TIMEOUT)
        _, _, given = heappop(heap)
        processed.append(given)

        new_lits: list = []
        for partner in processed:
            for lits in _resolvents(given, partner):
                new_lits.append((lits, (given, partner)))
            if time.monotonic() > deadline:
                return finish(SzsStatus.TIMEOUT)
        for lits in _factors(given):
            new_lits.append((lits, (given,)))

        for lits, parents in new_lits:
            if _is_tautology(lits):
                continue
            if len(lits) > max_literals:
                continue
            lits = list(_rename_lits(lits, "A"))
            key = clause_key(lits)
            if key in known:
                continue
            known.add(key)
            child = Clause(lits, parents=parents, seq=seq)
            if not lits:
                return finish(SzsStatus.THEOREM, empty=child)
            heappush(heap, (len(lits), seq, child))
            seq += 1
            if seq > max_clauses:
                return finish(SzsStatus.GAVE_UP)

    return finish(SzsStatus.GAVE_UP)
