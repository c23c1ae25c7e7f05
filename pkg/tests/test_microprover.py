"""The built-in saturation prover, checked against a ground-enumeration
oracle on problems small enough to decide exactly."""

import random

import pytest

import genformulas
import oracles
from cqeval import kif
from cqeval.kif import And, Atom, Constant, Iff, Implies, Not, Or, Variable
from cqeval.microprover import clausify, equality_clauses, prove, skolem_floor, unify, _Fresh
from cqeval.tptp import SzsStatus


def _parse(src):
    return kif.parse_kif(src)[0]


# --------------------------------------------------------------------------
# unification


def test_unify_binds_variables():
    a = kif.Function("f", (Variable("X"), Constant("c")))
    b = kif.Function("f", (Constant("d"), Variable("Y")))
    subst = unify(a, b)
    assert subst is not None
    assert subst["X"] == Constant("d")
    assert subst["Y"] == Constant("c")


def test_unify_occurs_check():
    x = Variable("X")
    fx = kif.Function("f", (x,))
    assert unify(x, fx) is None


def test_unify_clash():
    assert unify(Constant("a"), Constant("b")) is None
    assert unify(kif.Function("f", (Constant("a"),)),
                 kif.Function("g", (Constant("a"),))) is None


# --------------------------------------------------------------------------
# clausification


def test_clausify_implication_is_one_clause():
    f = _parse("(forall (?X) (=> (p ?X) (q ?X)))")
    clauses = clausify(f, "ax", _Fresh())
    assert len(clauses) == 1
    lits = sorted(str(l) for l in clauses[0].literals)
    assert lits == ["q(X)", "~p(X)"]


def test_clausify_skolemizes_existentials():
    f = _parse("(exists (?X) (p ?X))")
    (clause,) = clausify(f, "ax", _Fresh())
    (lit,) = clause.literals
    assert lit.positive
    assert str(lit).startswith("p(sk")


def test_clausify_existential_under_universal_gets_function():
    f = _parse("(forall (?X) (exists (?Y) (p ?X ?Y)))")
    (clause,) = clausify(f, "ax", _Fresh())
    text = str(clause.literals[0])
    assert "sk" in text and "(X)" in text


def test_clausify_drops_tautologies():
    f = _parse("(or (p a) (not (p a)))")
    assert clausify(f, "ax", _Fresh()) == []


def test_skolem_floor_dodges_user_symbols():
    f = _parse("(p sk3)")
    assert skolem_floor([f]) >= 4


def test_equality_clauses_only_when_equality_occurs():
    plain = clausify(_parse("(p a)"), "ax", _Fresh())
    assert equality_clauses(plain) == []
    eq = clausify(_parse("(equal a b)"), "ax", _Fresh())
    extra = equality_clauses(eq)
    assert extra != []
    assert all(c.origin == "eq" for c in extra)


# --------------------------------------------------------------------------
# proving


def test_prove_modus_ponens_chain():
    axioms = [
        ("ax_fact", _parse("(p a)")),
        ("ax_pq", _parse("(forall (?X) (=> (p ?X) (q ?X)))")),
        ("ax_qr", _parse("(forall (?X) (=> (q ?X) (r ?X)))")),
        ("ax_idle", _parse("(s b)")),
    ]
    result = prove(axioms, _parse("(r a)"))
    assert result.szs is SzsStatus.THEOREM
    assert result.used_axioms == ("ax_fact", "ax_pq", "ax_qr")
    assert result.wall_seconds >= 0


def test_prove_renames_apart_shared_variable_names():
    axioms = [
        ("ax_swap", _parse("(forall (?X ?Y) (=> (p ?X ?Y) (q ?Y ?X)))")),
        ("ax_fact", _parse("(p a b)")),
    ]
    assert prove(axioms, _parse("(q b a)")).szs is SzsStatus.THEOREM
    assert prove(axioms, _parse("(q a b)")).szs is SzsStatus.GAVE_UP


def test_prove_through_equality():
    axioms = [
        ("ax_same", _parse("(equal a b)")),
        ("ax_fact", _parse("(p a)")),
    ]
    result = prove(axioms, _parse("(p b)"))
    assert result.szs is SzsStatus.THEOREM
    assert result.used_axioms == ("ax_fact", "ax_same")


def test_prove_gives_up_on_exhausted_search():
    result = prove([("ax", _parse("(p a)"))], _parse("(p b)"))
    assert result.szs is SzsStatus.GAVE_UP
    assert result.used_axioms == ()


def _growth_axioms():
    return [
        ("ax_seed", _parse("(p a)")),
        ("ax_grow", _parse("(forall (?X) (=> (p ?X) (p (f ?X))))")),
    ]


def test_prove_times_out_on_growing_search():
    result = prove(_growth_axioms(), _parse("(q b)"), limit_seconds=0.2)
    assert result.szs is SzsStatus.TIMEOUT
    assert result.used_axioms == ()


def test_prove_clause_cap_means_gave_up():
    result = prove(_growth_axioms(), _parse("(q b)"), limit_seconds=60, max_clauses=40)
    assert result.szs is SzsStatus.GAVE_UP


def test_prove_tautologies_from_no_axioms():
    # equality is excluded: congruence over nested function terms can send
    # the saturation off into term-growing territory, which is not what
    # this property is about
    pool = [
        f
        for f in genformulas.formulas(60, seed=41, depth=2, quantifiers=False)
        if "(equal " not in kif.print_kif(f)
    ]
    assert len(pool) >= 25
    for f in pool[:25]:
        conjecture = Or((f, Not(f)))
        result = prove([], conjecture, limit_seconds=30, max_literals=40,
                       max_clauses=20000)
        assert result.szs is SzsStatus.THEOREM, kif.print_kif(conjecture)
        assert result.used_axioms == ()


# --------------------------------------------------------------------------
# ground problems against the oracle
#
# On ground, equality-free input the saturation is complete, so giving up
# by exhaustion is a real non-entailment verdict and both directions can
# be checked against the grounding oracle.  The signature is kept tiny
# (six ground atoms) so exhaustion happens well inside the clause cap and
# a GaveUp can never mean "cap tripped".

SMALL_PREDICATES = (("p", 1), ("q", 2))
SMALL_CONSTANTS = ("a", "b")


def _small_atom(rng):
    name, arity = rng.choice(SMALL_PREDICATES)
    return Atom(name, tuple(Constant(rng.choice(SMALL_CONSTANTS)) for _ in range(arity)))


def _small_formula(rng, depth):
    if depth <= 0:
        return _small_atom(rng)
    kind = rng.choice(["atom", "not", "and", "or", "implies", "iff"])
    if kind == "atom":
        return _small_atom(rng)
    if kind == "not":
        return Not(_small_formula(rng, depth - 1))
    if kind in ("and", "or"):
        cls = And if kind == "and" else Or
        return cls(tuple(_small_formula(rng, depth - 1) for _ in range(rng.randint(2, 3))))
    if kind == "implies":
        return Implies(_small_formula(rng, depth - 1), _small_formula(rng, depth - 1))
    return Iff(_small_formula(rng, depth - 1), _small_formula(rng, depth - 1))


def _ground_case(rng: random.Random, i: int):
    axioms = [(f"ax{j}", _small_formula(rng, 2)) for j in range(4)]
    conjecture = _small_atom(rng)
    if i % 2 == 0:
        axioms.append(("ax_goal", conjecture))
    return axioms, conjecture


def test_ground_problems_match_oracle():
    rng = random.Random(5)
    universe = [Constant(c) for c in SMALL_CONSTANTS]
    theorems = gaveups = 0
    for i in range(30):
        axioms, conjecture = _ground_case(rng, i)
        result = prove(axioms, conjecture, limit_seconds=60,
                       max_literals=100, max_clauses=100000)
        entailed = oracles.ground_unsat(
            [f for _, f in axioms] + [Not(conjecture)], universe
        )
        assert result.szs in (SzsStatus.THEOREM, SzsStatus.GAVE_UP)
        if result.szs is SzsStatus.THEOREM:
            theorems += 1
            assert entailed, f"case {i}: proved a non-theorem"
        else:
            gaveups += 1
            assert not entailed, f"case {i}: missed an entailment"
    assert theorems >= 5
    assert gaveups >= 5
