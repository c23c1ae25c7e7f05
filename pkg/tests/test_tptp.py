"""TPTP rendering, problem files and SZS output handling."""

from pathlib import Path

import pytest

import genformulas
from cqeval import kif, ontology, tptp
from cqeval.cqgen import CompetencyQuestion, Pattern, Polarity
from cqeval.tptp import (
    MangleCollision,
    SzsStatus,
    TptpError,
    demangle_symbol,
    demangle_variable,
    mangle_symbol,
    mangle_variable,
    parse_reported_seconds,
    parse_szs,
    parse_unit,
    read_problem,
    render_fof,
    render_szs_output,
    render_unit,
    write_problem,
)


def test_mangling():
    assert mangle_symbol("Boy") == "s__Boy"
    assert mangle_symbol("part-of") == "s__part_of"
    assert mangle_variable("OBJ") == "VOBJ"
    assert demangle_symbol("s__Boy") == "Boy"
    assert demangle_symbol("unprefixed") == "unprefixed"
    assert demangle_variable("VOBJ") == "OBJ"


def test_mangle_collision_detected():
    table = {}
    f = kif.parse_kif("(p a-b a_b)")[0]
    with pytest.raises(MangleCollision):
        render_unit(f, table)


def test_render_unit_shapes():
    cases = {
        "(instance a B)": "s__instance(s__a, s__B)",
        "(and (p) (q) (r))": "(s__p & s__q & s__r)",
        "(or (p) (not (q)))": "(s__p | ~ s__q)",
        "(<=> (p) (q))": "(s__p <=> s__q)",
        "(equal (f a) b)": "(s__f(s__a) = s__b)",
        "(exists (?X ?Y) (p ?X ?Y))": "? [VX, VY] : s__p(VX, VY)",
    }
    for src, want in cases.items():
        f = kif.parse_kif(src)[0]
        assert render_unit(f, {}) == want


def test_render_fof_pinned_axiom():
    f = kif.parse_kif("(=> (instance ?OBJ Boy) (not (instance ?OBJ DomesticAnimal)))")[0]
    assert render_fof("ax1", "axiom", f) == (
        "fof(ax1, axiom, ! [VOBJ] : "
        "(s__instance(VOBJ, s__Boy) => ~ s__instance(VOBJ, s__DomesticAnimal)))."
    )


def test_render_fof_pinned_conjecture():
    f = kif.parse_kif("(not (equal Death Killing))")[0]
    assert render_fof("cq_event1_death_killing", "conjecture", f) == (
        "fof(cq_event1_death_killing, conjecture, ~ (s__Death = s__Killing))."
    )


def test_render_fof_quotes_awkward_names():
    f = kif.parse_kif("(p a)")[0]
    assert render_fof("9lives", "axiom", f).startswith("fof('9lives', axiom,")


def test_unit_round_trip_random():
    for i, f in enumerate(genformulas.formulas(200, seed=31)):
        rendered = render_fof(f"u{i}", "axiom", f)
        name, role, g = parse_unit(rendered, 1)
        assert (name, role) == (f"u{i}", "axiom")
        assert kif.alpha_equal(g, kif.universal_closure(f))


def _mini_ontology():
    axioms = (
        ontology.OntologyAxiom("ax_a", kif.parse_kif("(p a)")[0], "(p a)"),
        ontology.OntologyAxiom("ax_b", kif.parse_kif("(=> (p ?X) (q ?X))")[0],
                               "(=> (p ?X) (q ?X))"),
    )
    return ontology.Ontology(
        name="mini",
        source_format="kif",
        axioms=axioms,
        structural_facts=(),
        vocabulary=frozenset({"p", "q", "a"}),
    )


def _cq(cq_id="cq_sample_one", formula="(q a)"):
    return CompetencyQuestion(
        id=cq_id,
        polarity=Polarity.TRUTH,
        pattern=Pattern.ANTONYM_CLASS,
        formula=kif.parse_kif(formula)[0],
    )


def test_write_problem_inline(tmp_path):
    pf = write_problem(_cq(), _mini_ontology(), tmp_path)
    text = pf.path.read_text()
    assert pf.path.name == "cq_sample_one.p"
    assert text.splitlines()[:3] == [
        "% cq: cq_sample_one",
        "% pattern: antclass",
        "% polarity: truth",
    ]
    axioms, (conj_name, conj) = read_problem(pf.path)
    assert [n for n, _ in axioms] == ["ax_a", "ax_b"]
    assert conj_name == "cq_sample_one"
    assert kif.print_kif(conj) == "(q a)"


def test_write_problem_include_mode(tmp_path):
    ax_path = tmp_path / "axioms.ax"
    tptp.write_axiom_file(_mini_ontology(), ax_path)
    pf = write_problem(_cq(), _mini_ontology(), tmp_path, mode="include",
                       axiom_file=Path("axioms.ax"))
    assert "include('axioms.ax')." in pf.path.read_text()
    axioms, (conj_name, _) = read_problem(pf.path)
    assert len(axioms) == 2
    assert conj_name == "cq_sample_one"


def test_write_problem_renames_colliding_conjecture(tmp_path):
    warnings = []
    pf = write_problem(_cq(cq_id="ax_a"), _mini_ontology(), tmp_path,
                       warn=warnings.append)
    assert pf.conjecture_name == "ax_a_conj"
    assert warnings and "collides" in warnings[0]
    axioms, (conj_name, _) = read_problem(pf.path)
    assert conj_name == "ax_a_conj"
    assert [n for n, _ in axioms] == ["ax_a", "ax_b"]


def test_read_problem_rejects_missing_conjecture(tmp_path):
    p = tmp_path / "bad.p"
    p.write_text("fof(ax_a, axiom, s__p(s__a)).\n")
    with pytest.raises(TptpError, match="no conjecture"):
        read_problem(p)


def test_read_problem_rejects_cnf(tmp_path):
    p = tmp_path / "bad.p"
    p.write_text("cnf(c1, axiom, s__p(s__a)).\nfof(c, conjecture, s__p(s__a)).\n")
    with pytest.raises(TptpError, match="cnf"):
        read_problem(p)


def test_read_problem_rejects_second_conjecture(tmp_path):
    p = tmp_path / "bad.p"
    p.write_text(
        "fof(c1, conjecture, s__p(s__a)).\nfof(c2, conjecture, s__q(s__a)).\n"
    )
    with pytest.raises(TptpError, match="second conjecture"):
        read_problem(p)


# --------------------------------------------------------------------------
# SZS parsing


def test_parse_szs_plain_statuses():
    assert parse_szs("% SZS status Theorem for x.p\n") == (SzsStatus.THEOREM, ())
    assert parse_szs("% SZS status Unsatisfiable for x.p\n")[0] is SzsStatus.THEOREM
    assert parse_szs("% SZS status CounterSatisfiable\n")[0] is SzsStatus.COUNTER_SATISFIABLE
    assert parse_szs("% SZS status MemoryOut\n")[0] is SzsStatus.RESOURCE_OUT
    assert parse_szs("% SZS status SomethingNew\n")[0] is SzsStatus.GAVE_UP
    assert parse_szs("no status line at all\n") == (SzsStatus.NO_STATUS, ())


def test_parse_szs_used_axioms_from_proof_block():
    out = "\n".join(
        [
            "% SZS status Theorem for p",
            "% SZS output start CNFRefutation for p",
            "fof(ax_b, axiom, stuff, file('/x/p.p', ax_b)).",
            "fof(ax_a, axiom, other).",
            "fof(ax_a, axiom, repeated).",
            "cnf(c12, plain, thing, inference(resolution, [], [c3, c4])).",
            "% SZS output end CNFRefutation for p",
        ]
    )
    status, used = parse_szs(out)
    assert status is SzsStatus.THEOREM
    assert used == ("ax_b", "ax_a")


def test_parse_szs_ignores_block_without_theorem():
    out = "\n".join(
        [
            "% SZS status GaveUp for p",
            "% SZS output start Assurance",
            "fof(ax_a, axiom, x).",
            "% SZS output end Assurance",
        ]
    )
    assert parse_szs(out) == (SzsStatus.GAVE_UP, ())


def test_szs_render_parse_round_trip():
    for status in SzsStatus:
        used = ("ax_one", "ax_two") if status is SzsStatus.THEOREM else ()
        text = render_szs_output(status, used, problem="prob.p")
        back, back_used = parse_szs(text)
        assert back is status
        assert back_used == used


def test_parse_reported_seconds():
    assert parse_reported_seconds("% Time elapsed: 1.234 s\n") == 1.234
    assert parse_reported_seconds("# Total time : 0.020 s\n") == 0.020
    assert parse_reported_seconds("nothing here\n") is None
