"""Ontology loading, merging, ablation and the structural index."""

import pytest

from conftest import ONT
from cqeval import kif, ontology
from cqeval.ontology import (
    CycleDetected,
    DuplicateLabel,
    OntologyError,
    build_index,
    load_kif_ontology,
    load_ontology,
    load_tptp_ontology,
    merge_ontologies,
)


def test_load_kif_fixture_core():
    core = load_kif_ontology(ONT / "core.kif")
    assert core.name == "core"
    assert core.source_format == "kif"
    ax = core.axiom("ax_subclass_instances")
    assert kif.print_kif(ax.formula) == (
        "(=> (and (subclass ?SUB ?SUPER) (instance ?X ?SUB)) (instance ?X ?SUPER))"
    )
    assert ax.text == kif.print_kif(ax.formula)
    assert {"instance", "subclass", "Entity", "Process", "Awake"} <= core.vocabulary
    assert ("subclass", "Speaking", "Vocalizing") in core.structural_facts


def test_load_kif_unlabeled_forms_get_sequential_names(tmp_path):
    p = tmp_path / "three.kif"
    p.write_text("(p a)\n;; label: ax_named\n(q b)\n(r c)\n")
    ont = load_kif_ontology(p)
    assert [ax.label for ax in ont.axioms] == ["ax1", "ax_named", "ax3"]


def test_load_kif_duplicate_label_rejected(tmp_path):
    p = tmp_path / "dup.kif"
    p.write_text(";; label: ax_x\n(p a)\n;; label: ax_x\n(q b)\n")
    with pytest.raises(DuplicateLabel):
        load_kif_ontology(p)


def test_load_tptp_axiom_file(tmp_path):
    p = tmp_path / "axioms.ax"
    p.write_text(
        "fof(ax_one, axiom, s__p(s__a)).\n"
        "fof(ax_two, axiom, ! [VX] : (s__p(VX) => s__q(VX))).\n"
    )
    ont = load_tptp_ontology(p)
    assert [ax.label for ax in ont.axioms] == ["ax_one", "ax_two"]
    assert kif.print_kif(ont.axioms[0].formula) == "(p a)"
    assert ont.source_format == "tptp"


def test_load_tptp_rejects_conjecture(tmp_path):
    p = tmp_path / "bad.ax"
    p.write_text("fof(c, conjecture, s__p(s__a)).\n")
    with pytest.raises(OntologyError, match="conjecture"):
        load_tptp_ontology(p)


def test_load_ontology_dispatches_on_suffix(tmp_path):
    k = tmp_path / "one.kif"
    k.write_text("(p a)\n")
    t = tmp_path / "one.ax"
    t.write_text("fof(ax_a, axiom, s__p(s__a)).\n")
    assert load_ontology(k).source_format == "kif"
    assert load_ontology(t).source_format == "tptp"


def test_without_removes_axiom_and_refreshes_facts():
    dead = load_kif_ontology(ONT / "deadliving.kif")
    ablated = dead.without("ax_dead_unconscious")
    assert len(ablated.axioms) == len(dead.axioms) - 1
    with pytest.raises(KeyError):
        ablated.axiom("ax_dead_unconscious")
    assert ("subAttribute", "Dead", "Unconscious") in dead.structural_facts
    assert ("subAttribute", "Dead", "Unconscious") not in ablated.structural_facts
    with pytest.raises(KeyError):
        dead.without("ax_not_there")
    # the original is untouched
    assert dead.axiom("ax_dead_unconscious")


def test_merge_ontologies_unions_vocabulary():
    core = load_kif_ontology(ONT / "core.kif")
    extra = load_kif_ontology(ONT / "domain.kif")
    merged = merge_ontologies("joint", core, extra)
    assert len(merged.axioms) == len(core.axioms) + len(extra.axioms)
    assert "CookingFat" in merged.vocabulary
    with pytest.raises(DuplicateLabel):
        merge_ontologies("twice", core, core)


# --------------------------------------------------------------------------
# structural index


def test_build_index_vocabulary_is_core_only(core_index):
    assert "Cooking" in core_index.vocabulary
    # Frying appears only in the extension, so it contributes an edge but
    # is not itself a core term
    assert "Frying" not in core_index.vocabulary
    assert ("Frying", "Cooking") in core_index.subclass_edges


def test_index_closure_is_reflexive_transitive(core_index):
    anc = core_index.closure("Speaking", "subclass")
    assert {"Speaking", "Vocalizing", "Process", "Physical", "Entity"} <= anc
    assert "Object" not in anc


def test_index_up_accessor(core_index):
    assert core_index.up("subclass")["Speaking"] == ("Vocalizing",)
    assert core_index.up("instance")["Awake"] == ("ConsciousnessAttribute",)
    with pytest.raises(KeyError):
        core_index.up("sibling")


def test_is_attribute(core_index):
    assert core_index.is_attribute("Awake")
    assert core_index.is_attribute("Asleep")
    assert not core_index.is_attribute("Melting")
    assert not core_index.is_attribute("NeverMentioned")


def test_build_index_detects_subclass_cycle(tmp_path):
    p = tmp_path / "loop.kif"
    p.write_text("(subclass A B)\n(subclass B C)\n(subclass C A)\n")
    ont = load_kif_ontology(p)
    with pytest.raises(CycleDetected) as e:
        build_index(ont)
    assert e.value.relation == "subclass"


def test_build_index_allows_instance_edges_without_cycle_check(tmp_path):
    # only the taxonomy relations are checked for cycles
    p = tmp_path / "inst.kif"
    p.write_text("(instance a b)\n(instance b a)\n")
    idx = build_index(load_kif_ontology(p))
    assert ("a", "b") in idx.instance_edges
