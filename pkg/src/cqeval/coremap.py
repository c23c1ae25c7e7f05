"""Rewriting synset mappings onto the core vocabulary.

Mapping files tie synsets to terms from the full ontology; evaluation
runs against a trimmed core.  Each mapped term is therefore walked up the
taxonomy until a core term is hit.  The walk direction depends on what
kind of thing the term is: classes climb subclass, relations climb
subrelation, attributes climb subAttribute, and instances take one
instance edge before climbing subclass.  Kinds are tried in that fixed
order and the first that reaches core wins; when several would, the
entry carries a warning so the ambiguity is visible.

Climbing weakens an equivalence: a synset equivalent to a dropped term
is merely subsumed by that term's ancestor.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ontology import OntologyIndex
from .wordnet import MappingEntry, MappingRelation, SynsetId

KINDS = ("class", "relation", "attribute", "instance")


def downgrade(relation: MappingRelation, steps: int) -> MappingRelation:
    """Weaken a mapping relation after climbing ``steps`` taxonomy edges."""
    if steps < 1:
        raise ValueError("downgrade needs at least one step")
    if relation is MappingRelation.EQUIVALENCE:
        return MappingRelation.SUBSUMPTION
    if relation is MappingRelation.NOT_EQUIVALENCE:
        return MappingRelation.NOT_SUBSUMPTION
    return relation


@dataclass(frozen=True)
class PropagatedEntry:
    synset: SynsetId
    term: str
    relation: MappingRelation
    origin_term: str
    depth: int


@dataclass
class PropagationResult:
    entries: list
    dropped: list
    warnings: list


def _bfs_to_core(start: str, up: dict, vocabulary: frozenset):
    """Nearest core ancestor strictly above ``start``: minimum depth,
    lexicographic tie-break within a depth level."""
    seen = {start}
    frontier = [start]
    depth = 0
    while frontier:
        depth += 1
        layer: set = set()
        for node in frontier:
            for parent in up.get(node, ()):
                if parent not in seen:
                    layer.add(parent)
        hits = sorted(t for t in layer if t in vocabulary)
        if hits:
            return hits[0], depth
        seen |= layer
        frontier = sorted(layer)
    return None


def _via_instance(start: str, idx: OntologyIndex):
    """One instance edge, then the subclass chain."""
    parents = idx.up_instance.get(start, ())
    if not parents:
        return None
    hits = sorted(p for p in parents if p in idx.vocabulary)
    if hits:
        return hits[0], 1
    seen = set(parents)
    frontier = sorted(parents)
    depth = 1
    while frontier:
        depth += 1
        layer: set = set()
        for node in frontier:
            for parent in idx.up_subclass.get(node, ()):
                if parent not in seen:
                    layer.add(parent)
        hits = sorted(t for t in layer if t in idx.vocabulary)
        if hits:
            return hits[0], depth
        seen |= layer
        frontier = sorted(layer)
    return None


def _candidates(term: str, idx: OntologyIndex):
    """(kind, core term, depth) for every kind that reaches core."""
    found = []
    for kind, result in (
        ("class", _bfs_to_core(term, idx.up_subclass, idx.vocabulary)),
        ("relation", _bfs_to_core(term, idx.up_subrelation, idx.vocabulary)),
        ("attribute", _bfs_to_core(term, idx.up_subattribute, idx.vocabulary)),
        ("instance", _via_instance(term, idx)),
    ):
        if result is not None:
            found.append((kind, result[0], result[1]))
    return found


def propagate_to_core(entries, idx: OntologyIndex) -> PropagationResult:
    """Rewrite every mapping entry onto the core vocabulary.

    Core terms pass through at depth zero with their relation intact, so
    the operation is idempotent.  Entries whose term reaches no core
    ancestor are dropped with a reason.
    """
    out: list = []
    dropped: list = []
    warnings: list = []
    for entry in entries:
        if entry.term in idx.vocabulary:
            out.append(PropagatedEntry(entry.synset, entry.term, entry.relation, entry.term, 0))
            continue
        found = _candidates(entry.term, idx)
        if not found:
            dropped.append((entry, "no_core_ancestor"))
            continue
        if len(found) > 1:
            kinds = ", ".join(k for k, _, _ in found)
            warnings.append(
                f"{entry.term}: reaches core as {kinds}; kept the first"
            )
        _, core_term, depth = found[0]
        out.append(
            PropagatedEntry(
                entry.synset,
                core_term,
                downgrade(entry.relation, depth),
                entry.term,
                depth,
            )
        )
    return PropagationResult(out, dropped, warnings)


def as_mapping_entries(result: PropagationResult) -> list:
    """Propagated entries viewed as plain mapping entries (for re-runs)."""
    return [MappingEntry(p.synset, p.term, p.relation) for p in result.entries]
