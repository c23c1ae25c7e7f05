"""Readers for WordNet database files and their ontology mapping.

Four file families are understood:

* ``data.{noun,verb,adj,adv}``: synset records, from which words, glosses
  and antonym pointers are taken;
* mapping files: the same records re-annotated with ``&%Term=`` style
  tags tying a synset to an ontology term;
* ``index.sense``: sense keys to synset offsets, needed to resolve the
  morphosemantic links;
* morphosemantic link tables (TSV or CSV): verb sense, relation name,
  noun sense.

Everything returns plain frozen records; no global state, no lexicon
singletons.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum


class WordNetError(Exception):
    pass


class DataFormatError(WordNetError):
    def __init__(self, line_no: int, reason: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {reason}")


class UnknownSuffix(WordNetError):
    def __init__(self, line_no: int, suffix: str, term: str):
        self.suffix = suffix
        self.term = term
        super().__init__(f"line {line_no}: mapping suffix {suffix!r} on {term!r} not enabled")


class DuplicateKey(WordNetError):
    pass


class UnresolvedSenseKey(WordNetError):
    pass


class UnknownMorphRelation(WordNetError):
    pass


class Pos(Enum):
    NOUN = "n"
    VERB = "v"
    ADJ = "a"
    ADV = "r"

    def __lt__(self, other):
        if isinstance(other, Pos):
            return self.value < other.value
        return NotImplemented


_SS_TYPE = {"n": Pos.NOUN, "v": Pos.VERB, "a": Pos.ADJ, "s": Pos.ADJ, "r": Pos.ADV}
_SENSE_POS = {"1": Pos.NOUN, "2": Pos.VERB, "3": Pos.ADJ, "4": Pos.ADV, "5": Pos.ADJ}

_OFFSET_RE = re.compile(r"^\d{8}$")


@dataclass(frozen=True, order=True)
class SynsetId:
    pos: Pos
    offset: str

    def __post_init__(self):
        if not _OFFSET_RE.match(self.offset):
            raise ValueError(f"synset offset must be 8 digits, got {self.offset!r}")

    @property
    def key(self) -> str:
        return f"{self.pos.value}:{self.offset}"

    def __str__(self):
        return self.key

    @classmethod
    def from_key(cls, key: str) -> "SynsetId":
        pos_value, _, offset = key.partition(":")
        return cls(Pos(pos_value), offset)


@dataclass(frozen=True)
class Synset:
    id: SynsetId
    words: tuple[str, ...]
    gloss: str = ""

    def __post_init__(self):
        object.__setattr__(self, "words", tuple(self.words))


@dataclass
class WordNetCorpus:
    synsets: dict
    antonym_pairs: frozenset

    def merged_with(self, other: "WordNetCorpus") -> "WordNetCorpus":
        synsets = dict(self.synsets)
        synsets.update(other.synsets)
        return WordNetCorpus(synsets, self.antonym_pairs | other.antonym_pairs)


def _antonym_pair(a: SynsetId, b: SynsetId):
    return (a, b) if a <= b else (b, a)


def parse_wn_data(text: str, pos: Pos) -> WordNetCorpus:
    """Parse one ``data.<pos>`` file.

    Header lines (leading double space) are skipped.  Antonym pointers are
    lemma-level in the source; they collapse here to unordered synset
    pairs.
    """
    synsets: dict = {}
    antonyms: set = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.startswith("  "):
            continue
        body, _, gloss = raw.partition("|")
        fields = body.split()
        if len(fields) < 4:
            raise DataFormatError(line_no, "truncated synset record")
        offset, _lex_filenum, ss_type = fields[0], fields[1], fields[2]
        if ss_type not in _SS_TYPE:
            raise DataFormatError(line_no, f"unknown ss_type {ss_type!r}")
        sid = SynsetId(_SS_TYPE[ss_type], offset)
        try:
            w_cnt = int(fields[3], 16)
        except ValueError:
            raise DataFormatError(line_no, f"bad word count {fields[3]!r}") from None
        i = 4
        words = []
        for _ in range(w_cnt):
            if i + 1 >= len(fields):
                raise DataFormatError(line_no, "word list shorter than its count")
            words.append(fields[i])
            i += 2  # word then lex_id
        if i >= len(fields):
            raise DataFormatError(line_no, "missing pointer count")
        try:
            p_cnt = int(fields[i], 10)
        except ValueError:
            raise DataFormatError(line_no, f"bad pointer count {fields[i]!r}") from None
        i += 1
        for _ in range(p_cnt):
            if i + 3 >= len(fields):
                raise DataFormatError(line_no, "pointer list shorter than its count")
            symbol, tgt_offset, tgt_pos = fields[i], fields[i + 1], fields[i + 2]
            i += 4  # symbol, offset, pos, source/target
            if symbol == "!":
                if tgt_pos not in _SS_TYPE:
                    raise DataFormatError(line_no, f"bad pointer pos {tgt_pos!r}")
                antonyms.add(_antonym_pair(sid, SynsetId(_SS_TYPE[tgt_pos], tgt_offset)))
        # verb frames and anything else after the pointers are ignored
        if sid in synsets:
            raise DataFormatError(line_no, f"synset {sid} defined twice")
        synsets[sid] = Synset(sid, tuple(words), gloss.strip())
    return WordNetCorpus(synsets, frozenset(antonyms))


# --------------------------------------------------------------------------
# ontology mapping annotations


class MappingRelation(Enum):
    EQUIVALENCE = "="
    SUBSUMPTION = "+"
    INSTANCE = "@"
    NOT_EQUIVALENCE = ":"
    NOT_SUBSUMPTION = "["


_SUFFIX_TO_RELATION = {r.value: r for r in MappingRelation}

# Complement suffixes exist in the wild but carry no positive content for
# question generation, so they are opt-in.
DEFAULT_SUFFIXES = frozenset({"=", "+", "@"})
ALL_SUFFIXES = frozenset(_SUFFIX_TO_RELATION)


@dataclass(frozen=True)
class MappingEntry:
    synset: SynsetId
    term: str
    relation: MappingRelation


@dataclass
class MappingParse:
    entries: list
    skipped: int
    warnings: list


_ANNOTATION_RE = re.compile(r"&%(\S+)")


def parse_mapping_file(
    text: str,
    pos: Pos,
    suffixes: frozenset = DEFAULT_SUFFIXES,
) -> MappingParse:
    """Extract ``&%Term<suffix>`` annotations from a mapping file.

    The first annotation on a line is the synset's mapping; later ones are
    reported as warnings.  Lines without any annotation count as skipped.
    A suffix outside ``suffixes`` raises, since silently narrowing the
    mapping would skew every downstream count.
    """
    entries: list = []
    warnings: list = []
    skipped = 0
    for line_no, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.startswith("  "):
            continue
        fields = raw.split()
        if len(fields) < 3:
            continue
        offset, ss_type = fields[0], fields[2]
        if not _OFFSET_RE.match(offset) or ss_type not in _SS_TYPE:
            raise DataFormatError(line_no, "mapping line does not start with a synset record")
        sid = SynsetId(_SS_TYPE[ss_type], offset)
        tokens = _ANNOTATION_RE.findall(raw)
        if not tokens:
            skipped += 1
            continue
        first = tokens[0]
        term, suffix = first[:-1], first[-1]
        if suffix not in _SUFFIX_TO_RELATION:
            raise DataFormatError(line_no, f"annotation {first!r} has no relation suffix")
        if suffix not in suffixes:
            raise UnknownSuffix(line_no, suffix, term)
        if not term:
            raise DataFormatError(line_no, "empty term in annotation")
        entries.append(MappingEntry(sid, term, _SUFFIX_TO_RELATION[suffix]))
        for extra in tokens[1:]:
            warnings.append(f"line {line_no}: extra annotation &%{extra} ignored")
    return MappingParse(entries, skipped, warnings)


# --------------------------------------------------------------------------
# sense index and morphosemantic links


def parse_sense_index(text: str) -> dict:
    """``index.sense`` lines: sense_key synset_offset sense_number tag_cnt."""
    index: dict = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        fields = raw.split()
        if len(fields) < 2:
            raise DataFormatError(line_no, "truncated sense index line")
        key, offset = fields[0], fields[1]
        m = re.search(r"%(\d)", key)
        if not m or m.group(1) not in _SENSE_POS:
            raise DataFormatError(line_no, f"sense key {key!r} has no part of speech")
        if key in index:
            raise DuplicateKey(f"line {line_no}: sense key {key!r} appears twice")
        index[key] = SynsetId(_SENSE_POS[m.group(1)], offset)
    return index


KNOWN_MORPH_RELATIONS = frozenset({
    "agent", "body-part", "by-means-of", "destination", "event",
    "instrument", "location", "material", "property", "result",
    "state", "undergoer", "uses", "vehicle",
})

SELECTED_MORPH_RELATIONS = frozenset({"agent", "result", "instrument", "event"})


@dataclass(frozen=True)
class MorphLink:
    verb: SynsetId
    relation: str
    noun: SynsetId

    def __post_init__(self):
        if self.verb.pos is not Pos.VERB:
            raise ValueError(f"morphosemantic source {self.verb} is not a verb synset")
        if self.noun.pos is not Pos.NOUN:
            raise ValueError(f"morphosemantic target {self.noun} is not a noun synset")


def parse_morphosemantic(text: str, sense_index: dict) -> list:
    """Read a verb-noun link table.  Tab or comma separated; an optional
    header row is recognized by its first field not being a sense key."""
    links: list = []
    lines = text.splitlines()
    for line_no, raw in enumerate(lines, start=1):
        if not raw.strip():
            continue
        sep = "\t" if "\t" in raw else ","
        fields = [f.strip() for f in raw.split(sep)]
        if line_no == 1 and fields and "%" not in fields[0]:
            continue
        if len(fields) < 3:
            raise DataFormatError(line_no, "link row needs verb, relation, noun")
        verb_key, relation, noun_key = fields[0], fields[1].lower(), fields[2]
        if relation not in KNOWN_MORPH_RELATIONS:
            raise UnknownMorphRelation(f"line {line_no}: {relation!r}")
        for key in (verb_key, noun_key):
            if key not in sense_index:
                raise UnresolvedSenseKey(f"line {line_no}: {key!r} not in the sense index")
        links.append(MorphLink(sense_index[verb_key], relation, sense_index[noun_key]))
    return links


def select_links(links, relations: frozenset = SELECTED_MORPH_RELATIONS) -> list:
    return [ln for ln in links if ln.relation in relations]
