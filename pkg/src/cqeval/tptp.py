"""TPTP FOF problem emission and result handling.

Handles three jobs around external refutation provers:

* render formulas to TPTP first-order form, mangling symbols so that
  ontology names survive TPTP's lexical rules;
* read TPTP problem files back (enough of the FOF grammar for our own
  output plus include directives), so the bundled prover can consume
  the same files external provers do;
* scan prover output for SZS status and used-axiom lines.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import TYPE_CHECKING

from . import kif
from .kif import (
    And, Atom, Constant, Equal, Exists, Forall, Formula, Function, Iff,
    Implies, Not, Or, Term, Variable,
)

if TYPE_CHECKING:  # pragma: no cover
    from .ontology import Ontology


class TptpError(Exception):
    pass


class MangleCollision(TptpError):
    """Two distinct source symbols mangled to the same TPTP name."""

    def __init__(self, mangled: str, first: str, second: str):
        self.mangled = mangled
        self.first = first
        self.second = second
        super().__init__(f"{first!r} and {second!r} both mangle to {mangled!r}")


_SAFE = re.compile(r"[^A-Za-z0-9_]")


def mangle_symbol(name: str) -> str:
    """Prefixed, sanitized TPTP functor for an ontology symbol."""
    return "s__" + _SAFE.sub("_", name)


def mangle_variable(name: str) -> str:
    """TPTP variable for a KIF variable name (without the ``?``)."""
    return "V" + _SAFE.sub("_", name)


def demangle_symbol(name: str) -> str:
    return name[3:] if name.startswith("s__") else name


def demangle_variable(name: str) -> str:
    return name[1:] if name.startswith("V") and len(name) > 1 else name


# --------------------------------------------------------------------------
# rendering


def _render_term(t: Term, table: dict) -> str:
    if isinstance(t, Variable):
        return mangle_variable(t.name)
    if isinstance(t, Constant):
        return _mangled(t.name, table)
    if isinstance(t, Function):
        head = _mangled(t.name, table)
        if not t.args:
            return head
        return head + "(" + ", ".join(_render_term(a, table) for a in t.args) + ")"
    raise TypeError(f"not a term: {t!r}")


def _mangled(name: str, table: dict) -> str:
    m = mangle_symbol(name)
    prior = table.setdefault(m, name)
    if prior != name:
        raise MangleCollision(m, prior, name)
    return m


def render_unit(f: Formula, table: dict | None = None) -> str:
    """Render one formula as a TPTP FOF expression.

    Atoms are bare, everything binary or n-ary gets parentheses, negation
    binds tight.  ``table`` accumulates the mangling map so collisions
    across a whole problem are caught; pass the same dict for every unit
    of one problem.
    """
    if table is None:
        table = {}
    if isinstance(f, Atom):
        head = _mangled(f.predicate, table)
        if not f.args:
            return head
        return head + "(" + ", ".join(_render_term(a, table) for a in f.args) + ")"
    if isinstance(f, Equal):
        return f"({_render_term(f.left, table)} = {_render_term(f.right, table)})"
    if isinstance(f, Not):
        return "~ " + render_unit(f.body, table)
    if isinstance(f, And):
        return "(" + " & ".join(render_unit(p, table) for p in f.parts) + ")"
    if isinstance(f, Or):
        return "(" + " | ".join(render_unit(p, table) for p in f.parts) + ")"
    if isinstance(f, Implies):
        return f"({render_unit(f.antecedent, table)} => {render_unit(f.consequent, table)})"
    if isinstance(f, Iff):
        return f"({render_unit(f.left, table)} <=> {render_unit(f.right, table)})"
    if isinstance(f, Forall):
        vs = ", ".join(mangle_variable(v) for v in f.variables)
        return f"! [{vs}] : " + render_unit(f.body, table)
    if isinstance(f, Exists):
        vs = ", ".join(mangle_variable(v) for v in f.variables)
        return f"? [{vs}] : " + render_unit(f.body, table)
    raise TypeError(f"not a formula: {f!r}")


_NAME_OK = re.compile(r"^[a-z][A-Za-z0-9_]*$")


def render_fof(name: str, role: str, f: Formula, table: dict | None = None) -> str:
    """One complete fof unit; free variables are closed universally first."""
    unit_name = name if _NAME_OK.match(name) else f"'{name}'"
    closed = kif.universal_closure(f)
    return f"fof({unit_name}, {role}, {render_unit(closed, table)})."


# --------------------------------------------------------------------------
# problem files


@dataclass
class ProblemFile:
    path: Path
    cq_id: str
    conjecture_name: str


def write_axiom_file(ontology: "Ontology", path: str | Path) -> Path:
    """Write every ontology axiom as fof(label, axiom, ...) units."""
    path = Path(path)
    table: dict = {}
    lines = [f"% axioms: {ontology.name}"]
    for ax in ontology.axioms:
        if ax.formula is None:
            lines.append(ax.text)  # opaque unit kept verbatim
        else:
            lines.append(render_fof(ax.label, "axiom", ax.formula, table))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def write_problem(
    cq,
    ontology: "Ontology",
    out_dir: str | Path,
    mode: str = "inline",
    axiom_file: str | Path | None = None,
    warn=None,
) -> ProblemFile:
    """Write ``<cq.id>.p`` containing the ontology and one conjecture.

    ``mode`` is ``inline`` (axioms copied into the problem) or ``include``
    (a TPTP include directive pointing at ``axiom_file``).  If an axiom
    label collides with the conjecture name the conjecture is renamed and
    ``warn`` is called with a message.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{cq.id}.p"
    table: dict = {}
    lines = [
        f"% cq: {cq.id}",
        f"% pattern: {cq.pattern.value}",
        f"% polarity: {cq.polarity.value}",
    ]
    axiom_names = set()
    if mode == "include":
        if axiom_file is None:
            raise ValueError("include mode needs an axiom_file")
        lines.append(f"include('{Path(axiom_file)}').")
        axiom_names.update(ax.label for ax in ontology.axioms)
    elif mode == "inline":
        for ax in ontology.axioms:
            axiom_names.add(ax.label)
            if ax.formula is None:
                lines.append(ax.text)
            else:
                lines.append(render_fof(ax.label, "axiom", ax.formula, table))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    conj_name = cq.id
    if conj_name in axiom_names:
        renamed = conj_name + "_conj"
        while renamed in axiom_names:
            renamed += "_"
        if warn is not None:
            warn(f"conjecture name {conj_name!r} collides with an axiom, renamed to {renamed!r}")
        conj_name = renamed
    lines.append(render_fof(conj_name, "conjecture", cq.formula, table))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return ProblemFile(path=path, cq_id=cq.id, conjecture_name=conj_name)


# --------------------------------------------------------------------------
# FOF parsing (own output + include resolution)


class TptpSyntaxError(TptpError):
    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


_MULTI = ("<~>", "<=>", "=>", "!=", "<=")


def _tok_fof(text: str):
    toks = []
    i, n, line = 0, len(text), 1
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            i += 1
        elif ch in " \t\r":
            i += 1
        elif ch == "%":
            while i < n and text[i] != "\n":
                i += 1
        elif ch == "'":
            j = text.find("'", i + 1)
            if j < 0:
                raise TptpSyntaxError(line, "unterminated quoted name")
            toks.append((text[i + 1 : j], line, True))
            i = j + 1
        else:
            matched = False
            for op in _MULTI:
                if text.startswith(op, i):
                    toks.append((op, line, False))
                    i += len(op)
                    matched = True
                    break
            if matched:
                continue
            if ch in "()[]:,.~&|!?=":
                toks.append((ch, line, False))
                i += 1
            elif ch.isalnum() or ch == "_":
                j = i
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                toks.append((text[i:j], line, False))
                i = j
            else:
                raise TptpSyntaxError(line, f"unexpected character {ch!r}")
    return toks


class _FofParser:
    """Recursive-descent parser for the FOF subset this package emits."""

    def __init__(self, toks):
        self.toks = toks
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, -1, False)

    def next(self):
        t = self.peek()
        self.i += 1
        return t

    def expect(self, text):
        t, line, _ = self.next()
        if t != text:
            raise TptpSyntaxError(line, f"expected {text!r}, found {t!r}")

    def formula(self) -> Formula:
        left = self.unitary()
        op, _, _ = self.peek()
        if op in ("&", "|"):
            parts = [left]
            join = op
            while self.peek()[0] == join:
                self.next()
                parts.append(self.unitary())
            if self.peek()[0] in ("&", "|"):
                raise TptpSyntaxError(self.peek()[1], "mixed & and | need parentheses")
            combined = And(tuple(parts)) if join == "&" else Or(tuple(parts))
            return combined
        if op == "=>":
            self.next()
            return Implies(left, self.unitary_or_binary())
        if op == "<=>":
            self.next()
            return Iff(left, self.unitary_or_binary())
        return left

    def unitary_or_binary(self) -> Formula:
        # right side of => / <=> in our emission is always unitary,
        # but accept a full formula for robustness
        return self.formula()

    def unitary(self) -> Formula:
        t, line, _ = self.peek()
        if t == "(":
            self.next()
            f = self.formula()
            self.expect(")")
            return f
        if t == "~":
            self.next()
            return Not(self.unitary())
        if t in ("!", "?"):
            self.next()
            self.expect("[")
            names = []
            while True:
                v, vline, _ = self.next()
                if v is None or not v[0].isupper():
                    raise TptpSyntaxError(vline, f"expected a variable, found {v!r}")
                names.append(demangle_variable(v))
                nxt, _, _ = self.next()
                if nxt == "]":
                    break
                if nxt != ",":
                    raise TptpSyntaxError(vline, f"expected ',' or ']', found {nxt!r}")
            self.expect(":")
            body = self.unitary()
            return (Forall if t == "!" else Exists)(tuple(names), body)
        return self.atomic()

    def atomic(self) -> Formula:
        left = self.term()
        op, _, _ = self.peek()
        if op == "=":
            self.next()
            return Equal(left, self.term())
        if op == "!=":
            self.next()
            return Not(Equal(left, self.term()))
        # a bare term in formula position is an atom
        if isinstance(left, Constant):
            return Atom(left.name)
        if isinstance(left, Function):
            return Atom(left.name, left.args)
        raise TptpSyntaxError(self.peek()[1], "a variable is not a formula")

    def term(self) -> Term:
        t, line, quoted = self.next()
        if t is None:
            raise TptpSyntaxError(line, "unexpected end of input")
        if not quoted and t and t[0].isupper():
            return Variable(demangle_variable(t))
        if not (quoted or t[0].isalnum() or t[0] == "_"):
            raise TptpSyntaxError(line, f"expected a term, found {t!r}")
        name = demangle_symbol(t)
        if self.peek()[0] == "(":
            self.next()
            args = [self.term()]
            while self.peek()[0] == ",":
                self.next()
                args.append(self.term())
            self.expect(")")
            return Function(name, tuple(args))
        return Constant(name)


_UNIT_RE = re.compile(r"\b(fof|cnf|tff)\s*\(", re.MULTILINE)


def _split_units(text: str):
    """Yield (kind, name, role, body_tokens_text, raw) for each annotated unit."""
    i = 0
    n = len(text)
    line = 1
    while i < n:
        m = _UNIT_RE.search(text, i)
        if not m:
            break
        line += text.count("\n", i, m.start())
        # walk to the matching close paren, respecting quotes and comments
        depth = 0
        j = m.end() - 1
        while j < n:
            ch = text[j]
            if ch == "%":
                j = text.find("\n", j)
                if j < 0:
                    j = n
                continue
            if ch == "'":
                j = text.find("'", j + 1)
                if j < 0:
                    raise TptpSyntaxError(line, "unterminated quoted name")
            elif ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
                if depth == 0:
                    break
            j += 1
        if depth != 0:
            raise TptpSyntaxError(line, "unclosed unit")
        raw = text[m.start() : j + 1]
        yield m.group(1), raw, line
        i = j + 1


def parse_unit(raw: str, line: int = 1):
    """Parse one fof(...) unit into (name, role, Formula)."""
    toks = _tok_fof(raw)
    p = _FofParser(toks)
    kw, kline, _ = p.next()
    if kw != "fof":
        raise TptpSyntaxError(kline, f"only fof units are parsed, found {kw!r}")
    p.expect("(")
    name, _, _ = p.next()
    p.expect(",")
    role, _, _ = p.next()
    p.expect(",")
    f = p.formula()
    # optional annotations: skip everything up to the matching close
    while p.peek()[0] not in (")", None):
        p.next()
    p.expect(")")
    return name, role, f


_INCLUDE_RE = re.compile(r"^\s*include\('([^']+)'\)\s*\.", re.MULTILINE)


def read_problem(path: str | Path):
    """Read a problem file: ([(name, formula), ...] axioms, (name, formula) conjecture).

    Includes are resolved relative to the file's directory.  cnf and tff
    units are rejected; ontology text passed through verbatim stays fof in
    this package's pipelines.
    """
    path = Path(path)
    axioms: list[tuple[str, Formula]] = []
    conjecture: tuple[str, Formula] | None = None

    def load(p: Path, depth: int = 0):
        nonlocal conjecture
        if depth > 8:
            raise TptpError(f"include chain too deep at {p}")
        text = p.read_text(encoding="utf-8")
        for inc in _INCLUDE_RE.finditer(text):
            inc_path = Path(inc.group(1))
            if not inc_path.is_absolute():
                inc_path = p.parent / inc_path
            load(inc_path, depth + 1)
        for kind, raw, line in _split_units(text):
            if kind != "fof":
                raise TptpError(f"{p}:{line}: cannot parse {kind} units")
            name, role, f = parse_unit(raw, line)
            if role == "conjecture":
                if conjecture is not None:
                    raise TptpError(f"{p}:{line}: second conjecture {name!r}")
                conjecture = (name, f)
            elif role in ("axiom", "hypothesis", "definition", "lemma"):
                axioms.append((name, f))
            else:
                raise TptpError(f"{p}:{line}: unsupported role {role!r}")

    load(path)
    if conjecture is None:
        raise TptpError(f"{path}: no conjecture unit")
    return axioms, conjecture


# --------------------------------------------------------------------------
# SZS status handling


class SzsStatus(Enum):
    THEOREM = "Theorem"
    COUNTER_SATISFIABLE = "CounterSatisfiable"
    SATISFIABLE = "Satisfiable"
    TIMEOUT = "Timeout"
    GAVE_UP = "GaveUp"
    RESOURCE_OUT = "ResourceOut"
    ERROR = "Error"
    NO_STATUS = "NoStatus"


_STATUS_WORDS = {
    "Theorem": SzsStatus.THEOREM,
    "Unsatisfiable": SzsStatus.THEOREM,
    "ContradictoryAxioms": SzsStatus.THEOREM,
    "CounterSatisfiable": SzsStatus.COUNTER_SATISFIABLE,
    "Satisfiable": SzsStatus.SATISFIABLE,
    "Timeout": SzsStatus.TIMEOUT,
    "GaveUp": SzsStatus.GAVE_UP,
    "ResourceOut": SzsStatus.RESOURCE_OUT,
    "MemoryOut": SzsStatus.RESOURCE_OUT,
    "Error": SzsStatus.ERROR,
    "InputError": SzsStatus.ERROR,
    "SyntaxError": SzsStatus.ERROR,
    "OSError": SzsStatus.ERROR,
}

_STATUS_RE = re.compile(r"SZS status\s+(\S+)")
_OUTPUT_START_RE = re.compile(r"SZS output start")
_OUTPUT_END_RE = re.compile(r"SZS output end")
_PROOF_AXIOM_RE = re.compile(
    r"\b(?:fof|cnf|tff)\s*\(\s*([A-Za-z0-9_]+|'[^']*')\s*,\s*axiom\b"
)
_FILE_REF_RE = re.compile(r"\bfile\s*\(\s*[^,()]+,\s*([A-Za-z0-9_]+|'[^']*')\s*\)")


def _unquote(name: str) -> str:
    return name[1:-1] if name.startswith("'") and name.endswith("'") else name


def parse_szs(output: str) -> tuple[SzsStatus, tuple[str, ...]]:
    """Extract (status, used axiom names) from prover output.

    The first SZS status line wins.  Axiom names are collected from the
    proof block only when the status maps to Theorem; order of first
    appearance, deduplicated.
    """
    m = _STATUS_RE.search(output)
    if not m:
        return SzsStatus.NO_STATUS, ()
    status = _STATUS_WORDS.get(m.group(1), SzsStatus.GAVE_UP)
    if status is not SzsStatus.THEOREM:
        return status, ()
    start = _OUTPUT_START_RE.search(output)
    end = _OUTPUT_END_RE.search(output)
    if not start or not end or end.start() < start.end():
        return status, ()
    block = output[start.end() : end.start()]
    seen: list[str] = []
    for pat in (_PROOF_AXIOM_RE, _FILE_REF_RE):
        for am in pat.finditer(block):
            name = _unquote(am.group(1))
            if name not in seen:
                seen.append(name)
    return status, tuple(seen)


def render_szs_output(status: SzsStatus, used_axioms=(), problem: str = "") -> str:
    """Dual of parse_szs: a minimal output document for archived runs."""
    word = {
        SzsStatus.THEOREM: "Theorem",
        SzsStatus.COUNTER_SATISFIABLE: "CounterSatisfiable",
        SzsStatus.SATISFIABLE: "Satisfiable",
        SzsStatus.TIMEOUT: "Timeout",
        SzsStatus.GAVE_UP: "GaveUp",
        SzsStatus.RESOURCE_OUT: "ResourceOut",
        SzsStatus.ERROR: "Error",
        SzsStatus.NO_STATUS: None,
    }[status]
    if word is None:
        return ""
    suffix = f" for {problem}" if problem else ""
    lines = [f"% SZS status {word}{suffix}"]
    if status is SzsStatus.THEOREM and used_axioms:
        lines.append(f"% SZS output start Proof{suffix}")
        for name in used_axioms:
            lines.append(f"fof({name}, axiom, $true).")
        lines.append(f"% SZS output end Proof{suffix}")
    return "\n".join(lines) + "\n"


_REPORTED_RES = (
    re.compile(r"Time elapsed:\s*([0-9.]+)"),
    re.compile(r"Total time\s*[:=]?\s*([0-9.]+)"),
)


def parse_reported_seconds(output: str) -> float | None:
    for pat in _REPORTED_RES:
        m = pat.search(output)
        if m:
            try:
                return float(m.group(1))
            except ValueError:
                continue
    return None


@dataclass(frozen=True)
class ProverResult:
    szs: SzsStatus
    wall_seconds: float
    used_axioms: tuple[str, ...] = ()
    raw_output_path: str | None = None
    reported_seconds: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "used_axioms", tuple(self.used_axioms))
        if self.szs is not SzsStatus.THEOREM and self.used_axioms:
            raise ValueError("used_axioms may only accompany a Theorem result")
