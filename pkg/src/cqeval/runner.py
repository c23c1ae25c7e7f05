"""Prover campaign driver.

Takes a directory of problem files and runs each through either an
external prover command or the bundled backend, with a hard wall-clock
limit per problem.  External provers run in their own process group and
are killed outright when the limit passes; the grace period only covers
collecting output from the dying process.

Every finished problem is appended to a line-delimited JSON journal
under a lock.  On restart, journaled ids are skipped and their results
reconstructed, so a long campaign survives interruption at the cost of
re-running at most the problems that were in flight.
"""

from __future__ import annotations

import json
import os
import shlex
import signal
import subprocess
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import microprover, tptp
from .tptp import ProblemFile, ProverResult, SzsStatus

BUILTIN = "builtin"


@dataclass
class RunnerConfig:
    output_dir: Path
    journal_path: Path
    prover_cmd: str = BUILTIN
    timeout_seconds: float = 600.0
    max_parallel: int = 1
    grace_seconds: float = 2.0
    builtin_max_literals: int = 12
    builtin_max_clauses: int = 50000

    def __post_init__(self):
        self.output_dir = Path(self.output_dir)
        self.journal_path = Path(self.journal_path)
        if self.max_parallel < 1:
            raise ValueError("max_parallel must be at least 1")
        if self.timeout_seconds <= 0:
            raise ValueError("timeout_seconds must be positive")


# --------------------------------------------------------------------------
# journal


def journal_record(cq_id: str, r: ProverResult) -> dict:
    return {
        "cq_id": cq_id,
        "szs": r.szs.value,
        "wall_seconds": r.wall_seconds,
        "used_axioms": list(r.used_axioms),
        "output_file": r.raw_output_path,
        "reported_seconds": r.reported_seconds,
    }


def result_from_record(rec: dict) -> ProverResult:
    return ProverResult(
        szs=SzsStatus(rec["szs"]),
        wall_seconds=float(rec["wall_seconds"]),
        used_axioms=tuple(rec.get("used_axioms", ())),
        raw_output_path=rec.get("output_file"),
        reported_seconds=rec.get("reported_seconds"),
    )


def read_journal(path: str | Path) -> dict:
    """{cq_id: ProverResult} from an append-only journal.  A torn final
    line (interrupted write) is tolerated; anything else malformed is not."""
    path = Path(path)
    out: dict = {}
    if not path.exists():
        return out
    lines = path.read_text(encoding="utf-8").splitlines()
    for i, line in enumerate(lines):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError:
            if i == len(lines) - 1:
                break
            raise
        out[rec["cq_id"]] = result_from_record(rec)
    return out


# --------------------------------------------------------------------------
# single-problem execution


def _archive(cfg: RunnerConfig, cq_id: str, text: str) -> str:
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    path = cfg.output_dir / f"{cq_id}.out"
    path.write_text(text, encoding="utf-8")
    return str(path)


def _run_external(problem: ProblemFile, cfg: RunnerConfig) -> ProverResult:
    cmd = cfg.prover_cmd.format(problem=problem.path, timeout=int(cfg.timeout_seconds))
    argv = shlex.split(cmd)
    start = time.monotonic()
    try:
        proc = subprocess.Popen(
            argv,
            stdout=subprocess.PIPE,
            stderr=subprocess.STDOUT,
            start_new_session=True,
        )
    except OSError as e:
        wall = time.monotonic() - start
        out_path = _archive(cfg, problem.cq_id, f"spawn failure: {e}\n")
        return ProverResult(SzsStatus.ERROR, wall, (), out_path, None)
    timed_out = False
    try:
        out, _ = proc.communicate(timeout=cfg.timeout_seconds)
    except subprocess.TimeoutExpired:
        timed_out = True
        try:
            os.killpg(proc.pid, signal.SIGKILL)
        except (ProcessLookupError, PermissionError):
            proc.kill()
        try:
            out, _ = proc.communicate(timeout=cfg.grace_seconds)
        except subprocess.TimeoutExpired:
            out = b""
    wall = time.monotonic() - start
    text = (out or b"").decode("utf-8", errors="replace")
    out_path = _archive(cfg, problem.cq_id, text)
    status, used = tptp.parse_szs(text)
    if timed_out and status is SzsStatus.NO_STATUS:
        status = SzsStatus.TIMEOUT
    return ProverResult(status, wall, used, out_path, tptp.parse_reported_seconds(text))


def _run_builtin(problem: ProblemFile, cfg: RunnerConfig) -> ProverResult:
    start = time.monotonic()
    try:
        axioms, (_, conjecture) = tptp.read_problem(problem.path)
        inner = microprover.prove(
            axioms,
            conjecture,
            limit_seconds=cfg.timeout_seconds,
            max_literals=cfg.builtin_max_literals,
            max_clauses=cfg.builtin_max_clauses,
        )
        status, used = inner.szs, inner.used_axioms
        reported = inner.wall_seconds
        text = tptp.render_szs_output(status, used, problem=Path(problem.path).name)
    except Exception as e:
        status, used, reported = SzsStatus.ERROR, (), None
        text = f"% SZS status Error for {Path(problem.path).name}\n% {e}\n"
    wall = time.monotonic() - start
    out_path = _archive(cfg, problem.cq_id, text)
    return ProverResult(status, wall, used, out_path, reported)


def run_one(problem: ProblemFile, cfg: RunnerConfig) -> ProverResult:
    if cfg.prover_cmd == BUILTIN:
        return _run_builtin(problem, cfg)
    return _run_external(problem, cfg)


# --------------------------------------------------------------------------
# campaign


def run_corpus(problems, cfg: RunnerConfig):
    """Run every problem not already journaled; returns [(cq_id, result)]
    sorted by cq id, journaled results included."""
    done = read_journal(cfg.journal_path)
    todo = [p for p in problems if p.cq_id not in done]
    known_ids = {p.cq_id for p in problems}

    lock = threading.Lock()
    cfg.journal_path.parent.mkdir(parents=True, exist_ok=True)
    results: dict = {cq_id: r for cq_id, r in done.items() if cq_id in known_ids}

    def work(problem: ProblemFile):
        r = run_one(problem, cfg)
        line = json.dumps(journal_record(problem.cq_id, r), sort_keys=True)
        with lock:
            with open(cfg.journal_path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")
                fh.flush()
            results[problem.cq_id] = r
        return r

    if todo:
        with ThreadPoolExecutor(max_workers=cfg.max_parallel) as pool:
            list(pool.map(work, todo))

    return sorted(results.items(), key=lambda kv: kv[0])


def discover_problems(corpus_dir: str | Path):
    """Problem files in a directory, one per question, named <cq_id>.p."""
    corpus_dir = Path(corpus_dir)
    out = []
    for path in sorted(corpus_dir.glob("*.p")):
        out.append(ProblemFile(path=path, cq_id=path.stem, conjecture_name=path.stem))
    return out
