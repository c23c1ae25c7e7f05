"""Standalone prover entry point.

Runs the bundled prover over one TPTP problem file and prints SZS
output, which makes it usable as an external prover command:

    python -m cqeval.prover_cli problem.p --timeout 600
"""

from __future__ import annotations

import argparse
import sys

from . import microprover, tptp


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="cqeval-prover",
                                     description="refute one TPTP problem")
    parser.add_argument("problem", help="TPTP problem file with one conjecture")
    parser.add_argument("--timeout", type=float, default=600.0,
                        help="wall-clock limit in seconds (default 600)")
    parser.add_argument("--max-clauses", type=int, default=50000,
                        help="give up after keeping this many clauses")
    parser.add_argument("--max-literals", type=int, default=12,
                        help="discard derived clauses longer than this")
    args = parser.parse_args(argv)

    try:
        axioms, (_, conjecture) = tptp.read_problem(args.problem)
        result = microprover.prove(
            axioms,
            conjecture,
            limit_seconds=args.timeout,
            max_literals=args.max_literals,
            max_clauses=args.max_clauses,
        )
    except Exception as e:
        print(f"% SZS status Error for {args.problem}")
        print(f"% {e}")
        return 1
    sys.stdout.write(tptp.render_szs_output(result.szs, result.used_axioms,
                                            problem=args.problem))
    print(f"% Time elapsed: {result.wall_seconds:.3f} s")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
