"""Command-line front end.

Exit codes: 0 success, 1 golden-file mismatch, 2 parse error, 3 out of
scope (a named hypothesis failed), 4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from .classifier import (OutOfScopeError, build_L1, build_L2, classify, embed,
                         random_nilpotent)
from .derivation import bracket
from .lie import InvariantViolation, NotFiniteDimensionalError, close_under_bracket, structure_report
from .parsing import ParseError, max_index, parse_derivation, parse_derivations
from .triangular import non_nilpotency_witness

EXIT_OK = 0
EXIT_GOLDEN_MISMATCH = 1
EXIT_PARSE = 2
EXIT_OUT_OF_SCOPE = 3
EXIT_INVARIANT = 4


class _Exit(Exception):
    def __init__(self, code: int, report: dict):
        super().__init__(report.get("error", ""))
        self.code = code
        self.report = report


def _text(args) -> str:
    if args.input is not None:
        return Path(args.input).read_text() if args.input != "-" else sys.stdin.read()
    if args.derivations is None:
        raise ParseError("no input: give derivations inline or with --input")
    return args.derivations


def _algebra(args):
    derivs = parse_derivations(_text(args), args.n)
    if not derivs:
        raise ParseError("no derivations given")
    try:
        return close_under_bracket(derivs, max_dim=args.max_dim, nvars=derivs[0].nvars)
    except NotFiniteDimensionalError as exc:
        raise _Exit(EXIT_OUT_OF_SCOPE, {"failed_check": "finite_dimensional", "error": str(exc)}) from exc


def _cmd_bracket(args) -> dict:
    n = args.n
    if n is None:
        n = max(max_index(args.left), max_index(args.right), 1)
    D, E = parse_derivation(args.left, n), parse_derivation(args.right, n)
    return {"bracket": str(bracket(D, E))}


def _cmd_structure(args) -> dict:
    return structure_report(_algebra(args))


def _verdict_or_exit(alg):
    verdict = classify(alg)
    if not verdict.in_scope:
        raise _Exit(EXIT_OUT_OF_SCOPE, verdict.to_json())
    return verdict


def _cmd_classify(args) -> dict:
    return _verdict_or_exit(_algebra(args)).to_json()


def _cmd_embed(args) -> dict:
    alg = _algebra(args)
    verdict = _verdict_or_exit(alg)
    try:
        emb = embed(verdict, alg)
    except OutOfScopeError as exc:
        raise _Exit(EXIT_OUT_OF_SCOPE, dict(verdict.to_json(), failed_check=exc.reason, detail=exc.detail)) from exc
    return {"verdict": verdict.to_json(), "embedding": emb.to_json()}


def _cmd_build(args) -> dict:
    builder = build_L1 if args.family == "L1" else build_L2
    n = 3 if args.n is None else args.n
    alg = builder(n, args.k)
    return {"family": args.family, "n": n, "k": args.k, "dim": alg.dim,
            "basis": [str(b) for b in alg.basis]}


def _cmd_witness(args) -> dict:
    n = 3 if args.n is None else args.n
    chain = non_nilpotency_witness(n, args.length)
    return {"n": n, "length": args.length, "chain": [str(D) for D in chain], "last_bracket": "d1" if chain else None}


def _cmd_fuzz(args) -> dict:
    n = 3 if args.n is None else args.n
    runs = []
    summary: dict = {}
    for seed in range(args.seed, args.seed + args.count):
        alg = random_nilpotent(n, seed, args.size)
        entry = {"seed": seed, "dim": alg.dim}
        try:
            verdict = classify(alg)
            entry["case"] = verdict.case.value
            if verdict.in_scope:
                entry["checks_passed"] = all(verdict.checks.values())
                if verdict.facts.get("model_coefficients_rational", True):
                    emb = embed(verdict, alg)
                    entry["embedding_checks_passed"] = all(emb.checks.values())
            else:
                entry["failed_check"] = verdict.reason
        except InvariantViolation as exc:
            entry["case"] = "InvariantViolation"
            entry["error"] = str(exc)
        key = entry["case"] if "failed_check" not in entry else f"OutOfScope({entry['failed_check']})"
        summary[key] = summary.get(key, 0) + 1
        runs.append(entry)
    failures = sum(1 for r in runs if r["case"] == "InvariantViolation")
    report = {"n": n, "size": args.size, "seeds": [args.seed, args.seed + args.count - 1],
              "summary": dict(sorted(summary.items())), "failures": failures, "runs": runs}
    if failures:
        raise _Exit(EXIT_INVARIANT, report)
    return report


def _format_text(verb: str, report: dict) -> str:
    if verb == "bracket":
        return report["bracket"]
    lines = []
    for key, value in report.items():
        if isinstance(value, list) and value and not isinstance(value[0], (dict, list)):
            lines.append(f"{key}:")
            lines.extend(f"  {v}" for v in value)
        elif isinstance(value, (dict, list)):
            lines.append(f"{key}: {json.dumps(value)}")
        else:
            lines.append(f"{key}: {value}")
    return "\n".join(lines)


def _golden(args, payload: str) -> int:
    directory = Path(args.golden)
    directory.mkdir(parents=True, exist_ok=True)
    options = {k: v for k, v in sorted(vars(args).items()) if k != "golden"}
    key = hashlib.sha1(json.dumps(options).encode()).hexdigest()[:12]
    verb = args.verb
    target = directory / f"{verb}-{key}.json"
    if target.exists():
        return EXIT_OK if target.read_text() == payload else EXIT_GOLDEN_MISMATCH
    target.write_text(payload)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=None, help="number of variables")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--golden", metavar="DIR", default=None,
                        help="write the output to DIR, or compare with an existing file there")

    alg_input = argparse.ArgumentParser(add_help=False)
    alg_input.add_argument("derivations", nargs="?", help='e.g. "d1; x3*d1; d2; x3*d2; d3"')
    alg_input.add_argument("--input", help="file with semicolon-separated derivations ('-' for stdin)")
    alg_input.add_argument("--max-dim", type=int, default=64)

    parser = argparse.ArgumentParser(prog="nilder",
                                     description="Nilpotent Lie algebras of derivations over Q.")
    sub = parser.add_subparsers(dest="verb", required=True)
    p = sub.add_parser("bracket", parents=[common], help="bracket of two derivations")
    p.add_argument("left")
    p.add_argument("right")
    sub.add_parser("structure", parents=[common, alg_input], help="structure of the generated algebra")
    sub.add_parser("classify", parents=[common, alg_input], help="classification verdict")
    sub.add_parser("embed", parents=[common, alg_input], help="embedding into the triangular algebra")
    p = sub.add_parser("build", parents=[common], help="truncated model algebras")
    p.add_argument("family", choices=("L1", "L2"))
    p.add_argument("-k", type=int, default=1, help="truncation degree")
    p = sub.add_parser("witness", parents=[common], help="non-nilpotency chain in u_n")
    p.add_argument("--length", "-L", type=int, default=3)
    p = sub.add_parser("fuzz", parents=[common], help="classify seeded random algebras")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--size", type=int, default=2, help="generators per sample")
    return parser


_COMMANDS = {
    "bracket": _cmd_bracket,
    "structure": _cmd_structure,
    "classify": _cmd_classify,
    "embed": _cmd_embed,
    "build": _cmd_build,
    "witness": _cmd_witness,
    "fuzz": _cmd_fuzz,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    code = EXIT_OK
    try:
        report = _COMMANDS[args.verb](args)
    except _Exit as exc:
        code, report = exc.code, exc.report
    except (ValueError, OSError) as exc:
        code, report = EXIT_PARSE, {"error": str(exc)}
    except InvariantViolation as exc:
        code, report = EXIT_INVARIANT, {"error": str(exc)}
    if args.format == "text":
        payload = _format_text(args.verb, report) if code == EXIT_OK or "error" not in report else report["error"]
    else:
        payload = json.dumps(report, indent=2)
    stream = sys.stdout if code == EXIT_OK or code == EXIT_OUT_OF_SCOPE else sys.stderr
    print(payload, file=stream)
    if args.golden is not None and code == EXIT_OK:
        code = _golden(args, payload + "\n")
        if code != EXIT_OK:
            print(f"golden mismatch in {args.golden}", file=sys.stderr)
    return code
