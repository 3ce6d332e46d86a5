"""Command-line interface.

Exit status: 0 protected (or certificate valid / defense holds), 1
unprotected (certificate invalid / attack found, cross-check
disagreement), 2 undecided at this scale, 3 input or usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import attacks
from .bench import BENCH_FAMILIES, rows_to_csv, run_bench
from .crosscheck import FAMILIES as CHECK_FAMILIES, run_cross_check
from .dispatch import SOLVERS, solve
from .errors import GuardError, ProtectionError
from .io import (
    attack_from_doc,
    attack_to_doc,
    defense_from_doc,
    dump,
    generate_from_doc,
    instance_digest,
    load_json,
    parse_instance,
    serialize_instance,
    verdict_to_doc,
)
from .solvers import DEFAULT_MAX_M, DEFAULT_MAX_N, verify_defense_certificate

EXIT_PROTECTED, EXIT_UNPROTECTED, EXIT_UNDECIDED, EXIT_ERROR = 0, 1, 2, 3

ORACLES = {
    "best": attacks.destructive_attack_best,
    "greedy": attacks.destructive_attack_greedy_unit_price,
    "count": attacks.destructive_attack_count_knapsack,
    "sim": attacks.destructive_attack_bruteforce_sim,
    "constructive": attacks.constructive_attack_bruteforce,
}


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ProtectionError("E_IO", f"cannot read {path}: {exc.strerror}") from None


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _csv_ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()] if text else []


def cmd_solve(args) -> int:
    inst = parse_instance(_read(args.instance))
    verdict, why = solve(inst, args.solver, max_n=args.max_n, max_m=args.max_m)
    _emit(dump(verdict_to_doc(verdict, inst, why)), args.out)
    if verdict is None:
        return EXIT_UNDECIDED
    return EXIT_PROTECTED if verdict.protected else EXIT_UNPROTECTED


def cmd_attack(args) -> int:
    inst = parse_instance(_read(args.instance))
    defense = _csv_ints(args.defense)
    name = args.oracle
    if name == "auto":
        name = "best" if inst.mode.value == "destructive" else "constructive"
    fn = ORACLES[name]
    kwargs = {"max_n": args.max_n} if name in ("sim", "constructive") else {}
    try:
        cert = fn(inst, defense, **kwargs)
    except GuardError as exc:
        _emit(dump({"defense": defense, "oracle": name, "attack": None, "explanation": exc.message}), args.out)
        return EXIT_UNDECIDED
    doc = {"defense": defense, "oracle": name, "attack": attack_to_doc(cert), "instance_digest": instance_digest(inst)}
    _emit(dump(doc), args.out)
    return EXIT_PROTECTED if cert is None else EXIT_UNPROTECTED


def cmd_generate(args) -> int:
    inst, provenance = generate_from_doc(load_json(_read(args.source)))
    if provenance["family"] != args.family:
        raise ProtectionError("E_STRUCT", f"source declares family {provenance['family']!r}, not {args.family!r}", "family")
    _emit(serialize_instance(inst, provenance), args.out)
    return 0


def cmd_verify(args) -> int:
    inst = parse_instance(_read(args.instance))
    doc = load_json(_read(args.certificate))
    problems = []
    if doc.get("instance_digest") not in (None, instance_digest(inst)):
        problems.append("instance digest does not match")
    verdict = doc.get("verdict")
    status = EXIT_PROTECTED
    if verdict == "undecided":
        status = EXIT_UNDECIDED
    elif doc.get("defense") is None:
        problems.append("certificate has no defense")
    else:
        defense = defense_from_doc(doc["defense"])
        if verdict == "protected":
            try:
                check, _ = verify_defense_certificate(inst, defense, max_n=args.max_n)
            except GuardError as exc:
                print(exc.message, file=sys.stderr)
                return EXIT_UNDECIDED
            if not check:
                problems.append(check.reason)
        elif verdict == "unprotected":
            if doc.get("counterattack") is None:
                problems.append("unprotected certificate has no counterattack")
            else:
                cert = attack_from_doc(doc["counterattack"], inst.m)
                check = attacks.verify_attack_certificate(inst, defense.awarded, cert)
                if not check:
                    problems.append(check.reason)
        else:
            problems.append(f"unknown verdict {verdict!r}")
    for p in problems:
        print(f"invalid: {p}", file=sys.stderr)
    if problems:
        return EXIT_UNPROTECTED
    print("valid" if status == EXIT_PROTECTED else "undecided")
    return status


def cmd_cross_check(args) -> int:
    families = args.families.split(",") if args.families else list(CHECK_FAMILIES)
    report = run_cross_check(families, args.trials, args.seed, max_n=args.max_n)
    for rep in report.values():
        print(rep.line())
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        summary = {f: {"trials": r.trials, "agree": r.agree, "skipped": r.skipped,
                       "counterexamples": len(r.counterexamples)} for f, r in report.items()}
        (out / "report.json").write_text(json.dumps(summary, indent=1, sort_keys=True) + "\n")
        for f, r in report.items():
            for k, cx in enumerate(r.counterexamples):
                (out / f"counterexample-{f}-{k}.json").write_text(json.dumps(cx, sort_keys=True) + "\n")
    else:
        for r in report.values():
            for cx in r.counterexamples:
                print(json.dumps({"family": r.family, **cx}, sort_keys=True))
    return EXIT_PROTECTED if all(r.ok for r in report.values()) else EXIT_UNPROTECTED


def cmd_bench(args) -> int:
    config = {}
    if args.config:
        config = load_json(_read(args.config))
    if args.families:
        config["families"] = args.families.split(",")
    if args.sizes:
        config["sizes"] = _csv_ints(args.sizes)
    if args.solvers:
        config["solvers"] = args.solvers.split(",")
    config.setdefault("seed", args.seed)
    config.setdefault("trials", args.trials)
    config.setdefault("max_n", args.max_n)
    rows = run_bench(config)
    table = rows_to_csv(rows)
    sys.stdout.write(table)
    if args.out:
        from .plotting import plot_bench

        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "bench.csv").write_text(table)
        plot_bench(rows, out / "bench.png")
    return 0


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with 3; status 2 is reserved for undecided verdicts."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="election-protection", description="Decide and test election protection instances.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def limits(sp, trials=False):
        sp.add_argument("--max-n", type=int, default=DEFAULT_MAX_N, help="enumeration guard: at most 2**MAX_N configurations")
        sp.add_argument("--max-m", type=int, default=DEFAULT_MAX_M, help="largest m for the class solvers")
        sp.add_argument("--out", help="output file (directory for cross-check and bench)")
        if trials:
            sp.add_argument("--seed", type=int, default=0)
            sp.add_argument("--trials", type=int, default=100)

    s = sub.add_parser("solve", help="decide protection for an instance file")
    s.add_argument("instance")
    s.add_argument("--solver", choices=SOLVERS, default="auto")
    limits(s)
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("attack", help="search for an attack against a fixed defense")
    s.add_argument("instance")
    s.add_argument("--defense", default="", help="comma-separated awarded voter indices")
    s.add_argument("--oracle", choices=("auto", *ORACLES), default="auto")
    limits(s)
    s.set_defaults(func=cmd_attack)

    s = sub.add_parser("generate", help="build an election from a reduction source document")
    s.add_argument("family", choices=("dneg", "partition", "ef3dm", "tdm"))
    s.add_argument("source")
    limits(s)
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("verify", help="re-check a certificate against its instance")
    s.add_argument("instance")
    s.add_argument("certificate")
    limits(s)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("cross-check", help="seeded agreement suites")
    s.add_argument("--families", help=f"comma-separated subset of {','.join(CHECK_FAMILIES)}")
    limits(s, trials=True)
    s.set_defaults(func=cmd_cross_check)

    s = sub.add_parser("bench", help="time solvers on seeded instance streams")
    s.add_argument("--config", help="JSON config file")
    s.add_argument("--families", help=f"comma-separated subset of {','.join(BENCH_FAMILIES)}")
    s.add_argument("--sizes", help="comma-separated sizes")
    s.add_argument("--solvers", help=f"comma-separated subset of {','.join(SOLVERS)}")
    limits(s, trials=True)
    s.set_defaults(func=cmd_bench, trials=1)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ProtectionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
