"""Command-line entry point: ``multitrans {analyze,hitting,family,verify,search,chaos}``.

Exit codes: 0 success, 1 a failing verdict when ``--fatal`` was given,
2 parse or usage error, 3 invariant violation, 4 capability missing.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import chaos, verify
from .classify import SearchBounds, classify
from .families import BoundsError, FamilyQuery, evaluate
from .hitting import HorizonError, a_transitive, hitting
from .indexset import NAMED_SETS, ExactSet, index_set_from_json
from .systems import (
    CapabilityError, FiniteMap, InadmissibleWordError, MalformedSystemError, MaterializationError,
    system_from_json,
)

EXIT_OK, EXIT_FATAL, EXIT_PARSE, EXIT_INVARIANT, EXIT_CAPABILITY = 0, 1, 2, 3, 4


class UsageError(ValueError):
    pass


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


def emit(doc, out: str | None) -> None:
    text = dumps(doc)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def int_list(text: str) -> tuple[int, ...]:
    """'1,2,3' or '0 1' or '011' (single digits) to a tuple of ints."""
    text = text.strip()
    if not text:
        raise UsageError("empty list")
    try:
        if "," in text or " " in text:
            return tuple(int(t) for t in text.replace(",", " ").split())
        if text.isdigit() and len(text) > 1:
            return tuple(int(ch) for ch in text)
        return (int(text),)
    except ValueError as exc:
        raise UsageError(f"cannot read integer list {text!r}") from exc


def load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def load_system(path: str):
    doc = load_json(path)
    if not isinstance(doc, dict):
        raise UsageError(f"{path}: expected a JSON object")
    try:
        return system_from_json(doc)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"{path}: missing or malformed field {exc}") from exc


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(args) -> int:
    system = load_system(args.system)
    record = classify(system, SearchBounds(depth=args.depth, horizon=args.horizon))
    emit(record.to_json(), args.out)
    return EXIT_OK


def cmd_hitting(args) -> int:
    system = load_system(args.system)
    U, V = int_list(args.u), int_list(args.v)
    result = hitting(system, U, V, args.horizon)
    emit(result.to_json(), args.out)
    return EXIT_OK


def _load_set(args):
    if args.set_file:
        try:
            return index_set_from_json(load_json(args.set_file))
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"{args.set_file}: {exc}") from exc
    if args.set in NAMED_SETS:
        return NAMED_SETS[args.set]
    if args.set.startswith("mod"):
        # mod<p>:<r1>,<r2>  e.g. mod3:0,1
        head, _, tail = args.set.partition(":")
        try:
            p = int(head[3:])
        except ValueError as exc:
            raise UsageError(f"bad modulus in {args.set!r}") from exc
        res = frozenset(r % p for r in int_list(tail))
        return ExactSet.from_predicate(lambda n: n % p in res, p, 1)
    raise UsageError(f"unknown set {args.set!r}; named sets: {sorted(NAMED_SETS)}")


def _query_file(args):
    """{"family": {"kind", "a"?, "r_max"?}, "set": IndexSet JSON, "bounds": {"n_max", "k_max"}}."""
    doc = load_json(args.query)
    try:
        fam, bounds = doc["family"], doc.get("bounds", {})
        F = index_set_from_json(doc["set"])
        kw = {"kind": fam["kind"], "a": tuple(fam.get("a", ())),
              "n_max": int(bounds.get("n_max", args.n_max)), "k_max": bounds.get("k_max", args.k_max)}
        if fam["kind"] == "infty":
            kw["r_max"] = int(fam.get("r_max", args.r_max))
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise UsageError(f"{args.query}: malformed query ({exc})") from exc
    return F, kw


def cmd_family(args) -> int:
    if args.query:
        F, kw = _query_file(args)
    else:
        if not args.kind:
            raise UsageError("--kind is required without --query")
        F = _load_set(args)
        a = int_list(args.a) if args.a else ()
        kw = {"kind": args.kind, "a": a, "n_max": args.n_max, "k_max": args.k_max}
        if args.kind == "infty":
            kw["r_max"] = args.r_max
    try:
        query = FamilyQuery(**kw)
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from exc
    verdict = evaluate(query, F)
    emit(verdict.to_json(), args.out)
    return EXIT_FATAL if args.fatal and verdict.is_fails else EXIT_OK


THEOREMS = ("thm42", "lemma32", "prop33", "thm53", "tower", "furstenberg")


def _verify_report(args) -> verify.CorpusReport:
    t = args.theorem
    if t == "thm42":
        return verify.thm42_corpus(args.corpus, args.r_max, args.entry_max, args.depth)
    if t == "lemma32":
        return verify.lemma32_corpus(args.corpus)
    if t == "prop33":
        return verify.prop33_corpus(args.corpus)
    if t == "tower":
        return verify.tower_corpus(args.corpus)
    if t == "thm53":
        return verify.thm53_catalog(args.depth)
    systems = [s for s in verify.corpus(args.corpus) if not isinstance(s, FiniteMap) and s.is_mixing]
    return verify.run_cases("furstenberg", args.corpus,
                            (lambda s=s: verify.furstenberg_check(s) for s in systems))


def cmd_verify(args) -> int:
    try:
        report = _verify_report(args)
    except verify.VerificationDefect as defect:
        if args.out:
            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            (out / "counterexample.json").write_text(dumps(defect.bundle))
        sys.stderr.write("exact-lane disagreement:\n" + dumps(defect.bundle))
        return EXIT_INVARIANT
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(dumps(report.to_json()))
        (out / "summary.csv").write_text(report.to_csv())
    emit(report.summary(), None)
    return EXIT_FATAL if args.fatal and not report.summary()["all_agree"] else EXIT_OK


def cmd_search(args) -> int:
    try:
        cands = verify.search_separation(args.generator, args.count, args.horizon, args.depth,
                                         args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    doc = {"generator": args.generator, "seed": args.seed, "horizon": args.horizon,
           "depth": args.depth, "candidates": [c.to_json() for c in cands]}
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "candidates.json").write_text(dumps(doc))
        (out / "candidates.csv").write_text(verify.candidates_csv(cands))
        emit({"candidates": len(cands),
              "separating": sum(any(c.separates.values()) for c in cands)}, None)
    else:
        emit(doc, None)
    return EXIT_OK


def cmd_chaos(args) -> int:
    system = load_system(args.system)
    if not 0 < args.delta < 1:
        raise UsageError("--delta must lie in (0, 1)")
    try:
        verdict = chaos.find_scrambled_pair(system, args.delta, args.horizon or 2 ** 10)
    except TypeError as exc:
        raise CapabilityError(str(exc)) from exc
    emit(verdict.to_json(), args.out)
    return EXIT_FATAL if args.fatal and verdict.is_fails else EXIT_OK


def cmd_transitive(args) -> int:
    system = load_system(args.system)
    verdict = a_transitive(system, int_list(args.a), args.depth, args.horizon)
    emit(verdict.to_json(), args.out)
    return EXIT_FATAL if args.fatal and verdict.is_fails else EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="multitrans",
                                     description="Multi-transitivity checks for small dynamical systems.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, system=True):
        if system:
            p.add_argument("--system", required=True, help="system JSON file")
        p.add_argument("--horizon", type=int, default=None)
        p.add_argument("--depth", type=int, default=2)
        p.add_argument("--out", default=None, help="output file (directory for verify/search)")
        p.add_argument("--fatal", action="store_true", help="exit 1 when the verdict fails")

    p = sub.add_parser("analyze", help="classify transitivity and mixing properties")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("hitting", help="hitting-time set N(U,V)")
    common(p)
    p.add_argument("--u", required=True, help="word or point list, e.g. 0,1")
    p.add_argument("--v", required=True)
    p.set_defaults(func=cmd_hitting)

    p = sub.add_parser("transitive", help="a-transitivity of a system")
    common(p)
    p.add_argument("--a", required=True, help="comma list, e.g. 1,2")
    p.set_defaults(func=cmd_transitive)

    p = sub.add_parser("family", help="Furstenberg family membership of an index set")
    common(p, system=False)
    p.add_argument("--kind", choices=["inf", "cf", "thick", "vec", "infty", "seq"])
    p.add_argument("--query", default=None, help="family query JSON (family, set, bounds)")
    p.add_argument("--a", default=None)
    p.add_argument("--set", default="all", help=f"named set {sorted(NAMED_SETS)} or mod<p>:<residues>")
    p.add_argument("--set-file", default=None, help="index set JSON")
    p.add_argument("--r-max", type=int, default=3)
    p.add_argument("--n-max", type=int, default=16)
    p.add_argument("--k-max", type=int, default=None)
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("verify", help="run an equivalence harness over a corpus")
    common(p, system=False)
    p.add_argument("--theorem", required=True, choices=THEOREMS)
    p.add_argument("--corpus", default="sft3", help="maps<n> or sft<n>")
    p.add_argument("--r-max", type=int, default=3)
    p.add_argument("--entry-max", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", help="profile spacing shifts from a gap-set generator")
    common(p, system=False)
    p.add_argument("--generator", default="random", choices=verify.GENERATORS)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_search, horizon=512)

    p = sub.add_parser("chaos", help="scrambled-pair evidence at a horizon")
    common(p)
    p.add_argument("--delta", type=float, default=0.5)
    p.set_defaults(func=cmd_chaos)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, BoundsError, HorizonError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE
    except (MalformedSystemError, InadmissibleWordError) as exc:
        sys.stderr.write(f"invariant violation: {exc}\n")
        return EXIT_INVARIANT
    except (CapabilityError, MaterializationError, TypeError) as exc:
        sys.stderr.write(f"capability missing: {exc}\n")
        return EXIT_CAPABILITY


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
