"""Command-line driver.

Exit codes: 0 every requested verdict holds, 1 a verdict failed (or a
theorem was skipped because its hypotheses fail), 2 usage or input error,
3 budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .autgroup import DEFAULT_BUDGET
from .cache import clear_cache, list_cache, load_cached
from .conditions import READINGS, check_all, replay
from .errors import ClosureBudgetExceeded, ModlatError, SizeCap
from .nets import enumerate_nets
from .verify import (THEOREM1_HYPOTHESES, THEOREM2_HYPOTHESES, bv_classify, enumerate_intermediate,
                     verify_lemma1, verify_lemma2, verify_theorem1, verify_theorem2)

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


def parse_conditions(text: str) -> list[int]:
    """``"1-4,9,12"`` -> [1, 2, 3, 4, 9, 12]."""
    out = set()
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        lo, sep, hi = part.partition("-")
        try:
            rng = range(int(lo), int(hi) + 1) if sep else [int(lo)]
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad condition list {text!r}") from None
        out.update(rng)
    if not out or not out <= set(range(1, 17)):
        raise argparse.ArgumentTypeError("conditions must lie in 1..16")
    return sorted(out)


def _common(p: argparse.ArgumentParser):
    p.add_argument("--sample", type=int, default=None, metavar="N",
                   help="check at most N outer items per condition")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--budget-elements", type=int, default=DEFAULT_BUDGET,
                   help="largest group the closure routines may build")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--no-cache", action="store_true")
    p.add_argument("--reading4", choices=READINGS, default="each-t")
    p.add_argument("--reading11", choices=READINGS, default="each-t")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="modlat", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"modlat {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    model = sub.add_parser("model", help="build and describe a model")
    model_sub = model.add_subparsers(dest="action", required=True)
    build = model_sub.add_parser("build")
    build.add_argument("spec")
    _common(build)

    check = sub.add_parser("check", help="decide conditions 1..16")
    check.add_argument("spec")
    check.add_argument("--conditions", type=parse_conditions, default=list(range(1, 17)))
    check.add_argument("--replay", metavar="FILE", help="re-evaluate the witnesses in a report")
    _common(check)

    for name, text in (("nets", "enumerate net collections"),
                       ("thm1", "check theorem 1 on every intermediate subgroup"),
                       ("thm2", "check theorem 2 on every net"),
                       ("lemmas", "check the two radical lemmas"),
                       ("classify", "sandwich classification of intermediate subgroups")):
        p = sub.add_parser(name, help=text)
        p.add_argument("spec")
        if name in ("thm1", "thm2"):
            p.add_argument("--unconditional", action="store_true",
                           help="evaluate even when hypothesis conditions fail")
        _common(p)

    cache = sub.add_parser("cache", help="inspect or clear the model cache")
    cache.add_argument("action", choices=("ls", "clear"))
    cache.add_argument("--format", choices=("json", "text"), default="json")
    return parser


def _emit(args, payload, text: str | None = None):
    if args.format == "json" or text is None:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _instance(args):
    return load_cached(args.spec, use_cache=not args.no_cache, budget=args.budget_elements)


def _reports(args, inst, conditions):
    return check_all(inst, conditions, sample=args.sample, seed=args.seed, jobs=args.jobs,
                     reading4=args.reading4, reading11=args.reading11)


def _report_text(reports):
    lines = []
    for r in reports:
        flag = " (sampled)" if r.sampled else ""
        wit = f"  witness {json.dumps(r.witness['bound'], sort_keys=True)}" if r.witness else ""
        lines.append(f"{r.condition:>3}  {r.verdict:<8}{flag}{wit}".rstrip())
    return "\n".join(lines)


def cmd_model(args) -> int:
    inst = _instance(args)
    A = inst.action
    info = {"spec": inst.name, "elements": inst.lattice.size, "n": inst.n,
            "atoms": list(inst.atoms), "G": inst.G.order, "H": inst.H.order,
            "l0_prime": len(inst.l0_prime), "group_digest": inst.G.digest()}
    if A is not None:
        info.update(gl_order=A.gl_order, kernel=A.kernel_order, mode=A.mode,
                    residue_fields=list(A.ring.residue_field_sizes))
    _emit(args, info, "\n".join(f"{k}: {v}" for k, v in info.items()))
    return EXIT_OK


def cmd_check(args) -> int:
    inst = _instance(args)
    if args.replay:
        with open(args.replay) as fh:
            data = json.load(fh)
        entries = data if isinstance(data, list) else [data]
        out = []
        for e in entries:
            w = e.get("witness", e) if isinstance(e, dict) else None
            if not w or "condition" not in w:
                continue
            again = replay(inst, w, reading4=args.reading4, reading11=args.reading11)
            out.append({"condition": w["condition"], "verdict": "fails" if again else "holds",
                        "witness": w, "replayed": True})
        _emit(args, out, "\n".join(f"{o['condition']:>3}  {o['verdict']}  (replayed)" for o in out))
        return EXIT_FAILED if any(o["verdict"] == "fails" for o in out) else EXIT_OK
    reports = _reports(args, inst, args.conditions)
    _emit(args, [r.to_json() for r in reports], _report_text(reports))
    return EXIT_OK if all(r.holds for r in reports) else EXIT_FAILED


def cmd_nets(args) -> int:
    inst = _instance(args)
    nets = enumerate_nets(inst)
    payload = [{"entries": [list(r) for r in t.entries], "text": t.dumps()} for t in nets]
    _emit(args, payload, "\n".join(t.dumps().strip().replace("\n", ": ") for t in nets))
    return EXIT_OK


def _verdict_text(vs):
    return "\n".join(f"{v.statement} {v.target}: {v.outcome}  {json.dumps(v.clauses, sort_keys=True)}"
                     for v in vs)


def cmd_thm1(args) -> int:
    inst = _instance(args)
    reports = _reports(args, inst, THEOREM1_HYPOTHESES)
    subs = enumerate_intermediate(inst.G, inst.H, budget=args.budget_elements)
    vs = [verify_theorem1(inst, F, reports, args.unconditional, label=f"F{k}(order {F.order})")
          for k, F in enumerate(subs)]
    _emit(args, [v.to_json() for v in vs], _verdict_text(vs))
    return EXIT_OK if all(v.ok for v in vs) else EXIT_FAILED


def cmd_thm2(args) -> int:
    inst = _instance(args)
    reports = _reports(args, inst, THEOREM2_HYPOTHESES)
    vs = [verify_theorem2(inst, t, reports, args.unconditional) for t in enumerate_nets(inst)]
    _emit(args, [v.to_json() for v in vs], _verdict_text(vs))
    return EXIT_OK if all(v.ok for v in vs) else EXIT_FAILED


def cmd_lemmas(args) -> int:
    inst = _instance(args)
    reports = _reports(args, inst, range(1, 17))
    vs = [verify_lemma1(inst, reports)]
    vs += [verify_lemma2(inst, t, reports) for t in enumerate_nets(inst)]
    _emit(args, [v.to_json() for v in vs], _verdict_text(vs))
    return EXIT_OK if all(v.ok for v in vs) else EXIT_FAILED


def cmd_classify(args) -> int:
    inst = _instance(args)
    result = bv_classify(inst, enumerate_intermediate(inst.G, inst.H, budget=args.budget_elements))
    _emit(args, result.to_json(), result.to_text())
    return EXIT_OK if result.ok else EXIT_FAILED


def cmd_cache(args) -> int:
    if args.action == "ls":
        entries = list_cache()
        _emit(args, entries, "\n".join(f"{e['key']}  {e['spec']}  {e['bytes']} bytes"
                                       for e in entries) or "(empty)")
    else:
        n = clear_cache()
        _emit(args, {"removed": n}, f"removed {n} cached models")
    return EXIT_OK


COMMANDS = {"model": cmd_model, "check": cmd_check, "nets": cmd_nets, "thm1": cmd_thm1,
            "thm2": cmd_thm2, "lemmas": cmd_lemmas, "classify": cmd_classify, "cache": cmd_cache}


def _error(exc, code):
    record = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    print(json.dumps(record, sort_keys=True), file=sys.stderr)
    return code


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except (ClosureBudgetExceeded, SizeCap) as exc:
        return _error(exc, EXIT_BUDGET)
    except (ModlatError, OSError, ValueError) as exc:
        return _error(exc, EXIT_USAGE)


def main():
    sys.exit(run())
