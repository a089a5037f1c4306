"""
avoidgroup.cli

Contains the command-line front end. Every command prints a JSON payload, or writes
it to `--out`; `verify` exits with 0 only when every check passes.
"""

import argparse
import sys
from typing import Any, Callable, Dict, List, Optional

from prefect.utilities.logging import get_logger

from . import api, avoidance, classify, grids, groups, scans, verify
from ._utils import encode_json, parse_n_range
from .avoidance import PatternSet
from .perms import Permutation, format_cycles

logger = get_logger("avoidgroup.cli")


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as f:
            f.write(text + "\n")
    else:
        print(text)


def _patterns(args: argparse.Namespace) -> PatternSet:
    return PatternSet.parse(args.patterns)


def cmd_enumerate(args: argparse.Namespace) -> Dict[str, Any]:
    T = _patterns(args)
    if args.count_only:
        count = avoidance.count_avoiders(args.n, T, args.strategy)
        return {"n": args.n, "patterns": T.key, "count": str(count)}
    avoiders = avoidance.enumerate_avoiders(args.n, T, args.strategy)
    return {
        "n": args.n,
        "patterns": T.key,
        "count": str(len(avoiders)),
        "members": [str(p) for p in avoiders],
    }


def cmd_group(args: argparse.Namespace) -> Dict[str, Any]:
    T = _patterns(args)
    g = avoidance.group_of_avoiders(args.n, T)
    if args.export_cas:
        with open(args.export_cas, "w") as f:
            f.write(groups.export_cas(g))
    payload: Dict[str, Any] = {"n": args.n, "patterns": T.key, "order": str(g.order)}
    if not args.order_only:
        payload["generators"] = [format_cycles(p) for p in g.generators]
        payload["orbits"] = [list(o) for o in groups.orbits(g)]
    return payload


def cmd_grid(args: argparse.Namespace) -> Dict[str, Any]:
    peg = grids.PegPermutation.parse(args.peg)
    if args.member is not None:
        p = Permutation.parse(args.member)
        witness = grids.find_grid_witness(p, peg)
        payload: Dict[str, Any] = {
            "peg": str(peg),
            "permutation": str(p),
            "member": witness is not None,
        }
        if args.witness and witness is not None:
            payload["witness"] = [str(part) for part in witness]
        return payload
    section = grids.grid_section(peg, args.section)
    return {
        "peg": str(peg),
        "n": args.section,
        "count": str(len(section)),
        "members": [str(p) for p in section.members],
    }


def cmd_classify(args: argparse.Namespace) -> Dict[str, Any]:
    T = _patterns(args)
    verdict = classify.classify_avoiders(args.n, T)
    return {"n": args.n, "patterns": T.key, **verdict.to_dict()}


def cmd_classify_range(args: argparse.Namespace) -> Dict[str, Any]:
    n_range = parse_n_range(args.n_from, args.n_to)
    return classify.classify_sequence(_patterns(args), n_range).to_dict()


def cmd_probe(args: argparse.Namespace) -> Dict[str, Any]:
    T = _patterns(args)
    rows = scans.fixed_point_probe(T, parse_n_range(args.n_from, args.n_to))
    return {"patterns": T.key, "rows": [row.to_dict() for row in rows]}


def cmd_verify(args: argparse.Namespace) -> Dict[str, Any]:
    if args.scenario == "all":
        scenario_ids = list(verify.registered_scenarios())
    else:
        scenario_ids = [verify.get_scenario(args.scenario).id]
    reports = [api.run_scenario_flow(sid, n_max=args.n_max) for sid in scenario_ids]
    args.passed = all(r.passed for r in reports)
    if len(reports) == 1:
        return reports[0].to_dict()
    return {
        "scenarios": [r.to_dict() for r in reports],
        "summary": {
            "scenarios": len(reports),
            "failed": [r.scenario_id for r in reports if not r.passed],
            "pass": args.passed,
        },
    }


def cmd_scan(args: argparse.Namespace) -> Dict[str, Any]:
    report = api.run_scan_flow(
        pattern_lengths=args.pattern_length,
        subset_size=args.subset_size,
        n_from=args.n_from,
        n_to=args.n_to,
        exclude_psi=args.exclude_psi,
        classify_all=args.classify_all,
    )
    return report.to_dict()


def cmd_report(args: argparse.Namespace) -> str:
    return api.run_report_flow(patterns=_patterns(args).key)


def _add_range(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n-from", type=int, required=True)
    parser.add_argument("--n-to", type=int, required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="avoidgroup",
        description="Groups generated by pattern-avoiding permutations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, handler: Callable, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        p.add_argument("--out", default=None, help="Write the output to this file.")
        p.set_defaults(handler=handler)
        return p

    p = command("enumerate", cmd_enumerate, "List the avoiders of a pattern set.")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--patterns", required=True)
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--strategy", choices=avoidance.STRATEGIES, default=None)

    p = command("group", cmd_group, "Build the group generated by the avoiders.")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--patterns", required=True)
    p.add_argument("--order-only", action="store_true")
    p.add_argument("--export-cas", default=None, metavar="FILE")

    p = command("grid", cmd_grid, "Grid class membership and sections.")
    p.add_argument("--peg", required=True)
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("--member", default=None, metavar="PERM")
    target.add_argument("--section", type=int, default=None, metavar="N")
    p.add_argument("--witness", action="store_true")

    p = command("classify", cmd_classify, "Classify the group at one length.")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--patterns", required=True)

    p = command("classify-range", cmd_classify_range, "Classify over a range.")
    _add_range(p)
    p.add_argument("--patterns", required=True)

    p = command("probe", cmd_probe, "Fixed points and swapped blocks over a range.")
    _add_range(p)
    p.add_argument("--patterns", required=True)

    p = command("verify", cmd_verify, "Run a registered scenario, or all of them.")
    p.add_argument("--scenario", required=True)
    p.add_argument("--n-max", type=int, default=None)

    p = command("scan", cmd_scan, "Scan a family of pattern sets up to symmetry.")
    p.add_argument("--pattern-length", type=int, nargs="+", required=True)
    p.add_argument("--subset-size", type=int, required=True)
    p.add_argument("--exclude-psi", action="store_true")
    _add_range(p)
    p.add_argument("--classify-all", action="store_true")

    p = command("report", cmd_report, "Render the stored verdicts of a pattern set.")
    p.add_argument("--patterns", required=True)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.passed = True
    try:
        output = args.handler(args)
    except ValueError as e:
        parser.error(str(e))
    except RuntimeError as e:
        logger.error(f"{args.command} stopped: {e}")
        print(f"avoidgroup: {e}", file=sys.stderr)
        return 1
    text = output if isinstance(output, str) else encode_json(output)
    _emit(text, args.out)
    return 0 if args.passed else 1


if __name__ == "__main__":
    sys.exit(main())
