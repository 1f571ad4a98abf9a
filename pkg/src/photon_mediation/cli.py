"""Command-line entry point: ``photon-mediation run`` and ``photon-mediation verify``."""

from __future__ import annotations

import argparse
import sys

from .acceptance import CRITERIA, CRITERION_IDS, run_criterion
from .analysis import UndefinedWeakValueError
from .fock import DegenerateStateError, StructureError
from .network import NetworkFormatError, build_fig1, load_network_file
from .postselect import ImpossibleEventError, RegisterError
from .report import SCENARIO_IDS, build_report, dumps_structured, render_text

# exception type -> (stage named in the diagnostic, exit status)
_FAILURE_STAGES = (
    (NetworkFormatError, "load", 2),
    (OSError, "load", 2),
    (ImpossibleEventError, "postselect", 3),
    (RegisterError, "register", 3),
    (UndefinedWeakValueError, "weak-values", 3),
    (DegenerateStateError, "evolution", 3),
    (StructureError, "network", 2),
)


def _stage_of(exc: BaseException) -> tuple[str, int]:
    for cls, stage, code in _FAILURE_STAGES:
        if isinstance(exc, cls):
            return stage, code
    return "internal", 1


def _load(path: str | None):
    return build_fig1() if path is None else load_network_file(path)


def _cmd_run(args: argparse.Namespace) -> int:
    try:
        net = _load(args.network)
        report = build_report(args.scenario, net)
    except Exception as exc:  # noqa: BLE001
        stage, code = _stage_of(exc)
        if stage == "internal":
            raise
        print(f"error [{stage}]: {exc}", file=sys.stderr)
        return code
    out = dumps_structured(report) if args.format == "structured" else render_text(report)
    sys.stdout.write(out)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    if args.list:
        for cid in CRITERION_IDS:
            print(cid)
        return 0
    try:
        net = _load(args.network)
    except Exception as exc:  # noqa: BLE001
        stage, code = _stage_of(exc)
        print(f"error [{stage}]: {exc}", file=sys.stderr)
        return code
    failed = 0
    for fn, cid in zip(CRITERIA, CRITERION_IDS):
        res = run_criterion(fn, cid, net)
        print(res.line())
        failed += not res.passed
    print(f"{len(CRITERIA) - failed}/{len(CRITERIA)} criteria passed")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="photon-mediation",
                                     description="Few-photon linear-optics protocol simulator.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="compute a scenario report")
    run.add_argument("--scenario", required=True, choices=SCENARIO_IDS)
    run.add_argument("--network", metavar="PATH", help="network description (JSON); default: built-in fig1")
    run.add_argument("--format", choices=("text", "structured"), default="text")
    run.set_defaults(func=_cmd_run)

    verify = sub.add_parser("verify", help="run the acceptance criteria")
    verify.add_argument("--network", metavar="PATH")
    verify.add_argument("--list", action="store_true", help="print criterion ids without running them")
    verify.set_defaults(func=_cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
