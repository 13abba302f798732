import argparse
import logging
import sys
from pathlib import Path

from .catalog import TYPE_FILTERS, catalog_entries
from .cohomology import h2_trivial
from .errors import BudgetError, ElaborationError, InputError, RHSActionsError
from .group_spec import elaborate, normalize, parse_group_spec
from .report import ReportDocument, json_line
from .structure import period
from .theorems import central_quotient_obstruction, classify, periodic_extension_search
from .utils.argparse_utils import KeyValueAction
from .utils.budgets import load_budgets, set_budgets
from .utils.configure_logging import configure_logging
from .utils.validators import validate_yaml_file

EXIT_OK = 0
EXIT_OBSTRUCTION = 1
EXIT_INPUT_ERROR = 2
EXIT_BUDGET = 3


def _common_arguments() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--bound",
        type=int,
        default=None,
        help="Order bound of the catalog quotient searches (default from the budgets).",
    )
    common.add_argument(
        "--m-bound",
        dest="m_bound",
        type=int,
        default=None,
        help="Largest coefficient order m tried by classify (default |G|).",
    )
    output = common.add_mutually_exclusive_group()
    output.add_argument("--json", dest="format", action="store_const", const="json", help="Write JSON (default).")
    output.add_argument("--text", dest="format", action="store_const", const="text", help="Write a YAML rendering.")
    common.set_defaults(format="json")
    common.add_argument(
        "--deterministic",
        action="store_true",
        help="Leave out the timestamp so that reports are byte-identical across runs.",
    )
    common.add_argument("--threads", type=int, default=1, help="Worker threads used by classify.")
    common.add_argument(
        "--fail-on-obstruction",
        action="store_true",
        help="Exit with code 1 when the verdict is cannot_act.",
    )
    common.add_argument(
        "-C",
        "--config_file",
        type=Path,
        default=None,
        help="Path to a YAML file overriding the default budgets.",
    )
    common.add_argument(
        "-k",
        "--keyvals",
        nargs="+",
        action=KeyValueAction,
        default={},
        help="Budget overrides as key=value pairs, e.g. -k h2_order_bound=96 verify_catalog=false",
    )
    common.add_argument("-v", "--verbose", action="store_true", help="Increase output verbosity to INFO level.")
    common.add_argument(
        "-vv",
        "--very_verbose",
        action="store_true",
        help="Increase output verbosity to DEBUG level.",
    )
    common.add_argument("-l", "--logging", action="store_true", help="Write log out to a timestamped file.")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_arguments()
    parser = argparse.ArgumentParser(
        prog="rhs-actions",
        description="Decide which finite groups can act freely and homologically trivially on rational homology 3-spheres.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    sub = commands.add_parser("classify", parents=[common], help="Full classification report of a group.")
    sub.add_argument("spec", help='Group specification, e.g. "C(2) x C(2)".')

    sub = commands.add_parser("period", parents=[common], help="Periodicity and cohomological period.")
    sub.add_argument("spec")

    sub = commands.add_parser("h2", parents=[common], help="H^2(G, Z/m) with trivial action.")
    sub.add_argument("spec")
    sub.add_argument("--mod", type=int, required=True, help="Coefficient order m.")
    sub.add_argument("--enumerate", action="store_true", help="List one representative cocycle per class.")

    sub = commands.add_parser("extensions", parents=[common], help="Periodic central extensions by Z/m.")
    sub.add_argument("spec")
    sub.add_argument("--mod", type=int, required=True, help="Kernel order m.")

    sub = commands.add_parser(
        "theoremB", aliases=["obstruction"], parents=[common], help="Central-quotient obstruction (types B and C)."
    )
    sub.add_argument("spec")

    sub = commands.add_parser("catalog", parents=[common], help="List catalog members as newline-delimited JSON.")
    sub.add_argument("--max-order", dest="max_order", type=int, required=True)
    sub.add_argument("--type", dest="type_filter", choices=TYPE_FILTERS, default=None)
    return parser


def _budget_overrides(args) -> dict:
    overrides = dict(args.keyvals or {})
    if args.bound is not None:
        overrides["quotient_search_order_bound"] = args.bound
    if args.m_bound is not None:
        overrides["m_bound"] = args.m_bound
    return overrides


def _emit(document: ReportDocument, fmt: str) -> None:
    sys.stdout.write(document.to_json() if fmt == "json" else document.to_text())
    sys.stdout.flush()


def _run_command(args) -> int:
    if args.command == "catalog":
        entries = catalog_entries(args.max_order, args.type_filter)
        if args.format == "json":
            sys.stdout.write("".join(json_line(e.to_dict()) + "\n" for e in entries))
        else:
            document = ReportDocument.create("catalog", None, None, [e.to_dict() for e in entries], deterministic=args.deterministic)
            sys.stdout.write(document.to_text())
        return EXIT_OK

    node = parse_group_spec(args.spec)
    normalized = normalize(node)
    G = elaborate(node)
    logging.info(f"{normalized} elaborated to a group of order {G.order}")
    errors = {}
    status = EXIT_OK

    if args.command == "classify":
        report = classify(G, threads=args.threads)
        payload = report.to_dict()
        errors = report.errors
        if args.fail_on_obstruction and report.verdict.tag == "cannot_act":
            status = EXIT_OBSTRUCTION
    elif args.command == "period":
        payload = period(G).to_dict()
    elif args.command == "h2":
        H2 = h2_trivial(G, args.mod, enumerate=args.enumerate)
        payload = H2.to_dict()
        payload["generators"] = [f.as_table() for f in H2.generators]
        if args.enumerate:
            payload["enumerated"] = H2.enumerated
            payload["representatives"] = [f.as_table() for f in H2.representatives]
    elif args.command == "extensions":
        payload = [w.to_dict() for w in periodic_extension_search(G, args.mod)]
    else:
        verdict = central_quotient_obstruction(G, args.bound)
        payload = verdict.to_dict()
        if verdict.certificate is not None:
            payload["certificate_verified"] = verdict.certificate.verify(G)
        if args.fail_on_obstruction and verdict.tag == "cannot_act":
            status = EXIT_OBSTRUCTION

    document = ReportDocument.create(args.command, args.spec, normalized, payload, errors, args.deterministic)
    _emit(document, args.format)
    return status


def run(argv=None) -> int:
    """Run the command line on argv and return the exit code; only reports go to stdout."""
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_INPUT_ERROR

    configure_logging(args.verbose, args.very_verbose, log_to_file=args.logging, log_file_prepend="RHSActions_")
    logging.info(f"rhs-actions {args.command} started.")

    previous = None
    try:
        config_file = validate_yaml_file(args.config_file) if args.config_file is not None else None
        previous = set_budgets(load_budgets(config_file, _budget_overrides(args)))
        return _run_command(args)
    except ElaborationError as e:
        print(f"rhs-actions: {e}", file=sys.stderr)
        return EXIT_BUDGET if e.budget else EXIT_INPUT_ERROR
    except BudgetError as e:
        print(f"rhs-actions: budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except InputError as e:
        print(f"rhs-actions: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except RHSActionsError as e:
        print(f"rhs-actions: {e.tag}: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    finally:
        if previous is not None:
            set_budgets(previous)


def main():
    """Entry point for the rhs-actions command."""
    sys.exit(run())


if __name__ == "__main__":
    main()
