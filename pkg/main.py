import argparse
import sys

from factories import create_config
from utils import (
    DEFAULT_PRIMES,
    DEFAULT_SEED,
    SUITE_ORDER,
    ExhaustedSearch,
    env_int,
    env_value,
)
from verifier import VerificationRun

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sklyanin-verify",
        description="Exact verification of the Sklyanin algebra S(E, tau) and its twist A(E, tau).",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    verify = sub.add_parser("verify", help="run verification suites")
    verify.add_argument("suite", choices=[*SUITE_ORDER, "all"])
    verify.add_argument("--mode", choices=["symbolic", "specialized"], default=None)
    verify.add_argument("--primes", "--prime", dest="primes", default=None,
                        help="comma separated odd primes, e.g. 7,11")
    verify.add_argument("--seed", type=int, default=None)
    verify.add_argument("--cutoff", type=int, default=None, help="top degree of graded computations")
    verify.add_argument("--jobs", type=int, default=None, help="worker processes across primes")
    verify.add_argument("--out", default=None, help="JSON report path; Markdown goes next to it")
    verify.add_argument("--dump-modules", action="store_true", help="include module summaries in the report")
    verify.add_argument("-v", "--verbose", action="count", default=None, help="repeat for per-check output")
    verify.add_argument("-q", "--quiet", action="store_true")
    return parser


def resolve_settings(args: argparse.Namespace) -> dict:
    """Explicit flags win over SKLY_* environment values, which win over defaults."""
    mode = args.mode or env_value("MODE", "specialized")
    primes = args.primes or env_value("PRIMES", ",".join(str(p) for p in DEFAULT_PRIMES))
    if args.quiet:
        verbosity = 0
    elif args.verbose is not None:
        verbosity = 1 + args.verbose
    else:
        verbosity = env_int("VERBOSE", 1)
    return {
        "suite": args.suite,
        "mode": mode,
        "primes": primes if mode == "specialized" else (),
        "seed": args.seed if args.seed is not None else env_int("SEED", DEFAULT_SEED),
        "cutoff": args.cutoff if args.cutoff is not None else env_int("CUTOFF"),
        "jobs": args.jobs if args.jobs is not None else env_int("JOBS", 1),
        "out": args.out or env_value("OUT"),
        "verbosity": verbosity,
        "dump_modules": args.dump_modules,
    }


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = create_config(resolve_settings(args))
        run = VerificationRun(config)
        run.prepare()
    except (ValueError, ExhaustedSearch) as exc:
        print(f"[FAIL] configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        report = run.run()
    except ExhaustedSearch as exc:
        # pool workers search for parameters themselves
        print(f"[FAIL] configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    run.save(report)

    if config.verbosity:
        print("\n--- Summary ---")
        print(report.summary_frame().to_string(index=False))
        print(f"\n>>> Done! {report}")
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
