"""Command-line front end.

Exit codes: 0 success / feasible / verified, 1 infeasible / failed check,
2 usage or parse error.
"""

import argparse
import json
import sys

import numpy as np

from .alignment import build_Ar, converse_certificate, exact_rank_specialized
from .channels import dump_json, generate_channels, load_json, read_channels, write_channels
from .construct import construct, solution_from_dict, solution_to_dict
from .errors import ChannelFileError, DegeneracyError, IAError, InfeasibleError
from .feasibility import is_feasible, region_csv, region_svg, region_sweep
from .linalg import ToleranceConfig, rank
from .verify import verify

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {v}")
    return v


def _nonneg(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected an integer >= 0, got {v}")
    return v


def _tol(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")
    if not (0.0 < v < 1e-3):
        raise argparse.ArgumentTypeError(f"tolerance must lie in (0, 1e-3), got {v}")
    return v


def _selection(text):
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"selection must be comma-separated integers, got {text!r}")


def _tolerance(args):
    return ToleranceConfig(residual_tol=args.tol) if args.tol is not None else ToleranceConfig()


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _channels_for(args):
    """Channels from --channels, else generated from --M/--N/--seed."""
    if args.channels:
        ch = read_channels(args.channels)
        for name in ("M", "N"):
            given = getattr(args, name, None)
            if given is not None and given != getattr(ch, name):
                raise UsageError(f"--{name} {given} disagrees with {args.channels} ({name}={getattr(ch, name)})")
        return ch, None
    if args.M is None or args.N is None:
        raise UsageError("--M and --N are required without --channels")
    return generate_channels(args.M, args.N, args.seed), args.seed


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_feas(args):
    v = is_feasible(args.M, args.N, args.d)
    if args.json:
        print(json.dumps({"M": args.M, "N": args.N, "d": args.d, **v.to_dict()}))
    elif v.feasible:
        binding = ",".join(map(str, v.binding_r)) or "none"
        print(f"feasible (binding r: {binding})")
    else:
        print(f"infeasible (r={v.violated_r})")
    return EXIT_OK if v.feasible else EXIT_FAIL


def cmd_gen(args):
    ch = generate_channels(args.M, args.N, args.seed)
    if args.out:
        write_channels(ch, args.out)
    else:
        from .channels import channels_to_dict
        print(json.dumps(channels_to_dict(ch), separators=(",", ":")))
    return EXIT_OK


def cmd_construct(args):
    tol = _tolerance(args)
    ch, seed = _channels_for(args)
    try:
        sol = construct(ch, args.d, tol, selection=args.selection)
    except InfeasibleError as exc:
        print(f"refused: {exc}")
        if exc.certificate is not None:
            print(json.dumps(exc.certificate.to_dict()))
        return EXIT_FAIL
    report = verify(ch, sol, args.d, tol)
    if not report.passed:
        print("self-verification failed", file=sys.stderr)
        print(json.dumps(report.to_dict(), indent=2), file=sys.stderr)
        return EXIT_FAIL
    doc = solution_to_dict(sol)
    if seed is not None:
        doc["seed"] = seed
    if args.out:
        dump_json(doc, args.out)
    r = "none" if sol.r is None else sol.r
    print(f"variant={sol.variant} r={r} max_residual={report.max_residual:.3e}")
    return EXIT_OK


def cmd_verify(args):
    tol = _tolerance(args)
    sol = solution_from_dict(load_json(args.solution))
    if args.channels:
        ch = read_channels(args.channels)
    elif sol.seed is not None:
        ch = generate_channels(sol.M, sol.N, sol.seed)
    else:
        raise UsageError("--channels is required when the solution carries no seed")
    d = args.d if args.d is not None else sol.d
    report = verify(ch, sol, d, tol)
    print(json.dumps(report.to_dict(), indent=2))
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_certify(args):
    tol = _tolerance(args)
    ch, _ = _channels_for(args)
    cert = converse_certificate(ch, args.d, tol)
    if cert is None:
        print(f"feasible: no certificate (M={ch.M}, N={ch.N}, d={args.d})")
        return EXIT_OK
    print(json.dumps(cert.to_dict(), indent=2))
    return EXIT_FAIL


def cmd_region(args):
    if args.m_max < args.d or args.n_max < args.d:
        raise UsageError("--m-max and --n-max must be >= --d")
    cells = region_sweep(args.d, args.m_max, args.n_max)
    text = region_csv(cells) if args.format == "csv" else region_svg(cells)
    _emit(text, args.out)
    return EXIT_OK


def cmd_selftest(args):
    tol = _tolerance(args)
    failures, skipped, checked = [], 0, 0
    rows = []
    for M in range(1, args.m_max + 1):
        for N in range(1, args.n_max + 1):
            if M > N:
                skipped += 1
                continue
            ok_exact = all(exact_rank_specialized(M, N, r) for r in range(args.r_max + 1))
            channels = [generate_channels(M, N, s) for s in range(args.seeds)]
            ok_numeric = True
            for r in range(args.r_max + 1):
                for ch in channels:
                    a = build_Ar(ch, r, 1).matrix
                    if rank(a, tol) != min(a.shape):
                        ok_numeric = False
                        failures.append((M, N, r, "numeric"))
            if not ok_exact:
                failures.extend(
                    (M, N, r, "exact") for r in range(args.r_max + 1) if not exact_rank_specialized(M, N, r)
                )
            checked += 1
            rows.append((M, N, ok_exact, ok_numeric))
    print(f"{'M':>3} {'N':>3} {'exact':>6} {'numeric':>8}")
    for M, N, e, n in rows:
        print(f"{M:>3} {N:>3} {'ok' if e else 'FAIL':>6} {'ok' if n else 'FAIL':>8}")
    print(
        f"checked {checked} (M, N) pairs for r <= {args.r_max} with {args.seeds} seeds; "
        f"skipped {skipped} pairs with M > N (full-rank claim assumes N >= M)"
    )
    if failures:
        for M, N, r, kind in failures:
            print(f"FAIL {kind}: M={M} N={N} r={r}")
        return EXIT_FAIL
    print("all rank checks passed")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="ia3", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def tol_flag(sp):
        sp.add_argument("--tol", type=_tol, default=None, help="residual tolerance override")

    sp = sub.add_parser("feas", help="decide feasibility of (M, N, d)")
    sp.add_argument("--M", type=_positive, required=True)
    sp.add_argument("--N", type=_positive, required=True)
    sp.add_argument("--d", type=_positive, required=True)
    sp.add_argument("--json", action="store_true", help="print the verdict as JSON")
    sp.set_defaults(func=cmd_feas)

    sp = sub.add_parser("gen", help="generate a seeded channel file")
    sp.add_argument("--M", type=_positive, required=True)
    sp.add_argument("--N", type=_positive, required=True)
    sp.add_argument("--seed", type=_nonneg, default=0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_gen)

    for name, func, hlp in (
        ("construct", cmd_construct, "construct and self-verify an alignment solution"),
        ("certify", cmd_certify, "print a converse certificate for infeasible parameters"),
    ):
        sp = sub.add_parser(name, help=hlp)
        sp.add_argument("--M", type=_positive)
        sp.add_argument("--N", type=_positive)
        sp.add_argument("--d", type=_positive, required=True)
        sp.add_argument("--seed", type=_nonneg, default=0)
        sp.add_argument("--channels", help="channel JSON file (overrides --seed)")
        tol_flag(sp)
        if name == "construct":
            sp.add_argument("--out", help="solution JSON path")
            sp.add_argument("--selection", type=_selection, default=None,
                            help="eigen variant: comma-separated 0-based eigenvector indices")
        sp.set_defaults(func=func)

    sp = sub.add_parser("verify", help="verify a solution file against channels")
    sp.add_argument("--channels")
    sp.add_argument("--solution", required=True)
    sp.add_argument("--d", type=_positive)
    tol_flag(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("region", help="feasible region over an (M, N) grid")
    sp.add_argument("--d", type=_positive, required=True)
    sp.add_argument("--m-max", type=_positive, required=True)
    sp.add_argument("--n-max", type=_positive, required=True)
    sp.add_argument("--format", choices=("csv", "svg"), default="csv")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_region)

    sp = sub.add_parser("selftest", help="exact and numeric full-rank checks of A_r")
    sp.add_argument("--m-max", type=_positive, default=12)
    sp.add_argument("--n-max", type=_positive, default=12)
    sp.add_argument("--r-max", type=_nonneg, default=6)
    sp.add_argument("--seeds", type=_positive, default=3)
    tol_flag(sp)
    sp.set_defaults(func=cmd_selftest)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ChannelFileError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DegeneracyError as exc:
        print(f"degenerate channels: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except IAError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
