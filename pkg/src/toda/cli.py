"""Command-line interface: JSON in, JSON (or CSV) out.

Every subcommand is a thin wrapper over the library; no numerical logic
lives here.  Inputs come from ``--in`` (a path, or inline JSON when the
argument starts with ``{``) or, where it makes sense, from a seeded random
instance via ``--seed``/``--N``.  Identical seed and configuration produce
byte-identical output: floats are printed with 17 significant digits and
all iteration orders are fixed.  Exit codes: 0 success, 1 runtime or
verification failure, 2 invalid input, 3 positivity (Herglotz) violation.
Set the ``TODA_LOG`` environment variable (DEBUG/INFO/...) for progress
logging on stderr.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import serialize
from .coordinates import (
    ActionAngle,
    DivisorQuasimomentum,
    pi_from,
    theta_from,
    w_from_divisor,
    w_from_theta,
)
from .errors import (
    AtPole,
    CoincidentArguments,
    InterlacingViolated,
    InvalidData,
    NoHerglotzSolution,
    NotHerglotz,
    NotHerglotzInput,
    OnSpectrum,
    TodaError,
)
from .flows import flow_H, flow_T
from .jacobi_core import JacobiMatrix
from .poisson import ah_formula
from .rational_weyl import (
    Divisor,
    PolyQuotient,
    RationalHerglotz,
    evaluate,
    from_quotient,
    to_quotient,
    zeros,
)
from .spectral_direct import SpectralData, eigen, spectral_from_weyl, weyl, weyl_from_spectral
from .spectral_inverse import lanczos_reconstruct, stieltjes_reconstruct
from .suites import SUITE_NAMES, random_jacobi, run_suites

log = logging.getLogger("toda")

_VALIDATION_ERRORS = (InvalidData, CoincidentArguments, AtPole, OnSpectrum)
_HERGLOTZ_ERRORS = (NotHerglotz, NotHerglotzInput, InterlacingViolated, NoHerglotzSolution)


def _load_document(args) -> object:
    """Typed object from --in (path or inline JSON) or a seeded random
    matrix from --seed/--N."""
    raw = getattr(args, "input", None)
    if raw is not None:
        if raw.lstrip().startswith("{"):
            text = raw
        else:
            path = Path(raw)
            if not path.exists():
                raise InvalidData("input file %s does not exist" % path)
            text = path.read_text()
        return serialize.loads(text)
    seed = getattr(args, "seed", None)
    if seed is not None:
        n = getattr(args, "N", None) or 4
        log.info("generating random matrix: seed=%d N=%d", seed, n)
        return random_jacobi(np.random.default_rng(seed), n)
    raise InvalidData("no input: pass --in, or --seed (with optional --N)")


def _as_weyl(obj) -> RationalHerglotz:
    """Canonical pole-residue form of any accepted input document."""
    if isinstance(obj, JacobiMatrix):
        return weyl(obj)
    if isinstance(obj, SpectralData):
        return weyl_from_spectral(obj)
    if isinstance(obj, RationalHerglotz):
        return obj
    if isinstance(obj, PolyQuotient):
        return from_quotient(obj)
    if isinstance(obj, ActionAngle):
        return w_from_theta(obj.lambdas, obj.thetas)
    if isinstance(obj, DivisorQuasimomentum):
        return w_from_divisor(obj)
    if isinstance(obj, Divisor):
        raise InvalidData("a divisor alone does not determine the function")
    raise InvalidData("unsupported input document")


def _divisor_chart(w: RationalHerglotz):
    """Divisor-chart fields, tolerating the one-pole case (empty chart)."""
    if w.n < 2:
        return np.empty(0), np.empty(0), float(np.sum(w.poles))
    dq = pi_from(w)
    return dq.gammas, dq.pis, dq.casimir


def cmd_spectrum(args) -> tuple[str, int]:
    obj = _load_document(args)
    w = _as_weyl(obj)
    sd = spectral_from_weyl(w)
    gammas = zeros(w).gammas
    doc = {"lambdas": sd.lambdas, "rhos": sd.rhos, "gammas": gammas}
    return serialize.dumps(doc), 0


def cmd_weyl(args) -> tuple[str, int]:
    obj = _load_document(args)
    w = _as_weyl(obj)
    pq = to_quotient(w)
    return serialize.dumps({"p": pq.p, "q": pq.q}), 0


def cmd_reconstruct(args) -> tuple[str, int]:
    obj = _load_document(args)
    if isinstance(obj, JacobiMatrix):
        raise InvalidData("reconstruct expects spectral-side input, not a matrix")
    pq = obj if isinstance(obj, PolyQuotient) else to_quotient(_as_weyl(obj))
    method = args.method
    if method in ("cf", "both"):
        m_cf = stieltjes_reconstruct(pq)
    if method in ("lanczos", "both"):
        sd = spectral_from_weyl(_as_weyl(obj))
        m_lz = lanczos_reconstruct(sd)
    if method == "cf":
        return serialize.dumps({"v": m_cf.v, "c": m_cf.c}), 0
    if method == "lanczos":
        return serialize.dumps({"v": m_lz.v, "c": m_lz.c}), 0
    disc = max(
        float(np.max(np.abs(m_cf.v - m_lz.v))),
        float(np.max(np.abs(m_cf.c - m_lz.c))) if m_cf.c.size else 0.0,
    )
    return serialize.dumps({"v": m_cf.v, "c": m_cf.c, "discrepancy": disc}), 0


def cmd_coords(args) -> tuple[str, int]:
    obj = _load_document(args)
    w = _as_weyl(obj)
    aa = theta_from(w)
    gammas, pis, casimir = _divisor_chart(w)
    if args.chart == "angle":
        doc = {"lambdas": aa.lambdas, "thetas": aa.thetas}
    elif args.chart == "divisor":
        doc = {"gammas": gammas, "pis": pis, "casimir": casimir}
    else:
        doc = {
            "lambdas": aa.lambdas,
            "thetas": aa.thetas,
            "gammas": gammas,
            "pis": pis,
            "casimir": casimir,
        }
    return serialize.dumps(doc), 0


def cmd_bracket(args) -> tuple[str, int]:
    obj = _load_document(args)
    w = _as_weyl(obj)
    lam, mu = float(args.lam), float(args.mu)
    doc = {
        "lam": lam,
        "mu": mu,
        "w_lam": float(evaluate(w, lam)),
        "w_mu": float(evaluate(w, mu)),
        "unrestricted": ah_formula(w, lam, mu, restricted=False),
    }
    if w.normalized:
        doc["restricted"] = ah_formula(w, lam, mu, restricted=True)
    return serialize.dumps(doc), 0


def _flow_record(t: float, w: RationalHerglotz) -> dict:
    sd = spectral_from_weyl(w)
    m = lanczos_reconstruct(sd)
    aa = theta_from(w)
    gammas, pis, _ = _divisor_chart(w)
    return {
        "t": float(t),
        "matrix": {"v": m.v, "c": m.c},
        "lambdas": sd.lambdas,
        "rhos": sd.rhos,
        "thetas": aa.thetas,
        "gammas": gammas,
        "pis": pis,
    }


def _csv_lines(records: list[dict]) -> list[str]:
    first = records[0]
    n = len(first["lambdas"])
    cols = (
        ["t"]
        + ["v%d" % i for i in range(n)]
        + ["c%d" % i for i in range(n - 1)]
        + ["lambda%d" % i for i in range(n)]
        + ["rho%d" % i for i in range(n)]
        + ["theta%d" % i for i in range(1, n)]
        + ["gamma%d" % i for i in range(1, n)]
        + ["pi%d" % i for i in range(1, n)]
    )
    lines = [",".join(cols)]
    for rec in records:
        row = (
            [rec["t"]]
            + list(rec["matrix"]["v"])
            + list(rec["matrix"]["c"])
            + list(rec["lambdas"])
            + list(rec["rhos"])
            + list(rec["thetas"])
            + list(rec["gammas"])
            + list(rec["pis"])
        )
        lines.append(",".join(serialize.dumps(float(x)) for x in row))
    return lines


def cmd_flow(args) -> tuple[str, int]:
    obj = _load_document(args)
    if args.samples < 1:
        raise InvalidData("need at least one sample time")
    times = np.linspace(args.t0, args.t1, args.samples)
    records = []
    if args.family == "H":
        w0 = _as_weyl(obj)
        for t in times:
            records.append(_flow_record(t, flow_H(w0, args.j, float(t))))
    else:
        dq0 = obj if isinstance(obj, DivisorQuasimomentum) else pi_from(_as_weyl(obj))
        for t in times:
            records.append(_flow_record(t, w_from_divisor(flow_T(dq0, args.j, float(t)))))
    if args.emit_csv:
        return "\n".join(_csv_lines(records)), 0
    return "\n".join(serialize.dumps(rec) for rec in records), 0


def cmd_verify(args) -> tuple[str, int]:
    names = SUITE_NAMES if args.suite == "all" else (args.suite,)
    log.info("running suites: %s (seed=%d N=%d)", ", ".join(names), args.seed, args.N)
    residuals, thresholds = run_suites(names, args.seed, args.N)
    for override in args.tol or ():
        name, _, value = override.partition("=")
        if not value:
            raise InvalidData("tolerance overrides take the form NAME=VALUE")
        if name not in thresholds:
            raise InvalidData("unknown check %r in --tol" % name)
        try:
            thresholds[name] = float(value)
        except ValueError as exc:
            raise InvalidData("bad tolerance value %r" % value) from exc
    failed = [k for k in residuals if residuals[k] > thresholds[k]]
    for name in failed:
        print(
            "FAIL %s: residual %.3e > tolerance %.3e"
            % (name, residuals[name], thresholds[name]),
            file=sys.stderr,
        )
    report = {k: residuals[k] for k in sorted(residuals)}
    return serialize.dumps(report), 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toda",
        description="Spectral transforms, Poisson brackets, and flows of "
        "finite Jacobi matrices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p, with_seed=True):
        p.add_argument("--in", dest="input", metavar="PATH_OR_JSON",
                       help="input document: a file path or inline JSON")
        p.add_argument("--out", help="write output here instead of stdout")
        if with_seed:
            p.add_argument("--seed", type=int,
                           help="generate a random matrix instead of --in")
            p.add_argument("--N", type=int, help="size of the generated matrix")

    p = sub.add_parser("spectrum", help="eigenvalues, weights, and divisor")
    add_io(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("weyl", help="quotient form of the Weyl function")
    add_io(p)
    p.set_defaults(func=cmd_weyl)

    p = sub.add_parser("reconstruct", help="matrix from spectral-side data")
    add_io(p, with_seed=False)
    p.add_argument("--method", choices=("cf", "lanczos", "both"), default="both")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("coords", help="angle and divisor chart coordinates")
    add_io(p)
    p.add_argument("--chart", choices=("angle", "divisor", "all"), default="all")
    p.set_defaults(func=cmd_coords)

    p = sub.add_parser("bracket", help="two-point bracket closed forms")
    add_io(p)
    p.add_argument("--lam", type=float, required=True)
    p.add_argument("--mu", type=float, required=True)
    p.set_defaults(func=cmd_bracket)

    p = sub.add_parser("flow", help="sampled flow trajectory (JSON lines)")
    add_io(p)
    p.add_argument("--family", choices=("H", "T"), default="H")
    p.add_argument("--j", type=int, default=2, help="flow index (1-based)")
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--t1", type=float, default=1.0)
    p.add_argument("--samples", type=int, default=11)
    p.add_argument("--emit-csv", action="store_true",
                   help="emit a CSV table instead of JSON lines")
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("verify", help="run invariant suites")
    p.add_argument("--suite", choices=SUITE_NAMES + ("all",), default="all")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--N", type=int, default=4)
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--tol", action="append", metavar="NAME=VALUE",
                   help="override one check's tolerance (repeatable)")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(
        level=os.environ.get("TODA_LOG", "WARNING").upper(),
        format="%(name)s %(levelname)s %(message)s",
    )
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text, code = args.func(args)
    except _HERGLOTZ_ERRORS as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 3
    except _VALIDATION_ERRORS as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except TodaError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    if getattr(args, "out", None):
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
