"""Command line front end.

Usage::

    idealorbit orbit scan JOB [--window N] [--text]
    idealorbit orbit certify JOB [--prime P] [--precision K]
    idealorbit arc build JOB
    idealorbit groebner JOB [--order ORDER]
    idealorbit strassman JOB
    idealorbit relations check JOB
    idealorbit verify-auto JOB

Reports go to stdout as JSON (or ``--output FILE``).  Errors are printed to
stderr as JSON and mapped to exit codes: 0 ok, 1 verification failed,
2 validation, 3 bad prime, 4 degree overflow, 5 indeterminate,
6 internal invariant failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .arc import binom, build_arc
from .dynamics import automorphism_witness
from .errors import IdealOrbitError, ValidationError
from .groebner import groebner_basis
from .jobs import Job, envelope
from .orbit import analyze, good_prime
from .polynomial import parse_order
from .quotient import (
    build_quotient,
    cycle_length,
    cycle_points,
    identity_jacobian_exponent,
    reduce_mod_pk,
)
from .relations import check_relations
from .strassman import (
    Bound,
    IndeterminateVerdict,
    PadicPowerSeries,
    ZeroSeries,
    mahler_coordinate_verdict,
    strassman_bound,
)

VERIFY_FAILED = 1


def _verdict_dict(v):
    if isinstance(v, ZeroSeries):
        return {"verdict": "ZeroSeries", "precision": v.precision}
    if isinstance(v, Bound):
        return {"verdict": "Bound", "N": v.N}
    return {"verdict": "Indeterminate", "reason": v.reason}


def _monomial_text(e, names):
    parts = [n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k]
    return "*".join(parts) or "1"


# ---------------------------------------------------------------------------
# commands: each returns (result, diagnostics, exit_code)
# ---------------------------------------------------------------------------


def cmd_orbit(job: Job, certify_classes, window=None, prime=None, precision=None):
    N = window if window is not None else job.window
    if N is None:
        raise ValidationError("a window radius is required", field="window")
    sigma = job.automorphism
    report = analyze(
        sigma,
        job.ideal_I,
        job.ideal_J,
        N,
        Q=job.defining_ideal,
        certify_classes=certify_classes,
        p=prime if prime is not None else job.prime,
        K=precision or job.precision or 12,
        strategy=job.option("strategy", "orbit"),
        confidence_radius=job.option("confidence_radius", 60),
        tail_fraction=job.option("tail_fraction", 0.5),
    )
    diagnostics = {"strategy": job.option("strategy", "orbit"), "field": job.field_spec}
    return report.to_dict(), diagnostics, 0


def cmd_arc(job: Job):
    sigma = job.automorphism
    L = job.ideal_I
    if job.defining_ideal is not None:
        L = L + job.defining_ideal
    p = job.prime or good_prime(sigma, job.ideal_I, job.ideal_I, job.defining_ideal)
    K = job.precision or 12
    S0 = build_quotient(L)
    S = reduce_mod_pk(S0, p, K)
    points = job.polys("point", required=False)
    s0 = tuple(S.element(f) for f in points) if points else S.generators()
    power = job.option("power", 1)
    if power == "auto":
        Sp = reduce_mod_pk(S0, p, 1)
        sp = tuple(Sp.element(f) for f in points) if points else Sp.generators()
        a = cycle_length(sigma, Sp, sp)
        power = a * identity_jacobian_exponent(sigma, Sp, cycle_points(sigma, Sp, sp, a), a)
    arc = build_arc(sigma, S, s0, p, K, power=power, experimental=bool(job.option("experimental_p3", False)))
    names = S.ring.variables
    series = []
    for var, f in zip(job.variables, arc.series):
        series.append(
            {
                "variable": var,
                "coefficients": [
                    {"k": k, "coords": list(b.coords), "valuation_floor": b.valuation()}
                    for k, b in enumerate(f.coeffs)
                ],
            }
        )
    result = {
        "prime": p,
        "precision": K,
        "power": power,
        "basis": [_monomial_text(m, names) for m in S.basis],
        "series": series,
        "ledger": [vars(r) for r in arc.ledger],
        "certifying": arc.certifying,
        "validated": arc.validated,
    }
    return result, {}, 0


def cmd_groebner(job: Job, order=None):
    order = parse_order(order or job.option("order", "grevlex"))
    gb = groebner_basis(job.ideal_I, order)
    return {"order": repr(order), "basis": [str(g) for g in gb]}, {}, 0


def _as_fraction(x, key):
    if isinstance(x, bool):
        raise ValidationError("expected a number", field=key)
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except ValueError:
            pass
    raise ValidationError("expected an integer or a rational string", field=key)


def cmd_strassman(job: Job):
    spec = job.data.get("series")
    if not isinstance(spec, dict):
        raise ValidationError("missing series object", field="series")
    kind = spec.get("kind", "power")
    p = spec.get("prime", job.prime)
    K = spec.get("precision", job.precision or 12)
    if not isinstance(p, int) or p < 5:
        raise ValidationError("a prime p >= 5 is required", field="series.prime")
    coeffs = [_as_fraction(c, f"series.coefficients[{i}]") for i, c in enumerate(spec.get("coefficients", []))]
    modulus = p**K
    if kind == "power":
        verdict = strassman_bound(PadicPowerSeries.exact(coeffs, p, K))

        def value(n):
            return sum(c * Fraction(n) ** j for j, c in enumerate(coeffs))

    elif kind == "mahler":
        ints = [int(c) for c in coeffs]
        verdict = mahler_coordinate_verdict(ints, p, K)

        def value(n):
            return Fraction(sum(b * binom(n, k) for k, b in enumerate(ints)))

    else:
        raise ValidationError(f"unknown series kind {kind!r}", field="series.kind")
    W = job.window or 0
    zeros = []
    for n in range(-W, W + 1):
        v = value(n)
        if v.numerator % modulus == 0 and v.denominator % p:
            zeros.append(n)
    result = _verdict_dict(verdict)
    result.update({"prime": p, "precision": K, "kind": kind, "zeros_in_window": zeros, "window": W})
    code = 5 if isinstance(verdict, IndeterminateVerdict) else 0
    return result, {}, code


def cmd_relations(job: Job):
    tau = job.sigma(require_inverse=False, verify=False)
    p = job.prime or job.domain.p
    if p is None:
        raise ValidationError("relations need a prime (field Fp:p or 'prime')", field="prime")
    verdict = check_relations(tau, job.ideal_I, job.ideal_J, p)
    result = verdict.to_dict()
    result["consistent"] = verdict.consistent()
    return result, {"prime": p}, 0 if verdict.consistent() else 6


def cmd_verify(job: Job):
    sigma = job.sigma(verify=False)
    witness = automorphism_witness(sigma)
    if witness is None:
        return {"automorphism": True, "witness": None}, {}, 0
    return {"automorphism": False, "composition": witness[0], "witness": witness[1]}, {}, VERIFY_FAILED


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------


COMMANDS = ("orbit scan", "orbit certify", "arc build", "groebner", "strassman", "relations check", "verify-auto")


def run(command, job, **overrides):
    """Run one command on a job; returns ``(report, exit_code)``."""
    if not isinstance(job, Job):
        job = Job.from_dict(job)
    if command == "orbit scan":
        result, diag, code = cmd_orbit(job, False, window=overrides.get("window"))
    elif command == "orbit certify":
        result, diag, code = cmd_orbit(
            job,
            True,
            window=overrides.get("window"),
            prime=overrides.get("prime"),
            precision=overrides.get("precision"),
        )
    elif command == "arc build":
        result, diag, code = cmd_arc(job)
    elif command == "groebner":
        result, diag, code = cmd_groebner(job, overrides.get("order"))
    elif command == "strassman":
        result, diag, code = cmd_strassman(job)
    elif command == "relations check":
        result, diag, code = cmd_relations(job)
    elif command == "verify-auto":
        result, diag, code = cmd_verify(job)
    else:
        raise ValidationError(f"unknown command {command!r}")
    return envelope(command, job, result, diag), code


def build_parser():
    parser = argparse.ArgumentParser(prog="idealorbit", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p):
        p.add_argument("job", help="path to a JSON job file")
        p.add_argument("--output", "-o", help="write the JSON report here instead of stdout")
        p.add_argument("--text", action="store_true", help="print a one-line summary instead of JSON")

    orbit = sub.add_parser("orbit", help="scan or certify S(I, J)")
    orbit_sub = orbit.add_subparsers(dest="action", required=True)
    for name in ("scan", "certify"):
        p = orbit_sub.add_parser(name)
        common(p)
        p.add_argument("--window", type=int)
        if name == "certify":
            p.add_argument("--prime", type=int)
            p.add_argument("--precision", type=int)

    arc = sub.add_parser("arc", help="build a p-adic arc")
    arc_sub = arc.add_subparsers(dest="action", required=True)
    common(arc_sub.add_parser("build"))

    p = sub.add_parser("groebner", help="reduced Groebner basis of ideal_I")
    common(p)
    p.add_argument("--order", help="lex, grevlex or elim:k")

    common(sub.add_parser("strassman", help="Strassman verdict for a series"))

    rel = sub.add_parser("relations", help="compare algebraic and geometric inclusion")
    rel_sub = rel.add_subparsers(dest="action", required=True)
    common(rel_sub.add_parser("check"))

    common(sub.add_parser("verify-auto", help="check that sigma_inv inverts sigma"))
    return parser


def _error_payload(exc):
    return {
        "error": type(exc).__name__,
        "message": str(exc),
        "field": getattr(exc, "field", None),
        "offset": getattr(exc, "offset", None),
        "exit_code": getattr(exc, "exit_code", 6),
    }


def main(argv=None):
    args = build_parser().parse_args(argv)
    command = args.verb if not getattr(args, "action", None) else f"{args.verb} {args.action}"
    overrides = {k: getattr(args, k, None) for k in ("window", "prime", "precision", "order")}
    overrides = {k: v for k, v in overrides.items() if v is not None}
    try:
        job = Job.load(args.job)
        report, code = run(command, job, **overrides)
    except IdealOrbitError as exc:
        print(json.dumps(_error_payload(exc), ensure_ascii=False), file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(json.dumps({"error": "IOError", "message": str(exc), "exit_code": 2}), file=sys.stderr)
        return 2
    if args.text:
        text = report["result"].get("summary") or json.dumps(report["result"], ensure_ascii=False)
        out = text + "\n"
    else:
        out = json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
