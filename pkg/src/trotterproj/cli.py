"""Command line front end.

Subcommands ``cn``, ``scan``, ``certify``, ``simulate`` and ``report`` print
JSON (default) or CSV. Precision-carrying numbers are written as 30-digit
decimal strings, never as binary floats. Exit codes: 0 success, 1 a check
failed or the certificate is inconclusive, 2 usage error.

    python -m trotterproj certify --model hilbert --m 10..40
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from fractions import Fraction

import gmpy2
from gmpy2 import mpc, mpfr

from . import __version__
from . import lacunary_core as lc
from . import operator_sim as sim
from .extprec import ext, ext_complex, extended, from_decimal, pi_ext, to_decimal

DIGITS = 30
CSV_HEADER = ("n", "model", "source", "re", "im", "abs", "trace", "power")
SUBSEQ_ALIASES = {"pow2": "pow2", "3pow2": "three_pow2", "three_pow2": "three_pow2"}

DEFAULT_DEPTH = 16
DEFAULT_MODES = 40
DEFAULT_N = {"hilbert": 64, "lp": 64, "control": 1024}
LP_SIM_BOUND = Fraction(1, 10**11)
REDUCTION_TOL = 1e-12
# literal Trotter runs are only cross-checked when n * (carrier size) stays small
_REDUCTION_BUDGET = 2**24
CONTROL_STEPS = 11  # n * 4^j; n = 1024 gives the default 2^10..2^30 schedule
SIM_NS = (2, 3, 4, 64, 256, 1024)

LP_NOTE = (
    "lp model: 1 - c_n equals (1 - Re c_n[hilbert]) / 17, so the subsequence powers "
    "settle near exp(-A/17) with A the matching hilbert exponent. The limits are "
    "reported as computed; no doubled-exponent constants are asserted."
)
UPPER_NOTE = (
    "three_pow2_asymptotic compares |c_{3*2^m}|^{3*2^m} with exp(-(6+pi^2/6-pi^4/4536)) "
    "within 1e-3 and is informational: the imaginary part keeps the power above "
    "that level until m ~ 19. The asserted upper check is three_pow2_envelope."
)


def _dec(x) -> str:
    if isinstance(x, (Fraction, int)) and not isinstance(x, bool):
        x = ext(x)
    return to_decimal(x, DIGITS)


def _opt_dec(x):
    return None if x is None else _dec(x)


# -- records ------------------------------------------------------------------


def record_from_sample(sample: lc.CnSample, source: str) -> dict:
    return {
        "n": sample.n,
        "model": sample.model,
        "source": source,
        "re": _dec(sample.value.real),
        "im": _dec(sample.value.imag),
        "abs": _dec(sample.modulus),
        "trace": _dec(sample.trace),
        "power": _dec(sample.power),
    }


def _power_parts(n: int, z: mpc):
    with extended():
        x = z.real * z.real + z.imag * z.imag - 1
        if x <= -1:
            return mpfr("-inf"), mpfr(0)
        trace = n * gmpy2.log1p(x) / 2
        return trace, gmpy2.exp(trace)


def record_from_value(n: int, z, model: str, source: str) -> dict:
    z = z if isinstance(z, mpc) else ext_complex(z)
    trace, power = _power_parts(n, z)
    with extended():
        modulus = abs(z)
    return {
        "n": n,
        "model": model,
        "source": source,
        "re": _dec(z.real),
        "im": _dec(z.imag),
        "abs": _dec(modulus),
        "trace": _dec(trace),
        "power": _dec(power),
    }


def _sorted(records):
    return sorted(records, key=lambda r: (r["n"], r["model"], r["source"]))


# -- documents ----------------------------------------------------------------


def cn_document(model: str, n: int) -> dict:
    sample = lc.cn_hilbert(n) if model == "hilbert" else lc.cn_lp(n)
    return {"kind": "cn", "tool_version": __version__, "record": record_from_sample(sample, "cycle_exact")}


def scan_document(model: str, subseq: str, m_lo: int, m_hi: int) -> dict:
    samples = lc.subsequence_scan(model, subseq, m_lo, m_hi)
    return {
        "kind": "scan",
        "tool_version": __version__,
        "parameters": {"model": model, "subseq": subseq, "m_lo": m_lo, "m_hi": m_hi},
        "records": [record_from_sample(s, "closed_form") for s in samples],
    }


def _constants() -> dict:
    c = lc.bound_constants()
    return {
        "lower_exponent": _dec(c.lower_exponent),
        "upper_exponent": _dec(c.upper_exponent),
        "lower_bound": _dec(c.lower_bound),
        "upper_bound": _dec(c.upper_bound),
    }


def certificate_document(cert: lc.DivergenceCertificate) -> dict:
    m_lo, m_hi = cert.m_range
    notes = [LP_NOTE] if cert.model == "lp" else [UPPER_NOTE]
    return {
        "kind": "certificate",
        "tool_version": __version__,
        "parameters": {"model": cert.model, "m_lo": m_lo, "m_hi": m_hi, "margin": _dec(cert.margin)},
        "verdict": cert.verdict,
        "liminf_estimate": _dec(cert.liminf_estimate),
        "limsup_estimate": _dec(cert.limsup_estimate),
        "gap": _dec(cert.gap),
        "margin": _dec(cert.margin),
        "stability": {
            name: {"spread": _dec(v["spread"]), "stable": bool(v["stable"])}
            for name, v in cert.stability.items()
        },
        "bound_checks": [
            {
                "m": b.m,
                "power_pow2": _dec(b.power_pow2),
                "power_three_pow2": _dec(b.power_three_pow2),
                "pow2_lower": b.pow2_lower,
                "pow2_envelope": b.pow2_envelope,
                "three_pow2_envelope": b.three_pow2_envelope,
                "three_pow2_asymptotic": b.three_pow2_asymptotic,
                "im_envelope": b.im_envelope,
                "asserted": b.asserted,
                "passed": b.passed,
            }
            for b in cert.bound_checks
        ],
        "constants": _constants(),
        "samples": {
            "pow2": [record_from_sample(s, "closed_form") for s in cert.pow2_samples],
            "three_pow2": [record_from_sample(s, "closed_form") for s in cert.three_pow2_samples],
        },
        "notes": notes,
    }


def verify_certificate_document(doc: dict) -> str:
    """Recompute the verdict of a certificate document from its embedded samples.

    Only the decimal strings of the samples and the parameters are read; the
    bound constants and envelopes are recomputed, so a tampered table or
    verdict field is caught.
    """
    params = doc["parameters"]
    model = params["model"]
    margin = from_decimal(params["margin"])
    pow2 = doc["samples"]["pow2"]
    three = doc["samples"]["three_pow2"]
    if not pow2 or len(pow2) != len(three):
        return "inconclusive"
    p2 = [from_decimal(r["power"]) for r in pow2]
    p3 = [from_decimal(r["power"]) for r in three]
    with extended():
        gap = min(p2) - max(p3)
    ok = gap >= margin
    for powers in (p2, p3):
        tail = powers[-lc.STABILITY_WINDOW :]
        ok = ok and len(tail) == lc.STABILITY_WINDOW and lc.spread(tail) <= ext(lc.STABILITY_TOL)

    if model == "hilbert":
        consts = lc.bound_constants()
        for r2, r3, a, b in zip(pow2, three, p2, p3):
            m = r2["n"].bit_length() - 1
            if r2["n"] != 2**m or r3["n"] != 3 * 2**m:
                return "inconclusive"
            if m < lc.ASSERT_FROM_M:
                continue
            with extended():
                im_bound = (m + 1) * pi_ext() / (3 * mpfr(2) ** m)
                checks = (
                    a > consts.lower_bound,
                    from_decimal(r2["abs"]) >= lc.lower_envelope_pow2(m),
                    b <= lc.upper_envelope_3pow2(m),
                    abs(from_decimal(r3["im"])) < im_bound,
                )
            ok = ok and all(checks)
    return "diverges" if ok else "inconclusive"


def _verdict_dict(v: sim.ConvergenceVerdict) -> dict:
    norms = dict(v.norm_table)
    limit_error = None
    if v.reference_limit is not None and v.scalar_table:
        with extended():
            limit_error = abs(v.scalar_table[-1][1] - v.reference_limit)
    witness = None
    if v.witness is not None:
        witness = [
            {"label": w.label, "n_values": list(w.n_values), "norm_estimate": _dec(w.norm_estimate)}
            for w in v.witness
        ]
    return {
        "kind": v.kind,
        "threshold": _dec(v.threshold),
        "limit_norm_estimate": _opt_dec(v.limit_norm_estimate),
        "separation": _opt_dec(v.separation),
        "reference_limit": _opt_dec(v.reference_limit),
        "limit_error": _opt_dec(limit_error),
        "cauchy_table": [{"n": n, "difference": _dec(d), "norm": _dec(norms[n])} for n, d in v.cauchy_table],
        "witness": witness,
    }


def _reduction_delta(S, P, u, t, n, f):
    literal = sim.trotter_iterate(S, P, t, n, f)
    return (literal - sim.rank_one_reduction(S, u, t, n, f)).norm()


def simulate_document(model: str, n: int | None = None, t=1, depth=DEFAULT_DEPTH, modes=DEFAULT_MODES) -> dict:
    n = DEFAULT_N[model] if n is None else n
    t = Fraction(t)
    params = {"model": model, "n": n, "t": str(t)}

    if model == "control":
        schedule = [n * 4**j for j in range(CONTROL_STEPS)]
        verdict = sim.positive_control(t, schedule)
        S, _, u = sim.control_preset()
        records = [record_from_value(m, S.overlap(u, t / m), "control", "simulator") for m in schedule]
        return {
            "kind": "simulation",
            "tool_version": __version__,
            "parameters": params,
            "passed": verdict.kind == "converged",
            "records": records,
            "verdict": _verdict_dict(verdict),
        }

    if model == "hilbert":
        params["depth"] = depth
        closed = lc.cn_hilbert(n, t)
        value = sim.grid_cn(n, depth, t)
        bound = Fraction(5, 2) / 2**depth
        cost = n * 2**depth
        preset = lambda: sim.hilbert_preset(depth)  # noqa: E731
    else:
        params["modes"] = modes
        closed = lc.cn_lp(n, t)
        value = sim.fourier_cn(n, modes, t)
        bound = LP_SIM_BOUND
        cost = n * modes
        preset = lambda: sim.lp_preset(modes)  # noqa: E731

    with extended():
        delta = abs(ext_complex(value) - closed.value)
    passed = bool(delta <= ext(bound))

    reduction = None
    if cost <= _REDUCTION_BUDGET:
        S, P, f = preset()
        reduction = _reduction_delta(S, P, P.axis, t, n, f)
        passed = passed and reduction <= REDUCTION_TOL

    return {
        "kind": "simulation",
        "tool_version": __version__,
        "parameters": params,
        "passed": passed,
        "records": [
            record_from_value(n, value, model, "simulator"),
            record_from_sample(closed, "cycle_exact"),
        ],
        "delta": _dec(delta),
        "bound": _dec(bound),
        "reduction_delta": _opt_dec(reduction),
    }


def report_document() -> dict:
    certs = {
        model: certificate_document(lc.certify_divergence(model, lc.DEFAULT_M_RANGE))
        for model in lc.MODELS
    }
    sims = [simulate_document(model, n) for model in lc.MODELS for n in SIM_NS]
    control = simulate_document("control")
    S, P, f = sim.hilbert_preset()
    probe = sim.convergence_probe(S, P, 1, f, sim.HILBERT_PROBE_SCHEDULE, sim.HILBERT_PROBE_THRESHOLD)
    passed = (
        all(c["verdict"] == "diverges" for c in certs.values())
        and all(s["passed"] for s in sims)
        and control["passed"]
        and probe.kind == "oscillating"
    )
    return {
        "kind": "report",
        "tool_version": __version__,
        "passed": passed,
        "certificates": certs,
        "simulations": sims,
        "control": control,
        "probe": _verdict_dict(probe),
    }


def document_records(doc: dict) -> list[dict]:
    """Every ReportRecord contained in a document, sorted by n."""
    kind = doc["kind"]
    if kind == "cn":
        return [doc["record"]]
    if kind in ("scan", "simulation"):
        return _sorted(doc["records"])
    if kind == "certificate":
        return _sorted(doc["samples"]["pow2"] + doc["samples"]["three_pow2"])
    out = []
    for c in doc["certificates"].values():
        out += document_records(c)
    for s in doc["simulations"] + [doc["control"]]:
        out += s["records"]
    return _sorted(out)


def to_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow([r[k] for k in CSV_HEADER])
    return buf.getvalue()


def render(doc: dict, fmt: str) -> str:
    if fmt == "csv":
        return to_csv(document_records(doc))
    return json.dumps(doc, indent=2) + "\n"


def exit_code(doc: dict) -> int:
    kind = doc["kind"]
    if kind == "certificate":
        return 0 if doc["verdict"] == "diverges" else 1
    if kind in ("simulation", "report"):
        return 0 if doc["passed"] else 1
    return 0


# -- argument parsing ----------------------------------------------------------


def _m_range(text: str) -> tuple[int, int]:
    match = re.fullmatch(r"(\d+)(?:\.\.(\d+))?", text.strip())
    if not match:
        raise argparse.ArgumentTypeError(f"expected LO..HI, got {text!r}")
    lo = int(match.group(1))
    hi = int(match.group(2) or lo)
    if not 1 <= lo <= hi <= lc.M_MAX:
        raise argparse.ArgumentTypeError(f"need 1 <= LO <= HI <= {lc.M_MAX}, got {text!r}")
    return lo, hi


def _positive_fraction(text: str) -> Fraction:
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def _bounded_int(lo, hi):
    def parse(text):
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
        if not lo <= value <= hi:
            raise argparse.ArgumentTypeError(f"{value} outside [{lo}, {hi}]")
        return value

    return parse


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", metavar="FILE", help="write to FILE instead of standard output")

    parser = argparse.ArgumentParser(prog="trotterproj", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    n_arg = _bounded_int(1, lc.N_MAX)

    p = sub.add_parser("cn", parents=[common], help="evaluate c_n exactly")
    p.add_argument("--model", choices=lc.MODELS, required=True)
    p.add_argument("--n", type=n_arg, required=True)

    p = sub.add_parser("scan", parents=[common], help="c_n along n = 2^m or 3*2^m")
    p.add_argument("--model", choices=lc.MODELS, required=True)
    p.add_argument("--subseq", choices=sorted(SUBSEQ_ALIASES), required=True)
    p.add_argument("--m", type=_m_range, default=lc.DEFAULT_M_RANGE, metavar="LO..HI")

    p = sub.add_parser("certify", parents=[common], help="divergence certificate")
    p.add_argument("--model", choices=lc.MODELS, default="hilbert")
    p.add_argument("--m", type=_m_range, default=lc.DEFAULT_M_RANGE, metavar="LO..HI")
    p.add_argument("--margin", type=_positive_fraction, default=None)

    p = sub.add_parser("simulate", parents=[common], help="discretized semigroup versus closed form")
    p.add_argument("--model", choices=lc.MODELS + ("control",), required=True)
    p.add_argument("--n", type=n_arg, default=None)
    p.add_argument("--t", type=_positive_fraction, default=Fraction(1))
    p.add_argument("--depth", type=_bounded_int(*sim.DEPTH_RANGE), default=DEFAULT_DEPTH)
    p.add_argument("--modes", type=_bounded_int(*sim.KMAX_RANGE), default=DEFAULT_MODES)

    sub.add_parser("report", parents=[common], help="certificates, simulations and control in one document")
    return parser


def _dispatch(args) -> dict:
    if args.command == "cn":
        return cn_document(args.model, args.n)
    if args.command == "scan":
        return scan_document(args.model, SUBSEQ_ALIASES[args.subseq], *args.m)
    if args.command == "certify":
        return certificate_document(lc.certify_divergence(args.model, args.m, args.margin))
    if args.command == "simulate":
        return simulate_document(args.model, args.n, args.t, args.depth, args.modes)
    return report_document()


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        doc = _dispatch(args)
    except (ValueError, TypeError) as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    text = render(doc, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return exit_code(doc)


if __name__ == "__main__":
    sys.exit(main())
