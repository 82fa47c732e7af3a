"""Exact evaluation of the lacunary sequences c_n and the divergence certificate.

Hilbert model::

    c_n = sum_{k>=1} 2^-k exp(i pi 2^k / n)

L_p model::

    c_n = 16/17 + (1/17) sum_{k>=1} 2^-k cos(pi 2^k / n)

The angle pi 2^k / n only depends on 2^k mod 2n, which is eventually periodic,
so the infinite series collapses to a finite sum closed by a geometric factor.
Every sample also carries 1 - c_n accumulated term by term from versines,
because |c_n| sits within O(1/n) of 1 and n log|c_n| is the quantity of
interest.
"""
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import gmpy2
from gmpy2 import mpc, mpfr

from .extprec import (
    exp_ext,
    ext,
    extended,
    pi_ext,
    sincos_pi_fraction,
    cospi_frac,
    versine_pi_frac,
)

__all__ = [
    "N_MAX",
    "MODELS",
    "SUBSEQUENCES",
    "EnvelopeResult",
    "spread",
    "M_MAX",
    "CnSample",
    "CycleDecomposition",
    "BoundConstants",
    "BoundCheck",
    "DivergenceCertificate",
    "cycle_of_two_mod",
    "cn_hilbert",
    "cn_lp",
    "cn_hilbert_subseq_pow2",
    "cn_hilbert_subseq_3pow2",
    "cn_lp_subseq_pow2",
    "cn_lp_subseq_3pow2",
    "lower_envelope_pow2",
    "upper_envelope_3pow2",
    "envelope_check_pow2",
    "envelope_check_3pow2",
    "bound_constants",
    "subsequence_scan",
    "certify_divergence",
    "DEFAULT_M_RANGE",
    "DEFAULT_MARGINS",
]

N_MAX = 2**50
M_MAX = 50
MODELS = ("hilbert", "lp")
SUBSEQUENCES = ("pow2", "three_pow2")

# cycles longer than this are summed directly instead of closed
_CLOSURE_LIMIT = 200
# direct summation depth; the neglected weight 2^-220 is far below 2^-128 * 2^-50
_DIRECT_TERMS = 220

DEFAULT_M_RANGE = (10, 40)
DEFAULT_MARGINS = {"hilbert": Fraction(5, 10000), "lp": Fraction(4, 100)}
BOUND_RTOL = Fraction(1, 1000)
ASSERT_FROM_M = 10
STABILITY_WINDOW = 3
STABILITY_TOL = Fraction(1, 10000)


@dataclass(frozen=True)
class CnSample:
    """One evaluation of c_n together with its cancellation-free companions."""

    n: int
    value: mpc
    one_minus: mpc
    trace: mpfr  # n * log|c_n|
    power: mpfr  # |c_n|^n
    model: str = "hilbert"

    @property
    def modulus(self) -> mpfr:
        with extended():
            return abs(self.value)


class _Orbit(Sequence):
    """Lazy view of one period of k -> 2^k mod modulus."""

    def __init__(self, start: int, length: int, modulus: int):
        self._start = start
        self._length = length
        self._modulus = modulus

    def __len__(self):
        return self._length

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(self._length))]
        if i < 0:
            i += self._length
        if not 0 <= i < self._length:
            raise IndexError(i)
        return self._start * pow(2, i, self._modulus) % self._modulus

    def __repr__(self):
        shown = list(self[:8])
        more = ", ..." if self._length > 8 else ""
        return f"_Orbit({shown}{more}, length={self._length})"


@dataclass(frozen=True)
class CycleDecomposition:
    """Eventually periodic orbit of 2^k mod 2n for k >= 1.

    ``preperiod`` holds the residues for k = 1..p, ``cycle`` one full period
    starting at k = p + 1 (a lazy sequence; periods can be long).
    """

    n: int
    modulus: int
    preperiod: tuple[int, ...]
    cycle: Sequence

    @property
    def period(self) -> int:
        return len(self.cycle)

    def residue(self, k: int) -> int:
        if k < 1:
            raise ValueError("k starts at 1")
        p = len(self.preperiod)
        if k <= p:
            return self.preperiod[k - 1]
        return self.cycle[(k - p - 1) % self.period]


def _check_n(n):
    if not isinstance(n, int) or isinstance(n, bool):
        raise TypeError("n must be an integer")
    if not 1 <= n <= N_MAX:
        raise ValueError(f"n={n} outside [1, 2^50]")


def _check_m(m, lo=1):
    if not isinstance(m, int) or isinstance(m, bool):
        raise TypeError("m must be an integer")
    if not lo <= m <= M_MAX:
        raise ValueError(f"m={m} outside [{lo}, {M_MAX}]")


def _two_adic(n: int) -> tuple[int, int]:
    p = (n & -n).bit_length() - 1
    return p, n >> p


def cycle_of_two_mod(n: int) -> CycleDecomposition:
    """Split k -> 2^k mod 2n into its minimal preperiod and minimal period.

    With n = 2^p * q (q odd) the residues 2^1..2^p never recur, and from
    k = p + 1 on the orbit has period ord_q(2).
    """
    _check_n(n)
    from sympy.ntheory import n_order

    p, q = _two_adic(n)
    modulus = 2 * n
    period = 1 if q == 1 else int(n_order(2, q))
    preperiod = tuple(2**k for k in range(1, p + 1))
    start = pow(2, p + 1, modulus)
    return CycleDecomposition(n, modulus, preperiod, _Orbit(start, period, modulus))


def _short_period(start: int, modulus: int, limit: int) -> int | None:
    r = start * 2 % modulus
    for length in range(1, limit + 1):
        if r == start:
            return length
        r = r * 2 % modulus
    return None


@lru_cache(maxsize=4096)
def _phase_sum(a: int, b: int) -> tuple[mpfr, mpfr, mpfr, mpfr]:
    """Re/Im of sum_k 2^-k e^{i pi 2^k a/b} and of sum_k 2^-k (1 - e^{i pi 2^k a/b}).

    a/b must be in lowest terms. Residues a 2^k mod 2b repeat from
    k = v2(b) + 1 on; a period of at most _CLOSURE_LIMIT is closed with the
    factor 2^L / (2^L - 1), a longer one is summed directly to 2^-220.
    """
    p, _ = _two_adic(b)
    modulus = 2 * b
    start = a * pow(2, p + 1, modulus) % modulus
    period = _short_period(start, modulus, _CLOSURE_LIMIT)
    with extended():
        # Re c, Im c, Re(1 - c); Im(1 - c) is -Im c and needs no accumulator
        head = [mpfr(0)] * 3
        tail = [mpfr(0)] * 3

        def accumulate(acc, k, r):
            t = sincos_pi_fraction(r, b)
            acc[0] += gmpy2.mul_2exp(t.cos, -k)
            acc[1] += gmpy2.mul_2exp(t.sin, -k)
            acc[2] += gmpy2.mul_2exp(t.versine, -k)

        if period is None:
            r = 2 * a % modulus
            for k in range(1, _DIRECT_TERMS + 1):
                accumulate(head, k, r)
                r = r * 2 % modulus
            total = head
        else:
            r = 2 * a % modulus
            for k in range(1, p + 1):
                accumulate(head, k, r)
                r = r * 2 % modulus
            for i in range(period):
                accumulate(tail, p + 1 + i, r)
                r = r * 2 % modulus
            closure = mpfr(2**period) / (2**period - 1)
            total = [h + closure * t for h, t in zip(head, tail)]
        re, im, om_re = total
        return re, im, om_re, -im


def _step(n, t) -> Fraction:
    _check_n(n)
    t = Fraction(t)
    if t <= 0:
        raise ValueError("t must be positive")
    return t / n


def _hilbert_sample(n, re, im, om_re, om_im) -> CnSample:
    with extended():
        value = mpc(re, im)
        one_minus = mpc(om_re, om_im)
        # |c|^2 - 1 = -2 Re(1 - c) + |1 - c|^2
        x = -2 * om_re + om_re * om_re + om_im * om_im
        if x <= -1:
            trace = mpfr("-inf")
        else:
            trace = n * gmpy2.log1p(x) / 2
        power = gmpy2.exp(trace)
    return CnSample(n, value, one_minus, trace, power, "hilbert")


def _lp_sample(n, re_h, om_re_h) -> CnSample:
    with extended():
        re = (16 + re_h) / 17
        om = om_re_h / 17
        trace = n * gmpy2.log1p(-om)
        power = gmpy2.exp(trace)
        return CnSample(n, mpc(re, 0), mpc(om, 0), trace, power, "lp")


def cn_hilbert(n: int, t=1) -> CnSample:
    """c_n = sum_k 2^-k exp(i pi 2^k t/n), summed exactly (t = 1 by default).

    ``t`` may be any positive rational; it is the semigroup time of the
    Trotter product, and the trace is still n log|c_n|.
    """
    s = _step(n, t)
    return _hilbert_sample(n, *_phase_sum(s.numerator, s.denominator))


def cn_lp(n: int, t=1) -> CnSample:
    """c_n for the translation example: 16/17 + Re(hilbert sum)/17."""
    s = _step(n, t)
    re, _, om_re, _ = _phase_sum(s.numerator, s.denominator)
    return _lp_sample(n, re, om_re)


def _pow2_parts(m):
    # c_{2^m} = sum_{k=1}^{m-1} 2^-k e^{i pi / 2^{m-k}}
    with extended():
        re = im = om_re = om_im = mpfr(0)
        for k in range(1, m):
            c, s = cospi_frac(m - k, 1)
            v = versine_pi_frac(m - k, 1)
            re += gmpy2.mul_2exp(c, -k)
            im += gmpy2.mul_2exp(s, -k)
            om_re += gmpy2.mul_2exp(v, -k)
            om_im -= gmpy2.mul_2exp(s, -k)
        om_re += gmpy2.mul_2exp(mpfr(1), -(m - 1))
        return re, im, om_re, om_im


def _three_pow2_parts(m):
    # c_{3 2^m} = sum_{k=1}^{m-1} 2^-k e^{i pi / (3 2^{m-k})} + i 2 sqrt(3) / (3 2^m)
    with extended():
        re = im = om_re = om_im = mpfr(0)
        for k in range(1, m):
            c, s = cospi_frac(m - k, 3)
            v = versine_pi_frac(m - k, 3)
            re += gmpy2.mul_2exp(c, -k)
            im += gmpy2.mul_2exp(s, -k)
            om_re += gmpy2.mul_2exp(v, -k)
            om_im -= gmpy2.mul_2exp(s, -k)
        corr = gmpy2.mul_2exp(2 * gmpy2.sqrt(mpfr(3)) / 3, -m)
        im += corr
        om_im -= corr
        om_re += gmpy2.mul_2exp(mpfr(1), -(m - 1))
        return re, im, om_re, om_im


def cn_hilbert_subseq_pow2(m: int) -> CnSample:
    """c_{2^m} from the finite closed form (angles pi/2^j by half-angle descent)."""
    _check_m(m)
    return _hilbert_sample(2**m, *_pow2_parts(m))


def cn_hilbert_subseq_3pow2(m: int) -> CnSample:
    """c_{3*2^m} from the closed form with the exact correction i*2*sqrt(3)/(3*2^m)."""
    _check_m(m)
    return _hilbert_sample(3 * 2**m, *_three_pow2_parts(m))


def cn_lp_subseq_pow2(m: int) -> CnSample:
    _check_m(m)
    re, _, om_re, _ = _pow2_parts(m)
    return _lp_sample(2**m, re, om_re)


def cn_lp_subseq_3pow2(m: int) -> CnSample:
    _check_m(m)
    re, _, om_re, _ = _three_pow2_parts(m)
    return _lp_sample(3 * 2**m, re, om_re)


@dataclass(frozen=True)
class BoundConstants:
    lower_exponent: mpfr  # 4 + pi^2/4
    upper_exponent: mpfr  # 6 + pi^2/6 - pi^4/(27*24*7)
    lower_bound: mpfr
    upper_bound: mpfr


@lru_cache(maxsize=None)
def bound_constants() -> BoundConstants:
    pi = pi_ext()
    with extended():
        lower = 4 + pi**2 / 4
        upper = 6 + pi**2 / 6 - pi**4 / (27 * 24 * 7)
        # negation rounds to the active context too
        return BoundConstants(lower, upper, exp_ext(-lower), exp_ext(-upper))


def lower_envelope_pow2(m: int) -> mpfr:
    """1 - (4 + pi^2/4)/2^m + pi^2/4^m, the Taylor lower bound for |c_{2^m}|."""
    _check_m(m, lo=2)
    pi = pi_ext()
    with extended():
        return 1 - (4 + pi**2 / 4) / mpfr(2) ** m + pi**2 / mpfr(4) ** m


def upper_envelope_3pow2(m: int) -> mpfr:
    """Finite-m upper bound for |c_{3*2^m}|^{3*2^m} from the Taylor envelopes.

    Real part: sum_{k<m} 2^-k (1 - a_k^2/2 + a_k^4/24) with a_k = pi 2^k/(3*2^m),
    summed in closed form; imaginary part: (m+1) pi / (3*2^m). The bound is
    (re^2 + im^2)^{3*2^m/2} and tends to exp(-upper_exponent) as m grows.
    """
    _check_m(m, lo=2)
    pi = pi_ext()
    with extended():
        two_m = mpfr(2) ** m
        re = (
            1
            - 2 / two_m
            - pi**2 / 18 * (two_m - 2) / two_m**2
            + pi**4 / (81 * 24) * (two_m**3 - 8) / (7 * two_m**4)
        )
        im = (m + 1) * pi / (3 * two_m)
        n = 3 * 2**m
        return gmpy2.exp(n * gmpy2.log1p(re * re + im * im - 1) / 2)


@dataclass(frozen=True)
class EnvelopeResult:
    m: int
    passed: bool
    slack: mpfr  # positive when the inequality holds


def envelope_check_pow2(m: int) -> EnvelopeResult:
    """|c_{2^m}| >= 1 - (4 + pi^2/4)/2^m + pi^2/4^m."""
    sample = cn_hilbert_subseq_pow2(m)
    with extended():
        slack = sample.modulus - lower_envelope_pow2(m)
    return EnvelopeResult(m, slack > 0, slack)


def envelope_check_3pow2(m: int) -> EnvelopeResult:
    """|Im c_{3*2^m}| <= (m+1) pi / (3*2^m)."""
    _check_m(m, lo=2)
    sample = cn_hilbert_subseq_3pow2(m)
    with extended():
        slack = (m + 1) * pi_ext() / (3 * mpfr(2) ** m) - abs(sample.value.imag)
    return EnvelopeResult(m, slack > 0, slack)


_SUBSEQ = {
    ("hilbert", "pow2"): cn_hilbert_subseq_pow2,
    ("hilbert", "three_pow2"): cn_hilbert_subseq_3pow2,
    ("lp", "pow2"): cn_lp_subseq_pow2,
    ("lp", "three_pow2"): cn_lp_subseq_3pow2,
}


def _check_model(model):
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}; expected one of {MODELS}")


def subsequence_scan(model: str, subseq: str, m_lo: int, m_hi: int) -> list[CnSample]:
    """Samples along n = 2^m or n = 3*2^m for m_lo <= m <= m_hi, ordered by m."""
    _check_model(model)
    if subseq not in SUBSEQUENCES:
        raise ValueError(f"unknown subsequence {subseq!r}; expected one of {SUBSEQUENCES}")
    if not 1 <= m_lo <= m_hi <= M_MAX:
        raise ValueError(f"need 1 <= m_lo <= m_hi <= {M_MAX}, got {m_lo}..{m_hi}")
    fn = _SUBSEQ[model, subseq]
    return [fn(m) for m in range(m_lo, m_hi + 1)]


@dataclass(frozen=True)
class BoundCheck:
    """Per-m checks of the two subsequence samples (Hilbert model).

    ``three_pow2_asymptotic`` compares with the limiting constant and is reported
    only: the imaginary part inflates |c_{3*2^m}|^{3*2^m} by roughly
    exp((m pi)^2 / (6*2^m)), which exceeds the 1e-3 tolerance until m ~ 19.
    The asserted upper check is ``three_pow2_envelope``, the finite-m bound.
    """

    m: int
    power_pow2: mpfr
    power_three_pow2: mpfr
    pow2_lower: bool
    pow2_envelope: bool
    three_pow2_envelope: bool
    three_pow2_asymptotic: bool
    im_envelope: bool
    asserted: bool

    @property
    def passed(self) -> bool:
        return self.pow2_lower and self.pow2_envelope and self.three_pow2_envelope and self.im_envelope


@dataclass(frozen=True)
class DivergenceCertificate:
    model: str
    m_range: tuple[int, int]
    margin: mpfr
    liminf_estimate: mpfr
    limsup_estimate: mpfr
    gap: mpfr
    bound_checks: tuple[BoundCheck, ...]
    stability: dict = field(default_factory=dict)
    verdict: str = "inconclusive"
    pow2_samples: tuple[CnSample, ...] = ()
    three_pow2_samples: tuple[CnSample, ...] = ()


def _bound_check(m, s2, s3, consts) -> BoundCheck:
    tol = ext(BOUND_RTOL)
    with extended():
        lower_ok = s2.power > consts.lower_bound
        upper_asym = s3.power <= consts.upper_bound * (1 + tol)
        lower_env = s2.modulus >= lower_envelope_pow2(m) if m >= 2 else True
        upper_env = s3.power <= upper_envelope_3pow2(m) if m >= 2 else True
        im_env = envelope_check_3pow2(m).passed if m >= 2 else True
    return BoundCheck(
        m=m,
        power_pow2=s2.power,
        power_three_pow2=s3.power,
        pow2_lower=bool(lower_ok),
        pow2_envelope=bool(lower_env),
        three_pow2_envelope=bool(upper_env),
        three_pow2_asymptotic=bool(upper_asym),
        im_envelope=bool(im_env),
        asserted=m >= ASSERT_FROM_M,
    )


def spread(values) -> mpfr:
    with extended():
        return max(values) - min(values)


def certify_divergence(model: str, m_range=DEFAULT_M_RANGE, margin=None) -> DivergenceCertificate:
    """Certify that c_n^n has no limit by separating its two subsequences.

    liminf is estimated by the minimum of |c_{2^m}|^{2^m} over the window,
    limsup by the maximum of |c_{3*2^m}|^{3*2^m}. The verdict is ``diverges``
    when the gap reaches ``margin``, both subsequences have settled (last
    three values within 1e-4), and, for the Hilbert model, every asserted
    bound check passes. Failing any of these gives ``inconclusive``.
    """
    _check_model(model)
    m_lo, m_hi = m_range
    margin = ext(DEFAULT_MARGINS[model] if margin is None else margin)
    if margin <= 0:
        raise ValueError("margin must be positive")
    pow2 = subsequence_scan(model, "pow2", m_lo, m_hi)
    three = subsequence_scan(model, "three_pow2", m_lo, m_hi)
    liminf = min(s.power for s in pow2)
    limsup = max(s.power for s in three)
    with extended():
        gap = liminf - limsup

    stability = {}
    for name, samples in (("pow2", pow2), ("three_pow2", three)):
        tail = [s.power for s in samples[-STABILITY_WINDOW:]]
        sp = spread(tail)
        stability[name] = {
            "spread": sp,
            "stable": len(tail) == STABILITY_WINDOW and sp <= ext(STABILITY_TOL),
        }

    checks = ()
    if model == "hilbert":
        consts = bound_constants()
        checks = tuple(
            _bound_check(s2.n.bit_length() - 1, s2, s3, consts) for s2, s3 in zip(pow2, three)
        )

    ok = (
        gap >= margin
        and all(v["stable"] for v in stability.values())
        and all(c.passed for c in checks if c.asserted)
    )
    return DivergenceCertificate(
        model=model,
        m_range=(m_lo, m_hi),
        margin=margin,
        liminf_estimate=liminf,
        limsup_estimate=limsup,
        gap=gap,
        bound_checks=checks,
        stability=stability,
        verdict="diverges" if ok else "inconclusive",
        pow2_samples=tuple(pow2),
        three_pow2_samples=tuple(three),
    )
