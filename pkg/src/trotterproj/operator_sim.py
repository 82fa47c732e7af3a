"""Direct simulation of the Trotter-type products [S(t/n) P]^n.

Two carriers:

* :class:`GridFunction` -- piecewise-constant functions on 2^D equal cells of
  [0, 1], for the multiplication semigroup e^{ith}.
* :class:`FourierFunction` -- sparse real cosine/sine series on [0, 2pi], for
  the translation semigroup f(x) -> f(x + 2 pi t) and for a diagonal heat
  semigroup used as a convergent control.

Carrier values are machine precision; times are handled as exact fractions so
phases like 2^40 * t mod 2 are reduced without rounding. Each semigroup also
offers an extended-precision ``overlap`` <S(s)u, u> / <u, u>, which the rank-one
reduction raises to the (n-1)-th power when n is large.

The Trotter step applies P first and then S(t/n), i.e. [S(t/n) P] acting on a
vector from the right.
"""
from __future__ import annotations

import math
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from types import MappingProxyType

import numpy as np
from gmpy2 import mpc, mpfr

from .extprec import exp_ext, ext, extended, sincos_pi_fraction

__all__ = [
    "GridFunction",
    "FourierFunction",
    "MultiplicationSemigroup",
    "TranslationSemigroup",
    "FourierMultiplierSemigroup",
    "RankOneProjection",
    "ConvergenceVerdict",
    "SubsequenceWitness",
    "build_h",
    "build_g",
    "heat_semigroup",
    "control_axis",
    "apply_semigroup",
    "project",
    "inner_product",
    "compensated_sum",
    "trotter_iterate",
    "rank_one_reduction",
    "convergence_probe",
    "positive_control",
    "grid_cn",
    "fourier_cn",
    "hilbert_preset",
    "lp_preset",
    "control_preset",
    "PRESETS",
]

DEPTH_RANGE = (4, 24)
KMAX_RANGE = (8, 50)
UNIT_TOL = 1e-12


def _as_time(t) -> Fraction:
    if isinstance(t, bool):
        raise TypeError("time must be a number")
    if isinstance(t, (int, Rational)):
        t = Fraction(t)
    elif isinstance(t, float):
        if not math.isfinite(t):
            raise ValueError("time must be finite")
        t = Fraction(t)
    else:
        raise TypeError(f"unsupported time type {type(t).__name__}")
    if t < 0:
        raise ValueError("semigroup time must be >= 0")
    return t


def compensated_sum(x) -> float:
    """Sum of a float array via a pairwise tree of TwoSum steps.

    Each level adds neighbours and keeps the exact rounding error of every
    addition; the collected errors are tiny and are summed separately, so the
    result is accurate to a few ulps independent of the array length.
    """
    x = np.asarray(x, dtype=np.float64).ravel()
    if x.size == 0:
        return 0.0
    errors = []
    while x.size > 1:
        if x.size % 2:
            x = np.append(x, 0.0)
        half = x.size // 2
        a, b = x[:half], x[half:]
        s = a + b
        bb = s - a
        errors.append(((a - (s - bb)) + (b - bb)).sum())
        x = s
    return float(x[0] + math.fsum(errors))


def _sum_complex(z: np.ndarray) -> complex:
    return complex(compensated_sum(z.real), compensated_sum(z.imag))


# -- carriers ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Complex piecewise-constant function with one value per cell of width 2^-depth."""

    depth: int
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=np.complex128)
        if v.shape != (2**self.depth,):
            raise ValueError(f"expected {2**self.depth} cell values, got shape {v.shape}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def constant(cls, depth: int, value: complex = 1.0) -> GridFunction:
        return cls(depth, np.full(2**depth, value, dtype=np.complex128))

    @classmethod
    def from_function(cls, depth: int, fn: Callable) -> GridFunction:
        x = (np.arange(2**depth) + 0.5) / 2**depth
        return cls(depth, fn(x))

    def norm(self) -> float:
        return math.sqrt(compensated_sum(np.abs(self.values) ** 2) / 2**self.depth)

    def scaled(self, c) -> GridFunction:
        return GridFunction(self.depth, self.values * complex(c))

    def __add__(self, other: GridFunction) -> GridFunction:
        _same_grid(self, other)
        return GridFunction(self.depth, self.values + other.values)

    def __sub__(self, other: GridFunction) -> GridFunction:
        _same_grid(self, other)
        return GridFunction(self.depth, self.values - other.values)


def _same_grid(f, g):
    if not (isinstance(f, GridFunction) and isinstance(g, GridFunction)):
        raise ValueError("both operands must be GridFunction")
    if f.depth != g.depth:
        raise ValueError(f"grid depths differ: {f.depth} vs {g.depth}")


@dataclass(frozen=True)
class FourierFunction:
    """Real 2pi-periodic function c0 + sum_f a_f cos(f x) + b_f sin(f x)."""

    constant_term: float = 0.0
    cos_coeffs: Mapping[int, float] = field(default_factory=dict)
    sin_coeffs: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self):
        for name in ("cos_coeffs", "sin_coeffs"):
            coeffs = {int(k): float(v) for k, v in dict(getattr(self, name)).items()}
            if any(k <= 0 for k in coeffs):
                raise ValueError("frequencies must be positive integers")
            object.__setattr__(self, name, MappingProxyType(coeffs))
        object.__setattr__(self, "constant_term", float(self.constant_term))

    def frequencies(self) -> list[int]:
        return sorted(set(self.cos_coeffs) | set(self.sin_coeffs))

    def mode(self, freq: int) -> tuple[float, float]:
        return self.cos_coeffs.get(freq, 0.0), self.sin_coeffs.get(freq, 0.0)

    def norm(self) -> float:
        return math.sqrt(inner_product(self, self))

    def scaled(self, c) -> FourierFunction:
        c = complex(c)
        if c.imag != 0:
            raise ValueError("FourierFunction carries real functions only")
        c = c.real
        return FourierFunction(
            self.constant_term * c,
            {k: v * c for k, v in self.cos_coeffs.items()},
            {k: v * c for k, v in self.sin_coeffs.items()},
        )

    def _combine(self, other, sign):
        if not isinstance(other, FourierFunction):
            raise ValueError("both operands must be FourierFunction")
        cos = dict(self.cos_coeffs)
        sin = dict(self.sin_coeffs)
        for k, v in other.cos_coeffs.items():
            cos[k] = cos.get(k, 0.0) + sign * v
        for k, v in other.sin_coeffs.items():
            sin[k] = sin.get(k, 0.0) + sign * v
        return FourierFunction(self.constant_term + sign * other.constant_term, cos, sin)

    def __add__(self, other):
        return self._combine(other, 1.0)

    def __sub__(self, other):
        return self._combine(other, -1.0)

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.full_like(x, self.constant_term)
        for k in self.frequencies():
            a, b = self.mode(k)
            # k * x is exact for power-of-two k; numpy reduces large arguments exactly
            out += a * np.cos(k * x) + b * np.sin(k * x)
        return out


def inner_product(f, g):
    """<f, g> with the carrier's measure: 2^-D times a compensated cell sum on
    the grid; on [0, 2pi] weights 2pi for the constant and pi per cos/sin mode."""
    if isinstance(f, GridFunction) and isinstance(g, GridFunction):
        _same_grid(f, g)
        return _sum_complex(f.values * np.conj(g.values)) / 2**f.depth
    if isinstance(f, FourierFunction) and isinstance(g, FourierFunction):
        terms = [2 * math.pi * f.constant_term * g.constant_term]
        for k in set(f.frequencies()) & set(g.frequencies()):
            a1, b1 = f.mode(k)
            a2, b2 = g.mode(k)
            terms.append(math.pi * (a1 * a2 + b1 * b2))
        return math.fsum(terms)
    raise ValueError(
        f"mismatched carriers: {type(f).__name__} and {type(g).__name__}"
    )


# -- semigroups -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class MultiplicationSemigroup:
    """Multiplication by e^{i t h_D} on the grid of depth D.

    h_D = 2^k pi on the cells inside (2^-k, 2^{1-k}] for k <= D and 0 on the
    residual cell [0, 2^-D). ``levels`` stores k per cell (0 for the residual
    cell) so phases are reduced exactly.
    """

    depth: int
    levels: np.ndarray
    h_values: np.ndarray

    def _phases(self, t: Fraction) -> np.ndarray:
        table = np.empty(self.depth + 1, dtype=np.complex128)
        table[0] = 1.0
        for k in range(1, self.depth + 1):
            trig = sincos_pi_fraction(2**k * t.numerator, t.denominator)
            table[k] = complex(float(trig.cos), float(trig.sin))
        return table

    def apply(self, t, f: GridFunction) -> GridFunction:
        t = _as_time(t)
        if not isinstance(f, GridFunction) or f.depth != self.depth:
            raise ValueError("function must live on the semigroup's grid")
        if t == 0:
            return f
        return GridFunction(self.depth, f.values * self._phases(t)[self.levels])

    def overlap(self, u: GridFunction, t) -> mpc:
        """<S(t)u, u> / <u, u> in extended precision, grouped by level of h."""
        t = _as_time(t)
        level_mass = _level_mass(self.depth, u)
        with extended():
            total = sum((mpfr(w) for w in level_mass), mpfr(0))
            re = mpfr(level_mass[0])
            im = mpfr(0)
            for k in range(1, self.depth + 1):
                trig = sincos_pi_fraction(2**k * t.numerator, t.denominator)
                re += level_mass[k] * trig.cos
                im += level_mass[k] * trig.sin
            return mpc(re / total, im / total)


@lru_cache(maxsize=8)
def _level_mass(depth: int, u: GridFunction) -> tuple[float, ...]:
    # GridFunction hashes by identity and is immutable, so caching is safe
    weights = np.abs(u.values) ** 2
    mass = [float(weights[0])]
    for k in range(1, depth + 1):
        lo, hi = 2 ** (depth - k), 2 ** (depth - k + 1)
        mass.append(compensated_sum(weights[lo:hi]))
    return tuple(mass)


def build_h(depth: int) -> MultiplicationSemigroup:
    """The symbol h = sum_k 2^k pi on (2^-k, 2^{1-k}], truncated at the grid scale."""
    lo, hi = DEPTH_RANGE
    if not isinstance(depth, int) or not lo <= depth <= hi:
        raise ValueError(f"grid depth must be an integer in [{lo}, {hi}]")
    # cell j in [2^(D-k), 2^(D-k+1)) sits inside (2^-k, 2^(1-k)]; j = 0 is residual
    _, bits = np.frexp(np.arange(2**depth))
    levels = np.where(bits > 0, depth + 1 - bits, 0).astype(np.int64)
    h = np.where(levels > 0, np.pi * np.exp2(levels.astype(float)), 0.0)
    levels.setflags(write=False)
    h.setflags(write=False)
    return MultiplicationSemigroup(depth, levels, h)


@dataclass(frozen=True)
class TranslationSemigroup:
    """(S(t) f)(x) = f(x + 2 pi t): mode f rotates by the angle 2 pi f t."""

    def apply(self, t, f: FourierFunction) -> FourierFunction:
        t = _as_time(t)
        if not isinstance(f, FourierFunction):
            raise ValueError("translation acts on FourierFunction")
        if t == 0:
            return f
        cos, sin = {}, {}
        for k in f.frequencies():
            a, b = f.mode(k)
            trig = sincos_pi_fraction(2 * k * t.numerator, t.denominator)
            c, s = float(trig.cos), float(trig.sin)
            cos[k] = a * c + b * s
            sin[k] = b * c - a * s
        return FourierFunction(f.constant_term, cos, sin)

    def overlap(self, u: FourierFunction, t) -> mpc:
        t = _as_time(t)
        with extended():
            total = 2 * mpfr(u.constant_term) ** 2
            acc = total
            for k in u.frequencies():
                a, b = u.mode(k)
                w = mpfr(a) ** 2 + mpfr(b) ** 2
                total += w
                acc += w * sincos_pi_fraction(2 * k * t.numerator, t.denominator).cos
            return mpc(acc / total, 0)


@dataclass(frozen=True)
class FourierMultiplierSemigroup:
    """Diagonal semigroup scaling mode f by exp(-t * rate(f)); rate(0) is used
    for the constant term. With rate(f) = f^2 this is the heat semigroup, whose
    generator is the self-adjoint, sectorial operator d^2/dx^2."""

    rate: Callable[[int], int] = lambda f: f * f

    def apply(self, t, f: FourierFunction) -> FourierFunction:
        t = _as_time(t)
        if not isinstance(f, FourierFunction):
            raise ValueError("multiplier acts on FourierFunction")
        if t == 0:
            return f
        tf = float(t)
        scale = {k: math.exp(-tf * self.rate(k)) for k in f.frequencies()}
        return FourierFunction(
            f.constant_term * math.exp(-tf * self.rate(0)),
            {k: v * scale[k] for k, v in f.cos_coeffs.items()},
            {k: v * scale[k] for k, v in f.sin_coeffs.items()},
        )

    def overlap(self, u: FourierFunction, t) -> mpc:
        t = ext(_as_time(t))
        with extended():
            w0 = 2 * mpfr(u.constant_term) ** 2
            total = w0
            acc = w0 * exp_ext(-t * self.rate(0))
            for k in u.frequencies():
                a, b = u.mode(k)
                w = mpfr(a) ** 2 + mpfr(b) ** 2
                total += w
                acc += w * exp_ext(-t * self.rate(k))
            return mpc(acc / total, 0)


def heat_semigroup() -> FourierMultiplierSemigroup:
    return FourierMultiplierSemigroup()


def apply_semigroup(S, t, f):
    """S(t) f for any of the semigroups above."""
    return S.apply(t, f)


# -- projection -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RankOneProjection:
    """Orthogonal projection onto span{axis}; the axis must be a unit vector."""

    axis: GridFunction | FourierFunction

    def __post_init__(self):
        nrm = self.axis.norm()
        if abs(nrm - 1.0) > UNIT_TOL:
            raise ValueError(f"projection axis must have unit norm (got {nrm!r})")
        object.__setattr__(self, "_axis_sq", inner_product(self.axis, self.axis))

    def coefficient(self, f):
        # dividing by <u, u> keeps P exactly idempotent for a float-rounded axis
        return inner_product(f, self.axis) / self._axis_sq

    def project(self, f):
        return self.axis.scaled(self.coefficient(f))


def project(P: RankOneProjection, f):
    return P.project(f)


def build_g(k_max: int) -> FourierFunction:
    """g(x) = (34 pi)^-1/2 [4 + sum_{k=0}^{k_max} 2^{-k/2} cos(2^k x)]."""
    lo, hi = KMAX_RANGE
    if not isinstance(k_max, int) or not lo <= k_max <= hi:
        raise ValueError(f"k_max must be an integer in [{lo}, {hi}]")
    norm = 1.0 / math.sqrt(34 * math.pi)
    cos = {2**k: norm * 2.0 ** (-k / 2) for k in range(k_max + 1)}
    return FourierFunction(4 * norm, cos)


def control_axis(modes: Mapping[int, float] | None = None) -> FourierFunction:
    """Normalized cosine polynomial; default 1 + cos x + cos 2x."""
    modes = {0: 1.0, 1: 1.0, 2: 1.0} if modes is None else dict(modes)
    raw = FourierFunction(modes.pop(0, 0.0), modes)
    return raw.scaled(1.0 / raw.norm())


# -- Trotter products -------------------------------------------------------


def trotter_iterate(S, P, t, n: int, f, callback: Callable | None = None):
    """Literal n-fold product [S(t/n) P]^n f, projecting first in every step.

    ``callback(step, f_step)`` is called after each step if given.
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError("n must be a positive integer")
    step = _as_time(t) / n
    for i in range(1, n + 1):
        f = S.apply(step, P.project(f))
        if callback is not None:
            callback(i, f)
    return f


def _near_one(z, n) -> bool:
    return abs(abs(complex(z)) - 1.0) <= 10.0 / n


def _to_mpc(c: complex) -> mpc:
    with extended():
        return mpc(mpfr(c.real), mpfr(c.imag))


class _RankOneRun:
    """[S(t/n) P_u]^n f = a_n S(t/n) u with a_n = <f,u>/<u,u> * z_n^{n-1},
    z_n = <S(t/n)u, u>/<u, u>. Quantities independent of n are computed once."""

    def __init__(self, S, u, t, f):
        if abs(u.norm() - 1.0) > UNIT_TOL:
            raise ValueError("rank-one reduction needs a unit axis")
        self.S, self.u, self.t = S, u, _as_time(t)
        self.inner_fu = complex(inner_product(f, u))
        self.coeff = self.inner_fu / inner_product(u, u)

    def parts(self, n: int):
        if not isinstance(n, int) or n < 1:
            raise ValueError("n must be a positive integer")
        step = self.t / n
        z = self.S.overlap(self.u, step)
        if _near_one(z, n):
            with extended():
                alpha = complex(_to_mpc(self.coeff) * z ** (n - 1))
        else:
            alpha = self.coeff * complex(z) ** (n - 1)
        v = self.S.apply(step, self.u)
        if isinstance(v, FourierFunction):
            alpha = alpha.real
        return v.scaled(alpha), z

    def iterate(self, n: int):
        return self.parts(n)[0]

    def scalar(self, n: int, z=None) -> mpc:
        # <f_n, u> = <f, u> z_n^n
        if z is None:
            z = self.S.overlap(self.u, self.t / n)
        with extended():
            return _to_mpc(self.inner_fu) * z**n


def rank_one_reduction(S, u, t, n: int, f):
    """[S(t/n) P_u]^n f without iterating: <f,u> <S(t/n)u,u>^{n-1} S(t/n) u.

    The overlap comes from the semigroup in extended precision and the power
    is taken there whenever |overlap| is within 10/n of 1.
    """
    return _RankOneRun(S, u, t, f).iterate(n)


# -- convergence probe ------------------------------------------------------


@dataclass(frozen=True)
class SubsequenceWitness:
    label: str
    n_values: tuple[int, ...]
    norm_estimate: float


@dataclass(frozen=True)
class ConvergenceVerdict:
    """Numerical evidence about the existence of lim [S(t/n)P]^n f (not a proof)."""

    kind: str  # converged | oscillating | inconclusive
    limit_norm_estimate: float | None = None
    witness: tuple[SubsequenceWitness, SubsequenceWitness] | None = None
    separation: float | None = None
    cauchy_table: tuple[tuple[int, float], ...] = ()
    norm_table: tuple[tuple[int, float], ...] = ()
    scalar_table: tuple[tuple[int, mpc], ...] = ()
    reference_limit: mpfr | None = None
    threshold: float = 0.0


def _family(n: int) -> str:
    odd = n >> ((n & -n).bit_length() - 1)
    return {1: "pow2", 3: "three_pow2"}.get(odd, f"odd{odd}")


def convergence_probe(S, P, t, f, schedule: Iterable[int], threshold: float) -> ConvergenceVerdict:
    """Classify the Trotter iterates along ``schedule``.

    ``converged``: the Cauchy differences ||f_2n - f_n|| over the last three
    schedule points are non-increasing and below ``threshold``.
    ``oscillating``: the iterate norms of the subsequences n = 2^m and
    n = 3*2^m (estimated at their largest n) differ by at least ``threshold``.
    Anything else, including a degenerate schedule, is ``inconclusive``.
    """
    schedule = [int(n) for n in schedule]
    if len(schedule) < 4 or any(b <= a for a, b in zip(schedule, schedule[1:])) or schedule[0] < 1:
        return ConvergenceVerdict("inconclusive", threshold=threshold)

    run = _RankOneRun(S, P.axis, t, f) if isinstance(P, RankOneProjection) else None

    norms, cauchy, scalars = [], [], []
    for n in schedule:
        if run is not None:
            fn, z = run.parts(n)
            f2n = run.iterate(2 * n)
            scalars.append((n, run.scalar(n, z)))
        else:
            fn = trotter_iterate(S, P, t, n, f)
            f2n = trotter_iterate(S, P, t, 2 * n, f)
        norms.append((n, fn.norm()))
        cauchy.append((n, (f2n - fn).norm()))

    tail = [d for _, d in cauchy[-3:]]
    converged = all(b <= a for a, b in zip(tail, tail[1:])) and all(d < threshold for d in tail)

    groups: dict[str, list[tuple[int, float]]] = {}
    for n, v in norms:
        groups.setdefault(_family(n), []).append((n, v))
    witness = separation = None
    if "pow2" in groups and "three_pow2" in groups:
        a = SubsequenceWitness("pow2", tuple(n for n, _ in groups["pow2"]), groups["pow2"][-1][1])
        b = SubsequenceWitness(
            "three_pow2", tuple(n for n, _ in groups["three_pow2"]), groups["three_pow2"][-1][1]
        )
        witness = (a, b)
        separation = abs(a.norm_estimate - b.norm_estimate)

    if converged:
        kind = "converged"
    elif separation is not None and separation >= threshold:
        kind = "oscillating"
    else:
        kind = "inconclusive"
    return ConvergenceVerdict(
        kind=kind,
        limit_norm_estimate=norms[-1][1] if kind == "converged" else None,
        witness=witness if kind == "oscillating" else None,
        separation=separation,
        cauchy_table=tuple(cauchy),
        norm_table=tuple(norms),
        scalar_table=tuple(scalars),
        threshold=threshold,
    )


CONTROL_SCHEDULE = tuple(2**m for m in range(10, 31, 2))
CONTROL_THRESHOLD = 1e-6


def control_rate_constant(u: FourierFunction, rate=lambda f: f * f) -> mpfr:
    """q = sum_f rate(f) w_f with Parseval weights w_f of the unit vector u."""
    with extended():
        w0 = 2 * mpfr(u.constant_term) ** 2
        total, q = w0, w0 * rate(0)
        for k in u.frequencies():
            a, b = u.mode(k)
            w = mpfr(a) ** 2 + mpfr(b) ** 2
            total += w
            q += w * rate(k)
        return q / total


def positive_control(t=1, n_schedule=None, modes=None, threshold=CONTROL_THRESHOLD) -> ConvergenceVerdict:
    """Heat semigroup with a rank-one projection: the convergent regime.

    The scalar sequence <S(t/n)u, u>^n tends to exp(-t q) with q the
    Parseval-weighted mean of f^2 over the modes of u; the returned verdict
    carries that value as ``reference_limit``.
    """
    S = heat_semigroup()
    u = control_axis(modes)
    schedule = CONTROL_SCHEDULE if n_schedule is None else tuple(n_schedule)
    verdict = convergence_probe(S, RankOneProjection(u), t, u, schedule, threshold)
    with extended():
        limit = exp_ext(-ext(_as_time(t)) * control_rate_constant(u))
    return replace(verdict, reference_limit=limit)


# -- model-level helpers ----------------------------------------------------


def _cn_step(n, t) -> Fraction:
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError("n must be a positive integer")
    t = _as_time(t)
    if t == 0:
        raise ValueError("t must be positive")
    return t / n


def grid_cn(n: int, depth: int = 16, t=1) -> complex:
    """Grid mean of e^{i t h_D / n}, i.e. <S(t/n) 1, 1> on the depth-D grid."""
    step = _cn_step(n, t)
    S = build_h(depth)
    one = GridFunction.constant(depth)
    return inner_product(S.apply(step, one), one)


def fourier_cn(n: int, k_max: int = 40, t=1) -> float:
    """<g, S(t/n) g> for the truncated g, the simulator's view of the L_p c_n."""
    step = _cn_step(n, t)
    g = build_g(k_max)
    return inner_product(g, TranslationSemigroup().apply(step, g))


def hilbert_preset(depth: int = 20):
    S = build_h(depth)
    u = GridFunction.constant(depth)
    return S, RankOneProjection(u), u


def lp_preset(k_max: int = 40):
    g = build_g(k_max)
    return TranslationSemigroup(), RankOneProjection(g.scaled(1.0 / g.norm())), g


def control_preset(modes=None):
    u = control_axis(modes)
    return heat_semigroup(), RankOneProjection(u), u


PRESETS = {
    "hilbert": hilbert_preset,
    "lp": lp_preset,
    "control": control_preset,
}

HILBERT_PROBE_SCHEDULE = tuple(
    sorted([2**m for m in range(5, 21)] + [3 * 2**m for m in range(5, 13)])
)
HILBERT_PROBE_THRESHOLD = 5e-4
