"""Scalar function library and grid-supported convexity verdicts.

The library covers the function shapes the chains need: ``exp(c*x)``, powers,
polynomials with nonnegative coefficients, the reciprocal, and the identity.
Each instance carries an explicit positivity domain (an interval on which the
function is strictly positive, so logarithms are safe); evaluation definedness
is a per-variant rule and can be wider, e.g. ``x**2`` evaluates on all reals
even though its positivity domain is (0, inf).

Two convexity notions are checked on finite grids:

* AG-convex: ``f(lx + (1-l)y) <= f(x)**l * f(y)**(1-l)`` (log-convex), and
* GG-convex: ``f(x**l * y**(1-l)) <= f(x)**l * f(y)**(1-l)`` (multiplicatively
  convex, equivalently u -> log f(exp(u)) convex).

A verdict is grid-supported, not a proof: every pair of grid points and every
``lambda = k/grid_n`` is tested, with combinations landing exactly on a
refinement of the grid so no interpolation error enters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConfigError,
    DegenerateIntervalError,
    DomainViolationError,
    NonPositiveInputError,
)

DEFAULT_GRID_N = 33
DEFAULT_CONVEXITY_TOL = 1e-10  # log-scale slack tolerance
MAX_GRID_N = 512


@dataclass(frozen=True)
class FunctionSpec:
    """One member of the scalar function library.

    ``domain`` is the declared positivity interval (lo, hi); ``closed_lo``
    marks lo itself as included (used by polynomials with a positive constant
    term). Use the classmethod constructors rather than instantiating directly.
    """

    kind: str
    params: tuple[float, ...]
    lo: float
    hi: float
    closed_lo: bool = False

    @classmethod
    def exp(cls, c: float = 1.0) -> "FunctionSpec":
        if not (c > 0.0 and math.isfinite(c)):
            raise DomainViolationError(f"exp scale must be positive and finite, got {c}")
        return cls("exp", (float(c),), -math.inf, math.inf)

    @classmethod
    def power(cls, r: float) -> "FunctionSpec":
        if not math.isfinite(r):
            raise DomainViolationError(f"power exponent must be finite, got {r}")
        return cls("power", (float(r),), 0.0, math.inf)

    @classmethod
    def poly(cls, coeffs, domain: tuple[float, float] | None = None) -> "FunctionSpec":
        cs = tuple(float(c) for c in coeffs)
        if not cs or any(c < 0.0 or not math.isfinite(c) for c in cs) or all(c == 0.0 for c in cs):
            raise DomainViolationError(
                f"polynomial needs nonnegative coefficients, not all zero, got {coeffs}"
            )
        if domain is not None:
            lo, hi = float(domain[0]), float(domain[1])
            if not lo < hi:
                raise DomainViolationError(f"empty domain ({lo}, {hi})")
            return cls("poly", cs, lo, hi)
        if cs[0] > 0.0:
            return cls("poly", cs, 0.0, math.inf, closed_lo=True)
        return cls("poly", cs, 0.0, math.inf)

    @classmethod
    def inverse(cls) -> "FunctionSpec":
        return cls("inverse", (), 0.0, math.inf)

    @classmethod
    def identity(cls) -> "FunctionSpec":
        return cls("identity", (), 0.0, math.inf)

    # -- evaluation ------------------------------------------------------

    def defined_at(self, x: np.ndarray) -> np.ndarray:
        """Boolean mask of points where evaluation is well defined."""
        x = np.asarray(x, dtype=float)
        if self.kind in ("exp", "poly", "identity"):
            return np.isfinite(x)
        if self.kind == "inverse":
            return np.isfinite(x) & (x > 0.0)
        r = self.params[0]
        if r == round(r) and r >= 0.0:
            return np.isfinite(x)
        if r > 0.0:
            return np.isfinite(x) & (x >= 0.0)
        return np.isfinite(x) & (x > 0.0)

    def eval_array(self, x: np.ndarray) -> np.ndarray:
        """Vectorized evaluation; raises if any point is outside definedness."""
        x = np.asarray(x, dtype=float)
        ok = self.defined_at(x)
        if not ok.all():
            bad = x[~ok]
            raise DomainViolationError(
                f"{self.describe()} undefined at x={bad.flat[0]!r}"
            )
        if self.kind == "exp":
            return np.exp(self.params[0] * x)
        if self.kind == "power":
            return np.power(x, self.params[0])
        if self.kind == "poly":
            acc = np.zeros_like(x)
            for c in reversed(self.params):
                acc = acc * x + c
            return acc
        if self.kind == "inverse":
            return 1.0 / x
        return x.copy()  # identity

    def __call__(self, x: float) -> float:
        return float(self.eval_array(np.asarray([x]))[0])

    # -- misc ------------------------------------------------------------

    def contains_interval(self, a: float, b: float) -> bool:
        """Whether the finite interval [a, b] sits inside the positivity domain."""
        lo_ok = a >= self.lo if self.closed_lo else a > self.lo
        return lo_ok and b < self.hi

    def describe(self) -> str:
        if self.kind == "exp":
            return f"exp:{self.params[0]:g}"
        if self.kind == "power":
            return f"power:{self.params[0]:g}"
        if self.kind == "poly":
            return "poly:" + ",".join(f"{c:g}" for c in self.params)
        return self.kind


def parse_function(text: str) -> FunctionSpec:
    """CLI shorthand parser: exp:c | power:r | poly:c0,c1,... | inverse | identity."""
    name, _, arg = text.strip().partition(":")
    try:
        if name == "exp":
            return FunctionSpec.exp(float(arg) if arg else 1.0)
        if name == "power":
            return FunctionSpec.power(float(arg))
        if name == "poly":
            return FunctionSpec.poly([float(c) for c in arg.split(",")])
        if name == "inverse" and not arg:
            return FunctionSpec.inverse()
        if name == "identity" and not arg:
            return FunctionSpec.identity()
    except (ValueError, DomainViolationError) as e:
        raise ConfigError(f"bad function spec {text!r}: {e}") from e
    raise ConfigError(f"unknown function spec {text!r}")


@dataclass(frozen=True)
class ConvexityVerdict:
    """Grid-supported verdict. ``slack`` is the minimum, over all tested
    triples, of (allowed right side - left side) in log scale; the verdict
    holds iff slack >= -tol. ``worst_triple`` is the (x, y, lambda) attaining it."""

    holds: bool
    worst_triple: tuple[float, float, float]
    slack: float


def _scan_fine_grid(
    fine_logs: np.ndarray,
    witness_points: np.ndarray,
    grid_n: int,
    tol: float,
) -> ConvexityVerdict:
    """Convexity scan of log-values on an arithmetic fine grid.

    ``fine_logs[m]`` is log f at fine index m (m = 0..grid_n**2); coarse grid
    point i sits at fine index i*grid_n, so the combination with
    lambda = k/grid_n lands exactly at index k*i + (grid_n-k)*j.
    """
    g = grid_n
    coarse = fine_logs[::g]
    idx = np.arange(g + 1)
    ii, jj = np.meshgrid(idx, idx, indexing="ij")
    best = math.inf
    best_ijk = (0, 0, 0)
    for k in range(g + 1):
        comb = fine_logs[k * ii + (g - k) * jj]
        bound = (k * coarse[ii] + (g - k) * coarse[jj]) / g
        slack = bound - comb
        pos = int(np.argmin(slack))
        if slack.flat[pos] < best:
            best = float(slack.flat[pos])
            best_ijk = (pos // (g + 1), pos % (g + 1), k)
    i, j, k = best_ijk
    worst = (float(witness_points[i * g]), float(witness_points[j * g]), k / g)
    return ConvexityVerdict(holds=best >= -tol, worst_triple=worst, slack=best)


def _scan_midpoint_only(
    coarse_logs: np.ndarray,
    mid_logs: np.ndarray,
    witness_points: np.ndarray,
    tol: float,
) -> ConvexityVerdict:
    """lambda = 1/2 variant; ``mid_logs[i, j]`` is log f at the midpoint of i, j."""
    slack = 0.5 * (coarse_logs[:, None] + coarse_logs[None, :]) - mid_logs
    pos = int(np.argmin(slack))
    n = coarse_logs.shape[0]
    i, j = pos // n, pos % n
    best = float(slack.flat[pos])
    worst = (float(witness_points[i]), float(witness_points[j]), 0.5)
    return ConvexityVerdict(holds=best >= -tol, worst_triple=worst, slack=best)


def _positive_logs(f: FunctionSpec, points: np.ndarray) -> np.ndarray:
    vals = f.eval_array(points)
    bad = ~(np.isfinite(vals) & (vals > 0.0))
    if bad.any():
        raise DomainViolationError(
            f"{f.describe()} is not strictly positive at x={points[bad][0]!r}"
        )
    return np.log(vals)


def _check_grid_n(grid_n: int) -> None:
    if not isinstance(grid_n, int) or grid_n < 3 or grid_n > MAX_GRID_N:
        raise DomainViolationError(f"grid_n must be an integer in [3, {MAX_GRID_N}], got {grid_n}")


def is_ag_convex(
    f: FunctionSpec,
    a: float,
    b: float,
    grid_n: int = DEFAULT_GRID_N,
    tol: float = DEFAULT_CONVEXITY_TOL,
    midpoint_only: bool = False,
) -> ConvexityVerdict:
    """Grid test of AG-convexity (log-convexity) of f on [a, b]."""
    _check_grid_n(grid_n)
    if not a < b:
        raise DegenerateIntervalError(f"need a < b, got [{a}, {b}]")
    if not f.contains_interval(a, b):
        raise DomainViolationError(
            f"[{a}, {b}] outside the positivity domain of {f.describe()}"
        )
    if midpoint_only:
        xs = a + (b - a) * np.arange(grid_n + 1) / grid_n
        mids = 0.5 * (xs[:, None] + xs[None, :])
        return _scan_midpoint_only(
            _positive_logs(f, xs), _positive_logs(f, mids.ravel()).reshape(mids.shape), xs, tol
        )
    m = grid_n * grid_n
    fine = a + (b - a) * np.arange(m + 1) / m
    return _scan_fine_grid(_positive_logs(f, fine), fine, grid_n, tol)


def is_gg_convex(
    f: FunctionSpec,
    a: float,
    b: float,
    grid_n: int = DEFAULT_GRID_N,
    tol: float = DEFAULT_CONVEXITY_TOL,
    midpoint_only: bool = False,
) -> ConvexityVerdict:
    """Grid test of GG-convexity of f on [a, b], 0 < a < b.

    Runs the same scan as the AG test but on a geometric grid: convexity of
    u -> log f(exp(u)) on [log a, log b].
    """
    _check_grid_n(grid_n)
    if not (a > 0.0 and b > 0.0):
        raise NonPositiveInputError(f"GG-convexity needs positive endpoints, got [{a}, {b}]")
    if not a < b:
        raise DegenerateIntervalError(f"need a < b, got [{a}, {b}]")
    if not f.contains_interval(a, b):
        raise DomainViolationError(
            f"[{a}, {b}] outside the positivity domain of {f.describe()}"
        )
    la, lb = math.log(a), math.log(b)
    if midpoint_only:
        xs = np.exp(la + (lb - la) * np.arange(grid_n + 1) / grid_n)
        mids = np.sqrt(xs[:, None] * xs[None, :])
        return _scan_midpoint_only(
            _positive_logs(f, xs), _positive_logs(f, mids.ravel()).reshape(mids.shape), xs, tol
        )
    m = grid_n * grid_n
    fine = np.exp(la + (lb - la) * np.arange(m + 1) / m)
    return _scan_fine_grid(_positive_logs(f, fine), fine, grid_n, tol)


def ag_gg_transport_check(
    f: FunctionSpec,
    a: float,
    b: float,
    grid_n: int = DEFAULT_GRID_N,
    tol: float = DEFAULT_CONVEXITY_TOL,
) -> bool:
    """AG-convexity of f on [a, b] should match GG-convexity of f(log .) on
    [exp a, exp b]; returns whether the two grid verdicts agree."""
    ag = is_ag_convex(f, a, b, grid_n, tol)
    # scan f(log x) on a geometric grid of [e^a, e^b] without a composed spec:
    # the u-grid of that scan is exactly the arithmetic grid of [a, b].
    m = grid_n * grid_n
    fine_x = np.exp(a + (b - a) * np.arange(m + 1) / m)
    logs = _positive_logs_of_composed(f, fine_x)
    gg = _scan_fine_grid(logs, fine_x, grid_n, tol)
    return ag.holds == gg.holds


def _positive_logs_of_composed(f: FunctionSpec, xs: np.ndarray) -> np.ndarray:
    vals = f.eval_array(np.log(xs))
    bad = ~(np.isfinite(vals) & (vals > 0.0))
    if bad.any():
        raise DomainViolationError(
            f"{f.describe()}(log x) not strictly positive at x={xs[bad][0]!r}"
        )
    return np.log(vals)


MEAN_CHAIN_NAMES = ("min", "geometric", "logarithmic", "arithmetic", "max")


def scalar_mean_chain(a: float, b: float) -> tuple[float, float, float, float, float]:
    """(min, G, L, A, max) for positive a, b; the five are nondecreasing.

    L is the logarithmic mean, extended by continuity to L(a, a) = a.
    """
    if not (a > 0.0 and b > 0.0 and math.isfinite(a) and math.isfinite(b)):
        raise NonPositiveInputError(f"means need positive finite inputs, got ({a}, {b})")
    if a == b:
        return (a, a, a, a, a)
    lo, hi = min(a, b), max(a, b)
    g = math.sqrt(a * b)
    log_mean = (hi - lo) / (math.log(hi) - math.log(lo))
    arith = 0.5 * (a + b)
    return (lo, g, log_mean, arith, hi)
