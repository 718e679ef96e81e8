"""Symmetric-matrix primitives: spectral decomposition, functional calculus,
Loewner order comparison, and commuting pairs.

Everything here works on real symmetric matrices as float64 numpy arrays.
The eigensolver is LAPACK's (via ``numpy.linalg.eigh``) with a deterministic
column-sign convention layered on top; its contract (ascending eigenvalues,
orthogonality and reconstruction residuals, error surface) is pinned by the
test suite against hand oracles.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    AsymmetricInputError,
    ConvergenceError,
    DimMismatchError,
    DomainViolationError,
    NonFiniteInputError,
    NotPositiveDefiniteError,
    NotPositiveSemidefiniteError,
    NotSquareError,
    SingularPowerError,
)
from .functions import FunctionSpec

MAX_DIM = 64

# |s[i,j] - s[j,i]| <= SYMMETRY_TOL * (1 + max |entry|) or the input is rejected
SYMMETRY_TOL = 1e-12

# eigenvalues above -PSD_TOL * scale are clamped to zero by pd_power
PSD_TOL = 1e-12


def check_matrix(m, square: bool = False) -> np.ndarray:
    """Validate and convert to a finite float64 2-d array."""
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise DimMismatchError(f"expected a 2-d matrix, got shape {a.shape}")
    if max(a.shape) > MAX_DIM:
        raise DimMismatchError(f"dimension {max(a.shape)} exceeds the supported {MAX_DIM}")
    if not np.isfinite(a).all():
        raise NonFiniteInputError("matrix contains non-finite entries")
    if square and a.shape[0] != a.shape[1]:
        raise NotSquareError(f"expected a square matrix, got shape {a.shape}")
    return a


def check_symmetric(m) -> np.ndarray:
    """Validate symmetry within tolerance and return the symmetrized matrix."""
    a = check_matrix(m, square=True)
    bound = SYMMETRY_TOL * (1.0 + float(np.max(np.abs(a))))
    if float(np.max(np.abs(a - a.T))) > bound:
        raise AsymmetricInputError(
            f"matrix asymmetry {float(np.max(np.abs(a - a.T))):.3e} exceeds {bound:.3e}"
        )
    return 0.5 * (a + a.T)


def _sym(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.T)


@dataclass(frozen=True)
class SpectralDecomp:
    """Orthogonal q and ascending eigenvalues of a symmetric matrix."""

    q: np.ndarray
    eigenvalues: np.ndarray

    @property
    def dim(self) -> int:
        return self.q.shape[0]

    def reconstruct(self) -> np.ndarray:
        return _sym((self.q * self.eigenvalues) @ self.q.T)

    def apply(self, values: np.ndarray) -> np.ndarray:
        """q diag(values) q^T for an eigenvalue-indexed value vector."""
        return _sym((self.q * values) @ self.q.T)


def eigh(s, tol: float = 1e-12) -> SpectralDecomp:
    """Spectral decomposition with ascending eigenvalues.

    ``tol`` is validated for interface stability but the LAPACK backend does
    not take a threshold; residuals are far below any tol this package uses.
    Column signs follow a fixed convention (the largest-magnitude entry of
    each eigenvector is nonnegative) so results are deterministic.
    """
    if not (tol > 0.0 and math.isfinite(tol)):
        raise DomainViolationError(f"tolerance must be positive and finite, got {tol}")
    a = check_symmetric(s)
    try:
        lam, q = np.linalg.eigh(a)
    except np.linalg.LinAlgError as e:  # pragma: no cover - LAPACK rarely fails
        raise ConvergenceError(f"eigensolver did not converge: {e}") from e
    n = a.shape[0]
    anchor = np.argmax(np.abs(q), axis=0)
    signs = np.sign(q[anchor, np.arange(n)])
    signs[signs == 0.0] = 1.0
    q = q * signs
    lam = lam.copy()
    q.flags.writeable = False
    lam.flags.writeable = False
    return SpectralDecomp(q=q, eigenvalues=lam)


def matrix_function(d: SpectralDecomp, f: FunctionSpec) -> np.ndarray:
    """f applied through the spectral decomposition: q diag(f(lambda)) q^T.

    Every eigenvalue must be evaluable by ``f``; the error names the first
    offending eigenvalue.
    """
    lam = d.eigenvalues
    ok = f.defined_at(lam)
    if not ok.all():
        raise DomainViolationError(
            f"{f.describe()} undefined at eigenvalue {lam[~ok][0]!r}"
        )
    return d.apply(f.eval_array(lam))


def operator_norm_sym(s) -> float:
    """Spectral norm of a symmetric matrix (largest |eigenvalue|)."""
    a = check_symmetric(s)
    return float(np.max(np.abs(np.linalg.eigvalsh(a))))


class LoewnerOrdering(enum.Enum):
    LESS_EQUAL = "LESS_EQUAL"
    GREATER_EQUAL = "GREATER_EQUAL"
    EQUAL = "EQUAL"
    INCOMPARABLE = "INCOMPARABLE"


@dataclass(frozen=True)
class LoewnerVerdict:
    """Outcome of a Loewner-order comparison a ? b.

    ``min_gap`` is the smallest eigenvalue of (b - a): nonnegative gaps mean
    a <= b exactly, and mildly negative gaps within tolerance still verify.
    """

    ordering: LoewnerOrdering
    min_gap: float


def loewner_compare(a, b, tol: float = 1e-8) -> LoewnerVerdict:
    """Compare symmetric matrices in the Loewner order with relative tolerance.

    scale = max(1, ||a||, ||b||) in the spectral norm; a <= b is accepted when
    every eigenvalue of (b - a) is >= -tol*scale.
    """
    ma, mb = check_symmetric(a), check_symmetric(b)
    if ma.shape != mb.shape:
        raise DimMismatchError(f"shape mismatch {ma.shape} vs {mb.shape}")
    gaps = np.linalg.eigvalsh(mb - ma)
    scale = max(
        1.0,
        float(np.max(np.abs(np.linalg.eigvalsh(ma)))),
        float(np.max(np.abs(np.linalg.eigvalsh(mb)))),
    )
    lo, hi = float(gaps[0]), float(gaps[-1])
    le = lo >= -tol * scale
    ge = hi <= tol * scale
    if le and ge:
        ordering = LoewnerOrdering.EQUAL
    elif le:
        ordering = LoewnerOrdering.LESS_EQUAL
    elif ge:
        ordering = LoewnerOrdering.GREATER_EQUAL
    else:
        ordering = LoewnerOrdering.INCOMPARABLE
    return LoewnerVerdict(ordering=ordering, min_gap=lo)


def det_pd(a) -> float:
    """Determinant of a positive definite matrix, as the eigenvalue product."""
    lam = eigh(a).eigenvalues
    if lam[0] <= 0.0:
        raise NotPositiveDefiniteError(f"matrix has eigenvalue {lam[0]!r} <= 0")
    return float(np.prod(lam))


def pd_power(a, t: float) -> np.ndarray:
    """Real power of a positive (semi)definite matrix.

    t = 0 gives the identity and t = 1 returns the input unchanged; 0**t = 0
    for t > 0; negative powers require strict definiteness. Tiny negative
    eigenvalues within the PSD tolerance are clamped to zero.
    """
    m = check_symmetric(a)
    if t == 1.0:
        return m
    if t == 0.0:
        return np.eye(m.shape[0])
    d = eigh(m)
    lam = d.eigenvalues.copy()
    scale = max(1.0, float(np.max(np.abs(lam))))
    if lam[0] < -PSD_TOL * scale:
        raise NotPositiveSemidefiniteError(f"matrix has eigenvalue {lam[0]!r} < 0")
    lam[lam < 0.0] = 0.0
    if t < 0.0 and lam[0] == 0.0:
        raise SingularPowerError(f"negative power {t} of a singular matrix")
    return d.apply(np.power(lam, t))


def power_from_decomp(d: SpectralDecomp, t: float, original: np.ndarray | None = None) -> np.ndarray:
    """pd_power via a precomputed decomposition; t in {0, 1} short-circuits
    to exact identity / the original matrix so endpoint terms carry no
    reconstruction noise."""
    if t == 0.0:
        return np.eye(d.dim)
    if t == 1.0 and original is not None:
        return original
    lam = d.eigenvalues.copy()
    scale = max(1.0, float(np.max(np.abs(lam))))
    if lam[0] < -PSD_TOL * scale:
        raise NotPositiveSemidefiniteError(f"matrix has eigenvalue {lam[0]!r} < 0")
    lam[lam < 0.0] = 0.0
    if t < 0.0 and lam[0] == 0.0:
        raise SingularPowerError(f"negative power {t} of a singular matrix")
    return d.apply(np.power(lam, t))


def weighted_geometric_mean(a, b, nu: float) -> np.ndarray:
    """A #_nu B = A^(1/2) (A^(-1/2) B A^(-1/2))^nu A^(1/2) for PD A, B."""
    if not (0.0 <= nu <= 1.0):
        raise DomainViolationError(f"weight must lie in [0, 1], got {nu}")
    ma, mb = check_symmetric(a), check_symmetric(b)
    if ma.shape != mb.shape:
        raise DimMismatchError(f"shape mismatch {ma.shape} vs {mb.shape}")
    da = eigh(ma)
    if da.eigenvalues[0] <= 0.0:
        raise NotPositiveDefiniteError(f"left factor has eigenvalue {da.eigenvalues[0]!r} <= 0")
    if np.linalg.eigvalsh(mb)[0] <= 0.0:
        raise NotPositiveDefiniteError("right factor is not positive definite")
    root = da.apply(np.sqrt(da.eigenvalues))
    inv_root = da.apply(1.0 / np.sqrt(da.eigenvalues))
    inner = _sym(inv_root @ mb @ inv_root)
    di = eigh(inner)
    mid = di.apply(np.power(di.eigenvalues, nu))
    return _sym(root @ mid @ root)


@dataclass(frozen=True)
class CommutingPair:
    """Two positive matrices sharing the eigenbasis q: A = q diag(a) q^T and
    B = q diag(b) q^T. Shared structure is what makes the operator chains
    entrywise in the joint spectrum."""

    q: np.ndarray
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        q = check_matrix(self.q, square=True)
        n = q.shape[0]
        resid = float(np.linalg.norm(q.T @ q - np.eye(n)))
        if resid > 1e-10 * n:
            raise DomainViolationError(f"basis is not orthogonal (residual {resid:.3e})")
        for name, v in (("a", self.a), ("b", self.b)):
            arr = np.asarray(v, dtype=float)
            if arr.shape != (n,):
                raise DimMismatchError(f"spectrum {name} has shape {arr.shape}, expected ({n},)")
            if not np.isfinite(arr).all() or (arr <= 0.0).any():
                raise NotPositiveDefiniteError(f"spectrum {name} must be strictly positive")

    @property
    def dim(self) -> int:
        return self.q.shape[0]

    def matrix_a(self) -> np.ndarray:
        return _sym((self.q * self.a) @ self.q.T)

    def matrix_b(self) -> np.ndarray:
        return _sym((self.q * self.b) @ self.q.T)

    def materialize(self, values: np.ndarray) -> np.ndarray:
        """q diag(values) q^T for entrywise-computed spectra."""
        return _sym((self.q * values) @ self.q.T)


def commuting_weighted_product(pair: CommutingPair, t: float) -> np.ndarray:
    """A^t B^(1-t) for a commuting pair: q diag(a^t b^(1-t)) q^T."""
    if not math.isfinite(t):
        raise DomainViolationError(f"exponent must be finite, got {t}")
    vals = np.power(pair.a, t) * np.power(pair.b, 1.0 - t)
    return pair.materialize(vals)
