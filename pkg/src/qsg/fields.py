"""Polynomial scalar/tensor fields on a single coordinate chart.

Components are multivariate polynomials, so evaluation returns exact values
and exact first partial derivatives (only float rounding, no truncation).
All covariant and exterior differentiation downstream rests on this, which
is what makes identity residuals attributable to the math rather than to
numerical differentiation.

Index conventions used throughout the package:

* points are arrays of shape ``(n, d)``;
* a valence ``(p, q)`` field stores one polynomial per index tuple, upper
  indices first, in a component array of shape ``(d,) * (p + q)``;
* ``values(pts)`` returns ``(n, *shape)``; ``jets(pts)`` additionally
  returns the gradient array ``(n, *shape, d)`` with the derivative axis
  last.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, EvaluationError, ShapeError


@dataclass(frozen=True)
class ChartDomain:
    """Box-shaped coordinate chart of even dimension."""

    dimension: int
    box: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if self.dimension < 2 or self.dimension % 2 != 0:
            raise ShapeError(f"chart dimension must be even and >= 2, got {self.dimension}")
        if len(self.box) != self.dimension:
            raise ShapeError("box must have one interval per coordinate")
        for lo, hi in self.box:
            if not (np.isfinite(lo) and np.isfinite(hi) and hi > lo):
                raise ShapeError(f"degenerate chart interval ({lo}, {hi})")

    @classmethod
    def cube(cls, dimension: int, half_width: float = 0.5) -> "ChartDomain":
        return cls(dimension, tuple((-half_width, half_width) for _ in range(dimension)))

    @property
    def box_array(self) -> np.ndarray:
        return np.asarray(self.box, dtype=float)

    def contains(self, pts: np.ndarray, atol: float = 1e-12) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        b = self.box_array
        return np.all((pts >= b[:, 0] - atol) & (pts <= b[:, 1] + atol), axis=1)


@dataclass
class Jet1:
    """Value and exact first partials of one component at one point."""

    value: float
    partials: np.ndarray


class PolyExpr:
    """A multivariate polynomial: exponent rows plus coefficients.

    Terms are normalized on construction: duplicate exponent rows are
    combined, exact zeros dropped, rows sorted so equal polynomials have
    identical term lists (serialization and hashing depend on this).
    """

    __slots__ = ("dimension", "exps", "coefs", "_diffs")

    def __init__(self, dimension: int, exps=None, coefs=None):
        self.dimension = int(dimension)
        if exps is None:
            exps = np.zeros((0, self.dimension), dtype=np.int64)
            coefs = np.zeros(0, dtype=float)
        exps = np.asarray(exps, dtype=np.int64).reshape(-1, self.dimension)
        coefs = np.asarray(coefs, dtype=float).reshape(-1)
        if exps.shape[0] != coefs.shape[0]:
            raise ShapeError("exponent rows and coefficients must align")
        if np.any(exps < 0):
            raise ShapeError("negative exponents are not polynomials")
        if coefs.size and not np.all(np.isfinite(coefs)):
            raise EvaluationError("non-finite polynomial coefficient")
        exps, coefs = _normalize_terms(exps, coefs)
        self.exps = exps
        self.coefs = coefs
        self._diffs = None

    # -- constructors -------------------------------------------------

    @classmethod
    def constant(cls, dimension: int, c: float) -> "PolyExpr":
        if c == 0.0:
            return cls(dimension)
        return cls(dimension, np.zeros((1, dimension), dtype=np.int64), [c])

    @classmethod
    def from_terms(cls, dimension: int, terms) -> "PolyExpr":
        """terms: iterable of (exponent sequence, coefficient)."""
        exps = [t[0] for t in terms]
        coefs = [t[1] for t in terms]
        return cls(dimension, exps, coefs)

    @classmethod
    def coordinate(cls, dimension: int, axis: int) -> "PolyExpr":
        e = np.zeros((1, dimension), dtype=np.int64)
        e[0, axis] = 1
        return cls(dimension, e, [1.0])

    @classmethod
    def sum_of(cls, dimension: int, polys) -> "PolyExpr":
        """Sum many polynomials with a single normalization pass."""
        polys = [p for p in polys if p.exps.shape[0]]
        if not polys:
            return cls(dimension)
        return cls(
            dimension,
            np.vstack([p.exps for p in polys]),
            np.concatenate([p.coefs for p in polys]),
        )

    # -- algebra ------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        return PolyExpr(
            self.dimension,
            np.vstack([self.exps, other.exps]),
            np.concatenate([self.coefs, other.coefs]),
        )

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __neg__(self):
        return PolyExpr(self.dimension, self.exps, -self.coefs)

    def __mul__(self, other):
        if np.isscalar(other):
            return PolyExpr(self.dimension, self.exps, self.coefs * float(other))
        other = self._coerce(other)
        if self.exps.shape[0] == 0 or other.exps.shape[0] == 0:
            return PolyExpr(self.dimension)
        e = (self.exps[:, None, :] + other.exps[None, :, :]).reshape(-1, self.dimension)
        c = (self.coefs[:, None] * other.coefs[None, :]).reshape(-1)
        return PolyExpr(self.dimension, e, c)

    __rmul__ = __mul__

    def _coerce(self, other) -> "PolyExpr":
        if isinstance(other, PolyExpr):
            if other.dimension != self.dimension:
                raise ShapeError("polynomial dimensions differ")
            return other
        if np.isscalar(other):
            return PolyExpr.constant(self.dimension, float(other))
        raise ShapeError(f"cannot combine PolyExpr with {type(other)!r}")

    @property
    def degree(self) -> int:
        if self.exps.shape[0] == 0:
            return 0
        return int(self.exps.sum(axis=1).max())

    def is_zero(self) -> bool:
        return self.exps.shape[0] == 0

    def diff(self, axis: int) -> "PolyExpr":
        mask = self.exps[:, axis] > 0
        if not np.any(mask):
            return PolyExpr(self.dimension)
        e = self.exps[mask].copy()
        c = self.coefs[mask] * e[:, axis]
        e[:, axis] -= 1
        return PolyExpr(self.dimension, e, c)

    # -- evaluation ---------------------------------------------------

    def eval(self, pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        if pts.shape[1] != self.dimension:
            raise ShapeError("point dimension does not match polynomial")
        if self.exps.shape[0] == 0:
            return np.zeros(pts.shape[0])
        powers = pts[:, None, :] ** self.exps[None, :, :]
        return powers.prod(axis=2) @ self.coefs

    def jet(self, pts: np.ndarray):
        """Return (values (n,), gradients (n, d))."""
        vals = self.eval(pts)
        if self._diffs is None:
            self._diffs = tuple(self.diff(k) for k in range(self.dimension))
        grads = np.stack([dk.eval(pts) for dk in self._diffs], axis=-1)
        return vals, grads

    def terms(self):
        """Canonical (exponent list, coefficient) pairs for serialization."""
        return [(list(map(int, e)), float(c)) for e, c in zip(self.exps, self.coefs)]

    def __repr__(self):
        return f"PolyExpr(d={self.dimension}, terms={self.terms()})"


def _normalize_terms(exps, coefs):
    t = exps.shape[0]
    if t == 0:
        return exps, coefs
    if t == 1:
        if coefs[0] == 0.0:
            return exps[:0], coefs[:0]
        return exps, coefs
    if exps.max() < 64 and exps.shape[1] <= 10:
        # pack each exponent row into one integer key for fast grouping
        key = exps @ (64 ** np.arange(exps.shape[1], dtype=np.int64))
        order = np.argsort(key, kind="stable")
        key, exps, coefs = key[order], exps[order], coefs[order]
        starts = np.concatenate([[0], np.flatnonzero(np.diff(key)) + 1])
        summed = np.add.reduceat(coefs, starts)
        uniq = exps[starts]
    else:
        order = np.lexsort(exps.T[::-1])
        exps, coefs = exps[order], coefs[order]
        uniq, inverse = np.unique(exps, axis=0, return_inverse=True)
        summed = np.zeros(uniq.shape[0])
        np.add.at(summed, inverse, coefs)
    keep = summed != 0.0
    return uniq[keep], summed[keep]


class PolyTensorField:
    """Dense component array of polynomials with a fixed valence.

    ``comps`` is an object ndarray of shape ``(d,) * (p + q)`` holding one
    :class:`PolyExpr` per index tuple, upper indices first.  Fields are
    immutable after construction and evaluation is pure, so concurrent use
    is safe.
    """

    def __init__(self, dimension: int, valence: tuple[int, int], comps: np.ndarray):
        self.dimension = int(dimension)
        self.valence = (int(valence[0]), int(valence[1]))
        rank = self.valence[0] + self.valence[1]
        comps = np.asarray(comps, dtype=object)
        if comps.shape != (self.dimension,) * rank:
            raise ShapeError(
                f"component array shape {comps.shape} does not match "
                f"valence {self.valence} in dimension {self.dimension}"
            )
        self.comps = comps
        self._eval_cache = {}

    # -- constructors -------------------------------------------------

    @classmethod
    def zeros(cls, dimension: int, valence) -> "PolyTensorField":
        rank = valence[0] + valence[1]
        comps = np.empty((dimension,) * rank, dtype=object)
        for idx in np.ndindex(comps.shape):
            comps[idx] = PolyExpr(dimension)
        return cls(dimension, valence, comps)

    @classmethod
    def constant(cls, dimension: int, valence, array) -> "PolyTensorField":
        array = np.asarray(array, dtype=float)
        f = cls.zeros(dimension, valence)
        for idx in np.ndindex(f.comps.shape):
            f.comps[idx] = PolyExpr.constant(dimension, float(array[idx]))
        return f

    @property
    def rank(self) -> int:
        return self.valence[0] + self.valence[1]

    @property
    def shape(self) -> tuple[int, ...]:
        return self.comps.shape

    def degree(self) -> int:
        return max((self.comps[idx].degree for idx in np.ndindex(self.shape)), default=0)

    # -- evaluation ---------------------------------------------------

    def values(self, pts: np.ndarray) -> np.ndarray:
        return self.jets(pts)[0]

    def jets(self, pts: np.ndarray):
        """Values and gradients, memoized per points array.

        Callers must treat the returned arrays as read-only; the cache is
        keyed by array identity, so repeated sweeps over one sample set
        evaluate each polynomial exactly once.
        """
        key = id(pts)
        hit = self._eval_cache.get(key)
        if hit is not None and hit[0] is pts:
            return hit[1], hit[2]
        pts_arr = np.atleast_2d(np.asarray(pts, dtype=float))
        vals = np.empty((pts_arr.shape[0],) + self.shape)
        grads = np.empty((pts_arr.shape[0],) + self.shape + (self.dimension,))
        for idx in np.ndindex(self.shape):
            v, g = self.comps[idx].jet(pts_arr)
            vals[(slice(None),) + idx] = v
            grads[(slice(None),) + idx] = g
        if len(self._eval_cache) > 8:
            self._eval_cache.clear()
        self._eval_cache[key] = (pts, vals, grads)
        return vals, grads

    # -- arithmetic ---------------------------------------------------

    def _check_compatible(self, other: "PolyTensorField"):
        if not isinstance(other, PolyTensorField):
            raise ShapeError(f"expected PolyTensorField, got {type(other)!r}")
        if other.dimension != self.dimension or other.valence != self.valence:
            raise ShapeError(
                f"valence/dimension mismatch: {self.valence}@{self.dimension} "
                f"vs {other.valence}@{other.dimension}"
            )

    def __add__(self, other):
        self._check_compatible(other)
        out = np.empty_like(self.comps)
        for idx in np.ndindex(self.shape):
            out[idx] = self.comps[idx] + other.comps[idx]
        return PolyTensorField(self.dimension, self.valence, out)

    def __sub__(self, other):
        self._check_compatible(other)
        out = np.empty_like(self.comps)
        for idx in np.ndindex(self.shape):
            out[idx] = self.comps[idx] - other.comps[idx]
        return PolyTensorField(self.dimension, self.valence, out)

    def scale(self, c: float) -> "PolyTensorField":
        out = np.empty_like(self.comps)
        for idx in np.ndindex(self.shape):
            out[idx] = self.comps[idx] * c
        return PolyTensorField(self.dimension, self.valence, out)

    def __neg__(self):
        return self.scale(-1.0)

    def transpose_02(self) -> "PolyTensorField":
        if self.valence != (0, 2):
            raise ShapeError("transpose_02 expects a (0,2) field")
        return PolyTensorField(self.dimension, (0, 2), self.comps.T.copy())


def field_arith(a: PolyTensorField, b, op: str) -> PolyTensorField:
    """Componentwise polynomial arithmetic: ``add``, ``sub`` or ``scale``.

    For ``scale``, ``b`` is the scalar factor.
    """
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "scale":
        return a.scale(float(b))
    raise ShapeError(f"unknown field operation {op!r}")


def eval_jet(field: PolyTensorField, point, domain: ChartDomain | None = None) -> np.ndarray:
    """Exact value + first partials of every component at one point.

    Returns an object array of :class:`Jet1` with the field's component
    shape.  If ``domain`` is given, the point must lie inside it (boundary
    included).
    """
    point = np.asarray(point, dtype=float).reshape(1, -1)
    if domain is not None and not bool(domain.contains(point)[0]):
        raise DomainError(f"point {point[0].tolist()} outside chart domain")
    vals, grads = field.jets(point)
    out = np.empty(field.shape, dtype=object)
    for idx in np.ndindex(field.shape):
        out[idx] = Jet1(float(vals[(0,) + idx]), grads[(0,) + idx].copy())
    return out


# -- small polynomial tensor algebra used to assemble structure fields ----


def j_apply_vector(J: PolyTensorField, X: PolyTensorField) -> PolyTensorField:
    """(1,1) field applied to a vector field: ``(J X)^k = J^k_j X^j``."""
    if J.valence != (1, 1) or X.valence != (1, 0):
        raise ShapeError("j_apply_vector expects a (1,1) and a (1,0) field")
    d = J.dimension
    out = PolyTensorField.zeros(d, (1, 0))
    for k in range(d):
        out.comps[k] = PolyExpr.sum_of(d, [J.comps[k, j] * X.comps[j] for j in range(d)])
    return out


def compose_11(A: PolyTensorField, B: PolyTensorField) -> PolyTensorField:
    """Composition of (1,1) fields: ``(A B)^k_j = A^k_m B^m_j``."""
    d = A.dimension
    out = PolyTensorField.zeros(d, (1, 1))
    for k in range(d):
        for j in range(d):
            out.comps[k, j] = PolyExpr.sum_of(
                d, [A.comps[k, m] * B.comps[m, j] for m in range(d)]
            )
    return out


def bilinear_pullback_first(b: PolyTensorField, J: PolyTensorField) -> PolyTensorField:
    """(0,2) field with the first slot twisted: ``b(J.,.)_{ij} = J^k_i b_{kj}``."""
    d = b.dimension
    out = PolyTensorField.zeros(d, (0, 2))
    for i in range(d):
        for j in range(d):
            out.comps[i, j] = PolyExpr.sum_of(
                d, [J.comps[k, i] * b.comps[k, j] for k in range(d)]
            )
    return out


def bilinear_pullback_both(b: PolyTensorField, J: PolyTensorField) -> PolyTensorField:
    """(0,2) field with both slots twisted: ``b(J.,J.)_{ij} = J^k_i J^l_j b_{kl}``."""
    d = b.dimension
    out = PolyTensorField.zeros(d, (0, 2))
    for i in range(d):
        for j in range(d):
            out.comps[i, j] = PolyExpr.sum_of(
                d,
                [J.comps[k, i] * J.comps[l, j] * b.comps[k, l]
                 for k in range(d) for l in range(d)],
            )
    return out


def symmetrize_02(b: PolyTensorField) -> PolyTensorField:
    return (b + b.transpose_02()).scale(0.5)


def scalar_times_field(f: PolyExpr, t: PolyTensorField) -> PolyTensorField:
    out = np.empty_like(t.comps)
    for idx in np.ndindex(t.shape):
        out[idx] = f * t.comps[idx]
    return PolyTensorField(t.dimension, t.valence, out)
