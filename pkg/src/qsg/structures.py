"""Structure tensors on a chart: almost complex structures, Hermitian and
Norden metrics, the associated 2-form and twin metric, and the coupling
operators between a connection, a (1,1) structure and a metric.

Operators are assembled on the coordinate frame fields and stored as
component arrays.  The two non-function-linear objects (the directional
structure-coupling operator and Lie derivatives of the structure) are also
exposed as operators on explicit polynomial fields, since frame arrays do
not determine them on general arguments.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .calculus import (
    Connection,
    DerivedTensorField,
    covd_values,
    levi_civita,
    lie_bracket,
    torsion_values,
)
from .errors import PreconditionError, ShapeError
from .fields import (
    PolyTensorField,
    bilinear_pullback_first,
    j_apply_vector,
)

INVOLUTION_TOL = 1e-10
PURITY_TOL = 1e-8


@dataclass
class AlmostComplexStructure:
    """A (1,1) field squaring to minus the identity."""

    field: PolyTensorField

    def __post_init__(self):
        if self.field.valence != (1, 1):
            raise ShapeError("almost complex structure must be a (1,1) field")

    @property
    def dimension(self) -> int:
        return self.field.dimension

    def values(self, pts):
        return self.field.values(pts)

    def jets(self, pts):
        return self.field.jets(pts)

    def involution_residual(self, pts) -> float:
        """max |J J + id| over the sample points."""
        jv = self.values(pts)
        eye = np.eye(self.dimension)
        return float(np.abs(np.einsum("nkm,nmj->nkj", jv, jv) + eye).max())

    def require_involution(self, pts, tol: float = INVOLUTION_TOL):
        r = self.involution_residual(pts)
        if r > tol:
            raise PreconditionError(f"structure does not square to -id (residual {r:.3e})")


@dataclass
class MetricField:
    """Symmetric (0,2) field tagged with its compatibility flavor.

    flavor 'hermitian': b(JX, JY) = b(X, Y); 'norden': b(JX, Y) = b(X, JY);
    'plain': no compatibility claimed.
    """

    field: PolyTensorField
    flavor: str = "plain"

    def __post_init__(self):
        if self.field.valence != (0, 2):
            raise ShapeError("metric must be a (0,2) field")
        if self.flavor not in ("hermitian", "norden", "plain"):
            raise ShapeError(f"unknown metric flavor {self.flavor!r}")

    @property
    def dimension(self) -> int:
        return self.field.dimension

    def values(self, pts):
        return self.field.values(pts)

    def jets(self, pts):
        return self.field.jets(pts)


def hermitian_purity_residual(g, J, pts) -> float:
    """max |b(JX, Y) + b(X, JY)| on frame pairs."""
    bv = g.values(pts)
    jv = J.values(pts)
    lhs = np.einsum("nki,nkj->nij", jv, bv)
    rhs = np.einsum("nkj,nik->nij", jv, bv)
    return float(np.abs(lhs + rhs).max())


def norden_purity_residual(h, J, pts) -> float:
    """max |b(JX, Y) - b(X, JY)| on frame pairs."""
    bv = h.values(pts)
    jv = J.values(pts)
    lhs = np.einsum("nki,nkj->nij", jv, bv)
    rhs = np.einsum("nkj,nik->nij", jv, bv)
    return float(np.abs(lhs - rhs).max())


def fundamental_two_form(g: MetricField, J: AlmostComplexStructure, check_at=None) -> PolyTensorField:
    """w(X, Y) = g(JX, Y); antisymmetric for a Hermitian pair.

    The result is an exact polynomial field.  When sample points are given,
    Hermitian purity is verified first.
    """
    if check_at is not None:
        r = hermitian_purity_residual(g, J, check_at)
        if r > PURITY_TOL:
            raise PreconditionError(f"metric is not Hermitian for this structure (purity {r:.3e})")
    return bilinear_pullback_first(g.field, J.field)


def twin_metric(h: MetricField, J: AlmostComplexStructure, check_at=None) -> PolyTensorField:
    """Twin metric hbar(X, Y) = h(JX, Y); symmetric for a Norden pair."""
    if check_at is not None:
        r = norden_purity_residual(h, J, check_at)
        if r > PURITY_TOL:
            raise PreconditionError(f"metric is not Norden for this structure (purity {r:.3e})")
    return bilinear_pullback_first(h.field, J.field)


def nijenhuis(J: AlmostComplexStructure) -> DerivedTensorField:
    """Integrability obstruction of J, assembled on frame fields.

    ``N^k_{ij} = J^k_m (d_i J^m_j - d_j J^m_i) - J^l_i d_l J^k_j + J^l_j d_l J^k_i``;
    tensoriality on non-frame arguments is a tested property, not an input
    assumption.
    """

    def fn(pts):
        jv, jg = J.jets(pts)
        t1 = np.einsum("nkm,nmji->nkij", jv, jg) - np.einsum("nkm,nmij->nkij", jv, jg)
        t2 = np.einsum("nli,nkjl->nkij", jv, jg) - np.einsum("nlj,nkil->nkij", jv, jg)
        return t1 - t2

    return DerivedTensorField(J.dimension, (1, 2), fn)


def nijenhuis_on_fields(J: AlmostComplexStructure, X: PolyTensorField, Y: PolyTensorField) -> PolyTensorField:
    """Bracket-form evaluation on explicit polynomial vector fields."""
    JX = j_apply_vector(J.field, X)
    JY = j_apply_vector(J.field, Y)
    term1 = j_apply_vector(J.field, j_apply_vector(J.field, lie_bracket(X, Y)))
    term2 = j_apply_vector(J.field, lie_bracket(X, JY))
    term3 = j_apply_vector(J.field, lie_bracket(JX, Y))
    term4 = lie_bracket(JX, JY)
    return -term1 + term2 + term3 - term4


def d_nabla_J_values(conn: Connection, J, pts) -> np.ndarray:
    """(d^D J)^k_{ij} = (D_i J)^k_j - (D_j J)^k_i + J^k_m T^m_{ij}."""
    dj = covd_values(conn, J.field if isinstance(J, AlmostComplexStructure) else J, pts)
    jv = (J.field if isinstance(J, AlmostComplexStructure) else J).values(pts)
    tv = torsion_values(conn, pts)
    return dj - np.swapaxes(dj, 2, 3) + np.einsum("nkm,nmij->nkij", jv, tv)


def d_nabla_J(conn: Connection, J) -> DerivedTensorField:
    return DerivedTensorField(conn.dimension, (1, 2), lambda pts: d_nabla_J_values(conn, J, pts))


def d_nabla_metric_values(conn: Connection, b, pts) -> np.ndarray:
    """(d^D b)_{ijk} = (D_i b)_{jk} - (D_j b)_{ik} + b(T(x_i, x_j), x_k).

    Applies to symmetric and antisymmetric b alike; antisymmetric in the
    first two slots.
    """
    field = b.field if isinstance(b, MetricField) else b
    db = covd_values(conn, field, pts)
    bv = field.values(pts)
    tv = torsion_values(conn, pts)
    return db - np.swapaxes(db, 1, 2) + np.einsum("nmij,nmk->nijk", tv, bv)


def d_nabla_metric(conn: Connection, b) -> DerivedTensorField:
    return DerivedTensorField(conn.dimension, (0, 3), lambda pts: d_nabla_metric_values(conn, b, pts))


def tachibana_values(J, h, pts) -> np.ndarray:
    """Holomorphicity operator of a (0,2) field against J, on frames.

    ``F[a,b,c] = J^m_a d_m h_{bc} - d_a J^m_b h_{mc} - J^m_b d_a h_{mc}
    + d_b J^m_a h_{mc} + h_{bm} d_c J^m_a``; built from Lie derivatives
    ``(L_X J)Y = [X, JY] - J [X, Y]`` evaluated on frame fields.
    """
    jfield = J.field if isinstance(J, AlmostComplexStructure) else J
    hfield = h.field if isinstance(h, MetricField) else h
    jv, jg = jfield.jets(pts)
    hv, hg = hfield.jets(pts)
    out = np.einsum("nma,nbcm->nabc", jv, hg)
    out -= np.einsum("nmba,nmc->nabc", jg, hv)
    out -= np.einsum("nmb,nmca->nabc", jv, hg)
    out += np.einsum("nmab,nmc->nabc", jg, hv)
    out += np.einsum("nbm,nmac->nabc", hv, jg)
    return out


def tachibana(J, h) -> DerivedTensorField:
    dim = (J.field if isinstance(J, AlmostComplexStructure) else J).dimension
    return DerivedTensorField(dim, (0, 3), lambda pts: tachibana_values(J, h, pts))


def cyclic_sum_03(arr: np.ndarray) -> np.ndarray:
    """S[a,b,c] = A[a,b,c] + A[b,c,a] + A[c,a,b] for (n,d,d,d) arrays."""
    return arr + np.einsum("nbca->nabc", arr) + np.einsum("ncab->nabc", arr)


def quasi_kahler_norden_sum_values(h: MetricField, J, pts, conn: Connection | None = None) -> np.ndarray:
    """Cyclic sum of h((D_a J) x_b, x_c) under the metric's own torsion-free
    metric-parallel connection (or a supplied one)."""
    if conn is None:
        conn = levi_civita(h.field)
    jfield = J.field if isinstance(J, AlmostComplexStructure) else J
    dj = covd_values(conn, jfield, pts)  # dj[n,m,a,b] = (D_a J)^m_b
    hv = h.values(pts)
    base = np.einsum("nmab,nmc->nabc", dj, hv)
    return cyclic_sum_03(base)


def vishnevskii_frame_values(conn: Connection, J, pts) -> np.ndarray:
    """Frame array of the coupling operator: Psi(x_i, x_j)^k for frame pairs.

    ``Psi_{J x_i} x_j = D_{J x_i} x_j - J (D_{x_i} x_j)``; not tensorial in
    the second argument, so this array does not determine the operator on
    non-frame arguments.
    """
    jfield = J.field if isinstance(J, AlmostComplexStructure) else J
    jv = jfield.values(pts)
    g = conn.gammas(pts)
    return np.einsum("nli,nklj->nkij", jv, g) - np.einsum("nkm,nmij->nkij", jv, g)


def vishnevskii(conn: Connection, J) -> DerivedTensorField:
    """Frame array of the structure-coupling operator.

    The operator is not function-linear in its second argument, so this
    array is meaningful for frame arguments only; use
    ``vishnevskii_on_fields`` for explicit polynomial arguments and
    ``vishnevskii_jframe_values`` for the structure-twisted frame set.
    """
    return DerivedTensorField(
        conn.dimension, (1, 2), lambda pts: vishnevskii_frame_values(conn, J, pts)
    )


def vishnevskii_jframe_values(conn: Connection, J, pts) -> np.ndarray:
    """Psi(x_i, J x_j)^k: the operator on (frame, J-twisted frame) pairs.

    Together with the frame array this is exactly the argument set on which
    a vanishing operator forces the torsion-coupling identity.
    """
    jfield = J.field if isinstance(J, AlmostComplexStructure) else J
    jv, jg = jfield.jets(pts)
    g = conn.gammas(pts)
    # D_{J x_i}(J x_j) = J^l_i (d_l J^k_j + gamma^k_{lm} J^m_j)
    t1 = np.einsum("nli,nkjl->nkij", jv, jg) + np.einsum("nli,nklm,nmj->nkij", jv, g, jv)
    # J (D_{x_i}(J x_j)) = J^k_m (d_i J^m_j + gamma^m_{il} J^l_j)
    t2 = np.einsum("nkm,nmji->nkij", jv, jg) + np.einsum("nkm,nmil,nlj->nkij", jv, g, jv)
    return t1 - t2


def vishnevskii_on_fields(conn: Connection, J, X: PolyTensorField, Y: PolyTensorField, pts) -> np.ndarray:
    """Operator evaluation on explicit polynomial fields (first slot is
    tensorial, second is not)."""
    jfield = J.field if isinstance(J, AlmostComplexStructure) else J
    JX = j_apply_vector(jfield, X)
    jv = jfield.values(pts)
    yv, yg = Y.jets(pts)
    jxv = JX.values(pts)
    xv = X.values(pts)
    g = conn.gammas(pts)
    # D_Z Y = Z^i (d_i Y^k + gamma^k_{ij} Y^j)
    dJX = np.einsum("ni,nki->nk", jxv, yg) + np.einsum("ni,nkij,nj->nk", jxv, g, yv)
    dX = np.einsum("ni,nki->nk", xv, yg) + np.einsum("ni,nkij,nj->nk", xv, g, yv)
    return dJX - np.einsum("nkm,nm->nk", jv, dX)


def lie_derivative_J_on_fields(J, X: PolyTensorField, Y: PolyTensorField) -> PolyTensorField:
    """(L_X J) Y = [X, JY] - J [X, Y] for polynomial fields."""
    jfield = J.field if isinstance(J, AlmostComplexStructure) else J
    return lie_bracket(X, j_apply_vector(jfield, Y)) - j_apply_vector(jfield, lie_bracket(X, Y))
