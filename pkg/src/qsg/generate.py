"""Randomized constructors for compatible structures, closed-form connection
recipes, and a least-squares synthesizer for connections under affine
constraints.

Structure generation keeps every output an exact polynomial field:

* almost complex structures are conjugations of the constant block
  structure by polynomial frames whose inverse is again polynomial (a
  unipotent half-block factor times a constant well-conditioned matrix),
  so the squared structure is minus the identity to rounding;
* Hermitian metrics average a random symmetric form over the structure and
  add a positive-definite averaged base, so purity is algebraically exact
  and nondegeneracy is tunable;
* Norden metrics antisymmetrize over the structure and add the conjugated
  neutral diagonal base, giving exact purity and neutral signature.

Connection synthesis treats every supported constraint as an affine map of
the symbol values and probes it numerically, so new constraints need no
hand-derived matrices; the least-squares solve is deterministic and the
reported residual is measured on a held-out sample set.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import product

import numpy as np

from . import sampling
from .calculus import (
    Connection,
    ConstantConnection,
    PolyConnection,
    covd_values,
    torsion_values,
)
from .connections import conjugate_by_bilinear
from .errors import GenerationError, SynthesisError
from .fields import ChartDomain, PolyExpr, PolyTensorField, symmetrize_02
from .model import ChartModel, neutral_diagonal, standard_structure
from .structures import (
    AlmostComplexStructure,
    MetricField,
    d_nabla_J_values,
    d_nabla_metric_values,
    vishnevskii_frame_values,
    vishnevskii_jframe_values,
)

T_J = sampling.tag("gen_almost_complex")
T_G = sampling.tag("gen_hermitian")
T_H = sampling.tag("gen_norden")
T_C = sampling.tag("gen_connection")
T_S = sampling.tag("synthesize")


@dataclass(frozen=True)
class GenSpec:
    """Knobs for randomized structure generation."""

    seed: int
    dimension: int
    degree: int = 2
    coef_bound: float = 1.0
    constraints: frozenset = frozenset()

    def __post_init__(self):
        if self.dimension < 2 or self.dimension % 2 != 0:
            raise GenerationError("dimension must be even and >= 2")
        if self.degree < 0 or self.coef_bound <= 0:
            raise GenerationError("degree must be >= 0 and coef_bound positive")


def monomial_exponents(dimension: int, degree: int) -> np.ndarray:
    """All exponent rows with total degree <= degree, in canonical order."""
    rows = [e for e in product(range(degree + 1), repeat=dimension) if sum(e) <= degree]
    rows.sort()
    return np.asarray(rows, dtype=np.int64)


def random_poly(rng, dimension: int, degree: int, bound: float, nonconstant=False) -> PolyExpr:
    exps = monomial_exponents(dimension, degree)
    coefs = rng.uniform(-bound, bound, size=exps.shape[0])
    if nonconstant and exps.shape[0] > 1:
        coefs[0] = 0.0
    return PolyExpr(dimension, exps, coefs)


def random_poly_field(rng, dimension: int, valence, degree: int, bound: float) -> PolyTensorField:
    out = PolyTensorField.zeros(dimension, valence)
    for idx in np.ndindex(out.shape):
        out.comps[idx] = random_poly(rng, dimension, degree, bound)
    return out


def random_vector_field(rng, dimension: int, degree: int = 2, bound: float = 1.0) -> PolyTensorField:
    return random_poly_field(rng, dimension, (1, 0), degree, bound)


# ---------------------------------------------------------------------------
# polynomial matrix helpers (object arrays of PolyExpr, shape (d, d))


def _poly_mat_const(dimension: int, array) -> np.ndarray:
    out = np.empty((dimension, dimension), dtype=object)
    for i in range(dimension):
        for j in range(dimension):
            out[i, j] = PolyExpr.constant(dimension, float(array[i, j]))
    return out


def _poly_mat_mul(a, b) -> np.ndarray:
    d = a.shape[0]
    out = np.empty((d, d), dtype=object)
    for i in range(d):
        for j in range(d):
            out[i, j] = PolyExpr.sum_of(d, [a[i, k] * b[k, j] for k in range(d)])
    return out


def _poly_mat_eye_plus(n_mat, sign=1.0) -> np.ndarray:
    d = n_mat.shape[0]
    out = np.empty((d, d), dtype=object)
    for i in range(d):
        for j in range(d):
            base = PolyExpr.constant(d, 1.0 if i == j else 0.0)
            out[i, j] = base + n_mat[i, j] * sign
    return out


def _zero_poly_mat(dimension: int) -> np.ndarray:
    out = np.empty((dimension, dimension), dtype=object)
    for i in range(dimension):
        for j in range(dimension):
            out[i, j] = PolyExpr(dimension)
    return out


# ---------------------------------------------------------------------------
# almost complex structures


def gen_almost_complex(spec: GenSpec, integrable: bool = False) -> AlmostComplexStructure:
    """Random polynomial structure with an exactly polynomial inverse frame.

    The block pattern of the constant structure is conjugated by the frame
    ``C = Q (I + U)`` where U is a polynomial matrix supported on one half
    block (so U^2 = 0 and the factor inverse is ``I - U``, again
    polynomial) and Q is a constant well-conditioned matrix.  Coefficients
    are scaled so the perturbation stays below 0.2 in sup norm, and the
    squared structure is minus the identity to float rounding.

    With ``integrable=True``, U is the Jacobian of a polynomial shear, so
    the result is the coordinate expression of the constant structure in
    sheared coordinates and its integrability obstruction vanishes.
    """
    d = spec.dimension
    rng = sampling.rng(spec.seed, T_J, d, int(integrable))
    half = d // 2
    axes = rng.permutation(d)
    rows, cols = axes[:half], axes[half:]
    n_mon = monomial_exponents(d, spec.degree).shape[0]
    scale = 0.2 / max(1, n_mon)

    u = _zero_poly_mat(d)
    if integrable:
        for i in rows:
            # shear component depends only on the complementary axes
            s = PolyExpr(d)
            exps = monomial_exponents(len(cols), spec.degree + 1)
            for e in exps:
                full = np.zeros(d, dtype=np.int64)
                full[cols] = e
                s = s + PolyExpr(d, full[None, :], [rng.uniform(-scale, scale)])
            for j in cols:
                u[i, j] = s.diff(int(j))
    else:
        for i in rows:
            for j in cols:
                u[i, j] = random_poly(rng, d, spec.degree, scale)

    p = _poly_mat_eye_plus(u)
    pinv = _poly_mat_eye_plus(u, sign=-1.0)

    # constant conjugation factor, resampled until well conditioned
    j0 = standard_structure(d)
    for _ in range(10):
        q = np.eye(d) + rng.uniform(-0.2, 0.2, size=(d, d))
        if np.linalg.cond(q) < 20.0:
            break
    else:
        raise GenerationError("could not draw a well-conditioned constant frame factor")
    m0 = np.linalg.solve(q.T, (q @ j0).T).T  # q j0 q^{-1}

    comps = _poly_mat_mul(_poly_mat_mul(p, _poly_mat_const(d, m0)), pinv)
    jfield = PolyTensorField(d, (1, 1), comps)
    structure = AlmostComplexStructure(jfield)
    # exact polynomial frame C = P Q with polynomial inverse Q^{-1} P^{-1};
    # the produced field satisfies J = C J0 C^{-1}
    structure.frame = PolyTensorField(
        d, (1, 1), _poly_mat_mul(p, _poly_mat_const(d, q))
    )
    structure.frame_inv = PolyTensorField(
        d, (1, 1), _poly_mat_mul(_poly_mat_const(d, np.linalg.inv(q)), pinv)
    )
    return structure


# ---------------------------------------------------------------------------
# metrics


def _det_floor_ok(field: PolyTensorField, pts, floor: float) -> bool:
    vals = field.values(pts)
    return bool(np.abs(np.linalg.det(vals)).min() >= floor)


def gen_hermitian_metric(spec: GenSpec, J: AlmostComplexStructure,
                         probe_pts=None, det_floor: float = 1e-3) -> MetricField:
    """Random metric with exactly invariant purity: g(JX, JY) = g(X, Y).

    Built as A + A(J., J.) + c (E + E(J., J.)) where A pulls a random
    symmetric polynomial form back through the structure's inverse frame
    and E is the pulled-back identity form (positive definite, so the base
    term controls nondegeneracy).  Averaging over the structure in the
    constant frame keeps polynomial degrees bounded by
    ``spec.degree + 2 deg(frame)``.
    """
    d = spec.dimension
    rng = sampling.rng(spec.seed, T_G, d)
    if probe_pts is None:
        probe_pts = sampling.sample_box([(-0.5, 0.5)] * d, 25, spec.seed, T_G, d, 1)
    frame_inv = _frame_inv(J)
    j0 = standard_structure(d)
    r = symmetrize_02(random_poly_field(rng, d, (0, 2), spec.degree, 0.3 * spec.coef_bound))
    pure = _congruent_form_poly(r + _const_pullback_both(r, j0), frame_inv)
    base = _congruent_form(2.0 * np.eye(d), frame_inv)
    c = 0.5
    for _ in range(10):
        g = pure + base.scale(c)
        if _det_floor_ok(g, probe_pts, det_floor):
            return MetricField(g, flavor="hermitian")
        c *= 2.0
    raise GenerationError("could not reach a nondegenerate Hermitian metric")


def gen_norden_metric(spec: GenSpec, J: AlmostComplexStructure,
                      probe_pts=None, det_floor: float = 1e-3) -> MetricField:
    """Random neutral metric with exact purity: h(JX, Y) = h(X, JY).

    Built as h0 + S - S(J., J.) where S pulls a random symmetric
    polynomial form back through the inverse frame and h0 is the
    alternating-sign diagonal in that frame (the canonical neutral pure
    form, guaranteeing nondegeneracy and the (n, n) signature when S is
    small enough).
    """
    d = spec.dimension
    rng = sampling.rng(spec.seed, T_H, d)
    if probe_pts is None:
        probe_pts = sampling.sample_box([(-0.5, 0.5)] * d, 25, spec.seed, T_H, d, 1)
    frame_inv = _frame_inv(J)
    j0 = standard_structure(d)
    base = _congruent_form(neutral_diagonal(d), frame_inv)
    scale = 0.3 * spec.coef_bound
    for _ in range(10):
        s = symmetrize_02(random_poly_field(rng, d, (0, 2), spec.degree, scale))
        h = base + _congruent_form_poly(s - _const_pullback_both(s, j0), frame_inv)
        if _det_floor_ok(h, probe_pts, det_floor) and _neutral_signature(h, probe_pts):
            return MetricField(h, flavor="norden")
        scale *= 0.5
    raise GenerationError("could not reach a nondegenerate neutral Norden metric")


def _frame_inv(J: AlmostComplexStructure) -> PolyTensorField:
    frame_inv = getattr(J, "frame_inv", None)
    if frame_inv is None:
        # constant-structure fallback: the identity frame
        d = J.dimension
        return PolyTensorField.constant(d, (1, 1), np.eye(d))
    return frame_inv


def _const_pullback_both(b: PolyTensorField, const_j: np.ndarray) -> PolyTensorField:
    """b(Q., Q.) for a constant matrix Q: cheap, degree-preserving."""
    d = b.dimension
    out = PolyTensorField.zeros(d, (0, 2))
    for i in range(d):
        for j in range(d):
            out.comps[i, j] = PolyExpr.sum_of(
                d,
                [b.comps[a, c] * (const_j[a, i] * const_j[c, j])
                 for a in range(d) for c in range(d)
                 if const_j[a, i] * const_j[c, j] != 0.0],
            )
    return out


def _congruent_form(const_form: np.ndarray, frame_inv: PolyTensorField) -> PolyTensorField:
    """(C^{-1})^a_i (C^{-1})^b_j e_{ab} as an exact polynomial field."""
    d = frame_inv.dimension
    out = PolyTensorField.zeros(d, (0, 2))
    for i in range(d):
        for j in range(d):
            out.comps[i, j] = PolyExpr.sum_of(
                d,
                [frame_inv.comps[a, i] * frame_inv.comps[b, j] * const_form[a, b]
                 for a in range(d) for b in range(d) if const_form[a, b] != 0.0],
            )
    return out


def _congruent_form_poly(form: PolyTensorField, frame_inv: PolyTensorField) -> PolyTensorField:
    """form(C^{-1}., C^{-1}.) for a polynomial form."""
    d = frame_inv.dimension
    out = PolyTensorField.zeros(d, (0, 2))
    for i in range(d):
        for j in range(d):
            out.comps[i, j] = PolyExpr.sum_of(
                d,
                [frame_inv.comps[a, i] * frame_inv.comps[b, j] * form.comps[a, b]
                 for a in range(d) for b in range(d) if not form.comps[a, b].is_zero()],
            )
    return out


def _neutral_signature(h: PolyTensorField, pts) -> bool:
    # locally constant signature: five points suffice on a connected box
    vals = h.values(pts[:5])
    signs = np.sign(np.linalg.eigvalsh(vals))
    return bool(np.all(signs.sum(axis=1) == 0))


def gen_constant_structure_model(spec: GenSpec, flavor: str = "hermitian",
                                 half_width: float = 0.5) -> ChartModel:
    """Constant compatible pair (random constant frame), no connection.

    With constant structure fields every affine connection constraint has
    constant coefficients, so polynomial witnesses of any degree exist
    whenever pointwise ones do; these models carry the torsion-bearing
    witness load in higher dimensions where sheared-frame witnesses would
    need high-degree symbols.
    """
    d = spec.dimension
    rng = sampling.rng(spec.seed, T_G, d, 9, sampling.tag(flavor))
    j0 = standard_structure(d)
    for _ in range(10):
        q = np.eye(d) + rng.uniform(-0.3, 0.3, size=(d, d))
        if np.linalg.cond(q) < 20.0:
            break
    else:
        raise GenerationError("could not draw a well-conditioned constant frame")
    qinv = np.linalg.inv(q)
    jmat = q @ j0 @ qinv
    r0 = rng.uniform(-0.3, 0.3, size=(d, d))
    r0 = 0.5 * (r0 + r0.T)
    if flavor == "hermitian":
        b0 = r0 + j0.T @ r0 @ j0 + 2.0 * np.eye(d)
    elif flavor == "norden":
        b0 = neutral_diagonal(d) + r0 - j0.T @ r0 @ j0
        if np.abs(np.linalg.det(qinv.T @ b0 @ qinv)) < 1e-3:
            b0 = neutral_diagonal(d)
    else:
        raise GenerationError(f"unknown flavor {flavor!r}")
    bmat = qinv.T @ b0 @ qinv
    J = AlmostComplexStructure(PolyTensorField.constant(d, (1, 1), jmat))
    J.frame = PolyTensorField.constant(d, (1, 1), q)
    J.frame_inv = PolyTensorField.constant(d, (1, 1), qinv)
    metric = MetricField(PolyTensorField.constant(d, (0, 2), bmat), flavor=flavor)
    return ChartModel(domain=ChartDomain.cube(d, half_width), metric=metric, J=J, conn=None)


def gen_vishnevskii_zero_connection(spec: GenSpec, J: AlmostComplexStructure) -> PolyConnection:
    """Closed-form symbols whose structure-coupling operator vanishes on
    frame and structure-twisted frame arguments.

    Requires a constant structure: for nonconstant ones the twisted-frame
    conditions impose a holomorphy constraint on the structure itself and
    no symbols can satisfy them.  Per argument slot, symbols are projected
    onto the commutant of the structure, M -> (M - J M J) / 2.
    """
    d = spec.dimension
    if J.field.degree() > 0:
        raise GenerationError(
            "operator-vanishing symbols exist only for constant structures"
        )
    jmat = J.values(np.zeros((1, d)))[0]
    rng = sampling.rng(spec.seed, T_C, d, 3)
    raw = random_poly_field(rng, d, (1, 2), spec.degree, spec.coef_bound)
    out = PolyTensorField.zeros(d, (1, 2))
    # for each argument index j, project the (k, i)-matrix onto the commutant
    for j in range(d):
        for k in range(d):
            for i in range(d):
                out.comps[k, i, j] = PolyExpr.sum_of(
                    d,
                    [raw.comps[k, i, j] * 0.5]
                    + [raw.comps[a, b, j] * (-0.5 * jmat[k, a] * jmat[b, i])
                       for a in range(d) for b in range(d)
                       if jmat[k, a] * jmat[b, i] != 0.0],
                )
    return PolyConnection(out)


def gen_kahler_model(spec: GenSpec, half_width: float = 0.5) -> ChartModel:
    """A model that is the flat compatible pair in sheared coordinates.

    The structure is the integrable pullback variant and the metric pulls a
    constant Hermitian-compatible form through the same frame, so the
    2-form is exactly closed and the integrability obstruction vanishes.
    These are the models on which jointly metric-flat and structure-closed
    connections exist (on generic models they cannot, which is the content
    of the closedness lemma this family feeds).
    """
    d = spec.dimension
    rng = sampling.rng(spec.seed, T_G, d, 7)
    J = gen_almost_complex(spec, integrable=True)
    j0 = standard_structure(d)
    r0 = rng.uniform(-0.3 * spec.coef_bound, 0.3 * spec.coef_bound, size=(d, d))
    r0 = 0.5 * (r0 + r0.T)
    b = r0 + j0.T @ r0 @ j0
    c = 0.5
    probe = sampling.sample_box([(-half_width, half_width)] * d, 25, spec.seed, T_G, d, 8)
    for _ in range(10):
        g = _congruent_form(b + 2.0 * c * np.eye(d), J.frame_inv)
        if _det_floor_ok(g, probe, 1e-3):
            metric = MetricField(g, flavor="hermitian")
            return ChartModel(
                domain=ChartDomain.cube(d, half_width), metric=metric, J=J, conn=None
            )
        c *= 2.0
    raise GenerationError("could not build a nondegenerate pulled-back compatible model")


# ---------------------------------------------------------------------------
# connection recipes


def j_conjugate_poly(gamma: PolyTensorField, J: AlmostComplexStructure) -> PolyTensorField:
    """Structure conjugation of polynomial symbols, exactly:
    gamma'^k_{ij} = -J^k_m (d_i J^m_j + gamma^m_{il} J^l_j)."""
    d = gamma.dimension
    jf = J.field
    out = PolyTensorField.zeros(d, (1, 2))
    inner = {}
    for m in range(d):
        for i in range(d):
            for j in range(d):
                inner[m, i, j] = PolyExpr.sum_of(
                    d,
                    [jf.comps[m, j].diff(i)]
                    + [gamma.comps[m, i, l] * jf.comps[l, j] for l in range(d)],
                )
    for k in range(d):
        for i in range(d):
            for j in range(d):
                out.comps[k, i, j] = -PolyExpr.sum_of(
                    d, [jf.comps[k, m] * inner[m, i, j] for m in range(d)]
                )
    return out


def torsion_project_poly(t: PolyTensorField, J: AlmostComplexStructure) -> PolyTensorField:
    """Idempotent projector onto structure-invariant torsions:
    P(T)(X, Y) = (T(X, Y) + T(JX, JY)) / 2."""
    d = t.dimension
    jf = J.field
    out = PolyTensorField.zeros(d, (1, 2))
    for k in range(d):
        for i in range(d):
            for j in range(d):
                out.comps[k, i, j] = PolyExpr.sum_of(
                    d,
                    [t.comps[k, i, j]]
                    + [t.comps[k, a, b] * jf.comps[a, i] * jf.comps[b, j]
                       for a in range(d) for b in range(d)],
                ) * 0.5
    return out


def _symmetrize_12(t: PolyTensorField) -> PolyTensorField:
    d = t.dimension
    out = PolyTensorField.zeros(d, (1, 2))
    for k in range(d):
        for i in range(d):
            for j in range(d):
                out.comps[k, i, j] = (t.comps[k, i, j] + t.comps[k, j, i]) * 0.5
    return out


def _antisymmetrize_12(t: PolyTensorField) -> PolyTensorField:
    d = t.dimension
    out = PolyTensorField.zeros(d, (1, 2))
    for k in range(d):
        for i in range(d):
            for j in range(d):
                out.comps[k, i, j] = (t.comps[k, i, j] - t.comps[k, j, i]) * 0.5
    return out


def gen_connection(spec: GenSpec, J: AlmostComplexStructure | None = None,
                   metric: MetricField | None = None) -> Connection:
    """Closed-form recipes for single-constraint connection families.

    * no constraints: random polynomial symbols;
    * ``torsion_free``: symmetrized random symbols;
    * ``d_closed_J``: structure conjugate of a torsion-free connection;
    * ``j_invariant_torsion``: symmetric part plus half a projected torsion;
    * ``quasi_statistical_g`` / ``quasi_statistical_h``: metric conjugate of
      a torsion-free connection;
    * ``complex_connection``: average of a random connection with its
      structure conjugate.

    Multi-constraint sets have no closed form here; use
    ``synthesize_connection``.
    """
    cons = frozenset(spec.constraints)
    d = spec.dimension
    rng = sampling.rng(spec.seed, T_C, d)
    raw = random_poly_field(rng, d, (1, 2), spec.degree, spec.coef_bound)
    if len(cons) == 0:
        return PolyConnection(raw)
    if len(cons) > 1:
        raise GenerationError(
            f"no closed-form recipe for constraint set {sorted(cons)}; "
            "use synthesize_connection"
        )
    (constraint,) = cons
    if constraint == "torsion_free":
        return PolyConnection(_symmetrize_12(raw))
    if constraint == "d_closed_J":
        _require(J, "d_closed_J needs an almost complex structure")
        return PolyConnection(j_conjugate_poly(_symmetrize_12(raw), J))
    if constraint == "j_invariant_torsion":
        _require(J, "j_invariant_torsion needs an almost complex structure")
        t = _antisymmetrize_12(raw).scale(2.0)
        projected = torsion_project_poly(t, J)
        return PolyConnection(_symmetrize_12(raw) + projected.scale(0.5))
    if constraint in ("quasi_statistical_g", "quasi_statistical_h"):
        _require(metric, f"{constraint} needs a metric")
        base = PolyConnection(_symmetrize_12(raw))
        return conjugate_by_bilinear(base, metric)
    if constraint == "complex_connection":
        _require(J, "complex_connection needs an almost complex structure")
        return PolyConnection(
            (raw + j_conjugate_poly(raw, J)).scale(0.5)
        )
    raise GenerationError(f"unknown generation constraint {constraint!r}")


def _require(value, message):
    if value is None:
        raise GenerationError(message)


# ---------------------------------------------------------------------------
# constraint residual functions (all affine in the symbol values)


def _flatten(arr: np.ndarray) -> np.ndarray:
    return arr.reshape(arr.shape[0], -1)


def constraint_functions(model: ChartModel) -> dict:
    """Residual evaluators keyed by constraint name.

    Each maps ``(conn, pts)`` to an ``(n, m)`` array that is affine in the
    symbol values of ``conn`` at each point.
    """
    J = model.J
    metric = model.metric
    fns = {}
    fns["torsion_free"] = lambda conn, pts: _flatten(torsion_values(conn, pts))
    if J is not None:
        jf = J.field

        def j_invariant(conn, pts):
            tv = torsion_values(conn, pts)
            jv = jf.values(pts)
            return _flatten(np.einsum("nkab,nai,nbj->nkij", tv, jv, jv) - tv)

        def torsion_compat(conn, pts):
            tv = torsion_values(conn, pts)
            jv = jf.values(pts)
            return _flatten(
                np.einsum("nkaj,nai->nkij", tv, jv) + np.einsum("nkia,naj->nkij", tv, jv)
            )

        fns["j_invariant_torsion"] = j_invariant
        fns["torsion_compatible"] = torsion_compat
        fns["d_closed_J"] = lambda conn, pts: _flatten(d_nabla_J_values(conn, J, pts))
        fns["complex_connection"] = lambda conn, pts: _flatten(covd_values(conn, jf, pts))

        def codazzi(conn, pts):
            dj = covd_values(conn, jf, pts)
            return _flatten(dj - np.swapaxes(dj, 2, 3))

        fns["codazzi_J"] = codazzi
        fns["vishnevskii_zero"] = lambda conn, pts: np.concatenate(
            [
                _flatten(vishnevskii_frame_values(conn, J, pts)),
                _flatten(vishnevskii_jframe_values(conn, J, pts)),
            ],
            axis=1,
        )
    if metric is not None:
        key = "quasi_statistical_g" if metric.flavor != "norden" else "quasi_statistical_h"
        fns[key] = lambda conn, pts: _flatten(d_nabla_metric_values(conn, metric, pts))
    if metric is not None and J is not None and metric.flavor in ("hermitian", "norden"):
        partner = model.partner_form()
        fns["quasi_statistical_partner"] = lambda conn, pts: _flatten(
            d_nabla_metric_values(conn, partner, pts)
        )

        def conj_partner_parallel(conn, pts):
            star = conjugate_by_bilinear(conn, metric)
            return _flatten(covd_values(star, partner, pts))

        fns["conjugate_partner_parallel"] = conj_partner_parallel

        def torsion_sum(conn, pts):
            star = conjugate_by_bilinear(conn, metric)
            dag = conjugate_by_bilinear(conn, partner)
            return _flatten(torsion_values(star, pts) + torsion_values(dag, pts))

        fns["conjugate_torsion_sum"] = torsion_sum
    return fns


def _lstsq(rows: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Deterministic least-squares solve; rank deficiency is fine (the
    QR-with-pivoting driver returns a basic solution)."""
    from scipy.linalg import lstsq as scipy_lstsq

    sol, _, _, _ = scipy_lstsq(rows, rhs, lapack_driver="gelsy", check_finite=False)
    return sol


@dataclass
class SynthesisResult:
    """Outcome of a least-squares connection fit."""

    connection: PolyConnection
    residual: float
    constraint_residuals: dict
    iterations: int
    fit_points: int
    holdout_points: int
    seed: int = 0


def synthesize_connection(model: ChartModel, constraints, ansatz_degree: int = 1,
                          seed: int = 0, anchor_scale: float = 0.0,
                          n_fit: int | None = None, n_holdout: int = 25) -> SynthesisResult:
    """Fit polynomial symbols to a set of affine constraints.

    Rows are assembled by probing each constraint with one-hot constant
    symbols (valid because every supported constraint is pointwise affine
    in the symbol values), solved in the least-squares sense, and scored on
    a held-out sample set disjoint from the fitting set.  ``anchor_scale``
    biases the solution toward a random target inside the solution
    manifold, which keeps witnesses away from the torsion-free corner when
    the constraint set permits.
    """
    d = model.dimension
    fns = constraint_functions(model)
    unknown = [c for c in constraints if c not in fns]
    if unknown:
        raise SynthesisError(f"unknown or unavailable constraints: {unknown}")
    box = model.domain.box
    exps = monomial_exponents(d, ansatz_degree)
    k = exps.shape[0]
    r_sym = d ** 3

    active = [fns[c] for c in constraints]

    def eval_all(conn, pts):
        return np.concatenate([f(conn, pts) for f in active], axis=1)

    if n_fit is None:
        # enough rows that a spurious interpolant cannot fit the ansatz
        m_probe = eval_all(
            ConstantConnection(np.zeros((d, d, d))),
            sampling.sample_box(box, 1, seed, T_S, 3),
        ).shape[1]
        n_fit = int(min(120, max(16, np.ceil(2.5 * r_sym * k / m_probe))))
    pts_fit = sampling.sample_box(box, n_fit, seed, T_S, 0)
    pts_out = sampling.sample_box(box, n_holdout, seed, T_S, 1)

    base = eval_all(ConstantConnection(np.zeros((d, d, d))), pts_fit)  # (n, m)
    n, m = base.shape
    a = np.empty((n, m, r_sym))
    for r in range(r_sym):
        e = np.zeros(r_sym)
        e[r] = 1.0
        probe = eval_all(ConstantConnection(e.reshape(d, d, d)), pts_fit)
        a[:, :, r] = probe - base

    mon = np.stack([np.prod(pts_fit ** e, axis=1) for e in exps], axis=1)  # (n, k)
    rows = np.einsum("nmr,nk->nmrk", a, mon).reshape(n * m, r_sym * k)
    rhs = -base.reshape(n * m)

    rng = sampling.rng(seed, T_S, 2)
    c0 = np.zeros(r_sym * k)
    if anchor_scale > 0.0:
        c0 = anchor_scale * rng.standard_normal(r_sym * k)
    delta = _lstsq(rows, rhs - rows @ c0)
    coefs = c0 + delta

    field = PolyTensorField.zeros(d, (1, 2))
    coefs_shaped = coefs.reshape(r_sym, exps.shape[0])
    for r in range(r_sym):
        idx = np.unravel_index(r, (d, d, d))
        field.comps[idx] = PolyExpr(d, exps, coefs_shaped[r])
    conn = PolyConnection(field)

    per = {
        name: float(np.abs(fns[name](conn, pts_out)).max())
        for name in constraints
    }
    residual = max(per.values()) if per else 0.0
    return SynthesisResult(
        connection=conn,
        residual=float(residual),
        constraint_residuals=per,
        iterations=1,
        fit_points=n_fit,
        holdout_points=n_holdout,
        seed=seed,
    )
