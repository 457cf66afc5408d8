"""Field engine: exact jets against finite differences, algebra laws."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qsg import sampling
from qsg.errors import DomainError, EvaluationError, ShapeError
from qsg.fields import (
    ChartDomain,
    PolyExpr,
    PolyTensorField,
    eval_jet,
    field_arith,
)
from qsg.generate import random_poly, random_poly_field


def test_constant_field_jet():
    f = PolyExpr.constant(2, 3.5)
    v, g = f.jet(np.array([[0.2, -0.1]]))
    assert v[0] == 3.5
    assert np.all(g[0] == 0.0)


def test_hand_differentiated_monomial():
    # f(x, y) = x^2 y at (1, 2): value 2, partials (4, 1)
    f = PolyExpr.from_terms(2, [([2, 1], 1.0)])
    v, g = f.jet(np.array([[1.0, 2.0]]))
    assert v[0] == pytest.approx(2.0)
    assert g[0] == pytest.approx([4.0, 1.0])


def test_partials_match_central_differences():
    rng = sampling.rng(3, 1)
    h = 1e-5
    for trial in range(10):
        d = 2 if trial % 2 == 0 else 4
        f = random_poly(rng, d, degree=3, bound=1.0)
        pts = sampling.sample_box([(-0.5, 0.5)] * d, 20, 3, 2, trial)
        _, grads = f.jet(pts)
        for k in range(d):
            shift = np.zeros(d)
            shift[k] = h
            fd = (f.eval(pts + shift) - f.eval(pts - shift)) / (2 * h)
            assert np.all(np.abs(fd - grads[:, k]) <= 1e-6 * (1.0 + np.abs(grads[:, k])))


def test_degree_four_fd_oracle():
    rng = sampling.rng(4, 1)
    f = random_poly(rng, 4, degree=4, bound=1.0)
    pts = sampling.sample_box([(-0.5, 0.5)] * 4, 25, 4, 2)
    _, grads = f.jet(pts)
    h = 1e-5
    for k in range(4):
        shift = np.zeros(4)
        shift[k] = h
        fd = (f.eval(pts + shift) - f.eval(pts - shift)) / (2 * h)
        assert np.all(np.abs(fd - grads[:, k]) <= 1e-6 * (1.0 + np.abs(grads[:, k])))


@given(st.floats(-2, 2), st.floats(-2, 2))
@settings(max_examples=50, deadline=None)
def test_eval_linearity(alpha, beta):
    rng = sampling.rng(5, 1)
    f = random_poly(rng, 2, 3, 1.0)
    g = random_poly(rng, 2, 3, 1.0)
    pts = sampling.sample_box([(-0.5, 0.5)] * 2, 10, 5, 2)
    lhs = (f * alpha + g * beta).eval(pts)
    rhs = alpha * f.eval(pts) + beta * g.eval(pts)
    assert np.allclose(lhs, rhs, rtol=0, atol=1e-12 * (1 + abs(alpha) + abs(beta)))


def test_product_rule():
    rng = sampling.rng(6, 1)
    f = random_poly(rng, 3, 2, 1.0)
    g = random_poly(rng, 3, 2, 1.0)
    # 3 is odd, widen to a valid chart dimension for the sampler only
    pts = sampling.rng(6, 2).uniform(-0.5, 0.5, size=(50, 3))
    fv, fg = f.jet(pts)
    gv, gg = g.jet(pts)
    pv, pg = (f * g).jet(pts)
    assert np.allclose(pv, fv * gv, atol=1e-12)
    assert np.allclose(pg, fv[:, None] * gg + gv[:, None] * fg, atol=1e-12)


@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3),
                          st.floats(-2, 2, allow_nan=False)), max_size=12))
@settings(max_examples=60, deadline=None)
def test_normalization_dedupes_exponents(terms):
    f = PolyExpr.from_terms(2, [([a, b], c) for a, b, c in terms])
    seen = set()
    for e, c in f.terms():
        key = tuple(e)
        assert key not in seen
        seen.add(key)
        assert c != 0.0


def test_field_arith_identities():
    rng = sampling.rng(7, 1)
    f = random_poly_field(rng, 2, (0, 2), 2, 1.0)
    g = random_poly_field(rng, 2, (0, 2), 2, 1.0)
    zero = PolyTensorField.zeros(2, (0, 2))
    pts = sampling.sample_box([(-0.5, 0.5)] * 2, 20, 7, 2)
    assert np.allclose(field_arith(f, zero, "add").values(pts), f.values(pts), atol=0)
    assert np.abs(field_arith(f, f, "sub").values(pts)).max() == 0.0
    assert np.allclose(
        field_arith(f, g, "add").values(pts), f.values(pts) + g.values(pts), atol=1e-14
    )
    assert np.allclose(field_arith(f, 2.5, "scale").values(pts), 2.5 * f.values(pts), atol=0)


def test_field_arith_shape_error():
    f = PolyTensorField.zeros(2, (0, 2))
    g = PolyTensorField.zeros(2, (1, 1))
    with pytest.raises(ShapeError):
        field_arith(f, g, "add")
    with pytest.raises(ShapeError):
        field_arith(f, PolyTensorField.zeros(4, (0, 2)), "sub")


def test_eval_jet_domain_error():
    dom = ChartDomain.cube(2)
    f = PolyTensorField.constant(2, (0, 2), np.eye(2))
    jets = eval_jet(f, [0.1, 0.2], dom)
    assert jets[0, 0].value == 1.0
    with pytest.raises(DomainError):
        eval_jet(f, [0.9, 0.0], dom)


def test_non_finite_coefficient_rejected():
    with pytest.raises(EvaluationError):
        PolyExpr.from_terms(2, [([1, 0], float("nan"))])


def test_chart_domain_invariants():
    with pytest.raises(ShapeError):
        ChartDomain(3, ((-1, 1),) * 3)  # odd dimension
    with pytest.raises(ShapeError):
        ChartDomain(2, ((-1, 1), (1, 1)))  # empty interval
