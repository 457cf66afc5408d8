"""Command-line surface: exit codes, schema diagnostics, round trips,
deterministic reports."""

import json

import numpy as np
import pytest

from qsg.calculus import PolyConnection
from qsg.cli import main
from qsg.model import ChartModel, flat_hermitian_model, flat_norden_model
from qsg.model_io import canonical_doc, load_model, model_hash, parse_model, write_model
from qsg.errors import ModelFileError


@pytest.fixture()
def flat_model_path(tmp_path):
    path = tmp_path / "flat2.json"
    write_model(canonical_doc(flat_hermitian_model(2)), path)
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_flat_kahler_passes(capsys, flat_model_path):
    code, out, _ = run_cli(capsys, "check", flat_model_path, "--predicates", "kahler")
    assert code == 0
    doc = json.loads(out)
    assert doc["exit_status"] == 0
    assert doc["checks"][0]["max_residual"] == 0.0
    assert doc["model_hash"].startswith("sha256:")


def test_check_violated_quasi_statistical(capsys, tmp_path):
    model = flat_hermitian_model(2)
    gam = np.zeros((2, 2, 2))
    gam[1, 0, 1] = 1.0
    model.conn = PolyConnection.constant(gam)
    path = tmp_path / "broken.json"
    write_model(canonical_doc(model), path)
    code, out, _ = run_cli(capsys, "check", str(path), "--predicates", "quasi_statistical")
    assert code == 1
    doc = json.loads(out)
    assert doc["checks"][0]["max_residual"] == pytest.approx(1.0)


def test_check_malformed_exponent_exits_2(capsys, tmp_path, flat_model_path):
    doc = json.load(open(flat_model_path))
    doc["fields"]["J"]["components"][0][1] = [{"exp": [1], "coef": 1.0}]
    bad = tmp_path / "bad.json"
    json.dump(doc, open(bad, "w"))
    code, _, err = run_cli(capsys, "check", str(bad), "--predicates", "kahler")
    assert code == 2
    assert "fields.J.components[0][1]" in err


def test_check_degenerate_metric_exits_3(capsys, tmp_path):
    doc = canonical_doc(flat_norden_model(2))
    doc["fields"]["h"]["components"][0][0] = []  # kills one diagonal entry
    path = tmp_path / "degenerate.json"
    json.dump(doc, open(path, "w"))
    # the predicate builds the metric connection, which inverts the metric
    code, _, err = run_cli(capsys, "check", str(path), "--predicates", "quasi_kahler_norden")
    assert code == 3
    assert "point" in err


def test_check_unknown_predicate_exits_2(capsys, flat_model_path):
    code, _, err = run_cli(capsys, "check", flat_model_path, "--predicates", "bogus")
    assert code == 2
    assert "bogus" in err


def test_model_round_trip_hash(tmp_path, flat_model_path):
    model, doc = load_model(flat_model_path)
    out = tmp_path / "again.json"
    write_model(doc, out)
    model2, doc2 = load_model(str(out))
    assert model_hash(doc) == model_hash(doc2)


def test_model_requires_exactly_one_metric():
    doc = canonical_doc(flat_hermitian_model(2))
    doc["fields"]["h"] = doc["fields"]["g"]
    with pytest.raises(ModelFileError) as err:
        parse_model(doc)
    assert "metric" in str(err.value)


def test_verify_smoke_and_filter(capsys):
    code, out, _ = run_cli(capsys, "verify", "--dims", "2", "--trials", "2",
                           "--seed", "0", "--only", "GAD1")
    assert code == 0
    doc = json.loads(out)
    ids = sorted({e["id"] for e in doc["suite"]["entries"]})
    assert ids == ["GAD1.i", "GAD1.ii", "GAD1.iii"]


def test_verify_unknown_id_exits_2(capsys):
    code, _, err = run_cli(capsys, "verify", "--dims", "2", "--trials", "2",
                           "--only", "wrong")
    assert code == 2
    assert "GAD1.i" in err


def test_verify_deterministic_output(capsys, monkeypatch):
    monkeypatch.setenv("QSG_THREADS", "1")
    code1, out1, _ = run_cli(capsys, "verify", "--dims", "2", "--trials", "2",
                             "--only", "lem2,cor4")
    monkeypatch.setenv("QSG_THREADS", "8")
    code2, out2, _ = run_cli(capsys, "verify", "--dims", "2", "--trials", "2",
                             "--only", "lem2,cor4")
    assert code1 == code2 == 0
    assert out1 == out2


def test_synthesize_flat_writes_zero_witness(capsys, tmp_path, flat_model_path):
    out_path = tmp_path / "witness.json"
    code, out, _ = run_cli(capsys, "synthesize", flat_model_path,
                           "--constraints", "torsion_free,complex_connection",
                           "--degree", "1", "--out", str(out_path))
    assert code == 0
    doc = json.loads(out)
    assert doc["synthesis"]["residual"] <= 1e-12
    witness, _ = load_model(str(out_path))
    pts = np.zeros((1, 2))
    assert np.abs(witness.conn.gammas(pts)).max() <= 1e-9


def test_synthesize_infeasible_exits_5(capsys, tmp_path):
    # operator-vanishing symbols with a genuinely nonconstant structure
    from qsg.generate import GenSpec, gen_almost_complex, gen_hermitian_metric

    spec = GenSpec(seed=7, dimension=2, degree=2)
    J = gen_almost_complex(spec)
    g = gen_hermitian_metric(spec, J)
    model = ChartModel(domain=flat_hermitian_model(2).domain, metric=g, J=J)
    path = tmp_path / "hard.json"
    write_model(canonical_doc(model), path)
    code, out, _ = run_cli(capsys, "synthesize", str(path),
                           "--constraints", "vishnevskii_zero", "--degree", "2")
    assert code == 5
    assert json.loads(out)["synthesis"]["outcome"] == "no witness"


def test_synthesize_low_quality_witness_exits_4(capsys, tmp_path):
    # nearly-constant metric: a constant-symbol ansatz gets within the
    # low-quality band but not to witness quality
    from qsg import sampling
    from qsg.generate import GenSpec, gen_constant_structure_model, random_poly_field
    from qsg.structures import MetricField

    cm = gen_constant_structure_model(GenSpec(seed=6, dimension=2, degree=2), "hermitian")
    pert = random_poly_field(sampling.rng(6, 77), 2, (0, 2), 2, 1e-5)
    pert = (pert + pert.transpose_02()).scale(0.5)
    model = ChartModel(domain=cm.domain,
                       metric=MetricField(cm.metric.field + pert, flavor="plain"))
    path = tmp_path / "nearflat.json"
    write_model(canonical_doc(model), path)
    code, out, _ = run_cli(capsys, "synthesize", str(path),
                           "--constraints", "quasi_statistical_g", "--degree", "0")
    assert code == 4
    assert json.loads(out)["synthesis"]["outcome"] == "low-quality witness"


def test_synthesize_unknown_constraint_exits_2(capsys, flat_model_path):
    code, _, err = run_cli(capsys, "synthesize", flat_model_path,
                           "--constraints", "not_a_constraint")
    assert code == 2
    assert "not_a_constraint" in err


def test_markdown_format(capsys, flat_model_path):
    code, out, _ = run_cli(capsys, "check", flat_model_path,
                           "--predicates", "kahler", "--format", "md")
    assert code == 0
    assert "| name | max residual |" in out


def test_norden_model_round_trip():
    doc = canonical_doc(flat_norden_model(2))
    model = parse_model(doc)
    assert model.metric.flavor == "norden"
    assert model_hash(doc) == model_hash(canonical_doc(model, doc))


def test_invalid_threads_env(capsys, monkeypatch, flat_model_path):
    monkeypatch.setenv("QSG_THREADS", "zero")
    code, _, err = run_cli(capsys, "check", flat_model_path, "--predicates", "kahler")
    assert code == 2
    assert "QSG_THREADS" in err
