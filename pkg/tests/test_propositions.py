"""Suite plumbing: registry completeness, determinism, filtering, smoke."""

import pytest

from qsg.errors import QsgError
from qsg.propositions import (
    ALL_IDS,
    NEGATIVE_IDS,
    SECTION2_IDS,
    SECTION3_IDS,
    SECTION4_IDS,
    SectionContext,
    run_full_suite,
    verify_negative_controls,
    verify_section2,
    verify_section3,
    verify_section4,
)

SMOKE = dict(seed=0, trials=3, dims=(2,))


@pytest.fixture(scope="module")
def smoke_report():
    return run_full_suite(**SMOKE)


def test_registry_is_complete_and_static():
    # ids are pinned; every section list is disjoint and together they form
    # the full registry
    assert len(set(ALL_IDS)) == len(ALL_IDS)
    assert set(ALL_IDS) == set(SECTION2_IDS) | set(SECTION3_IDS) | set(SECTION4_IDS) | set(NEGATIVE_IDS)
    assert len(SECTION2_IDS) == 9
    assert len(SECTION3_IDS) == 28
    assert len(SECTION4_IDS) == 23
    assert len(NEGATIVE_IDS) == 4


def test_smoke_covers_every_registry_id(smoke_report):
    seen = {e.prop_id for e in smoke_report.entries}
    assert seen == set(ALL_IDS)
    # each id appears exactly once per dimension
    per_dim = [(e.prop_id, e.dim) for e in smoke_report.entries]
    assert len(per_dim) == len(set(per_dim)) == len(ALL_IDS)


def test_smoke_passes(smoke_report):
    bad = [e for e in smoke_report.entries if not e.passed]
    assert not bad, [(e.prop_id, e.status, e.max_residual) for e in bad]


def test_section_runners_report_every_id():
    ctx = SectionContext(seed=1, dim=2, trials=2)
    ids2 = {e.prop_id for e in verify_section2(ctx)}
    assert ids2 == set(SECTION2_IDS)
    ids3 = {e.prop_id for e in verify_section3(ctx)}
    assert ids3 == set(SECTION3_IDS)
    ids4 = {e.prop_id for e in verify_section4(ctx)}
    assert ids4 == set(SECTION4_IDS)
    idsn = {e.prop_id for e in verify_negative_controls(ctx)}
    assert idsn == set(NEGATIVE_IDS)


def test_determinism_identical_reports(smoke_report):
    again = run_full_suite(**SMOKE)
    assert again.to_dict() == smoke_report.to_dict()


def test_only_filter_prefix():
    rep = run_full_suite(seed=0, trials=2, dims=(2,), only=("GAD1",))
    ids = sorted({e.prop_id for e in rep.entries})
    assert ids == ["GAD1.i", "GAD1.ii", "GAD1.iii"]


def test_only_filter_exact():
    rep = run_full_suite(seed=0, trials=2, dims=(2,), only=("lem2", "teo5"))
    assert sorted({e.prop_id for e in rep.entries}) == ["lem2", "teo5"]


def test_only_filter_unknown_id():
    with pytest.raises(QsgError) as err:
        run_full_suite(seed=0, trials=2, dims=(2,), only=("nonsense",))
    assert "GAD1.i" in str(err.value)  # the message lists valid ids


def test_unsupported_dimension():
    with pytest.raises(QsgError):
        run_full_suite(seed=0, trials=2, dims=(3,))


def test_negative_control_not_applicable_in_two_dims(smoke_report):
    entry = next(e for e in smoke_report.entries if e.prop_id == "neg.pro2")
    assert entry.status == "not-applicable"
    assert entry.passed


def test_entries_sorted_in_report(smoke_report):
    d = smoke_report.to_dict()
    keys = [(e["id"], e["dim"]) for e in d["entries"]]
    assert keys == sorted(keys)
    assert d["pass"] is True
