import pytest
from pydantic import ValidationError

from src.core.fields import FieldSpec
from src.core.genmat import theorem1_set, theorem2_set
from src.core.poly import variables
from src.models.generator_set import GeneratorSet
from src.models.schemas import Report, ReportItem, ResourceLimits, VerificationTask

QQ = FieldSpec.rational()


@pytest.mark.parametrize('kwargs', [
    {"claim": "theorem1", "n": 3},
    {"claim": "theorem1", "n": 3, "e": 3},
    {"claim": "theorem1", "n": 3, "e": 2, "field": "fp:2"},
    {"claim": "theorem2", "n": 1},
    {"claim": "charp-explore", "n": 3, "field": "q"},
    {"claim": "vanishing", "n": 3, "e": 2, "partition": [2, 2]},
    {"claim": "lemma9", "n": 3},
    {"claim": "lemma6", "n": 0},
])
def test_invalid_tasks(kwargs):
    """Test that out-of-range tasks are rejected at construction."""
    with pytest.raises(ValidationError):
        VerificationTask(**kwargs)


def test_valid_task_defaults():
    task = VerificationTask(claim="theorem2", n=3, field="fp:2")
    assert task.seed == 42
    assert task.samples == 100
    assert task.limits == ResourceLimits()
    assert not task.witness


def test_resource_limits_bounds():
    with pytest.raises(ValidationError):
        ResourceLimits(max_degree=0)
    assert ResourceLimits(max_rows=10).max_rows == 10


def test_report_serialization():
    report = Report(task={"claim": "lemma6"}, status="verified", seed=1,
                    items=[ReportItem(ident="x", status="verified")])
    data = report.to_dict()
    assert data["schema"] == 1
    assert data["tool"] == "oil"
    assert "timing" not in data
    assert "schema_version" not in data
    assert data["items"][0]["ident"] == "x"
    timed = Report(task={}, status="verified", seed=1, timing={"total": 0.5}).to_dict()
    assert timed["timing"] == {"total": 0.5}


@pytest.mark.parametrize('status,code', [("verified", 0), ("refuted", 1), ("inconclusive", 2)])
def test_report_exit_code(status, code):
    assert Report(task={}, status=status, seed=0).exit_code == code


def test_generator_set_drops_zero():
    f = variables(QQ, 2)
    gs = GeneratorSet(label="t", n=2, field=QQ)
    gs.add("x", f[0][0], k=1)
    gs.add("zero", f[0][0] - f[0][0])
    assert len(gs) == 1
    assert gs.members[0].ident == "x(k=1)"
    assert gs.degrees() == {1: 1}


def test_generator_member_ident_sorts_keys():
    f = variables(QQ, 2)
    gs = GeneratorSet(label="t", n=2, field=QQ)
    gs.add("rel", f[0][1], r=1, a=[1], b=[2])
    assert gs.members[0].ident == "rel(a=[1],b=[2],r=1)"
    assert gs.to_records() == [{"family": "rel", "params": {"r": 1, "a": [1], "b": [2]},
                                "polynomial": "F[1,2]"}]


@pytest.mark.parametrize('text', ["Q", " q ", "FP:3"])
def test_field_is_normalized(text):
    """Test that the field selector is compared case-insensitively."""
    task = VerificationTask(claim="lemma6", n=3, field=text)
    assert task.field == text.strip().lower()


def test_uppercase_field_still_checked():
    assert VerificationTask(claim="theorem1", n=3, e=2, field="Q").field == "q"
    with pytest.raises(ValidationError):
        VerificationTask(claim="theorem1", n=3, e=2, field="FP:2")
    with pytest.raises(ValidationError):
        VerificationTask(claim="charp-explore", n=3, field="Q")


def test_generator_sets_share_invariants():
    first = theorem1_set(3, 2)
    second = theorem2_set(3)
    assert len(first) == 10
    assert len(second) == 12
    assert first.polynomials()[0] == second.polynomials()[0]


if __name__ == "__main__":
    pytest.main(["-v", __file__])
