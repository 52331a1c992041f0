import time
from unittest.mock import MagicMock

import pytest

from src.models.schemas import MembershipResult, ReportItem, ResourceLimits, VerificationTask
from src.services.verification_service import (
    VerificationService, aggregate_status, combine_statuses, membership_item,
)


@pytest.fixture
def settings():
    """Settings simulados: un solo proceso y sin tiempos."""
    mock = MagicMock()
    mock.THREADS = 1
    mock.REPORT_TIMING = False
    return mock


@pytest.fixture
def service(settings):
    return VerificationService(settings)


def run(service, **kwargs):
    return service.run_task(VerificationTask(**kwargs))


@pytest.mark.parametrize('kwargs', [
    {"claim": "theorem1", "n": 3, "e": 2},
    {"claim": "theorem2", "n": 2},
    {"claim": "theorem2", "n": 2, "field": "fp:2"},
    {"claim": "theorem2", "n": 3},
    {"claim": "lemma1", "n": 3},
    {"claim": "lemma2", "n": 3},
    {"claim": "lemma3", "n": 3},
    {"claim": "lemma4", "n": 3},
    {"claim": "lemma5", "n": 4},
    {"claim": "lemma6", "n": 20},
    {"claim": "minimality", "n": 3, "e": 2},
    {"claim": "vanishing", "n": 3, "e": 2, "partition": [2, 1]},
    {"claim": "vanishing", "n": 3, "e": 2, "samples": 3},
    {"claim": "charpoly", "n": 3},
    {"claim": "charpoly", "n": 3, "field": "fp:2"},
    {"claim": "charp-explore", "n": 3, "field": "fp:2"},
    {"claim": "crosscheck", "n": 2},
    {"claim": "remark-a", "n": 2},
    {"claim": "remark-b", "n": 3},
])
def test_claims_verify(service, kwargs):
    """Test that every claim verifies on small instances."""
    report = run(service, **kwargs)
    assert report.status == "verified", report.witness
    assert report.exit_code == 0
    assert report.witness is None


def test_vanishing_refuted_outside_closure(service):
    report = run(service, claim="vanishing", n=3, e=2, partition=[3], samples=3)
    assert report.status == "refuted"
    assert report.exit_code == 1
    assert report.witness["item"] == "theorem1 on O(3)"
    assert report.witness["data"]["generator"] == "power_entry(a=1,b=3,e=2)"
    assert report.summary == {"mu": [2, 1], "dominated": False}


def test_resource_limit_gives_inconclusive(service):
    report = run(service, claim="theorem1", n=3, e=2, limits=ResourceLimits(max_degree=2))
    assert report.status == "inconclusive"
    assert report.exit_code == 2
    assert any("max_degree" in item.details.get("reason", "") for item in report.items)


def test_theorem1_items_cover_both_inclusions(service):
    report = run(service, claim="theorem1", n=3, e=2)
    assert report.summary == {"theorem1_size": 10, "nonminimal_size": 12}
    prefixes = {item.ident.split(":")[0] for item in report.items}
    assert prefixes == {"nonminimal⊆theorem1", "theorem1⊆nonminimal"}
    assert all(item.member for item in report.items)


def test_witness_requested(service):
    report = run(service, claim="lemma3", n=2, witness=True)
    assert report.status == "verified"
    assert all(isinstance(item.witness, list) for item in report.items)


def test_charp_explore_records_table(service):
    report = run(service, claim="charp-explore", n=3, field="fp:2")
    assert set(report.summary["membership"]) == {"T_2", "T_3"}


def test_report_is_deterministic(service):
    """Test that two runs with the same task give identical reports."""
    first = run(service, claim="crosscheck", n=2, seed=7).to_dict()
    second = run(service, claim="crosscheck", n=2, seed=7).to_dict()
    assert first == second


def test_timing_is_opt_in(service):
    task = VerificationTask(claim="lemma6", n=5)
    assert "timing" not in service.run_task(task).to_dict()
    assert "total" in service.run_task(task, timing=True).to_dict()["timing"]


def test_status_combination():
    assert combine_statuses([]) == "verified"
    assert combine_statuses(["verified", "inconclusive"]) == "inconclusive"
    assert combine_statuses(["inconclusive", "refuted"]) == "refuted"
    items = [ReportItem(ident="a", status="verified"), ReportItem(ident="b", status="refuted")]
    assert aggregate_status(items) == "refuted"


def test_membership_item_for_non_member():
    result = MembershipResult(status="non-member", degree=2, rank=3, rank_with_target=4)
    item = membership_item("x", result)
    assert item.status == "refuted"
    assert item.member is False
    inconclusive = membership_item("y", MembershipResult(status="inconclusive", degree=5, reason="limit"))
    assert inconclusive.member is None
    assert inconclusive.details["reason"] == "limit"


def test_grid_tasks(service):
    limits = ResourceLimits()
    theorem1 = service.grid_tasks("theorem1", 42, 10, limits)
    assert [(t.n, t.e, t.field) for t in theorem1] == [(3, 2, "q"), (4, 2, "q"), (4, 3, "q")]
    assert len(service.grid_tasks("lemma5", 42, 10, limits)) == 9
    assert all(t.field != "q" for t in service.grid_tasks("charp-explore", 42, 10, limits))


def test_run_grid_in_process(service):
    tasks = [VerificationTask(claim="lemma6", n=n) for n in (3, 4)]
    reports = service.run_grid(tasks)
    assert [r["task"]["n"] for r in reports] == [3, 4]
    assert all(r["status"] == "verified" for r in reports)

def test_lemma6_up_to_ten_thousand(service):
    start = time.perf_counter()
    report = run(service, claim="lemma6", n=10000)
    assert report.status == "verified"
    assert report.summary == {"checked": 10000, "failures": []}
    assert time.perf_counter() - start < 5.0


def test_lemma5_items_record_psi_checks(service):
    report = run(service, claim="lemma5", n=5, field="fp:3")
    assert report.status == "verified"
    assert [item.ident for item in report.items] == [f"n={k}" for k in range(1, 6)]
    for item in report.items:
        assert item.rank == item.details["target"]
        assert item.details["relations"] and item.details["equivariant"] and item.details["multiplication"]


def test_field_text_is_case_insensitive(service):
    report = run(service, claim="theorem1", n=3, e=2, field="Q")
    assert report.status == "verified"
    assert report.task["field"] == "q"


if __name__ == "__main__":
    pytest.main(["-v", __file__])
