import pytest

from app import acceptance
from app.acceptance import (
    CRITERIA,
    ORDER_SAMPLE_MAX,
    check_g_orbits,
    check_g_table,
    check_oracle,
    check_order_laws,
    run_acceptance,
)
from app.errors import PieceCapExceeded
from app.solve import SolveStrategy


def test_criteria_are_numbered():
    assert [number for number, _, _ in CRITERIA] == list(range(1, 13))


def test_g_table():
    passed, detail = check_g_table(quick=True)
    assert passed, detail


def test_g_orbits():
    passed, detail = check_g_orbits(quick=True)
    assert passed, detail


def test_order_laws():
    passed, detail = check_order_laws(quick=True)
    assert passed, detail
    assert ORDER_SAMPLE_MAX == 10 ** 6


def test_oracle_redraws_triples_over_the_cap(monkeypatch):
    real_solve = acceptance.solve_iter_eq_const
    explicit_calls = []

    def flaky(f, k, c, strategy=SolveStrategy.AUTO, cap=None):
        if strategy is SolveStrategy.EXPLICIT:
            explicit_calls.append(k)
            if len(explicit_calls) % 2:
                raise PieceCapExceeded(cap + 1, cap, k)
        return real_solve(f, k, c, strategy=strategy, cap=cap)

    monkeypatch.setattr(acceptance, "solve_iter_eq_const", flaky)
    passed, detail = check_oracle(quick=True)
    assert passed, detail
    assert detail.startswith("20 triples agree (")
    assert len(explicit_calls) >= 40


def test_oracle_fails_when_too_few_triples_fit(monkeypatch):
    def always_over(f, k, c, strategy=SolveStrategy.AUTO, cap=None):
        raise PieceCapExceeded(cap + 1, cap, k)

    monkeypatch.setattr(acceptance, "solve_iter_eq_const", always_over)
    passed, detail = check_oracle(quick=True)
    assert not passed
    assert detail == "only 0 of 20 triples fit the sweep cap after 100 draws"


def test_failure_inside_criterion_is_reported(monkeypatch):
    def broken(quick):
        raise RuntimeError("boom")

    monkeypatch.setattr(acceptance, "CRITERIA", [(1, "broken", broken)])
    report = run_acceptance(quick=True)
    assert not report.passed
    assert report.results[0].detail == "RuntimeError: boom"


@pytest.mark.slow
def test_quick_suite():
    report = run_acceptance(quick=True)
    failed = [(r.number, r.detail) for r in report.results if not r.passed]
    assert failed == []


@pytest.mark.slow
def test_full_suite():
    report = run_acceptance(quick=False)
    failed = [(r.number, r.detail) for r in report.results if not r.passed]
    assert failed == []
