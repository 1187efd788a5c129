import pytest
from discrim import verify_inequality
from discrim.casework import L34_FAILURES, inequality_conforms, summarize_inequality
from discrim._checks import UnknownSuiteError


def run(suite, limit, **kwargs):
    records = list(verify_inequality(suite, limit, **kwargs))

    return records[:-1], records[-1]


def failing(records, name):
    return sorted(r.params[name] for r in records if not r.passed)


def test_l34_fails_at_seven_and_nineteen():
    records, summary = run("L34", 5000)

    assert failing(records, "p") == list(L34_FAILURES) == [7, 19]
    assert all(inequality_conforms(r) for r in records)
    assert summary.suite == "L34:summary"
    assert summary.computed == "19"
    assert summary.passed


def test_l34_equality_at_thirteen():
    records, _ = run("L34", 13)
    thirteen = next(r for r in records if r.params["p"] == 13)

    assert thirteen.passed
    assert thirteen.computed == thirteen.expected == "13/3"


def test_l35_threshold():
    records, summary = run("L35", 20000)

    assert max(failing(records, "p")) < 165
    assert summary.passed


def test_c1_threshold():
    records, summary = run("C1", 10000)

    assert max(failing(records, "p")) < 4000
    assert summary.passed


def test_l41_leftover_is_settled_directly():
    records, summary = run("L41", 1000)
    direct = [r for r in records if r.suite == "L41:direct"]

    assert [r.params for r in direct] == [{"p": 5, "r": 2, "delta": 4}]
    assert max(r.params["r"] for r in records) == 5
    assert max(r.params["delta"] for r in records) == 20
    assert all(r.passed for r in records)
    assert summary.passed


def test_l43_boundary():
    records, summary = run("L43", 4096)
    fails = [(r.params["r"], r.params["t"]) for r in records if not r.passed]

    assert fails == [(2, 5), (2, 7), (2, 9), (2, 11)]
    assert summary.passed


def test_l48_threshold():
    records, summary = run("L48", 30000, block_size=8192)
    crossing = max(r.params["q"] for r in records if r.suite == "L48" and not r.passed)

    assert crossing < 20000
    assert next(r for r in records if r.suite == "L48:g").passed
    assert summary.passed


def test_c45_boundary():
    records, summary = run("C45", 50)

    assert failing(records, "r") == [0]
    assert summary.computed == "0"
    assert summary.passed


def test_summary_detects_nonconformance():
    records, _ = run("C45", 5)
    tampered = [records[0].__class__.compare("C45", {"r": 3}, 0, 0, False)] + records[1:]

    assert not summarize_inequality("C45", tampered, 5).passed


def test_resume_keeps_summary_complete():
    first = list(verify_inequality("L34", 100))[:10]
    completed = {r.key for r in first}
    rest = list(verify_inequality("L34", 100, completed=completed, previous=first))

    assert len(first) + len(rest) == len(list(verify_inequality("L34", 100)))
    assert rest[-1].computed == "19"


def test_unknown_inequality():
    with pytest.raises(UnknownSuiteError):
        list(verify_inequality("L99", 10))
