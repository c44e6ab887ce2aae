import pytest

from ucrystal.selftest import SUITES, SuiteResult, suite_layering, suite_witt_ghost

QUICK = {"witt_ghost": {"cases": 100}}


@pytest.mark.parametrize("suite", SUITES, ids=lambda s: s.suite_name)
def test_suite_passes(suite):
    res = suite(seed=1, **QUICK.get(suite.suite_name, {}))
    assert res.ok, res.failures
    assert res.cases > 0


def test_suites_are_seeded():
    a = suite_layering(seed=9, cases=10)
    b = suite_layering(seed=9, cases=10)
    assert (a.cases, a.failures) == (b.cases, b.failures)


def test_injected_fault(monkeypatch):
    monkeypatch.setenv("UCRYSTAL_INJECT_FAULT", "witt_ghost")
    res = suite_witt_ghost(seed=0, cases=5)
    assert not res.ok and res.failures == ["injected fault"]
    assert res.to_doc()["status"] == "FAIL"


def test_empty_suite_does_not_pass():
    assert not SuiteResult("nothing").ok
    r = SuiteResult("many", cases=1)
    for k in range(30):
        r.fail(str(k))
    assert len(r.failures) == 20 and r.failures[-1].startswith("... and more")
