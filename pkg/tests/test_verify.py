import pytest

from starq.geometry import conformal
from starq.verify import SUITES, Config, run_suite


@pytest.mark.parametrize("suite", SUITES)
@pytest.mark.parametrize("n", [1, 2])
def test_suites_pass(suite, n):
    report = run_suite(suite, Config(n=n, seed=3, cases=15, max_deg=2))
    assert report.passed, [c.as_dict() for c in report.checks if c.status != "pass"]


@pytest.mark.parametrize("sig", [(2, 0), (1, 1)])
def test_conformal_suites(sig):
    cfg = Config(n=2, geometry=conformal(*sig), seed=1, cases=10, max_deg=2)
    for suite in ("operators", "bivectors"):
        report = run_suite(suite, cfg)
        assert report.passed, report.text()
    names = {c.name for c in run_suite("bivectors", cfg).checks}
    assert {"lambda-invariant", "schouten-nonzero", "pi-invariant"} <= names


def test_report_shape():
    r = run_suite("algebra", Config(n=1, seed=9, cases=5))
    d = r.as_dict()
    assert list(d) == ["schema", "suite", "checks", "seed"]
    assert d["schema"] == 1 and d["seed"] == 9
    assert [c["name"] for c in d["checks"]] == sorted(c["name"] for c in d["checks"])
    assert all({"name", "paper_anchor", "status"} <= set(c) for c in d["checks"])


def test_same_seed_same_report():
    a = run_suite("hochschild", Config(n=2, seed=5, cases=10)).as_dict()
    b = run_suite("hochschild", Config(n=2, seed=5, cases=10)).as_dict()
    assert a == b


def test_config_validation():
    with pytest.raises(ValueError):
        Config(n=0)
    with pytest.raises(ValueError):
        Config(n=3, geometry=conformal(2, 0))
    with pytest.raises(ValueError):
        run_suite("bogus", Config())
