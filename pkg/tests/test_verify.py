import pytest

from detstat.verify import SUITES, run_suite


@pytest.mark.parametrize("tag", sorted(SUITES))
def test_suite_passes(tag):
    checks = run_suite(tag)
    assert checks
    failed = [c for c in checks if not c.passed]
    assert not failed, failed
    assert all(c.suite == tag for c in checks)


def test_unknown_tag():
    with pytest.raises(KeyError):
        run_suite("X1.1")
