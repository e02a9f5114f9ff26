from mfg_switch.equilibrium.reference_checks import verify_reference_instances


def test_reference_solutions_are_reproduced():
    report = verify_reference_instances(starts=3, trials=2_000)
    assert report.passed, [c.model_dump() for c in report.failures]
    assert not report.failures
    actual = " ".join(check.actual for check in report.checks)
    assert "6/11" in actual
    assert "13/18" in actual
