from dualpolar.inequalities import SuiteGrid, run_suite


def test_suite_has_no_violations():
    rep = run_suite()
    assert rep.ok, rep.violations[:5]
    assert rep.total > 10_000
    assert len(rep.checks_by_name) >= 10


def test_suite_on_small_grid_is_quick_and_clean():
    rep = run_suite(SuiteGrid(qs_small=(3,), qs_large=(3, 4), d_max=8, n_max=8, z_max=6))
    assert rep.ok
