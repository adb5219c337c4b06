"""The thirteen release-gate checks, one test each, with stated tolerances
and a printed pass/fail line per criterion."""

import pytest

from hwalk import accept

TIME_LIMITS = {
    1: 1.0,
    2: 60.0,
    3: 30.0,
    4: 60.0,
    5: 120.0,
    6: 60.0,
    7: 600.0,
    8: 60.0,
    9: 300.0,
    10: 60.0,
    11: 5.0,
    12: 900.0,
    13: 600.0,
}

DESCRIPTIONS = {
    1: "exponent table, exact rationals",
    2: "root subset inequality, all types to rank 8",
    3: "diameter/gap sandwich, tol 1e-9",
    4: "dim(pi) lambda^2 <= regular trace, tol 1e-8",
    5: "min irrep dimension (p-1)/2 for p in {5,7,11,13}",
    6: "regular trace equals eigenvalue sum, tol 1e-8",
    7: "trace decay on the 2-power chain, ratio <= 10",
    8: "refined trace bound, tol 1e-6",
    9: "prime-splitting diameters, 6x envelope",
    10: "SU(2) representation suite, tol 1e-9",
    11: "SU(2) gap closed form, tol 1e-12",
    12: "SU(2) growth fit, exponent <= 3.5",
    13: "approximate identity, slopes -0.5 +/- 0.15 and <= 0.85",
}


@pytest.mark.parametrize("n", sorted(accept.CRITERIA))
def test_criterion(n, capsys):
    passed, detail, elapsed = accept.run_criterion(n)
    with capsys.disabled():
        status = "PASS" if passed else "FAIL"
        print(f"criterion {n:2d} [{status}] {elapsed:8.2f}s  {DESCRIPTIONS[n]}")
    assert elapsed <= TIME_LIMITS[n], f"criterion {n} took {elapsed:.1f}s"
    assert passed, f"criterion {n} failed: {detail}"
