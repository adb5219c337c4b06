"""The thirteen release-gate checks, shared by the test suite and the CLI.

Each ``criterion_N`` returns (passed, detail); ``run_criterion`` dispatches by
number.  The checks are self-contained: they build their own groups, seeds,
and measures, and assert nothing — callers decide how to report.
"""

from __future__ import annotations

import math
import time
from fractions import Fraction

import numpy as np

from . import characters, measures, rootsys, spectra, su2
from .diameter import diameter as cayley_diameter
from .diameter import prime_splitting_check
from .groups import GenSet, build_slq, cyclic, symmetric_group, transvection_generators
from .measures import QuotientChain, random_measure, uniform_on
from .su2 import CompactMeasure, SU2Element


def _su2_gate_set():
    s = 1.0 / math.sqrt(5.0)
    gates = [SU2Element.identity()]
    for axis in (1, 2, 3):
        for sign in (1.0, -1.0):
            q = [s, 0.0, 0.0, 0.0]
            q[axis] = sign * 2.0 * s
            gates.append(SU2Element(*q))
    return gates


def _center(table):
    return [
        i
        for i in range(table.order)
        if all(table.multiply(i, j) == table.multiply(j, i) for j in range(table.order))
    ]


def criterion_1():
    """Exponent table: every A(G) entry as an exact rational, zero tolerance."""
    expected = {}
    for n in range(1, 13):
        expected[("A", n)] = 1 + Fraction(2, n + 1)
    for n in range(2, 13):
        expected[("B", n)] = 1 + Fraction(1, n)
        expected[("C", n)] = 1 + Fraction(1, n)
    for n in range(3, 13):
        expected[("D", n)] = 1 + Fraction(1, n - 1)
    expected[("E6", 6)] = Fraction(7, 6)
    expected[("E7", 7)] = Fraction(10, 9)
    expected[("E8", 8)] = Fraction(16, 15)
    expected[("F4", 4)] = Fraction(7, 6)
    expected[("G2", 2)] = Fraction(4, 3)

    mismatches = []
    for (fam, rank), want in expected.items():
        got = rootsys.exponent_A(rootsys.build_rootsystem(fam, rank))
        if got != want:
            mismatches.append((fam, rank, str(got), str(want)))
    return not mismatches, {"entries": len(expected), "mismatches": mismatches}


def criterion_2():
    """Root subset inequality, exhaustive over proper subsets, all types to rank 8."""
    failures = []
    checked = 0
    for fam, rank in rootsys.all_types(8):
        rep = rootsys.verify_roots_lemma(rootsys.build_rootsystem(fam, rank))
        checked += rep.subsets_checked
        if not rep.passed:
            failures.append((fam, rank))
    return not failures, {"types": len(rootsys.all_types(8)), "subsets": checked,
                          "failures": failures}


def criterion_3():
    """Diameter/gap sandwich for SL_2(Z/p) and Z/n, two generating sets each."""
    rows = []
    for p in (3, 5, 7):
        t = build_slq(2, p)
        minus_i = t.index[((p - 1), 0, 0, (p - 1))]
        gensets = [
            GenSet.from_indices(t, t.generator_indices()),
            GenSet.from_indices(t, t.generator_indices() + [minus_i]),
        ]
        for gs in gensets:
            rep = spectra.folklore_sandwich(t, gs, tol=1e-9)
            rows.append({"group": t.label, "set_size": len(gs.members),
                         "diam": rep.diameter, "gap": rep.gap, "passed": rep.passed})
    for n in (5, 17, 101):
        t = cyclic(n)
        for seed in ([1], [1, 2]):
            gs = GenSet.from_indices(t, seed)
            rep = spectra.folklore_sandwich(t, gs, tol=1e-9)
            rows.append({"group": t.label, "set_size": len(gs.members),
                         "diam": rep.diameter, "gap": rep.gap, "passed": rep.passed})
    return all(r["passed"] for r in rows), {"rows": rows}


def criterion_4():
    """dim(pi) lambda^2 <= chi_G(mu*mu) + 1e-8, five seeded measures per group."""
    rows = []
    for q in (3, 5):
        t = build_slq(2, q)
        ct = characters.character_table(t)
        rng = np.random.default_rng(q)
        for k in range(5):
            mu = random_measure(t, rng, symmetric=True)
            rep = spectra.verify_sarnak_xue(t, mu, ct, tol=1e-8)
            rows.append({"group": t.label, "measure": k, "passed": rep.passed,
                         "worst_margin": rep.worst_margin})
    return all(r["passed"] for r in rows), {"rows": rows}


def criterion_5():
    """Minimal nontrivial irrep dimension (p-1)/2 from exact character tables."""
    rows = []
    for p in (5, 7, 11, 13):
        t = build_slq(2, p)
        cert = characters.quasirandom_cert(t, alpha=1.0 / 3.0)
        rows.append({"p": p, "min_dim": cert.min_nontrivial_dim,
                     "want": (p - 1) // 2})
    return all(r["min_dim"] == r["want"] for r in rows), {"rows": rows}


def criterion_6():
    """|G| nu(1) equals the eigenvalue sum of Reg(nu) within 1e-8."""
    rows = []
    rng = np.random.default_rng(6)
    for t in (build_slq(2, 3), build_slq(2, 5), build_slq(2, 7),
              cyclic(101), symmetric_group(4)):
        worst = 0.0
        for _ in range(10):
            nu = random_measure(t, rng, symmetric=True)
            eig_sum = float(np.sum(np.linalg.eigvalsh(spectra.regular_operator(t, nu))))
            worst = max(worst, abs(spectra.regular_trace(t, nu) - eig_sum))
        rows.append({"group": t.label, "worst_gap": worst, "passed": worst <= 1e-8})
    return all(r["passed"] for r in rows), {"rows": rows}


def criterion_7():
    """Trace decay along SL_2(Z/2^k), k = 1..5: single-constant boundedness."""
    chain = QuotientChain.from_moduli(2, [2, 4, 8, 16, 32])
    gs = GenSet.from_indices(chain.finest, chain.finest.generator_indices())
    mu = uniform_on(chain.finest, gs)
    rep = spectra.trace_decay_experiment(chain, mu, A=2.0)  # C0 calibrated at k=1
    ratio = rep.ratio
    rows = [{"index": r.index, "walk_length": r.walk_length, "trace": r.trace}
            for r in rep.rows]
    return ratio <= 10.0, {"rows": rows, "C0": rep.C0, "ratio": ratio}


def criterion_8():
    """Refined trace bound through A_3 < S_3 and the center of SL_2(Z/3)."""
    rows = []
    s3 = symmetric_group(3)
    a3 = [i for i in range(s3.order) if s3.element_order(i) in (1, 3)]
    sl23 = build_slq(2, 3)
    for t, nidx in ((s3, a3), (sl23, _center(sl23))):
        rng = np.random.default_rng(8)
        mu = random_measure(t, rng, symmetric=True)
        rep = characters.clifford_bound_check(t, nidx, mu, l=2, lp=4, M=4.0, tol=1e-6)
        rows.append({"group": t.label, "normal_size": len(nidx),
                     "applicable": rep.applicable, "lhs": rep.lhs, "rhs": rep.rhs,
                     "passed": rep.applicable and rep.passed})
    return all(r["passed"] for r in rows), {"rows": rows}


def criterion_9():
    """Diameter recursion across prime factors with a 6x envelope."""
    rows = []
    for moduli in ([1, 2, 4], [1, 3, 15]):
        gens = transvection_generators(2, max(moduli))
        rep = prime_splitting_check(2, moduli, gens, envelope=6.0)
        for s in rep.steps:
            rows.append({"modulus": s.modulus, "prime": s.prime,
                         "diam": s.diam_level, "C": s.empirical_C,
                         "passed": math.isfinite(s.empirical_C)
                         and s.diam_level <= 6.0 * (s.diam_previous + s.diam_prime)})
    return all(r["passed"] for r in rows), {"rows": rows}


def criterion_10():
    """SU(2) representation suite: unitarity, homomorphism, characters,
    tensor bookkeeping, and positivity."""
    rng = np.random.default_rng(10)
    worst_unit = worst_hom = worst_char = 0.0
    for m in (0, 1, 2, 3, 5, 10, 20, 50, 100, 200):
        g = SU2Element(su2.qnormalize(rng.standard_normal(4)))
        h = SU2Element(su2.qnormalize(rng.standard_normal(4)))
        U, V = su2.rep_matrix(m, g), su2.rep_matrix(m, h)
        worst_unit = max(worst_unit, float(np.abs(U @ U.conj().T - np.eye(m + 1)).max()))
        worst_hom = max(worst_hom, float(np.abs(su2.rep_matrix(m, g * h) - U @ V).max()))
        worst_char = max(worst_char, abs(float(np.trace(U).real) - su2.character(m, g)))
    tensor_ok = all(
        su2.tensor_support_check(a, b)["passed"]
        for a in range(41)
        for b in range(41)
    )
    mu = CompactMeasure.uniform(_su2_gate_set())
    pos = su2.positivity_check(mu, [1, 2, 3, 5, 10, 20])
    pos_ok = pos["passed"] and all(r["trace"] >= -1e-10 for r in pos["rows"])
    passed = (worst_unit <= 1e-9 and worst_hom <= 1e-9 and worst_char <= 1e-9
              and tensor_ok and pos_ok)
    return passed, {"worst_unitarity": worst_unit, "worst_homomorphism": worst_hom,
                    "worst_character": worst_char, "tensor_ok": tensor_ok,
                    "positivity_ok": pos_ok}


def criterion_11():
    """Closed-form gap for the single-axis (1+2i)/sqrt5 gate measure."""
    s = 1.0 / math.sqrt(5.0)
    q = SU2Element(s, 2 * s, 0.0, 0.0)
    mu = CompactMeasure.uniform([SU2Element.identity(), q, q.inv()])
    got = su2.gap_r(mu, 0.75)  # admits exactly m = 1
    want = 1.0 - (1.0 + 2.0 / math.sqrt(5.0)) / 3.0
    return abs(got - want) <= 1e-12, {"got": got, "want": want, "gap_err": abs(got - want)}


def criterion_12():
    """Word-length growth of the sqrt5 gate set against log^3(1/eps)."""
    fit = su2.solovay_kitaev_fit(_su2_gate_set(), [0.8, 0.4, 0.2, 0.1])
    passed = (fit.monotone and fit.lower_bounds_ok
              and not fit.degenerate and fit.exponent <= 3.5)
    return passed, {"diameters": fit.diameters, "exponent": fit.exponent,
                    "monotone": fit.monotone, "lower_bounds_ok": fit.lower_bounds_ok}


def criterion_13():
    """Approximate identity: normalization, distance-integral slope,
    L2-norm slope, with 1e6 Haar samples per radius."""
    radii = [16.0, 32.0, 64.0, 128.0]
    results = [su2.approx_identity_check(r, samples=1_000_000, seed=13) for r in radii]
    norm_ok = all(abs(x.integral - 1.0) <= 3.0 * x.integral_se for x in results)
    dist_slope = su2.loglog_slope(radii, [x.dist_integral for x in results])
    l2_slope = su2.loglog_slope(radii, [x.l2_norm for x in results])
    passed = norm_ok and abs(dist_slope + 0.5) <= 0.15 and l2_slope <= 0.85
    return passed, {
        "integrals": [x.integral for x in results],
        "integral_ses": [x.integral_se for x in results],
        "dist_slope": dist_slope,
        "l2_slope": l2_slope,
        "norm_ok": norm_ok,
    }


CRITERIA = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4,
    5: criterion_5, 6: criterion_6, 7: criterion_7, 8: criterion_8,
    9: criterion_9, 10: criterion_10, 11: criterion_11, 12: criterion_12,
    13: criterion_13,
}


def run_criterion(n: int):
    """Returns (passed, detail, elapsed_seconds)."""
    fn = CRITERIA.get(n)
    if fn is None:
        raise ValueError(f"no criterion {n}")
    t0 = time.monotonic()
    passed, detail = fn()
    return passed, detail, time.monotonic() - t0
