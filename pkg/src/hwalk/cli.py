"""Experiment orchestration: the `hw` command line, config runner, and
CSV/JSON report emission."""

from __future__ import annotations

import csv
import dataclasses
import json
import math
import os
import sys
import time
from fractions import Fraction

import click
import numpy as np

from . import characters, groups, measures, rootsys, spectra, su2
from .diameter import diameter as cayley_diameter, prime_splitting_check

EXIT_PASS, EXIT_FAIL, EXIT_ERROR = 0, 1, 2

CACHE_ENV = "HW_CACHE_DIR"


# ---------------------------------------------------------------------------
# shared helpers


def parse_group(spec: str, cap=None) -> groups.GroupTable:
    """Parse a group descriptor: SL:d:q, Z:n, or S:n."""
    parts = spec.split(":")
    fam = parts[0].upper()
    if fam == "SL":
        d, q = int(parts[1]), int(parts[2])
        cache_dir = os.environ.get(CACHE_ENV)
        if cache_dir:
            path = os.path.join(cache_dir, f"sl{d}_{q}.hwgt")
            if os.path.exists(path):
                return groups.load_table(path)
            table = groups.build_slq(d, q, cap or groups.DEFAULT_CAP)
            os.makedirs(cache_dir, exist_ok=True)
            groups.save_table(table, path)
            return table
        return groups.build_slq(d, q, cap or groups.DEFAULT_CAP)
    if fam == "Z":
        return groups.cyclic(int(parts[1]))
    if fam == "S":
        return groups.symmetric_group(int(parts[1]))
    raise click.ClickException(f"unknown group descriptor {spec!r}")


def default_genset(table: groups.GroupTable) -> groups.GenSet:
    idx = table.generator_indices()
    if not idx:
        raise click.ClickException("group has no canonical generators; pass --gens")
    return groups.GenSet.from_indices(table, idx)


def load_genset(table: groups.GroupTable, path: str | None) -> groups.GenSet:
    if path is None:
        return default_genset(table)
    with open(path) as fh:
        data = json.load(fh)
    meta = table.meta
    if meta.get("family") == "SL":
        d, q = meta["d"], meta["q"]
        idx = [table.index[tuple(int(x) % q for row in m for x in row)] for m in data]
    else:
        idx = [int(x) for x in data]
    return groups.GenSet.from_indices(table, idx)


def load_gates(path: str | None) -> list[su2.SU2Element]:
    if path is None or path == "s5":
        s = 1.0 / math.sqrt(5.0)
        gates = [su2.SU2Element.identity()]
        for axis in (1, 2, 3):
            for sign in (1.0, -1.0):
                q = [s, 0.0, 0.0, 0.0]
                q[axis] = sign * 2.0 * s
                gates.append(su2.SU2Element(*q))
        return gates
    with open(path) as fh:
        data = json.load(fh)
    out = []
    for entry in data:
        if len(entry) == 4 and not isinstance(entry[0], list):
            out.append(su2.SU2Element(*[float(x) for x in entry]))
        else:
            m = np.array([[complex(*c) if isinstance(c, list) else complex(c) for c in row]
                          for row in entry])
            out.append(su2.SU2Element.from_matrix(m))
    return out


def _jsonable(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {k: _jsonable(v) for k, v in dataclasses.asdict(obj).items()}
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def report_emit(experiment, inputs, rows, passed, json_path=None, csv_path=None, extra=None):
    """Writes bit-stable artifacts (the timestamp lives under meta and is
    excluded from golden comparisons)."""
    report = {
        "experiment": experiment,
        "inputs": _jsonable(inputs),
        "rows": _jsonable(rows),
        "pass": bool(passed) if passed is not None else None,
        "extra": _jsonable(extra or {}),
        "meta": {"timestamp": time.strftime("%Y-%m-%dT%H:%M:%S")},
    }
    if json_path:
        with open(json_path, "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    if csv_path and rows:
        flat = [r if isinstance(r, dict) else _jsonable(r) for r in rows]
        flat = [r if isinstance(r, dict) else {"value": r} for r in flat]
        keys = sorted({k for r in flat for k in r})
        with open(csv_path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=keys)
            writer.writeheader()
            for r in flat:
                writer.writerow({k: r.get(k, "") for k in keys})
    return report


def _finish(report, passed):
    click.echo(json.dumps({k: v for k, v in report.items() if k != "meta"}, indent=2,
                          sort_keys=True, default=str))
    sys.exit(EXIT_PASS if passed else EXIT_FAIL)


def common_options(fn):
    fn = click.option("--json", "json_path", default=None, help="write JSON report here")(fn)
    fn = click.option("--csv", "csv_path", default=None, help="write CSV report here")(fn)
    fn = click.option("--seed", default=0, show_default=True)(fn)
    return fn


# ---------------------------------------------------------------------------
# CLI


@click.group()
def main():
    """Spectral gaps, diameters, and equidistribution experiments on finite
    and compact groups."""


@main.command()
@click.option("--group", required=True)
@click.option("--gens", default=None)
@click.option("--tol", default=1e-10, show_default=True)
@common_options
def gap(group, gens, tol, json_path, csv_path, seed):
    """Spectral gap of the uniform measure on a generating set."""
    table = parse_group(group)
    gs = load_genset(table, gens)
    mu = measures.uniform_on(table, gs)
    res = spectra.spectral_gap(table, mu, tol=tol, seed=seed)
    report = report_emit("gap", {"group": group, "gens": gs.members}, [res],
                         res.converged, json_path, csv_path)
    _finish(report, res.converged)


@main.command()
@click.option("--group", required=True)
@click.option("--gens", default=None)
@click.option("--profile", "profile_path", default=None, help="CSV growth profile")
@common_options
def diam(group, gens, profile_path, json_path, csv_path, seed):
    """Exact Cayley diameter and growth profile."""
    table = parse_group(group)
    gs = load_genset(table, gens)
    prof = cayley_diameter(table, gs)
    rows = [{"l": l, "size": s} for l, s in enumerate(prof.sizes)]
    if profile_path:
        with open(profile_path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["l", "size"])
            w.writerows([(r["l"], r["size"]) for r in rows])
    report = report_emit("diam", {"group": group, "gens": gs.members}, rows,
                         prof.generates, json_path, csv_path,
                         extra={"diameter": prof.diameter, "generates": prof.generates})
    _finish(report, prof.generates)


@main.command()
@click.option("--group", required=True)
@click.option("--gens", default=None)
@common_options
def sandwich(group, gens, json_path, csv_path, seed):
    """Both sides of the diameter/gap sandwich inequality."""
    table = parse_group(group)
    gs = load_genset(table, gens)
    res = spectra.folklore_sandwich(table, gs)
    report = report_emit("sandwich", {"group": group, "gens": gs.members}, [res],
                         res.passed, json_path, csv_path)
    _finish(report, res.passed)


@main.command("sarnak-xue")
@click.option("--group", required=True)
@click.option("--gens", default=None)
@click.option("--measures", "n_measures", default=1, show_default=True,
              help="additional seeded random symmetric measures")
@common_options
def sarnak_xue(group, gens, n_measures, json_path, csv_path, seed):
    """dim(pi) * lambda^2 <= chi_G(mu*mu) for every eigenvalue."""
    table = parse_group(group)
    ct = characters.character_table(table)
    rng = np.random.default_rng(seed)
    gs = load_genset(table, gens)
    mus = [measures.uniform_on(table, gs)]
    mus += [measures.random_measure(table, rng, symmetric=True) for _ in range(n_measures)]
    reports = [spectra.verify_sarnak_xue(table, mu, ct) for mu in mus]
    passed = all(r.passed for r in reports)
    report = report_emit("sarnak-xue", {"group": group, "n_measures": len(mus)},
                         [{"passed": r.passed, "worst_margin": r.worst_margin,
                           "ambiguous": len(r.ambiguous)} for r in reports],
                         passed, json_path, csv_path)
    _finish(report, passed)


@main.command()
@click.option("--group", required=True)
@common_options
def chartable(group, json_path, csv_path, seed):
    """Exact complex character table (classes x irreps)."""
    table = parse_group(group)
    ct = characters.character_table(table)
    rows = [
        {"dim": d, **{f"c{j}": [v.real, v.imag] for j, v in enumerate(ct.chars[i])}}
        for i, d in enumerate(ct.dims)
    ]
    report = report_emit("chartable", {"group": group}, rows, True, json_path, csv_path,
                         extra={"class_sizes": ct.classes.sizes, "prime": ct.prime})
    _finish(report, True)


@main.command()
@click.option("--group", required=True)
@click.option("--alpha", default=1.0 / 3.0, show_default=True)
@common_options
def quasirandom(group, alpha, json_path, csv_path, seed):
    """Quasirandomness certificate: dim(pi) >= c [G:Ker pi]^alpha."""
    table = parse_group(group)
    cert = characters.quasirandom_cert(table, alpha)
    report = report_emit("quasirandom", {"group": group, "alpha": alpha},
                         [{"dim": d, "index": i} for d, i in cert.rows], True,
                         json_path, csv_path,
                         extra={"c": cert.c, "min_nontrivial_dim": cert.min_nontrivial_dim})
    _finish(report, True)


@main.command()
@click.option("--group", required=True)
@click.option("--normal", default="center", show_default=True,
              help="'center' or a JSON file of element indices")
@click.option("--l", "l_small", default=2, show_default=True)
@click.option("--lp", default=4, show_default=True)
@click.option("--bound", "m_bound", default=4.0, show_default=True)
@common_options
def clifford(group, normal, l_small, lp, m_bound, json_path, csv_path, seed):
    """Refined trace bound through a normal subgroup."""
    table = parse_group(group)
    if normal == "center":
        nidx = [
            i for i in range(table.order)
            if all(table.multiply(i, j) == table.multiply(j, i) for j in range(table.order))
        ]
    else:
        with open(normal) as fh:
            nidx = json.load(fh)
    rng = np.random.default_rng(seed)
    mu = measures.random_measure(table, rng, symmetric=True)
    res = characters.clifford_bound_check(table, nidx, mu, l_small, lp, m_bound)
    report = report_emit("clifford", {"group": group, "normal_size": len(nidx),
                                      "l": l_small, "lp": lp, "M": m_bound},
                         [res], res.passed or not res.applicable, json_path, csv_path)
    _finish(report, res.passed or not res.applicable)


@main.command("trace-decay")
@click.option("--group", required=True, help="finest level, e.g. SL:2:32")
@click.option("--moduli", required=True, help="comma-separated divisor chain, e.g. 2,4,8,16,32")
@click.option("--gens", default=None)
@click.option("--c0", default=None, type=float, help="schedule C0 (default: calibrated)")
@click.option("--a", "a_exp", default=2.0, show_default=True)
@click.option("--bound", "m_bound", default=None, type=float)
@common_options
def trace_decay(group, moduli, gens, c0, a_exp, m_bound, json_path, csv_path, seed):
    """Trace of mu^{*(l_Gamma)} along a quotient chain."""
    table = parse_group(group)
    d = table.meta["d"]
    chain = measures.QuotientChain.from_moduli(d, [int(x) for x in moduli.split(",")])
    gs = load_genset(chain.finest, gens)
    mu = measures.uniform_on(chain.finest, gs)
    schedule = None if c0 is None else measures.WalkSchedule(C0=c0, A=a_exp)
    res = spectra.trace_decay_experiment(chain, mu, schedule=schedule, A=a_exp, M=m_bound)
    passed = all(r.passed for r in res.rows)
    report = report_emit("trace-decay", {"group": group, "moduli": moduli,
                                         "C0": res.C0, "A": res.A},
                         res.rows, passed, json_path, csv_path,
                         extra={"max_trace": res.max_trace, "ratio": res.ratio})
    _finish(report, passed)


@main.command("prime-split")
@click.option("--d", default=2, show_default=True)
@click.option("--moduli", required=True, help="chain starting at 1, e.g. 1,3,15")
@click.option("--gens", default=None, help="JSON file of integer matrices")
@click.option("--envelope", default=6.0, show_default=True)
@common_options
def prime_split(d, moduli, gens, envelope, json_path, csv_path, seed):
    """Diameter recursion across prime factors of the modulus."""
    if gens:
        with open(gens) as fh:
            gen_matrices = [tuple(int(x) for row in m for x in row) for m in json.load(fh)]
    else:
        chain = [int(x) for x in moduli.split(",")]
        gen_matrices = groups.transvection_generators(d, max(chain))
    res = prime_splitting_check(
        d, [int(x) for x in moduli.split(",")], gen_matrices, envelope=envelope
    )
    report = report_emit("prime-split", {"d": d, "moduli": moduli}, res.steps, True,
                         json_path, csv_path, extra={"max_C": res.max_C()})
    _finish(report, True)


@main.group("rootsys")
def rootsys_group():
    """Root-system combinatorics."""


@rootsys_group.command("table")
@click.option("--max-rank", default=12, show_default=True)
@common_options
def rootsys_table(max_rank, json_path, csv_path, seed):
    """The gap-decay exponent A(G) for every family, as exact rationals."""
    rows = []
    for fam, rank in rootsys.all_types(max_rank):
        rs = rootsys.build_rootsystem(fam, rank)
        a = rootsys.exponent_A(rs)
        rows.append({"type": rs.type_name, "A": str(a), "A_decimal": float(a),
                     "positive_roots": len(rs.positive_roots)})
    passed = all(Fraction(r["A"]) <= 2 for r in rows)
    report = report_emit("rootsys-table", {"max_rank": max_rank}, rows, passed,
                         json_path, csv_path)
    _finish(report, passed)


@rootsys_group.command("verify")
@click.option("--type", "type_", required=True, help="e.g. A:3, E8, G2")
@common_options
def rootsys_verify(type_, json_path, csv_path, seed):
    """Exhaustive subset check of the root-ratio inequality."""
    parts = type_.replace(":", "").upper()
    fam = parts[0] if parts[0] in "ABCD" else parts
    rank = int(parts[1:]) if parts[0] in "ABCD" else None
    rs = rootsys.build_rootsystem(fam, rank)
    res = rootsys.verify_roots_lemma(rs)
    report = report_emit("rootsys-verify", {"type": rs.type_name},
                         [{"bound": str(res.bound), "worst_ratio": str(res.worst_ratio),
                           "worst_subset": list(res.worst_subset),
                           "subsets": res.subsets_checked}],
                         res.passed, json_path, csv_path)
    _finish(report, res.passed)


@main.group("su2")
def su2_group():
    """SU(2) experiments."""


@su2_group.command("gap")
@click.option("--gates", default=None, help="gate file (default: the 1/sqrt(5) set)")
@click.option("--r", "radius", default=50.0, show_default=True)
@common_options
def su2_gap(gates, radius, json_path, csv_path, seed):
    """Frequency-cutoff spectral gap of a gate measure."""
    mu = su2.CompactMeasure.uniform(load_gates(gates))
    val = su2.gap_r(mu, radius)
    report = report_emit("su2-gap", {"r": radius}, [{"gap_r": val}], True,
                         json_path, csv_path)
    _finish(report, True)


@su2_group.command("diam")
@click.option("--gates", default=None)
@click.option("--eps", required=True, type=float)
@click.option("--depth-cap", default=40, show_default=True)
@common_options
def su2_diam(gates, eps, depth_cap, json_path, csv_path, seed):
    """Certified metric diameter of a gate set at scale eps."""
    res = su2.diam_eps(load_gates(gates), eps, depth_cap=depth_cap)
    report = report_emit("su2-diam", {"eps": eps}, [res], not res.capped,
                         json_path, csv_path)
    _finish(report, not res.capped)


@su2_group.command("chir")
@click.option("--gates", default=None)
@click.option("--r", "radius", default=30.0, show_default=True)
@click.option("--c0", default=2.0, show_default=True)
@click.option("--a", "a_exp", default=7.0 / 6.0, show_default=True)
@click.option("--bound", "e_bound", default=None, type=float)
@common_options
def su2_chir(gates, radius, c0, a_exp, e_bound, json_path, csv_path, seed):
    """Low-frequency trace functional along the walk schedule."""
    mu = su2.CompactMeasure.uniform(load_gates(gates))
    schedule = measures.WalkSchedule(C0=c0, A=a_exp, mode="compact")
    res = su2.chi_r_trace(mu, radius, schedule, E=e_bound)
    passed = res.passed if res.passed is not None else True
    report = report_emit("su2-chir", {"r": radius, "C0": c0, "A": a_exp}, [res],
                         passed, json_path, csv_path)
    _finish(report, passed)


@su2_group.command("approx-id")
@click.option("--r", "radii", default="16,32,64,128", show_default=True)
@click.option("--samples", default=1_000_000, show_default=True)
@common_options
def su2_approx_id(radii, samples, json_path, csv_path, seed):
    """Approximate-identity normalization, L2 norm, and distance integral."""
    rs = [float(x) for x in radii.split(",")]
    results = [su2.approx_identity_check(r, samples, seed) for r in rs]
    dist_slope = su2.loglog_slope(rs, [x.dist_integral for x in results])
    l2_slope = su2.loglog_slope(rs, [x.l2_norm for x in results])
    passed = all(abs(x.integral - 1.0) <= 3 * x.integral_se for x in results)
    report = report_emit("su2-approx-id", {"radii": rs, "samples": samples}, results,
                         passed, json_path, csv_path,
                         extra={"dist_slope": dist_slope, "l2_slope": l2_slope})
    _finish(report, passed)


@su2_group.command("sk-fit")
@click.option("--gates", default=None)
@click.option("--grid", default="0.8,0.4,0.2,0.1", show_default=True)
@common_options
def su2_sk_fit(gates, grid, json_path, csv_path, seed):
    """Fit the poly-log diameter exponent over an eps grid."""
    eps_grid = [float(x) for x in grid.split(",")]
    res = su2.solovay_kitaev_fit(load_gates(gates), eps_grid)
    passed = res.lower_bounds_ok and res.monotone and (
        res.degenerate or res.exponent <= 3.5
    )
    report = report_emit("su2-sk-fit", {"grid": eps_grid}, [res], passed,
                         json_path, csv_path)
    _finish(report, passed)


@main.command()
@click.option("--criterion", required=True, type=int)
@common_options
def accept(criterion, json_path, csv_path, seed):
    """Run one of the thirteen release-gate checks."""
    from . import accept as accept_mod

    try:
        passed, detail, elapsed = accept_mod.run_criterion(criterion)
    except ValueError as exc:
        click.echo(str(exc), err=True)
        sys.exit(EXIT_ERROR)
    report = report_emit(f"accept-{criterion}", {"criterion": criterion},
                         detail.get("rows", [detail]), passed, json_path, csv_path,
                         extra={**{k: v for k, v in detail.items() if k != "rows"},
                                "elapsed_s": round(elapsed, 3)})
    _finish(report, passed)


@main.command()
@click.argument("config_path")
def run(config_path):
    """Run a named experiment from a JSON config file."""
    try:
        with open(config_path) as fh:
            config = json.load(fh)
    except OSError as exc:
        click.echo(f"cannot read config: {exc}", err=True)
        sys.exit(EXIT_ERROR)
    experiment = config.pop("experiment", None)
    commands = {
        "gap": gap, "diam": diam, "sandwich": sandwich, "sarnak-xue": sarnak_xue,
        "chartable": chartable, "quasirandom": quasirandom, "clifford": clifford,
        "trace-decay": trace_decay, "prime-split": prime_split,
        "rootsys-table": rootsys_table, "rootsys-verify": rootsys_verify,
        "su2-gap": su2_gap, "su2-diam": su2_diam, "su2-chir": su2_chir,
        "su2-approx-id": su2_approx_id, "su2-sk-fit": su2_sk_fit,
        "accept": accept,
    }
    cmd = commands.get(experiment)
    if cmd is None:
        click.echo(f"unknown experiment {experiment!r}", err=True)
        sys.exit(EXIT_ERROR)
    args = []
    for key, value in config.items():
        args.extend([f"--{key.replace('_', '-')}", str(value)])
    try:
        cmd.main(args=args, standalone_mode=False)
    except SystemExit as exc:
        raise exc
    except groups.EnumerationCapError as exc:
        click.echo(str(exc), err=True)
        sys.exit(EXIT_ERROR)
    except click.ClickException as exc:
        click.echo(exc.format_message(), err=True)
        sys.exit(EXIT_ERROR)


if __name__ == "__main__":
    main()
