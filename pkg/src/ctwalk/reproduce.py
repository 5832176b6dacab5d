"""Canned experiment bundles, named fig2..fig10 after the plots they feed.

Each bundle runs a fixed configuration, writes its data files into the
requested directory, and returns a manifest listing the files plus the
embedded sanity checks with pass/fail state. The caller decides what a
failed check means (the CLI exits with status 2).
"""
from __future__ import annotations

from math import pi, sqrt
from pathlib import Path

import numpy as np

from ._io import write_csv, write_matrix_csv
from .dynamics import TimeGrid, eigensystem_of, quantum_column
from .graphs import (
    build_cayley_tree,
    build_dual_sierpinski,
    build_hypercubic_torus,
    dsg_corner_nodes,
    dsg_left_corner_chain,
    torus_coordinates,
    torus_euclidean_distances,
)
from .observables import (
    crossing_time,
    displacement_series,
    dsg_lta_lb_closed_form,
    eta_ratio,
    lta_matrix,
    lta_mean,
    lta_lower_bound,
)
from .lattice import chain_displacement_exact
from .spectral import degenerate_classes

SNAPSHOT_TIMES = (0.0, 1.0, 3.0, 4.0)


def _check(name: str, passed: bool, detail: str) -> dict:
    return {"name": name, "passed": bool(passed), "detail": detail}


def _column_bundle(figure, out_dir, graph, source, extra_columns):
    """Quantum probability columns from one source at the snapshot times."""
    grid = TimeGrid(np.array(SNAPSHOT_TIMES))
    amp = quantum_column(graph, grid, source)
    probs = np.abs(amp) ** 2
    columns = ["node"] + list(extra_columns) + [f"pi_t{t:g}" for t in SNAPSHOT_TIMES]
    rows = []
    for k in range(graph.node_count):
        row = [k] + [extra_columns[name][k] for name in extra_columns]
        row.extend(float(probs[i, k]) for i in range(len(SNAPSHOT_TIMES)))
        rows.append(row)
    meta = {"figure": figure, "family": graph.family, "params": dict(graph.params),
            "source": source, "times": list(SNAPSHOT_TIMES)}
    path = write_csv(out_dir / f"{figure}_{graph.family}_profiles.csv", columns, rows, config=meta)
    sums = probs.sum(axis=1)
    checks = [
        _check("unitarity_at_snapshots", float(np.abs(sums - 1).max()) <= 1e-10,
               f"max |sum - 1| = {float(np.abs(sums - 1).max()):.3e}"),
        _check("localized_at_t0", float(abs(probs[0, source] - 1.0)) <= 1e-10,
               f"pi_source(0) = {float(probs[0, source])!r}"),
    ]
    return [path], checks


def _fig2(out_dir: Path):
    graph = build_dual_sierpinski(3)
    grid = TimeGrid.regular(20.0, 0.05)
    amp = quantum_column(graph, grid, 0)
    probs = np.abs(amp) ** 2
    sinks = dsg_left_corner_chain(3)
    columns = ["t"] + [f"site_{k}" for k in sinks]
    rows = zip(grid.times, *(probs[:, k] for k in sinks))
    meta = {"figure": "fig2", "family": "dsg", "generation": 3, "source": 0,
            "sinks": sinks}
    path = write_csv(
        out_dir / "fig2_dsg_corner_series.csv", columns,
        ([float(v) for v in row] for row in rows), config=meta,
        extra_comments=("node indices are 0-based; sinks are the nested left corners",),
    )
    sums = probs.sum(axis=1)
    checks = [
        _check("unitarity_along_grid", float(np.abs(sums - 1).max()) <= 1e-10,
               f"max |sum - 1| = {float(np.abs(sums - 1).max()):.3e}"),
        _check("localized_at_t0", abs(float(probs[0, 0]) - 1.0) <= 1e-10,
               f"pi_0(0) = {float(probs[0, 0])!r}"),
        _check("probabilities_in_range", float(probs.min()) >= -1e-12 and float(probs.max()) <= 1.0 + 1e-10,
               f"range [{float(probs.min()):.3e}, {float(probs.max()):.6f}]"),
    ]
    return [path], checks


def _fig3(out_dir: Path):
    graph = build_cayley_tree(3, 3)
    shell = graph.chemical_distances()[0]
    return _column_bundle("fig3", out_dir, graph, 0, {"shell": shell})


def _fig4(out_dir: Path):
    graph = build_hypercubic_torus(2, 5)
    coords = torus_coordinates(2, 5)
    files, checks = _column_bundle(
        "fig4", out_dir, graph, 0, {"x": coords[:, 0], "y": coords[:, 1]}
    )
    grid = TimeGrid(np.array(SNAPSHOT_TIMES))
    probs = np.abs(quantum_column(graph, grid, 0)) ** 2
    side = 5
    mirrored = coords.copy()
    mirrored[:, 0] = (-mirrored[:, 0]) % side
    mirrored[:, 1] = (-mirrored[:, 1]) % side
    mirror_index = mirrored[:, 0] * side + mirrored[:, 1]
    dev = float(np.abs(probs - probs[:, mirror_index]).max())
    checks.append(_check("mirror_symmetry", dev <= 1e-12, f"max asymmetry {dev:.3e}"))
    return files, checks


def _fig5(out_dir: Path):
    graph = build_dual_sierpinski(3)
    return _column_bundle("fig5", out_dir, graph, 0, {})


_FIG6_CASES = (
    ("dsg", lambda: build_dual_sierpinski(5), 0),
    ("ct", lambda: build_cayley_tree(3, 6), 0),
    ("torus", lambda: build_hypercubic_torus(2, 16), 0),
)


def _fig6(out_dir: Path):
    grid = TimeGrid.regular(50.0, 0.1)
    files = []
    checks = []
    for name, make, source in _FIG6_CASES:
        graph = make()
        eig = eigensystem_of(graph)
        dist = graph.chemical_distances()
        quantum_avg = displacement_series(eig, grid, dist, "quantum")
        quantum_src = displacement_series(eig, grid, dist, "quantum", source)
        classical_avg = displacement_series(eig, grid, dist, "classical")
        meta = {"figure": "fig6", "family": graph.family, "params": dict(graph.params),
                "source": source}
        path = write_csv(
            out_dir / f"fig6_{name}_displacement.csv",
            ("t", "quantum_site_avg", f"quantum_from_{source}", "classical_site_avg"),
            zip(grid.times, quantum_avg, quantum_src, classical_avg),
            config=meta,
        )
        files.append(path)
        drops = float(np.diff(classical_avg).min())
        checks.append(_check(f"{name}_classical_monotone", drops >= -1e-9,
                             f"min increment {drops:.3e}"))
        checks.append(_check(f"{name}_series_non_negative",
                             min(quantum_avg.min(), quantum_src.min(), classical_avg.min()) >= -1e-12,
                             "all series >= 0"))
        if name == "torus":
            dev = float(np.abs(quantum_avg - quantum_src).max())
            checks.append(_check("torus_source_independent", dev <= 1e-9,
                                 f"max |avg - from_0| = {dev:.3e}"))
        elif name == "dsg":
            # corner starts explore less than the site average, a fractal
            # asymmetry absent at the central node of the tree
            above = float((quantum_avg - quantum_src).min())
            checks.append(_check("dsg_avg_above_corner_series", above >= -1e-9,
                                 f"min(avg - corner) = {above:.3e}"))
    return files, checks


_FIG7_CASES = (
    ("ct", lambda: build_cayley_tree(3, 6), (3.0, 5.0)),
    ("torus", lambda: build_hypercubic_torus(2, 16), (7.5, 10.5)),
    ("dsg", lambda: build_dual_sierpinski(5), (15.0, 21.0)),
)


def _fig7(out_dir: Path):
    grid = TimeGrid.regular(25.0, 0.05)
    files = []
    checks = []
    for name, make, window in _FIG7_CASES:
        graph = make()
        eig = eigensystem_of(graph)
        dist = graph.chemical_distances()
        classical = displacement_series(eig, grid, dist, "classical")
        quantum = displacement_series(eig, grid, dist, "quantum")
        # 0/0 at t=0; leave it as nan in the file rather than invent a value
        ratio = classical / np.where(quantum == 0, np.nan, quantum)
        meta = {"figure": "fig7", "family": graph.family, "params": dict(graph.params)}
        path = write_csv(
            out_dir / f"fig7_{name}_ratio.csv",
            ("t", "classical", "quantum", "ratio"),
            zip(grid.times, classical, quantum, ratio),
            config=meta,
        )
        files.append(path)
        try:
            t_cross = crossing_time(grid.times, classical, quantum, grid.gamma)
            lo, hi = window
            checks.append(_check(f"{name}_crossing_in_window", lo <= t_cross <= hi,
                                 f"crossing at t = {t_cross:.3f}, window [{lo}, {hi}]"))
        except ValueError as exc:
            checks.append(_check(f"{name}_crossing_in_window", False, str(exc)))
    return files, checks


def _fig8(out_dir: Path):
    cases = (
        [(f"dsg_g{g}", build_dual_sierpinski(g)) for g in range(1, 6)]
        + [(f"ct_z3_s{m}", build_cayley_tree(3, m)) for m in range(2, 7)]
        + [(f"torus_d2_L{side}", build_hypercubic_torus(2, side)) for side in range(4, 17)]
    )
    rows = []
    checks = []
    for slug, graph in cases:
        eig = eigensystem_of(graph)
        classes = degenerate_classes(eig.values)
        mults = [len(c) for c in classes]
        chi_bar = lta_mean(lta_matrix(eig, classes))
        chi_lb = lta_lower_bound(mults)
        eta = eta_ratio(chi_bar, chi_lb)
        rows.append((slug, graph.node_count, chi_bar, chi_lb, eta))
        if graph.family == "torus":
            checks.append(_check(f"{slug}_eta_is_one", abs(eta - 1.0) <= 1e-9,
                                 f"eta = {eta!r}"))
        if graph.family == "dsg":
            closed = dsg_lta_lb_closed_form(graph.params["generation"])
            checks.append(_check(f"{slug}_lb_matches_closed_form",
                                 abs(chi_lb - closed) <= 1e-12,
                                 f"|delta| = {abs(chi_lb - closed):.3e}"))
    etas = [row[4] for row in rows]
    checks.append(_check("eta_at_least_one", min(etas) >= 1.0 - 1e-12,
                         f"min eta = {min(etas)!r}"))
    ct_eta = next(row[4] for row in rows if row[0] == "ct_z3_s6")
    checks.append(_check("ct_s6_eta_about_two", 1.7 <= ct_eta <= 2.3,
                         f"eta = {ct_eta:.4f}"))
    meta = {"figure": "fig8"}
    path = write_csv(
        out_dir / "fig8_lta_sweep.csv",
        ("graph", "N", "chi_bar", "chi_bar_lb", "eta"),
        rows, config=meta,
    )
    return [path], checks


def _fig9(out_dir: Path):
    files = []
    checks = []
    for g in (3, 4):
        graph = build_dual_sierpinski(g)
        eig = eigensystem_of(graph)
        chi = lta_matrix(eig)
        meta = {"figure": "fig9", "family": "dsg", "generation": g}
        path = write_matrix_csv(out_dir / f"fig9_dsg_g{g}_chi.csv", chi, config=meta)
        files.append(path)
        col_dev = float(np.abs(chi.sum(axis=0) - 1.0).max())
        checks.append(_check(f"g{g}_columns_sum_to_one", col_dev <= 1e-9,
                             f"max |sum - 1| = {col_dev:.3e}"))
        sym_dev = float(np.abs(chi - chi.T).max())
        checks.append(_check(f"g{g}_symmetric", sym_dev <= 1e-12,
                             f"max asymmetry {sym_dev:.3e}"))
        corners = set(dsg_corner_nodes(g))
        diag = np.diag(chi)
        top3 = set(np.argsort(diag)[-3:].tolist())
        checks.append(_check(f"g{g}_diagonal_peaks_at_corners", top3 == corners,
                             f"top diagonal entries at {sorted(top3)}"))
        off = chi - np.diag(diag)
        checks.append(_check(f"g{g}_global_max_on_diagonal",
                             float(diag.max()) >= float(off.max()),
                             f"diag max {diag.max():.4f} vs off-diag max {off.max():.4f}"))
    return files, checks


def _fig10(out_dir: Path):
    files = []
    checks = []

    chain_times = np.arange(0.0, 50.0 + 1e-9, 0.25)
    chain_vals = np.array([chain_displacement_exact(t) for t in chain_times])
    meta = {"figure": "fig10-baselines", "part": "chain"}
    files.append(write_csv(
        out_dir / "fig10_chain_baseline.csv",
        ("t", "chain_exact", "asymptote_4t_over_pi"),
        zip(chain_times, chain_vals, 4.0 * chain_times / pi),
        config=meta,
    ))
    tail = float(chain_vals[-1] / chain_times[-1])
    checks.append(_check("chain_tail_matches_4_over_pi",
                         abs(tail - 4.0 / pi) <= 1e-3,
                         f"value/t at t=50: {tail!r} vs 4/pi = {4.0 / pi!r}"))

    side = 19
    graph = build_hypercubic_torus(2, side)
    eig = eigensystem_of(graph)
    grid = TimeGrid.regular(3.0, 0.05)
    chem = displacement_series(eig, grid, graph.chemical_distances(), "quantum", 0, chunk=16)
    eucl = displacement_series(eig, grid, torus_euclidean_distances(2, side), "quantum", 0, chunk=16)
    meta = {"figure": "fig10-baselines", "part": "torus", "side": side}
    files.append(write_csv(
        out_dir / "fig10_torus_L19.csv",
        ("t", "chemical", "euclidean", "ref_8t_over_pi", "ref_6t_over_pi"),
        zip(grid.times, chem, eucl, 8.0 * grid.times / pi, 6.0 * grid.times / pi),
        config=meta,
    ))
    window = (grid.times >= 1.0) & (grid.times <= 3.0)
    chem_slope = float(np.polyfit(grid.times[window], chem[window], 1)[0])
    eucl_slope = float(np.polyfit(grid.times[window], eucl[window], 1)[0])
    checks.append(_check("chemical_slope_8_over_pi",
                         abs(chem_slope - 8.0 / pi) <= 0.02 * (8.0 / pi),
                         f"slope {chem_slope:.4f} vs 8/pi = {8.0 / pi:.4f}"))
    checks.append(_check("euclidean_slope_6_over_pi",
                         abs(eucl_slope - 6.0 / pi) <= 0.05 * (6.0 / pi),
                         f"slope {eucl_slope:.4f} vs 6/pi = {6.0 / pi:.4f}"))
    bracket_low = float((eucl[1:] - chem[1:] / sqrt(3.0)).min())
    bracket_high = float((chem[1:] - eucl[1:]).min())
    checks.append(_check("euclidean_within_metric_bracket",
                         bracket_low >= -1e-9 and bracket_high >= -1e-9,
                         f"min(eucl - chem/sqrt3) = {bracket_low:.3e}, "
                         f"min(chem - eucl) = {bracket_high:.3e}"))
    return files, checks


FIGURES = {
    "fig2": _fig2,
    "fig3": _fig3,
    "fig4": _fig4,
    "fig5": _fig5,
    "fig6": _fig6,
    "fig7": _fig7,
    "fig8": _fig8,
    "fig9": _fig9,
    "fig10-baselines": _fig10,
}


def run_figure(figure: str, out_dir: Path) -> dict:
    """Run one bundle; returns its manifest dictionary."""
    try:
        runner = FIGURES[figure]
    except KeyError:
        raise ValueError(
            f"unknown figure {figure!r}; valid: {', '.join(sorted(FIGURES))}"
        ) from None
    files, checks = runner(Path(out_dir))
    return {
        "figure": figure,
        "files": sorted(str(Path(f).name) for f in files),
        "checks": checks,
        "all_passed": all(c["passed"] for c in checks),
    }
