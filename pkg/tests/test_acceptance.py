"""Acceptance gate: one test and one printed verdict line per criterion.

Each test measures one criterion's quantity at its stated tolerance and
appends a [PASS]/[FAIL] line to the terminal summary. Wall-clock limits
are part of the criteria and are asserted alongside the numbers.
"""
import time

import numpy as np
from scipy.linalg import expm

import conftest
from ctwalk.dynamics import (
    TimeGrid,
    amplitude_propagator,
    iter_probability_blocks,
    propagator,
)
from ctwalk.graphs import (
    build_cayley_tree,
    build_chain,
    build_complete,
    build_dual_sierpinski,
    build_hypercubic_torus,
    build_ring,
    dsg_corner_nodes,
    torus_euclidean_distances,
)
from ctwalk.lattice import (
    chain_displacement_by_summation,
    chain_displacement_exact,
    chain_pi_profile,
)
from ctwalk.observables import (
    crossing_time,
    displacement_series,
    dsg_lta_lb_closed_form,
    envelope_exponent,
    eta_ratio,
    local_maxima,
    lta_lower_bound,
    lta_matrix,
    lta_mean,
    return_prob_lower_bound,
    return_prob_quantum,
    windowed_time_average,
)
from ctwalk.spectral import (
    degenerate_classes,
    dsg_spectrum,
    laplacian_eigensystem,
)


def record(criterion: int, passed: bool, detail: str):
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {criterion}: {detail}"
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)
    assert passed, line


def test_criterion_1_gasket_spectrum_recursion_matches_eigensolver():
    t0 = time.perf_counter()
    worst = 0.0
    for g in range(1, 7):
        graph = build_dual_sierpinski(g)
        numeric = np.linalg.eigvalsh(graph.laplacian())
        values, mults = dsg_spectrum(g)
        assert int(mults.sum()) == 3**g
        exact = np.sort(np.repeat(values, mults))
        worst = max(worst, float(np.abs(exact - numeric).max()))
    elapsed = time.perf_counter() - t0
    record(
        1,
        worst <= 1e-8 and elapsed < 30.0,
        f"decimation vs eigensolver, g=1..6: max deviation {worst:.2e}"
        f" (tol 1e-8), {elapsed:.1f} s (limit 30 s)",
    )


def test_criterion_2_closed_form_return_floor():
    t0 = time.perf_counter()
    worst = 0.0
    floors = []
    above_coarse = True
    for g in range(1, 9):
        _, mults = dsg_spectrum(g)
        summed = lta_lower_bound(mults)
        closed = dsg_lta_lb_closed_form(g)
        worst = max(worst, abs(summed - closed))
        above_coarse &= closed > 1.0 / 3**g
        floors.append(closed)
    decreasing = all(a > b for a, b in zip(floors, floors[1:]))
    above_limit = all(f > 1.0 / 14.0 for f in floors)
    elapsed = time.perf_counter() - t0
    record(
        2,
        worst <= 1e-12 and above_coarse and decreasing and above_limit
        and elapsed < 5.0,
        f"closed form vs multiplicity sum, g=1..8: max |diff| {worst:.1e}"
        f" (tol 1e-12), > 1/3^g: {above_coarse},"
        f" decreasing toward 1/14 from above: {decreasing and above_limit},"
        f" {elapsed:.2f} s",
    )


def test_criterion_3_bound_exact_on_translation_invariant_graphs():
    t0 = time.perf_counter()
    cases = [(f"torus L={L}", build_hypercubic_torus(2, L)) for L in (4, 5, 8, 16)]
    cases += [(f"ring N={n}", build_ring(n)) for n in (5, 16)]
    worst = 0.0
    for _, graph in cases:
        eig = laplacian_eigensystem(graph.laplacian())
        mults = [c.size for c in degenerate_classes(eig.values)]
        eta = eta_ratio(lta_mean(lta_matrix(eig)), lta_lower_bound(mults))
        worst = max(worst, abs(eta - 1.0))
    elapsed = time.perf_counter() - t0
    record(
        3,
        worst <= 1e-9 and elapsed < 10.0,
        f"eta on 4 tori and 2 rings: max |eta - 1| {worst:.1e} (tol 1e-9),"
        f" {elapsed:.1f} s (limit 10 s)",
    )


def test_criterion_4_gasket_localization():
    t0 = time.perf_counter()
    chi_bar = lta_mean(lta_matrix(build_dual_sierpinski(5)))
    mean_ok = abs(chi_bar - 0.70) <= 0.05
    chi3 = lta_matrix(build_dual_sierpinski(3))
    top3 = set(np.argsort(np.diag(chi3))[-3:].tolist())
    corners = set(dsg_corner_nodes(3))
    peaks_ok = top3 == corners
    elapsed = time.perf_counter() - t0
    record(
        4,
        mean_ok and peaks_ok and elapsed < 60.0,
        f"mean long-time return at g=5 is {chi_bar:.4f},"
        f" target 0.70 +/- 0.05: {mean_ok};"
        f" g=3 diagonal maximal at corner triangles {sorted(top3)}: {peaks_ok};"
        f" {elapsed:.1f} s (limit 60 s)",
    )


def test_criterion_5_tree_displacement_levels():
    t0 = time.perf_counter()
    graph = build_cayley_tree(3, 6)
    dist = graph.chemical_distances()
    r_c = graph.mean_pairwise_distance()
    classical_ok = abs(r_c - 8.9) <= 0.1
    grid = TimeGrid.regular(100.0, 0.05)
    series = displacement_series(graph, grid, dist, "quantum")
    r_q = windowed_time_average(grid.times, series, 50.0, 100.0)
    quantum_ok = abs(r_q - 2.4) <= 0.3
    elapsed = time.perf_counter() - t0
    record(
        5,
        classical_ok and quantum_ok and elapsed < 60.0,
        f"tree z=3 M=6: r_c {r_c:.3f} (target 8.9 +/- 0.1): {classical_ok};"
        f" r_q {r_q:.3f} over [50, 100] (target 2.4 +/- 0.3): {quantum_ok};"
        f" {elapsed:.1f} s (limit 60 s)",
    )


def test_criterion_6_crossing_times():
    t0 = time.perf_counter()
    cases = [
        ("tree z=3 M=6", build_cayley_tree(3, 6), 4.0, 1.0),
        ("torus L=16", build_hypercubic_torus(2, 16), 9.0, 1.5),
        ("gasket g=5", build_dual_sierpinski(5), 18.0, 3.0),
    ]
    grid = TimeGrid.regular(25.0, 0.05)
    all_ok = True
    parts = []
    for name, graph, target, tol in cases:
        eig = laplacian_eigensystem(graph.laplacian())
        dist = graph.chemical_distances()
        classical = displacement_series(eig, grid, dist, "classical")
        quantum = displacement_series(eig, grid, dist, "quantum")
        t_cross = crossing_time(grid.times, classical, quantum)
        ok = abs(t_cross - target) <= tol
        all_ok &= ok
        parts.append(f"{name} {t_cross:.2f} (target {target} +/- {tol}): {ok}")
    elapsed = time.perf_counter() - t0
    record(
        6,
        all_ok and elapsed < 120.0,
        "; ".join(parts) + f"; {elapsed:.1f} s (limit 120 s)",
    )


def test_criterion_7_return_probability_envelopes():
    t0 = time.perf_counter()
    grid = TimeGrid.regular(5.0, 0.005)
    pi_bar = return_prob_quantum(build_dual_sierpinski(5), grid)
    try:
        slope = envelope_exponent(grid.times, pi_bar, (0.0, 5.0))
        gasket_ok = abs(slope - (-0.82)) <= 0.05
        gasket_part = f"gasket g=5 slope {slope:.3f}"
    except ValueError:
        gasket_ok = False
        peaks = [
            i for i in local_maxima(grid.times, pi_bar)
            if 0.0 < grid.times[i] <= 5.0
        ]
        at = ", ".join(f"{grid.times[i]:.2f}" for i in peaks)
        gasket_part = (
            f"gasket g=5 envelope undefined on (0, 5]:"
            f" only {len(peaks)} maxima (t = {at}), 3 needed"
        )
    grid_t = TimeGrid.regular(5.5, 0.005)
    pi_torus = return_prob_quantum(build_hypercubic_torus(2, 16), grid_t)
    slope_t = envelope_exponent(grid_t.times, pi_torus, (0.0, 5.5))
    torus_ok = abs(slope_t - (-2.0)) <= 0.2
    elapsed = time.perf_counter() - t0
    record(
        7,
        gasket_ok and torus_ok and elapsed < 60.0,
        gasket_part + f" (target -0.82 +/- 0.05): {gasket_ok};"
        f" torus L=16 slope {slope_t:.3f} (target -2.0 +/- 0.2): {torus_ok};"
        f" {elapsed:.1f} s (limit 60 s)",
    )


def test_criterion_8_lattice_baselines():
    t0 = time.perf_counter()
    ratio = chain_displacement_exact(50.0) / 50.0
    line_ok = abs(ratio - 4.0 / np.pi) <= 1e-3
    sum_dev = max(
        abs(chain_displacement_by_summation(t) - chain_displacement_exact(t))
        for t in (1.0, 5.0, 10.0, 20.0, 50.0)
    )
    sum_ok = sum_dev <= 1e-9
    # ring wide enough that t=2 stays inside the pre-wrap horizon
    n = 36
    grid2 = TimeGrid.regular(2.0, 2.0)
    blocks = list(iter_probability_blocks(build_ring(n), grid2, "quantum"))
    probs = blocks[-1][1][-1][:, 0]
    half = n // 2
    wrapped = np.roll(probs, half)
    reference = chain_pi_profile(half, 2.0)
    folded = np.concatenate([reference[:0:-1], reference[:half]])
    ring_dev = float(np.abs(wrapped - folded).max())
    ring_ok = ring_dev <= 1e-6
    torus = build_hypercubic_torus(2, 19)
    grid3 = TimeGrid.regular(3.0, 0.05)
    chem = displacement_series(
        torus, grid3, torus.chemical_distances(), "quantum", start=0
    )
    eucl = displacement_series(
        torus, grid3, torus_euclidean_distances(2, 19), "quantum", start=0
    )
    mask = grid3.times >= 1.0
    slope_chem = float(np.polyfit(grid3.times[mask], chem[mask], 1)[0])
    slope_eucl = float(np.polyfit(grid3.times[mask], eucl[mask], 1)[0])
    chem_ok = abs(slope_chem - 8.0 / np.pi) <= 0.02 * 8.0 / np.pi
    eucl_ok = abs(slope_eucl - 6.0 / np.pi) <= 0.05 * 6.0 / np.pi
    elapsed = time.perf_counter() - t0
    record(
        8,
        line_ok and sum_ok and ring_ok and chem_ok and eucl_ok
        and elapsed < 120.0,
        f"chain displacement/t at t=50: {ratio:.6f} vs 4/pi"
        f" (tol 1e-3): {line_ok};"
        f" summation vs closed form: {sum_dev:.1e} (tol 1e-9): {sum_ok};"
        f" ring N=36 vs squared Bessel at t=2: {ring_dev:.1e}"
        f" (tol 1e-6): {ring_ok};"
        f" torus L=19 slopes {slope_chem:.4f} vs 8/pi (2%): {chem_ok},"
        f" {slope_eucl:.4f} vs 6/pi (5%): {eucl_ok};"
        f" {elapsed:.1f} s (limit 120 s)",
    )


def _property_suite_graphs():
    graphs = [build_dual_sierpinski(g) for g in range(1, 6)]
    graphs += [build_cayley_tree(3, m) for m in (2, 4, 6)]
    graphs += [build_hypercubic_torus(2, side) for side in (4, 5, 8, 16)]
    graphs += [build_ring(n) for n in (5, 16)]
    graphs += [build_chain(n) for n in (2, 8)]
    graphs += [build_complete(n) for n in (2, 5, 10)]
    return graphs


def test_criterion_9_universal_property_suite():
    t0 = time.perf_counter()
    graphs = _property_suite_graphs()
    assert max(g.node_count for g in graphs) <= 300
    grid = TimeGrid.regular(20.0, 0.05)
    worst = {
        "stochastic": 0.0, "unitary": 0.0, "asymmetry": 0.0,
        "bound_gap": 0.0, "equipartition": 0.0, "chi_columns": 0.0,
        "brute_force": 0.0,
    }
    small = 0
    for graph in graphs:
        eig = laplacian_eigensystem(graph.laplacian())
        n = graph.node_count
        for kind, key in (("classical", "stochastic"), ("quantum", "unitary")):
            for _, block in iter_probability_blocks(eig, grid, kind):
                worst[key] = max(
                    worst[key],
                    float(np.abs(block.sum(axis=1) - 1.0).max()),
                )
                worst["asymmetry"] = max(
                    worst["asymmetry"],
                    float(np.abs(block - block.transpose(0, 2, 1)).max()),
                )
        pi_bar = return_prob_quantum(eig, grid)
        bound = return_prob_lower_bound(eig.values, grid)
        worst["bound_gap"] = max(
            worst["bound_gap"], float((bound - pi_bar).max())
        )
        t_relax = 30.0 / eig.values[1]
        worst["equipartition"] = max(
            worst["equipartition"],
            float(np.abs(propagator(eig, t_relax) - 1.0 / n).max()),
        )
        chi = lta_matrix(eig)
        worst["chi_columns"] = max(
            worst["chi_columns"], float(np.abs(chi.sum(axis=0) - 1.0).max())
        )
        if n <= 10:
            small += 1
            lap = graph.laplacian().astype(np.float64)
            for t in (0.5, 1.7):
                worst["brute_force"] = max(
                    worst["brute_force"],
                    float(np.abs(expm(-lap * t) - propagator(eig, t)).max()),
                    float(np.abs(
                        expm(-1j * lap * t) - amplitude_propagator(eig, t)
                    ).max()),
                )
    elapsed = time.perf_counter() - t0
    ok = (
        worst["stochastic"] <= 1e-10
        and worst["unitary"] <= 1e-10
        and worst["asymmetry"] <= 1e-10
        and worst["bound_gap"] <= 1e-10
        and worst["equipartition"] <= 1e-10
        and worst["chi_columns"] <= 1e-9
        and worst["brute_force"] <= 1e-8
        and elapsed < 300.0
    )
    record(
        9,
        ok,
        f"{len(graphs)} graphs, grid step 0.05, t <= 20:"
        f" stochasticity {worst['stochastic']:.1e},"
        f" unitarity {worst['unitary']:.1e},"
        f" asymmetry {worst['asymmetry']:.1e},"
        f" mean-return bound excess {worst['bound_gap']:.1e}"
        f" (all tol 1e-10);"
        f" equipartition at t=30/lambda_2 {worst['equipartition']:.1e}"
        f" (tol 1e-10);"
        f" chi column sums {worst['chi_columns']:.1e} (tol 1e-9);"
        f" matrix-exponential match on {small} graphs with N <= 10"
        f" {worst['brute_force']:.1e} (tol 1e-8);"
        f" {elapsed:.0f} s (limit 300 s)",
    )
