"""Command-line front end.

Subcommands wire the library into reproducible experiment runs:
generate writes graph files, spectrum writes eigenvalues, dynamics
writes transition tables and snapshots, observables writes series plus
a JSON summary, reproduce emits the canned data bundles with their
embedded sanity checks.

Flags override config-file values; everything is deterministic, so a
given invocation always produces byte-identical files. Exit codes:
0 success, 1 validation error, 2 embedded check failure.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import numpy as np

from . import observables as obs
from ._backend import backend_name
from ._io import write_csv, write_json, write_matrix_csv
from .dynamics import (
    MemoryGuardError,
    TimeGrid,
    amplitude_propagator,
    classical_field,
    eigensystem_of,
    propagator,
    quantum_field,
)
from .graphs import build_family, edge_list_lines, graph_to_json
from .reproduce import FIGURES, run_figure
from .spectral import class_values, degenerate_classes, dsg_spectrum

_PARAM_ALIASES = {
    "g": "generation",
    "z": "coordination",
    "M": "shells",
    "d": "dimension",
    "L": "side",
    "N": "n",
}

_SLUG_LETTERS = {
    "generation": "g",
    "coordination": "z",
    "shells": "s",
    "dimension": "d",
    "side": "L",
    "n": "N",
}


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path) as handle:
            data = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise click.ClickException(f"cannot read config {path}: {exc}")
    if not isinstance(data, dict):
        raise click.ClickException("config file must hold a JSON object")
    return data


def _resolve_graph(config, family, flag_params):
    name = family or config.get("family")
    if not name:
        raise click.ClickException("a graph family is required (--family or config)")
    if name == "ct":
        name = "cayley"
    params = {}
    for key, value in dict(config.get("params", {})).items():
        params[_PARAM_ALIASES.get(key, key)] = value
    for key, value in flag_params.items():
        if value is not None:
            params[key] = value
    try:
        graph = build_family(name, params)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    return graph


def _slug(graph) -> str:
    parts = [graph.family]
    for key, value in graph.params.items():
        parts.append(f"{_SLUG_LETTERS.get(key, key)}{value}")
    return "_".join(parts)


def _grid_from(config, t_max, step, gamma) -> TimeGrid:
    grid_cfg = dict(config.get("grid", {}))
    t_max = t_max if t_max is not None else grid_cfg.get("t_max", 50.0)
    step = step if step is not None else grid_cfg.get("step", 0.05)
    gamma = gamma if gamma is not None else grid_cfg.get("gamma", 1.0)
    try:
        return TimeGrid.regular(float(t_max), float(step), float(gamma))
    except ValueError as exc:
        raise click.ClickException(str(exc))


def _out_dir(config, out) -> Path:
    path = Path(out if out is not None else config.get("out", "."))
    path.mkdir(parents=True, exist_ok=True)
    return path


def family_options(fn):
    opts = [
        click.option("--family", type=str, default=None, help="dsg | ct | torus | ring | chain | complete"),
        click.option("--g", "generation", type=int, default=None, help="dsg generation"),
        click.option("--z", "coordination", type=int, default=None, help="ct coordination number"),
        click.option("--shells", type=int, default=None, help="ct shell count"),
        click.option("--d", "dimension", type=int, default=None, help="torus dimension"),
        click.option("--l", "--L", "side", type=int, default=None, help="torus side length"),
        click.option("--n", "--N", "n", type=int, default=None, help="node count (ring/chain/complete)"),
        click.option("--config", "config_path", type=click.Path(), default=None, help="JSON config; flags override"),
        click.option("--out", type=click.Path(), default=None, help="output directory"),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def grid_options(fn):
    opts = [
        click.option("--t-max", type=float, default=None, help="grid end, units of 1/gamma (default 50)"),
        click.option("--step", type=float, default=None, help="grid step (default 0.05)"),
        click.option("--gamma", type=float, default=None, help="transmission rate (default 1)"),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def _collect(generation, coordination, shells, dimension, side, n):
    return {
        "generation": generation,
        "coordination": coordination,
        "shells": shells,
        "dimension": dimension,
        "side": side,
        "n": n,
    }


@click.group()
def main():
    """Continuous-time classical and quantum walks on graphs."""


@main.command()
@family_options
def generate(family, generation, coordination, shells, dimension, side, n, config_path, out):
    """Build a graph and write its JSON and edge-list files."""
    config = _load_config(config_path)
    graph = _resolve_graph(config, family, _collect(generation, coordination, shells, dimension, side, n))
    out_path = _out_dir(config, out)
    slug = _slug(graph)
    json_file = write_json(out_path / f"{slug}.json", graph_to_json(graph))
    edges_file = (out_path / f"{slug}.edges")
    edges_file.write_text("\n".join(edge_list_lines(graph)) + "\n")
    degrees = graph.degrees()
    click.echo(f"family={graph.family} params={dict(graph.params)} N={graph.node_count}")
    for value in np.unique(degrees):
        click.echo(f"degree {value}: {int((degrees == value).sum())} nodes")
    click.echo(f"r_c={graph.mean_pairwise_distance()!r}")
    click.echo(f"wrote {json_file} and {edges_file}")


@main.command()
@family_options
@click.option("--exact", is_flag=True, help="also run the exact dsg spectrum and report agreement")
def spectrum(family, generation, coordination, shells, dimension, side, n, config_path, out, exact):
    """Write Laplacian eigenvalues; --exact adds the dsg recursion check."""
    config = _load_config(config_path)
    graph = _resolve_graph(config, family, _collect(generation, coordination, shells, dimension, side, n))
    out_path = _out_dir(config, out)
    slug = _slug(graph)
    eig = eigensystem_of(graph)
    meta = {"command": "spectrum", "family": graph.family, "params": dict(graph.params)}
    csv_path = write_csv(
        out_path / f"{slug}_spectrum.csv",
        ("index", "eigenvalue"),
        ((i, float(v)) for i, v in enumerate(eig.values)),
        config=meta,
    )
    click.echo(f"{eig.values.size} eigenvalues -> {csv_path}")
    if exact:
        if graph.family != "dsg":
            raise click.ClickException("--exact applies to the dsg family only")
        values, mults = dsg_spectrum(graph.params["generation"])
        expanded = np.repeat(values, mults)
        deviation = float(np.abs(np.sort(eig.values) - expanded).max())
        exact_path = write_csv(
            out_path / f"{slug}_spectrum_exact.csv",
            ("eigenvalue", "multiplicity"),
            ((float(v), int(m)) for v, m in zip(values, mults)),
            config=meta,
            extra_comments=(f"max deviation from numerical spectrum: {deviation!r}",),
        )
        click.echo(f"exact spectrum -> {exact_path}")
        click.echo(f"max |lambda_numeric - lambda_exact| = {deviation!r}")


@main.command()
@family_options
@grid_options
@click.option("--start", type=int, default=None, help="restrict to one source node")
@click.option("--kind", type=click.Choice(["classical", "quantum", "both"]), default="both")
@click.option("--snapshot", "snapshots", type=float, multiple=True, help="write an N x N table at this time (repeatable)")
def dynamics(family, generation, coordination, shells, dimension, side, n, config_path, out,
             t_max, step, gamma, start, kind, snapshots):
    """Write transition tables over a time grid, plus optional snapshots."""
    config = _load_config(config_path)
    graph = _resolve_graph(config, family, _collect(generation, coordination, shells, dimension, side, n))
    grid = _grid_from(config, t_max, step, gamma)
    out_path = _out_dir(config, out)
    slug = _slug(graph)
    if start is None:
        start = config.get("start")
    if start is not None and not 0 <= start < graph.node_count:
        raise click.ClickException(f"start node {start} outside 0..{graph.node_count - 1}")
    snapshots = tuple(snapshots) or tuple(config.get("snapshots", ()))
    kinds = ("classical", "quantum") if kind == "both" else (kind,)
    meta = {
        "command": "dynamics", "family": graph.family, "params": dict(graph.params),
        "t_max": grid.times[-1], "step": float(grid.times[1] - grid.times[0]) if len(grid) > 1 else 0.0,
        "gamma": grid.gamma, "start": start,
    }
    eig = eigensystem_of(graph)
    written = []
    for this_kind in kinds:
        try:
            field = (classical_field if this_kind == "classical" else quantum_field)(eig, grid)
        except MemoryGuardError as exc:
            raise click.ClickException(f"{exc}")
        sources = range(graph.node_count) if start is None else (start,)
        tag = "" if start is None else f"_src{start}"
        path = out_path / f"{slug}_{this_kind}{tag}.csv"
        if this_kind == "classical":
            columns = ("t", "j", "k", "p")
            rows = (
                (float(t), j, k, float(field.data[i, k, j]))
                for i, t in enumerate(grid.times)
                for j in sources
                for k in range(graph.node_count)
            )
        else:
            columns = ("t", "j", "k", "re_alpha", "im_alpha", "pi")
            rows = (
                (
                    float(t), j, k,
                    float(field.data[i, k, j].real),
                    float(field.data[i, k, j].imag),
                    float(abs(field.data[i, k, j]) ** 2),
                )
                for i, t in enumerate(grid.times)
                for j in sources
                for k in range(graph.node_count)
            )
        written.append(write_csv(path, columns, rows, config=meta))
        for t in snapshots:
            if t < 0:
                raise click.ClickException("snapshot times must be non-negative")
            if this_kind == "classical":
                table = propagator(eig, t, grid.gamma)
            else:
                table = np.abs(amplitude_propagator(eig, t, grid.gamma)) ** 2
            snap_path = out_path / f"{slug}_{this_kind}_snapshot_t{t:g}.csv"
            written.append(write_matrix_csv(snap_path, table, config=meta,
                                            extra_comments=(f"snapshot at t={t:g}",)))
    for path in written:
        click.echo(f"wrote {path}")


@main.command()
@family_options
@grid_options
@click.option("--start", type=int, default=None, help="also export single-source series from this node")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", help="series table format")
def observables(family, generation, coordination, shells, dimension, side, n, config_path, out,
                t_max, step, gamma, start, fmt):
    """Displacement and return-probability series plus the LTA summary."""
    config = _load_config(config_path)
    graph = _resolve_graph(config, family, _collect(generation, coordination, shells, dimension, side, n))
    grid = _grid_from(config, t_max, step, gamma)
    out_path = _out_dir(config, out)
    slug = _slug(graph)
    if start is None:
        start = config.get("start")
    if start is not None and not 0 <= start < graph.node_count:
        raise click.ClickException(f"start node {start} outside 0..{graph.node_count - 1}")
    meta = {
        "command": "observables", "family": graph.family, "params": dict(graph.params),
        "t_max": grid.times[-1], "step": float(grid.times[1] - grid.times[0]) if len(grid) > 1 else 0.0,
        "gamma": grid.gamma, "start": start,
    }
    warnings: list[str] = []

    eig = eigensystem_of(graph)
    dist = graph.chemical_distances()
    times = grid.times
    r_c = graph.mean_pairwise_distance()

    classical_series = obs.displacement_series(eig, grid, dist, "classical")
    quantum_series = obs.displacement_series(eig, grid, dist, "quantum")
    disp_cols = {"t": times, "classical": classical_series, "quantum": quantum_series}
    if start is not None:
        disp_cols[f"classical_from_{start}"] = obs.displacement_series(eig, grid, dist, "classical", start)
        disp_cols[f"quantum_from_{start}"] = obs.displacement_series(eig, grid, dist, "quantum", start)

    classes = degenerate_classes(eig.values)
    mults = np.array([len(c) for c in classes])
    distinct = class_values(eig.values, classes)
    p_bar = obs.return_prob_classical(distinct, grid, mults)
    pi_bar = obs.return_prob_quantum(eig, grid)
    lower = obs.return_prob_lower_bound(distinct, grid, mults)
    ret_cols = {"t": times, "p_bar": p_bar, "pi_bar": pi_bar, "lower_bound": lower}

    chi = obs.lta_matrix(eig, classes)
    chi_bar = obs.lta_mean(chi)
    chi_bar_lb = obs.lta_lower_bound(mults)
    summary = {
        "family": graph.family,
        "params": dict(graph.params),
        "node_count": graph.node_count,
        "gamma": grid.gamma,
        "t_max": float(times[-1]),
        "r_c": r_c,
        "chi_bar": chi_bar,
        "chi_bar_lb": chi_bar_lb,
        "eta": obs.eta_ratio(chi_bar, chi_bar_lb),
    }
    if graph.family == "dsg":
        summary["chi_bar_lb_closed_form"] = obs.dsg_lta_lb_closed_form(
            graph.params["generation"]
        )

    window = (times[-1] / 2.0, float(times[-1]))
    try:
        summary["r_q"] = obs.windowed_time_average(times, quantum_series, *window)
        summary["r_q_window"] = list(window)
    except ValueError as exc:
        warnings.append(f"r_q skipped: {exc}")
    try:
        summary["crossing_time"] = obs.crossing_time(
            times, classical_series, quantum_series, grid.gamma
        )
    except ValueError as exc:
        warnings.append(f"crossing_time skipped: {exc}")
    env_window = (0.0, min(5.0, float(times[-1])))
    try:
        summary["envelope_exponent"] = obs.envelope_exponent(times, pi_bar, env_window)
        summary["envelope_window"] = list(env_window)
    except ValueError as exc:
        warnings.append(f"envelope_exponent skipped: {exc}")

    written = []
    for name, cols in (("displacement", disp_cols), ("return", ret_cols)):
        if fmt == "csv":
            path = write_csv(
                out_path / f"{slug}_{name}.csv",
                tuple(cols),
                zip(*(np.asarray(v, dtype=np.float64) for v in cols.values())),
                config=meta,
            )
        else:
            path = write_json(
                out_path / f"{slug}_{name}.json",
                {k: np.asarray(v, dtype=np.float64).tolist() for k, v in cols.items()},
            )
        written.append(path)
    written.append(write_matrix_csv(out_path / f"{slug}_chi.csv", chi, config=meta))
    written.append(write_json(out_path / f"{slug}_summary.json", summary))

    for warning in warnings:
        click.echo(f"warning: {warning}", err=True)
    for path in written:
        click.echo(f"wrote {path}")


@main.command()
@click.argument("figure")
@click.option("--out", type=click.Path(), default=".", help="output directory")
def reproduce(figure, out):
    """Run the canned configuration behind one figure's data bundle."""
    if figure not in FIGURES:
        choices = ", ".join(sorted(FIGURES))
        raise click.ClickException(f"unknown figure {figure!r}; choose from: {choices}")
    out_path = Path(out)
    out_path.mkdir(parents=True, exist_ok=True)
    manifest = run_figure(figure, out_path)
    manifest_path = write_json(out_path / f"{figure}_manifest.json", manifest)
    for check in manifest["checks"]:
        state = "pass" if check["passed"] else "FAIL"
        click.echo(f"[{state}] {check['name']}: {check['detail']}")
    click.echo(f"manifest -> {manifest_path}")
    if not manifest["all_passed"]:
        sys.exit(2)


@main.command()
def backend():
    """Print which kernel backend is active."""
    click.echo(backend_name())


if __name__ == "__main__":
    main()
