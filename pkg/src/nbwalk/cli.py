"""Command-line front end.

    nbwalk <info|ihara-check|decomp-check|spectrum|mix|simulate|laplacian-compare> [flags] <graph-file>

Results go to stdout (or ``--out``) as CSV with a header row; floats are
written with 12 significant digits. Exit status: 0 when every check passes,
2 when a mathematical check fails, 1 on bad input or usage.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from nbwalk.config import DEFAULT_TOLERANCES
from nbwalk.edgespace import (
    build_edge_space,
    check_weights,
    degree_weights,
    op_weighted,
    unit_weights,
)
from nbwalk.errors import NBWalkError
from nbwalk.graph import Graph, classify, read_edge_list
from nbwalk.ihara import decomposition_check, unweighted_check, weighted_check
from nbwalk.laplacian import compare_lambda1
from nbwalk.spectra import nb_spectrum_closed_form, nb_spectrum_dense, second_eigenvalue_modulus
from nbwalk.walks import (
    chi_squared_series,
    delta,
    ergodicity_check,
    monte_carlo_distribution,
    propagate_exact,
)

EXIT_OK, EXIT_INPUT, EXIT_CHECK = 0, 1, 2
SUBCOMMANDS = ("info", "ihara-check", "decomp-check", "spectrum", "mix", "simulate", "laplacian-compare")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    graph_path: Path
    weights: str
    weight_file: Path | None
    u_grid: tuple[float, ...]
    steps: int | None
    walkers: int
    seed: int
    start: str | None
    method: str
    starts: str
    out: Path | None
    tol: float | None


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return ""
    if x == 0.0:
        x = 0.0  # drop the sign of -0.0
    return f"{x:.12g}"


def parse_u_grid(spec: str) -> tuple[float, ...]:
    try:
        lo, hi, count = spec.split(":")
        lo_f, hi_f, n = float(lo), float(hi), int(count)
    except ValueError:
        raise UsageError(f"--u-grid expects a:b:count, got {spec!r}") from None
    if n < 1:
        raise UsageError("--u-grid count must be positive")
    return tuple(float(u) for u in np.linspace(lo_f, hi_f, n))


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nbwalk", description="Non-backtracking random walk toolkit.")
    p.add_argument("subcommand", choices=SUBCOMMANDS)
    p.add_argument("graph", help="edge-list file")
    p.add_argument("--weights", default="degree",
                   help="unit, degree, or a file of '<label> <weight>' lines")
    p.add_argument("--weight-file", type=Path, default=None,
                   help="per-vertex weights; unlisted vertices take the --weights mode")
    p.add_argument("--u-grid", default="-0.5:0.5:21", help="a:b:count sample grid for u")
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--walkers", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--start", default=None, help="start vertex label")
    p.add_argument("--method", choices=("closed-form", "dense", "both"), default="dense")
    p.add_argument("--starts", choices=("edge", "vertex"), default="edge",
                   help="starting states for the chi-squared maximum")
    p.add_argument("--out", type=Path, default=None)
    p.add_argument("--tol", type=float, default=None)
    return p


def _glue_negative_values(argv: Sequence[str]) -> list[str]:
    # "--u-grid -0.5:0.5:21" would otherwise read the value as an option
    out, it = [], iter(argv)
    for tok in it:
        if tok == "--u-grid":
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def config_from_args(argv: Sequence[str]) -> RunConfig:
    ns = build_parser().parse_args(_glue_negative_values(argv))
    if ns.tol is not None and not ns.tol > 0:
        raise UsageError("--tol must be positive")
    if ns.steps is not None and ns.steps < 1:
        raise UsageError("--steps must be at least 1")
    if ns.weight_file is not None and ns.weights not in ("unit", "degree"):
        raise UsageError("--weight-file needs --weights unit or degree")
    if ns.walkers < 1:
        raise UsageError("--walkers must be at least 1")
    return RunConfig(
        subcommand=ns.subcommand, graph_path=Path(ns.graph), weights=ns.weights,
        weight_file=ns.weight_file, u_grid=parse_u_grid(ns.u_grid), steps=ns.steps,
        walkers=ns.walkers, seed=ns.seed, start=ns.start, method=ns.method,
        starts=ns.starts, out=ns.out, tol=ns.tol,
    )


def load_weights(g: Graph, cfg: RunConfig) -> np.ndarray:
    """Vertex weights: a mode, optionally overridden per vertex by a file.

    ``--weights PATH`` is shorthand for ``--weights degree --weight-file PATH``.
    """
    if cfg.weights in ("unit", "degree"):
        path = cfg.weight_file
        mode = cfg.weights
    else:
        path, mode = Path(cfg.weights), "degree"
    w = unit_weights(g) if mode == "unit" else degree_weights(g)
    if path is None:
        return w
    text = path.read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].split()
        if not body:
            continue
        if len(body) != 2:
            raise ValueError(f"weight file line {lineno}: expected '<label> <weight>'")
        label, value = body
        try:
            w[g.index_of(label)] = float(value)
        except KeyError:
            raise ValueError(f"weight file line {lineno}: unknown vertex {label!r}") from None
        except ValueError:
            raise ValueError(f"weight file line {lineno}: bad weight {value!r}") from None
    check_weights(g, w)
    return w


# -- subcommands ---------------------------------------------------------------------
# Each returns (header, rows, passed, notes).

def _info(g: Graph, cfg: RunConfig):
    profile = classify(g)
    erg = ergodicity_check(g)
    rows = [
        ("n", g.n), ("m", g.m), ("volume", g.volume),
        ("min_degree", int(g.degrees.min())), ("max_degree", int(g.degrees.max())),
        ("classification", str(profile)), ("bipartite", profile.bipartite),
        ("connected", g.is_connected()), ("irreducible", erg.irreducible),
        ("period", erg.period), ("aperiodic", erg.aperiodic),
    ]
    return ["key", "value"], rows, True, []


def _ihara(g: Graph, cfg: RunConfig):
    tol = cfg.tol or DEFAULT_TOLERANCES.identity_residual
    es = build_edge_space(g)
    w = load_weights(g, cfg)
    unit_ops = op_weighted(es, unit_weights(g))
    ops = op_weighted(es, w)
    plain = unweighted_check(g, cfg.u_grid, tol=tol, B=unit_ops.B)
    weighted = weighted_check(g, w, cfg.u_grid, tol=tol, ops=ops)
    rows = [("unweighted", s.u, s.lhs, s.rhs, s.residual) for s in plain.samples]
    rows += [("weighted", s.u, s.lhs, s.rhs, s.residual) for s in weighted.samples]
    notes = [
        f"unweighted max residual {plain.max_residual:.3e}",
        f"weighted max residual {weighted.max_residual:.3e}",
    ]
    return ["identity", "u", "lhs", "rhs", "residual"], rows, plain.passed and weighted.passed, notes


def _decomp(g: Graph, cfg: RunConfig):
    tol = cfg.tol or DEFAULT_TOLERANCES.identity_residual
    w = load_weights(g, cfg)
    ops = op_weighted(build_edge_space(g), w)
    rows, ok = [], True
    for u in cfg.u_grid:
        r = decomposition_check(g, w, u, tol=tol, ops=ops)
        ok &= r.passed
        rows.append((u, r.lower_left, r.lower_right, r.upper_left, r.upper_right, r.inverse_formula))
    header = ["u", "lower_left", "lower_right", "upper_left", "upper_right", "inverse_formula"]
    return header, rows, ok, []


def _spectrum(g: Graph, cfg: RunConfig):
    tol = cfg.tol or DEFAULT_TOLERANCES.spectrum_match
    rows, notes, ok = [], [], True
    sets = []
    if cfg.method in ("closed-form", "both"):
        sets.append(("closed-form", nb_spectrum_closed_form(g)))
    if cfg.method in ("dense", "both"):
        sets.append(("dense", nb_spectrum_dense(g)))
    for source, spec in sets:
        rows += [(z.real, z.imag, k, source) for z, k in spec]
    if len(sets) == 2:
        dist = sets[0][1].max_match_distance(sets[1][1])
        ok = dist < tol
        notes.append(f"max matching distance {dist:.3e} ({'match' if ok else 'MISMATCH'})")
    mu, mod = second_eigenvalue_modulus(sets[-1][1])
    notes.append(f"second largest modulus {mod:.12g} at {mu.real:.12g}{mu.imag:+.12g}i")
    return ["re", "im", "multiplicity", "source"], rows, ok, notes


def _mix(g: Graph, cfg: RunConfig):
    series = chi_squared_series(g, cfg.steps or 100, starts=cfg.starts)
    rows = list(zip(series.t, series.chi_squared, series.max_norm, series.rate_estimate))
    notes = [f"fitted tail rate {series.fitted_rate:.12g}"]
    return ["t", "chi_squared", "max_norm", "rate_estimate"], rows, True, notes


def _start_vertex(g: Graph, cfg: RunConfig) -> int:
    if cfg.start is None:
        return 0
    return g.index_of(cfg.start)


def _simulate(g: Graph, cfg: RunConfig):
    start = _start_vertex(g, cfg)
    steps = cfg.steps or 10
    emp = monte_carlo_distribution(g, start, steps, cfg.walkers, cfg.seed).values
    exact = propagate_exact(g, delta(g, start), steps)[0].values
    dev = np.abs(emp - exact)
    # default: five binomial standard deviations at p = 1/2
    tol = cfg.tol if cfg.tol is not None else 5.0 * math.sqrt(0.25 / cfg.walkers)
    rows = [(g.labels[v], emp[v], exact[v], dev[v]) for v in range(g.n)]
    notes = [f"max deviation {dev.max():.3e} (tolerance {tol:.3e})"]
    return ["vertex", "empirical", "exact", "abs_deviation"], rows, bool(dev.max() <= tol), notes


def _laplacian(g: Graph, cfg: RunConfig):
    pair = compare_lambda1(g, tol=cfg.tol or 1e-9)
    rows = [(pair.lambda1, pair.lambda1_nb, pair.chung_bound, pair.inequality_ok)]
    return ["lambda1_L", "lambda1_L_nb", "chung_bound", "inequality_ok"], rows, pair.inequality_ok, []


HANDLERS = {
    "info": _info, "ihara-check": _ihara, "decomp-check": _decomp, "spectrum": _spectrum,
    "mix": _mix, "simulate": _simulate, "laplacian-compare": _laplacian,
}


def render_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([x if isinstance(x, str) else fmt(x) for x in row])
    return buf.getvalue()


def run(argv: Sequence[str], stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        cfg = config_from_args(argv)
    except UsageError as exc:
        stderr.write(build_parser().format_usage())
        stderr.write(f"nbwalk: error: {exc}\n")
        return EXIT_INPUT
    try:
        g = read_edge_list(cfg.graph_path)
        header, rows, passed, notes = HANDLERS[cfg.subcommand](g, cfg)
    except (OSError, ValueError, KeyError, NBWalkError) as exc:
        stderr.write(f"nbwalk: error: {exc}\n")
        return EXIT_INPUT
    text = render_csv(header, rows)
    if cfg.out is not None:
        cfg.out.write_text(text, encoding="utf-8")
    else:
        stdout.write(text)
    for note in notes:
        stderr.write(f"{note}\n")
    if not passed:
        stderr.write(f"nbwalk: {cfg.subcommand} check FAILED\n")
        return EXIT_CHECK
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    raise SystemExit(main())
