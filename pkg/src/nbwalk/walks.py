"""Exact and sampled dynamics of the non-backtracking walk."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import reduce

import numpy as np

from nbwalk import rng as _rng
from nbwalk.edgespace import DirectedEdgeSpace, build_edge_space
from nbwalk.graph import Graph

VERTICES = "vertices"
EDGES = "directed-edges"


@dataclass(frozen=True)
class Distribution:
    domain: str
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1:
            raise ValueError("distribution values must be one-dimensional")
        if np.any(v < -1e-15):
            raise ValueError("distribution has negative mass")
        if abs(v.sum() - 1.0) > 1e-9:
            raise ValueError(f"distribution sums to {v.sum()}, not 1")
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return len(self.values)


def delta(g: Graph, vertex: int) -> Distribution:
    f = np.zeros(g.n)
    f[vertex] = 1.0
    return Distribution(VERTICES, f)


def stationary_vertex(g: Graph) -> Distribution:
    return Distribution(VERTICES, g.degrees / g.volume)


def stationary_edge(g: Graph) -> Distribution:
    return Distribution(EDGES, np.full(g.volume, 1.0 / g.volume))


def lift(f: Distribution, es: DirectedEdgeSpace) -> Distribution:
    """Spread ``f(u)`` evenly over the ``d_u`` edges leaving ``u``."""
    if f.domain != VERTICES or len(f) != es.graph.n:
        raise ValueError("lift expects a vertex distribution on the same graph")
    deg = es.graph.degrees
    return Distribution(EDGES, f.values[es.source] / deg[es.source])


def project(f: Distribution, es: DirectedEdgeSpace) -> Distribution:
    """Vertex mass = total mass on the edges leaving it."""
    if f.domain != EDGES or len(f) != es.size:
        raise ValueError("project expects an edge distribution on the same graph")
    return Distribution(VERTICES, np.bincount(es.source, weights=f.values, minlength=es.graph.n))


def step_rows(F: np.ndarray, es: DirectedEdgeSpace) -> np.ndarray:
    """Apply P~ on the right to each row of ``F`` in O(rows * vol(G)).

    Mass arriving at ``v`` along ``(y, v)`` leaves on every ``(v, z)`` with
    ``z != y``, so the new mass on ``(v, z)`` is the total inflow to ``v``
    minus the inflow along the reverse edge ``(z, v)``, over ``d_v - 1``.
    """
    F = np.atleast_2d(F)
    n = es.graph.n
    inflow = np.zeros((F.shape[0], n))
    np.add.at(inflow.T, es.target, F.T)
    denom = es.graph.degrees[es.source] - 1.0
    return (inflow[:, es.source] - F[:, es.reversal]) / denom


def propagate_exact(
    g: Graph, f0: Distribution, k: int, es: DirectedEdgeSpace | None = None
) -> tuple[Distribution, Distribution]:
    if k < 0:
        raise ValueError("k must be non-negative")
    es = es or build_edge_space(g)
    f = lift(f0, es).values[None, :]
    for _ in range(k):
        f = step_rows(f, es)
    edge = Distribution(EDGES, f[0])
    return project(edge, es), edge


def nb_kernel(g: Graph, k: int) -> np.ndarray:
    """``n x n`` matrix whose row ``u`` is the vertex law after ``k`` steps from ``u``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    es = build_edge_space(g)
    deg = g.degrees
    F = np.zeros((g.n, es.size))
    F[es.source, np.arange(es.size)] = 1.0 / deg[es.source]
    for _ in range(k):
        F = step_rows(F, es)
    K = np.zeros((g.n, g.n))
    for u in range(g.n):
        K[:, u] = F[:, es.out_ptr[u]:es.out_ptr[u + 1]].sum(axis=1)
    return K


# -- sampling -----------------------------------------------------------------

def _successor_table(es: DirectedEdgeSpace) -> np.ndarray:
    width = max(len(s) for s in es.successors)
    table = np.full((es.size, width), -1, dtype=np.int64)
    for e, succ in enumerate(es.successors):
        table[e, : len(succ)] = succ
    return table


def simulate(g: Graph, start: int, steps: int, seed: int) -> list[int]:
    """One non-backtracking trajectory ``[start, v1, ..., v_steps]``.

    Draw ``i`` of the stream keyed by ``seed`` picks step ``i + 1``: the first
    step is uniform over all neighbours of ``start``, later steps uniform over
    the ``d - 1`` neighbours other than the previous vertex, in ascending id
    order.
    """
    if steps < 1:
        raise ValueError("steps must be at least 1")
    if not 0 <= start < g.n:
        raise ValueError(f"start vertex {start} out of range")
    es = build_edge_space(g)
    key = seed & _rng.MASK64
    e = int(es.out_ptr[start]) + _rng.below(key, 0, int(g.degrees[start]))
    path = [start, int(es.target[e])]
    for i in range(1, steps):
        succ = es.successors[e]
        e = succ[_rng.below(key, i, len(succ))]
        path.append(int(es.target[e]))
    return path


def walker_endpoints(g: Graph, start: int, steps: int, walkers: int, seed: int) -> np.ndarray:
    """Final vertex of each walker; walker ``w`` follows the stream ``seed ^ mix(w)``."""
    if walkers < 1:
        raise ValueError("walkers must be at least 1")
    if steps < 1:
        raise ValueError("steps must be at least 1")
    es = build_edge_space(g)
    table = _successor_table(es)
    counts = np.array([len(s) for s in es.successors], dtype=np.int64)
    keys = _rng.derive_seeds(seed, walkers)
    first = _rng.below_array(keys, 0, int(g.degrees[start]))
    e = es.out_ptr[start] + first
    for i in range(1, steps):
        pick = _rng.below_array(keys, i, counts[e])
        e = table[e, pick]
    return es.target[e]


def monte_carlo_distribution(
    g: Graph, start: int, steps: int, walkers: int, seed: int
) -> Distribution:
    ends = walker_endpoints(g, start, steps, walkers, seed)
    return Distribution(VERTICES, np.bincount(ends, minlength=g.n) / walkers)


# -- convergence ----------------------------------------------------------------

@dataclass(frozen=True)
class ConvergenceSeries:
    t: np.ndarray
    chi_squared: np.ndarray
    max_norm: np.ndarray
    rate_estimate: np.ndarray  # chi_squared(t) ** (1/t); NaN at t = 0
    fitted_rate: float  # exp of the least-squares slope of log chi_squared over the tail half


def _tail_rate(t: np.ndarray, values: np.ndarray, floor: float = 1e-13) -> float:
    half = t >= t[-1] / 2
    keep = half & (values > floor) & (t > 0)
    if keep.sum() < 2:
        return 0.0
    slope = np.polyfit(t[keep], np.log(values[keep]), 1)[0]
    return float(math.exp(slope))


def chi_squared_series(g: Graph, horizon: int, *, starts: str = "edge") -> ConvergenceSeries:
    """Chi-squared distance to the uniform edge law for ``t = 0..horizon``.

    ``chi_squared[t] = max_y sqrt(2m * sum_x (P~^t(y, x) - 1/2m)^2)`` with
    ``y`` ranging over directed edges (``starts="edge"``) or over vertex
    point masses lifted to edges (``starts="vertex"``). ``max_norm[t]`` is the
    largest ``|f_t(v) - pi(v)|`` over vertex point-mass starts.
    """
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    if starts not in ("edge", "vertex"):
        raise ValueError("starts must be 'edge' or 'vertex'")
    es = build_edge_space(g)
    size = es.size
    uniform = 1.0 / size
    pi = g.degrees / g.volume
    if starts == "edge":
        F = np.eye(size)
    else:
        F = np.zeros((g.n, size))
        F[es.source, np.arange(size)] = 1.0 / g.degrees[es.source]
    V = np.zeros((g.n, size))
    V[es.source, np.arange(size)] = 1.0 / g.degrees[es.source]

    chi, mx = [], []
    for step in range(horizon + 1):
        if step:
            F = step_rows(F, es)
            V = step_rows(V, es)
        chi.append(math.sqrt(size * float(np.max(np.sum((F - uniform) ** 2, axis=1)))))
        fv = np.zeros((g.n, g.n))
        for u in range(g.n):
            fv[:, u] = V[:, es.out_ptr[u]:es.out_ptr[u + 1]].sum(axis=1)
        mx.append(float(np.max(np.abs(fv - pi))))
    t = np.arange(horizon + 1)
    chi_arr = np.array(chi)
    with np.errstate(divide="ignore"):
        rate = np.where(t > 0, chi_arr ** (1.0 / np.maximum(t, 1)), np.nan)
    return ConvergenceSeries(t, chi_arr, np.array(mx), rate, _tail_rate(t, chi_arr))


# -- irreducibility and period ----------------------------------------------------

@dataclass(frozen=True)
class ErgodicityReport:
    irreducible: bool
    period: int
    reference_edge: int
    component_size: int

    @property
    def aperiodic(self) -> bool:
        return self.period == 1


def _reach(adj: list[list[int]], root: int) -> set[int]:
    seen = {root}
    stack = [root]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def ergodicity_check(g: Graph) -> ErgodicityReport:
    """Strong connectivity and period of the directed-edge chain.

    The period is computed on the strongly connected component of edge 0:
    BFS levels from edge 0 inside the component, then the gcd of
    ``level(e) + 1 - level(f)`` over all arcs ``e -> f`` in the component.
    """
    es = build_edge_space(g)
    fwd = [list(s) for s in es.successors]
    bwd: list[list[int]] = [[] for _ in range(es.size)]
    for e, succ in enumerate(fwd):
        for f in succ:
            bwd[f].append(e)
    ref = 0
    comp = _reach(fwd, ref) & _reach(bwd, ref)
    level = {ref: 0}
    queue = deque([ref])
    while queue:
        e = queue.popleft()
        for f in fwd[e]:
            if f in comp and f not in level:
                level[f] = level[e] + 1
                queue.append(f)
    diffs = [
        abs(level[e] + 1 - level[f]) for e in comp for f in fwd[e] if f in comp
    ]
    period = reduce(math.gcd, diffs, 0) or 1
    return ErgodicityReport(len(comp) == es.size, period, ref, len(comp))
