"""Directed-edge state space and the operators acting on it.

Every undirected edge ``{u, v}`` contributes the two states ``(u, v)`` and
``(v, u)``. States are ordered by source id and then target id, so the
outgoing edges of vertex ``x`` occupy the contiguous index range
``out_ptr[x]:out_ptr[x + 1]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from nbwalk.config import DEFAULT_TOLERANCES
from nbwalk.errors import NonPositiveWeight
from nbwalk.graph import Graph, adjacency_matrix, degree_matrix
from nbwalk.linalg import lu_determinant


@dataclass(frozen=True)
class DirectedEdgeSpace:
    graph: Graph
    edges: tuple[tuple[int, int], ...]
    source: np.ndarray
    target: np.ndarray
    reversal: np.ndarray
    out_ptr: np.ndarray

    @property
    def size(self) -> int:
        return len(self.edges)

    @cached_property
    def index(self) -> dict[tuple[int, int], int]:
        return {e: i for i, e in enumerate(self.edges)}

    def outgoing(self, x: int) -> range:
        return range(int(self.out_ptr[x]), int(self.out_ptr[x + 1]))

    @cached_property
    def successors(self) -> tuple[tuple[int, ...], ...]:
        """Non-backtracking successors of each state, in canonical order."""
        out = []
        for e, (u, v) in enumerate(self.edges):
            out.append(tuple(f for f in self.outgoing(v) if self.target[f] != u))
        return tuple(out)


def build_edge_space(g: Graph) -> DirectedEdgeSpace:
    edges = tuple((u, v) for u in range(g.n) for v in g.adjacency[u])
    out_ptr = np.zeros(g.n + 1, dtype=np.int64)
    out_ptr[1:] = np.cumsum(g.degrees)
    index = {e: i for i, e in enumerate(edges)}
    reversal = np.array([index[(v, u)] for u, v in edges], dtype=np.int64)
    source = np.array([u for u, _ in edges], dtype=np.int64)
    target = np.array([v for _, v in edges], dtype=np.int64)
    return DirectedEdgeSpace(g, edges, source, target, reversal, out_ptr)


# -- unweighted operators ------------------------------------------------------------

def op_B(es: DirectedEdgeSpace) -> np.ndarray:
    """Non-backtracking edge adjacency: ``B[(u,v),(v,y)] = 1`` for ``y != u``."""
    b = np.zeros((es.size, es.size))
    for e, succ in enumerate(es.successors):
        b[e, list(succ)] = 1.0
    return b


def op_P_tilde(es: DirectedEdgeSpace) -> np.ndarray:
    """Transition matrix of the non-backtracking walk on directed edges."""
    deg = es.graph.degrees
    p = np.zeros((es.size, es.size))
    for e, succ in enumerate(es.successors):
        p[e, list(succ)] = 1.0 / (deg[es.target[e]] - 1)
    return p


def op_S(es: DirectedEdgeSpace) -> np.ndarray:
    """Endpoint incidence, ``2m x n``: ``S[(u,v), x] = 1`` iff ``v == x``."""
    s = np.zeros((es.size, es.graph.n))
    s[np.arange(es.size), es.target] = 1.0
    return s


def op_T(es: DirectedEdgeSpace) -> np.ndarray:
    """Start-point incidence, ``n x 2m``: ``T[x, (u,v)] = 1`` iff ``u == x``."""
    t = np.zeros((es.graph.n, es.size))
    t[es.source, np.arange(es.size)] = 1.0
    return t


def op_tau(es: DirectedEdgeSpace) -> np.ndarray:
    """Reversal permutation ``(u,v) <-> (v,u)``."""
    tau = np.zeros((es.size, es.size))
    tau[np.arange(es.size), es.reversal] = 1.0
    return tau


# -- weights -----------------------------------------------------------------------

def unit_weights(g: Graph) -> np.ndarray:
    return np.ones(g.n)


def degree_weights(g: Graph) -> np.ndarray:
    """``w(x) = 1/sqrt(d_x - 1)``, which turns the weighted operator into the walk's P~."""
    return 1.0 / np.sqrt(g.degrees - 1.0)


def check_weights(g: Graph, w) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.shape != (g.n,):
        raise ValueError(f"expected {g.n} weights, got shape {w.shape}")
    if not np.all(np.isfinite(w)) or np.any(w <= 0):
        bad = int(np.flatnonzero(~(np.isfinite(w) & (w > 0)))[0])
        raise NonPositiveWeight(f"weight of vertex {g.labels[bad]!r} is {w[bad]}, must be > 0")
    return w


@dataclass(frozen=True)
class EdgeOperatorSet:
    """All edge-space and vertex-space operators for one weight assignment.

    ``B``, ``tau``, ``S`` and ``T`` are the unweighted 0/1 operators;
    ``P`` is the weighted non-backtracking matrix with entry ``w(b)**2``
    on ``(a,b) -> (b,d)``, ``d != a``.
    """

    weights: np.ndarray
    B: np.ndarray
    P: np.ndarray
    tau: np.ndarray
    tau_w: np.ndarray
    S: np.ndarray
    T: np.ndarray
    S_w: np.ndarray
    T_w: np.ndarray
    A_w: np.ndarray
    D_w: np.ndarray
    A: np.ndarray
    D: np.ndarray


def op_weighted(es: DirectedEdgeSpace, w) -> EdgeOperatorSet:
    g = es.graph
    w = check_weights(g, w)
    w2 = w * w
    B = op_B(es)
    tau = op_tau(es)
    S = op_S(es)
    T = op_T(es)
    W = np.diag(w)
    # Row (a,b) of B and of tau is scaled by w(b)^2.
    head = w2[es.target][:, None]
    P = head * B
    tau_w = head * tau
    A = adjacency_matrix(g)
    A_w = W @ A @ W
    D_w = np.diag(w2 * (A @ w2))
    return EdgeOperatorSet(
        weights=w, B=B, P=P, tau=tau, tau_w=tau_w, S=S, T=T,
        S_w=S @ W, T_w=W @ T, A_w=A_w, D_w=D_w, A=A, D=degree_matrix(g),
    )


# -- identity residuals ----------------------------------------------------------

def default_u_grid(count: int = 21, lo: float = -0.5, hi: float = 0.5) -> np.ndarray:
    return np.linspace(lo, hi, count)


def _maxabs(x: np.ndarray) -> float:
    return float(np.max(np.abs(x))) if x.size else 0.0


@dataclass(frozen=True)
class IdentityReport:
    residuals: dict[str, float]
    u_values: tuple[float, ...]
    skipped_u: tuple[float, ...]
    tolerance: float

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values())

    @property
    def passed(self) -> bool:
        return self.max_residual < self.tolerance


def verify_identities(
    es: DirectedEdgeSpace,
    w,
    u_grid=None,
    *,
    tol: float = DEFAULT_TOLERANCES.operator_residual,
    ops: EdgeOperatorSet | None = None,
) -> IdentityReport:
    """Max-norm residuals of the operator identities linking edge and vertex spaces.

    The u-dependent identities are evaluated on ``u_grid`` (default 21 points
    in [-0.5, 0.5]), skipping any u at which ``I + u*tau_w`` is singular.
    """
    o = ops if ops is not None else op_weighted(es, w)
    size = es.size
    I = np.eye(size)
    In = np.eye(es.graph.n)
    res = {
        "B=ST-tau": _maxabs(o.B - (o.S @ o.T - o.tau)),
        "A=TS": _maxabs(o.A - o.T @ o.S),
        "D=T tau S": _maxabs(o.D - o.T @ o.tau @ o.S),
        "P=S_wT_w-tau_w": _maxabs(o.P - (o.S_w @ o.T_w - o.tau_w)),
        "T_wS_w=WAW": _maxabs(o.T_w @ o.S_w - o.A_w),
        "T_w tau_w S_w=D_w": _maxabs(o.T_w @ o.tau_w @ o.S_w - o.D_w),
    }
    grid = default_u_grid() if u_grid is None else np.asarray(u_grid, dtype=float)
    used, skipped = [], []
    ip, inter = 0.0, 0.0
    st = o.S_w @ o.T_w
    tau2 = o.tau_w @ o.tau_w
    for u in grid:
        if abs(lu_determinant(I + u * o.tau_w)) < 1e-12:
            skipped.append(float(u))
            continue
        used.append(float(u))
        left = (I - u * o.P) @ (I - u * o.tau_w)
        right = (I - u * o.tau_w) @ (I - u * o.P)
        ip = max(
            ip,
            _maxabs(left - (I - u * st + u * u * st @ o.tau_w - u * u * tau2)),
            _maxabs(right - (I - u * st + u * u * o.tau_w @ st - u * u * tau2)),
        )
        core = In - u * o.A_w + u * u * o.D_w
        inter = max(
            inter,
            _maxabs((left + u * u * tau2) @ o.S_w - o.S_w @ core),
            _maxabs(o.T_w @ (right + u * u * tau2) - core @ o.T_w),
        )
    res["(I-uP)(I-u tau_w)"] = ip
    res["intertwining S_w/T_w"] = inter
    return IdentityReport(res, tuple(used), tuple(skipped), tol)
