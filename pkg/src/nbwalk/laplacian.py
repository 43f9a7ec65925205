"""Normalized Laplacian, the symmetrized non-backtracking Laplacian, and Rayleigh quotients."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from nbwalk.edgespace import DirectedEdgeSpace, build_edge_space, op_P_tilde
from nbwalk.graph import Graph, adjacency_matrix
from nbwalk.linalg import symmetric_eigen


def normalized_laplacian(g: Graph) -> np.ndarray:
    """``I - D^{-1/2} A D^{-1/2}``."""
    s = 1.0 / np.sqrt(g.degrees.astype(float))
    return np.eye(g.n) - s[:, None] * adjacency_matrix(g) * s[None, :]


def nb_directed_laplacian(g: Graph) -> np.ndarray:
    """``I - (P~ + P~^T)/2`` on directed edges.

    P~ is doubly stochastic, so its Perron vector is constant and the
    general directed-graph Laplacian reduces to this form.
    """
    p = op_P_tilde(build_edge_space(g))
    return np.eye(p.shape[0]) - 0.5 * (p + p.T)


def rayleigh(lap: np.ndarray, f: np.ndarray) -> float:
    f = np.asarray(f, dtype=float)
    denom = float(f @ f)
    if denom == 0.0:
        raise ValueError("Rayleigh quotient of the zero vector")
    return float(f @ lap @ f) / denom


def rayleigh_edge_form(g: Graph, f: np.ndarray, es: DirectedEdgeSpace | None = None) -> float:
    """Edge-difference form ``1/2 sum (f(u,v) - f(v,w))^2 P~((u,v),(v,w)) / sum f^2``."""
    es = es or build_edge_space(g)
    f = np.asarray(f, dtype=float)
    denom = float(f @ f)
    if denom == 0.0:
        raise ValueError("Rayleigh quotient of the zero vector")
    deg = g.degrees
    num = 0.0
    for e, succ in enumerate(es.successors):
        weight = 1.0 / (deg[es.target[e]] - 1)
        for s in succ:
            num += (f[e] - f[s]) ** 2 * weight
    return 0.5 * num / denom


def vertex_rayleigh(g: Graph, f: np.ndarray) -> float:
    """``sum_{uv in E} (f(u) - f(v))^2 / sum_v f(v)^2 d_v``."""
    f = np.asarray(f, dtype=float)
    denom = float(np.sum(f * f * g.degrees))
    if denom == 0.0:
        raise ValueError("Rayleigh quotient of the zero vector")
    return sum((f[u] - f[v]) ** 2 for u, v in g.edges()) / denom


def lift_function(g: Graph, f: np.ndarray, es: DirectedEdgeSpace | None = None) -> np.ndarray:
    """Edge function ``f'(u, v) = f(u)``."""
    es = es or build_edge_space(g)
    return np.asarray(f, dtype=float)[es.source]


def lambda1_minimizer(g: Graph) -> tuple[float, np.ndarray]:
    """``lambda_1`` of the normalized Laplacian and a minimizer ``f`` with ``f . D1 = 0``.

    ``f = D^{-1/2} phi`` for the eigenvector ``phi`` of ``lambda_1``.
    """
    w, v = symmetric_eigen(normalized_laplacian(g))
    return float(w[1]), v[:, 1] / np.sqrt(g.degrees)


@dataclass(frozen=True)
class LaplacianPair:
    L: np.ndarray
    L_nb: np.ndarray
    lambda1: float
    lambda1_nb: float
    chung_bound: float
    inequality_ok: bool


def compare_lambda1(g: Graph, *, tol: float = 1e-9) -> LaplacianPair:
    """Second-smallest eigenvalues of both Laplacians and ``2 log vol(G) / lambda_1(L~)``."""
    L = normalized_laplacian(g)
    Lnb = nb_directed_laplacian(g)
    lam = float(symmetric_eigen(L, vectors=False)[0][1])
    lam_nb = float(symmetric_eigen(Lnb, vectors=False)[0][1])
    bound = 2.0 * math.log(g.volume) / lam_nb if lam_nb > tol else math.inf
    return LaplacianPair(L, Lnb, lam, lam_nb, bound, lam_nb <= lam + tol)
