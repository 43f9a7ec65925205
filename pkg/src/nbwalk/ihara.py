"""Numerical checks of Ihara's determinant identity and its weighted version.

Both sides of each identity are evaluated by LU determinants at sample
points ``u``; a polynomial identity of degree ``k`` is confirmed once it
holds at more than ``k`` distinct points.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from nbwalk.config import DEFAULT_TOLERANCES
from nbwalk.edgespace import EdgeOperatorSet, build_edge_space, default_u_grid, op_weighted
from nbwalk.errors import SingularChangeOfBasis, SingularMatrix
from nbwalk.graph import Graph, adjacency_matrix, degree_matrix
from nbwalk.linalg import inverse, lu_determinant, null_complement_basis


@dataclass(frozen=True)
class IharaSample:
    u: float
    lhs: float
    rhs: float
    residual: float


@dataclass(frozen=True)
class IharaReport:
    samples: tuple[IharaSample, ...]
    tolerance: float = DEFAULT_TOLERANCES.identity_residual

    @property
    def max_residual(self) -> float:
        return max((s.residual for s in self.samples), default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_residual < self.tolerance


def relative_residual(lhs: float, rhs: float) -> float:
    return abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))


def _report(pairs: Iterable[tuple[float, float, float]], tol: float) -> IharaReport:
    samples = [IharaSample(u, a, b, relative_residual(a, b)) for u, a, b in pairs]
    samples.sort(key=lambda s: s.u)
    return IharaReport(tuple(samples), tol)


def unweighted_check(
    g: Graph,
    u_samples=None,
    *,
    tol: float = DEFAULT_TOLERANCES.identity_residual,
    B: np.ndarray | None = None,
) -> IharaReport:
    """Compare ``det(I - uB)`` with ``(1-u^2)^(m-n) det(I - uA + u^2 (D - I))``."""
    us = default_u_grid() if u_samples is None else np.asarray(u_samples, dtype=float)
    es = build_edge_space(g)
    if B is None:
        B = op_weighted(es, np.ones(g.n)).B
    A = adjacency_matrix(g)
    D = degree_matrix(g)
    I2m = np.eye(es.size)
    In = np.eye(g.n)
    pairs = []
    for u in us:
        u = float(u)
        lhs = lu_determinant(I2m - u * B)
        rhs = (1.0 - u * u) ** (g.m - g.n) * lu_determinant(In - u * A + u * u * (D - In))
        pairs.append((u, lhs, rhs))
    return _report(pairs, tol)


def weighted_sides(ops: EdgeOperatorSet, u: float) -> tuple[float, float]:
    """Left and right determinants of the weighted identity at one ``u``."""
    size = ops.P.shape[0]
    I = np.eye(size)
    In = np.eye(ops.A_w.shape[0])
    tau2 = ops.tau_w @ ops.tau_w
    lhs = lu_determinant((I - u * ops.P) @ (I - u * ops.tau_w) + u * u * tau2)
    rhs = lu_determinant(In - u * ops.A_w + u * u * ops.D_w)
    return lhs, rhs


def weighted_check(
    g: Graph,
    w,
    u_samples=None,
    *,
    tol: float = DEFAULT_TOLERANCES.identity_residual,
    ops: EdgeOperatorSet | None = None,
) -> IharaReport:
    """Compare ``det((I-uP)(I-u tau_w) + u^2 tau_w^2)`` with ``det(I - u A_w + u^2 D_w)``."""
    us = default_u_grid() if u_samples is None else np.asarray(u_samples, dtype=float)
    if ops is None:
        ops = op_weighted(build_edge_space(g), w)
    pairs = []
    for u in us:
        lhs, rhs = weighted_sides(ops, float(u))
        pairs.append((float(u), lhs, rhs))
    return _report(pairs, tol)


@dataclass(frozen=True)
class DecompositionReport:
    u: float
    lower_left: float
    lower_right: float
    upper_left: float
    upper_right: float
    inverse_formula: float
    tolerance: float = DEFAULT_TOLERANCES.identity_residual

    @property
    def max_residual(self) -> float:
        return max(
            self.lower_left, self.lower_right, self.upper_left,
            self.upper_right, self.inverse_formula,
        )

    @property
    def passed(self) -> bool:
        return self.max_residual < self.tolerance


def change_of_basis(ops: EdgeOperatorSet) -> tuple[np.ndarray, np.ndarray]:
    """``M = [S_w R]`` with ``R`` an orthonormal basis of ker ``S_w^T``."""
    R = null_complement_basis(ops.S_w)
    return np.hstack([ops.S_w, R]), R


def decomposition_check(
    g: Graph,
    w,
    u: float,
    *,
    tol: float = DEFAULT_TOLERANCES.identity_residual,
    ops: EdgeOperatorSet | None = None,
) -> DecompositionReport:
    """Block structure of the weighted operator in the basis ``[S_w R]``.

    ``M^{-1} X M`` with ``X = (I-uP)(I-u tau_w) + u^2 tau_w^2`` must be block
    upper triangular: zero lower-left block, identity lower-right block, and
    upper-left block ``I - u A_w + u^2 D_w``. The upper-right block is
    compared with ``-u T_w R + u^2 T_w tau_w R``, and the explicit left
    inverse ``[(S_w^T S_w)^{-1} S_w^T ; (R^T R)^{-1} R^T]`` is checked against
    the directly computed inverse.
    """
    if ops is None:
        ops = op_weighted(build_edge_space(g), w)
    n = ops.A_w.shape[0]
    size = ops.P.shape[0]
    M, R = change_of_basis(ops)
    try:
        Minv = inverse(M)
    except SingularMatrix as exc:
        raise SingularChangeOfBasis(str(exc)) from exc
    I = np.eye(size)
    tau2 = ops.tau_w @ ops.tau_w
    X = (I - u * ops.P) @ (I - u * ops.tau_w) + u * u * tau2
    Y = Minv @ X @ M
    core = np.eye(n) - u * ops.A_w + u * u * ops.D_w
    top_right = -u * ops.T_w @ R + u * u * ops.T_w @ ops.tau_w @ R

    Sw = ops.S_w
    explicit = np.vstack([inverse(Sw.T @ Sw) @ Sw.T, inverse(R.T @ R) @ R.T])

    def dev(x: np.ndarray) -> float:
        return float(np.max(np.abs(x))) if x.size else 0.0

    return DecompositionReport(
        u=float(u),
        lower_left=dev(Y[n:, :n]),
        lower_right=dev(Y[n:, n:] - np.eye(size - n)),
        upper_left=dev(Y[:n, :n] - core),
        upper_right=dev(Y[:n, n:] - top_right),
        inverse_formula=max(dev(explicit @ M - I), dev(explicit - Minv)),
        tolerance=tol,
    )
