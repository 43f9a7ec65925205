"""Dense numerical kernel: determinants, eigenvalues, null spaces, polynomial roots.

Everything here works on small dense ``numpy`` arrays (a few hundred rows at
most). Algorithms are written out rather than delegated to LAPACK so the
eigenvalue oracle stays independent of the closed-form spectra it checks.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from nbwalk.config import DEFAULT_TOLERANCES
from nbwalk.errors import NoConvergence, NotSymmetric, RankDeficient, SingularMatrix

MAX_GENERAL_DIM = 512


# -- LU ------------------------------------------------------------------------

@dataclass(frozen=True)
class LUFactors:
    lu: np.ndarray
    perm: np.ndarray
    sign: float
    singular: bool


def lu_factor(M: np.ndarray) -> LUFactors:
    """Row-pivoted LU with ``P M = L U`` packed into one array."""
    a = np.array(M, dtype=float, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    perm = np.arange(n)
    sign = 1.0
    singular = False
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if p != k:
            a[[k, p]] = a[[p, k]]
            perm[[k, p]] = perm[[p, k]]
            sign = -sign
        pivot = a[k, k]
        if pivot == 0.0:
            singular = True
            continue
        a[k + 1:, k] /= pivot
        a[k + 1:, k + 1:] -= np.outer(a[k + 1:, k], a[k, k + 1:])
    return LUFactors(a, perm, sign, singular)


def lu_determinant(M: np.ndarray) -> float:
    f = lu_factor(M)
    if f.singular:
        return 0.0
    return f.sign * float(np.prod(np.diag(f.lu)))


def lu_solve(f: LUFactors, b: np.ndarray) -> np.ndarray:
    if f.singular:
        raise SingularMatrix("matrix is singular")
    x = np.array(b, dtype=float)[f.perm]
    n = f.lu.shape[0]
    for k in range(n):
        x[k + 1:] -= np.multiply.outer(f.lu[k + 1:, k], x[k])
    for k in range(n - 1, -1, -1):
        x[k] = (x[k] - f.lu[k, k + 1:] @ x[k + 1:]) / f.lu[k, k]
    return x


def inverse(M: np.ndarray, rcond: float = 1e-13) -> np.ndarray:
    f = lu_factor(M)
    diag = np.abs(np.diag(f.lu))
    if f.singular or diag.min() <= rcond * max(1.0, diag.max()):
        raise SingularMatrix("matrix is numerically singular")
    return lu_solve(f, np.eye(f.lu.shape[0]))


# -- symmetric eigenproblem (Jacobi) -----------------------------------------------

def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Tournament schedule: n - 1 rounds of disjoint index pairs covering all pairs."""
    size = n + (n % 2)
    players = list(range(size))
    rounds = []
    for _ in range(size - 1):
        ps, qs = [], []
        for i in range(size // 2):
            a, b = players[i], players[size - 1 - i]
            if a < n and b < n:
                ps.append(min(a, b))
                qs.append(max(a, b))
        rounds.append((np.array(ps, dtype=int), np.array(qs, dtype=int)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def symmetric_eigen(
    M: np.ndarray,
    *,
    symmetry_tol: float = DEFAULT_TOLERANCES.symmetry,
    offdiag_tol: float = DEFAULT_TOLERANCES.jacobi_offdiag,
    max_sweeps: int = 100,
    vectors: bool = True,
) -> tuple[np.ndarray, np.ndarray | None]:
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Each sweep visits every off-diagonal pair once, in tournament order, so
    that the rotations of one round touch disjoint index pairs and can be
    applied together. Sweeps stop once the Frobenius norm of the off-diagonal
    part falls below ``offdiag_tol * max(1, ||M||_F)``.

    Returns eigenvalues in ascending order and the matching orthonormal
    eigenvectors as columns (None when ``vectors`` is false).
    """
    a = np.array(M, dtype=float, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    asym = float(np.max(np.abs(a - a.T))) if n else 0.0
    if asym > symmetry_tol * max(1.0, float(np.max(np.abs(a))) if n else 1.0):
        raise NotSymmetric(f"matrix is not symmetric (max |M - M^T| = {asym:.3e})")
    a = 0.5 * (a + a.T)
    v = np.eye(n)
    if n <= 1:
        return np.diag(a).copy(), (v if vectors else None)
    limit = offdiag_tol * max(1.0, float(np.linalg.norm(a)))
    rounds = _round_robin(n)
    for _ in range(max_sweeps):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off < limit:
            break
        for p, q in rounds:
            apq = a[p, q]
            active = apq != 0.0
            if not active.any():
                continue
            p, q, apq = p[active], q[active], apq[active]
            theta = (a[q, q] - a[p, p]) / (2.0 * apq)
            big = np.abs(theta) > 1e150
            th = np.where(big, 1.0, theta)
            t = np.where(th >= 0, 1.0, -1.0) / (np.abs(th) + np.sqrt(th * th + 1.0))
            t = np.where(big, 0.5 / np.where(big, theta, 1.0), t)
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            cols_p, cols_q = a[:, p].copy(), a[:, q].copy()
            a[:, p] = c * cols_p - s * cols_q
            a[:, q] = s * cols_p + c * cols_q
            rows_p, rows_q = a[p, :].copy(), a[q, :].copy()
            a[p, :] = c[:, None] * rows_p - s[:, None] * rows_q
            a[q, :] = s[:, None] * rows_p + c[:, None] * rows_q
            if vectors:
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    else:
        raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], (v[:, order] if vectors else None)


# -- general eigenproblem (Hessenberg + Francis QR) --------------------------------

def hessenberg(M: np.ndarray) -> np.ndarray:
    """Upper Hessenberg form similar to ``M`` via Householder reflections."""
    h = np.array(M, dtype=float, copy=True)
    n = h.shape[0]
    for k in range(n - 2):
        x = h[k + 1:, k].copy()
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        if x[0] > 0:
            alpha = -alpha
        x[0] -= alpha
        norm = np.linalg.norm(x)
        if norm == 0.0:
            continue
        u = x / norm
        h[k + 1:, k:] -= 2.0 * np.outer(u, u @ h[k + 1:, k:])
        h[:, k + 1:] -= 2.0 * np.outer(h[:, k + 1:] @ u, u)
        h[k + 2:, k] = 0.0
    return h


def _francis_qr(a: np.ndarray, max_iter: int) -> list[complex]:
    """Eigenvalues of an upper Hessenberg matrix, destroying ``a``.

    Implicit double-shift QR with deflation on negligible subdiagonal
    entries and ad hoc exceptional shifts after 10 and 20 stalled iterations.
    """
    n = a.shape[0]
    wr = np.zeros(n)
    wi = np.zeros(n)
    anorm = float(np.sum(np.abs(np.triu(a, -1))))
    nn = n - 1
    t = 0.0
    while nn >= 0:
        its = 0
        while True:
            l = nn
            while l >= 1:
                s = abs(a[l - 1, l - 1]) + abs(a[l, l])
                if s == 0.0:
                    s = anorm
                if abs(a[l, l - 1]) + s == s:
                    a[l, l - 1] = 0.0
                    break
                l -= 1
            x = a[nn, nn]
            if l == nn:
                wr[nn], wi[nn] = x + t, 0.0
                nn -= 1
                break
            y = a[nn - 1, nn - 1]
            w = a[nn, nn - 1] * a[nn - 1, nn]
            if l == nn - 1:
                p = 0.5 * (y - x)
                q = p * p + w
                z = math.sqrt(abs(q))
                x += t
                if q >= 0.0:
                    z = p + math.copysign(z, p)
                    wr[nn - 1] = wr[nn] = x + z
                    if z != 0.0:
                        wr[nn] = x - w / z
                    wi[nn - 1] = wi[nn] = 0.0
                else:
                    wr[nn - 1] = wr[nn] = x + p
                    wi[nn - 1], wi[nn] = z, -z
                nn -= 2
                break
            if its == max_iter:
                raise NoConvergence(f"QR iteration stalled after {max_iter} steps")
            if its in (10, 20):
                t += x
                idx = np.arange(nn + 1)
                a[idx, idx] -= x
                s = abs(a[nn, nn - 1]) + abs(a[nn - 1, nn - 2])
                x = y = 0.75 * s
                w = -0.4375 * s * s
            its += 1
            m = nn - 2
            while m >= l:
                z = a[m, m]
                r = x - z
                s = y - z
                p = (r * s - w) / a[m + 1, m] + a[m, m + 1]
                q = a[m + 1, m + 1] - z - r - s
                r = a[m + 2, m + 1]
                s = abs(p) + abs(q) + abs(r)
                p, q, r = p / s, q / s, r / s
                if m == l:
                    break
                u = abs(a[m, m - 1]) * (abs(q) + abs(r))
                v = abs(p) * (abs(a[m - 1, m - 1]) + abs(z) + abs(a[m + 1, m + 1]))
                if u + v == v:
                    break
                m -= 1
            for i in range(m + 2, nn + 1):
                a[i, i - 2] = 0.0
                if i != m + 2:
                    a[i, i - 3] = 0.0
            for k in range(m, nn):
                if k != m:
                    p = a[k, k - 1]
                    q = a[k + 1, k - 1]
                    r = a[k + 2, k - 1] if k != nn - 1 else 0.0
                    x = abs(p) + abs(q) + abs(r)
                    if x != 0.0:
                        p, q, r = p / x, q / x, r / x
                s = math.copysign(math.sqrt(p * p + q * q + r * r), p)
                if s == 0.0:
                    continue
                if k == m:
                    if l != m:
                        a[k, k - 1] = -a[k, k - 1]
                else:
                    a[k, k - 1] = -s * x
                p += s
                x, y, z = p / s, q / s, r / s
                q, r = q / p, r / p
                cols = slice(k, nn + 1)
                row = a[k, cols] + q * a[k + 1, cols]
                if k != nn - 1:
                    row = row + r * a[k + 2, cols]
                    a[k + 2, cols] -= row * z
                a[k + 1, cols] -= row * y
                a[k, cols] -= row * x
                rows = slice(l, min(nn, k + 3) + 1)
                col = x * a[rows, k] + y * a[rows, k + 1]
                if k != nn - 1:
                    col = col + z * a[rows, k + 2]
                    a[rows, k + 2] -= col * r
                a[rows, k + 1] -= col * q
                a[rows, k] -= col
    return [complex(re, im) for re, im in zip(wr, wi)]


def general_eigenvalues(
    M: np.ndarray,
    *,
    cluster_tol: float = DEFAULT_TOLERANCES.eigen_cluster,
    max_iter: int = 60,
) -> "ComplexMultiset":
    """All eigenvalues of a real square matrix as a multiset.

    No balancing is applied; inputs are expected to have O(1) entries.
    """
    a = np.asarray(M, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] > MAX_GENERAL_DIM:
        raise ValueError(f"dimension {a.shape[0]} exceeds {MAX_GENERAL_DIM}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    values = _francis_qr(hessenberg(a), max_iter) if a.shape[0] else []
    return ComplexMultiset.from_values(values, tol=cluster_tol)


# -- multisets of complex numbers -------------------------------------------------

def _key(z: complex) -> tuple[float, float]:
    return (z.real, z.imag)


@dataclass(frozen=True)
class ComplexMultiset:
    """Complex values with multiplicities, ordered by real then imaginary part."""

    items: tuple[tuple[complex, int], ...]

    @classmethod
    def from_values(
        cls, values: Iterable[complex], tol: float = DEFAULT_TOLERANCES.eigen_cluster
    ) -> "ComplexMultiset":
        clusters: list[list[complex]] = []
        for z in sorted((complex(v) for v in values), key=_key):
            for members in clusters:
                if abs(members[0] - z) <= tol:
                    members.append(z)
                    break
            else:
                clusters.append([z])
        items = [(complex(np.mean(c)), len(c)) for c in clusters]
        items.sort(key=lambda it: _key(it[0]))
        return cls(tuple(items))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[complex, int]]) -> "ComplexMultiset":
        values: list[complex] = []
        for z, k in pairs:
            if k < 1:
                raise ValueError("multiplicities must be at least 1")
            values.extend([complex(z)] * int(k))
        return cls.from_values(values, tol=0.0)

    def __len__(self) -> int:
        return sum(k for _, k in self.items)

    def __iter__(self):
        return iter(self.items)

    def values(self) -> np.ndarray:
        """Expanded values (each repeated by its multiplicity) in canonical order."""
        out = [z for z, k in self.items for _ in range(k)]
        return np.array(out, dtype=complex)

    def count_near(self, target: complex, tol: float) -> int:
        return sum(k for z, k in self.items if abs(z - target) <= tol)

    def max_match_distance(self, other: "ComplexMultiset") -> float:
        """Largest distance in a greedy nearest-neighbour pairing of the two multisets."""
        mine, theirs = self.values(), other.values()
        if len(mine) != len(theirs):
            return math.inf
        used = np.zeros(len(theirs), dtype=bool)
        worst = 0.0
        for z in mine:
            d = np.abs(theirs - z)
            d[used] = np.inf
            j = int(np.argmin(d))
            used[j] = True
            worst = max(worst, float(d[j]))
        return worst


# -- null space -------------------------------------------------------------------

def null_complement_basis(
    M: np.ndarray, *, drop_tol: float = DEFAULT_TOLERANCES.null_drop
) -> np.ndarray:
    """Orthonormal basis of the kernel of ``M.T`` as the columns of ``R``.

    ``M`` must have full column rank. Standard basis vectors are
    orthogonalised (two Gram-Schmidt passes) against the column space of
    ``M`` and the basis built so far; those with residual norm below
    ``drop_tol`` are skipped.
    """
    M = np.asarray(M, dtype=float)
    rows, cols = M.shape
    if cols > rows:
        raise RankDeficient(f"{cols} columns cannot be independent in dimension {rows}")
    q = np.zeros((rows, 0))
    for j in range(cols):
        v = M[:, j].copy()
        scale = max(np.linalg.norm(v), 1e-300)
        for _ in range(2):
            v -= q @ (q.T @ v)
        if np.linalg.norm(v) <= drop_tol * scale:
            raise RankDeficient(f"column {j} is linearly dependent on earlier columns")
        q = np.column_stack([q, v / np.linalg.norm(v)])
    basis = q
    out = []
    for i in range(rows):
        if len(out) == rows - cols:
            break
        v = np.zeros(rows)
        v[i] = 1.0
        for _ in range(2):
            v -= basis @ (basis.T @ v)
        norm = np.linalg.norm(v)
        if norm > drop_tol:
            v /= norm
            out.append(v)
            basis = np.column_stack([basis, v])
    if len(out) != rows - cols:
        raise RankDeficient("could not complete the complement basis")
    return np.column_stack(out) if out else np.zeros((rows, 0))


# -- closed-form roots ------------------------------------------------------------

def quadratic_roots(b: float, c: float) -> tuple[complex, complex]:
    """Roots of ``u**2 + b*u + c``; complex roots come back as an exact conjugate pair."""
    disc = b * b - 4.0 * c
    if disc >= 0.0:
        q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
        if q == 0.0:
            return complex(0.0), complex(0.0)
        r1, r2 = q, c / q
        return complex(max(r1, r2)), complex(min(r1, r2))
    re = -0.5 * b
    im = 0.5 * math.sqrt(-disc)
    return complex(re, im), complex(re, -im)


def quartic_even_roots(p: float, q: float) -> tuple[complex, complex, complex, complex]:
    """Roots of ``u**4 + p*u**2 + q``: plus/minus square roots of the quadratic's roots."""
    z1, z2 = quadratic_roots(p, q)
    s1 = cmath.sqrt(z1)
    if z1.imag != 0.0 and z2 == z1.conjugate():
        s2 = s1.conjugate()
    else:
        s2 = cmath.sqrt(z2)
    return s1, -s1, s2, -s2


def multiset_from_roots(roots: Sequence[complex], tol: float = 0.0) -> ComplexMultiset:
    return ComplexMultiset.from_values(roots, tol=tol)
