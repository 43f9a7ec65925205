"""Closed-form non-backtracking spectra for regular and biregular graphs.

For a ``d``-regular graph each adjacency eigenvalue ``lam`` contributes the
two roots of ``(d-1) u^2 - lam u + 1``, and ``+-1/(d-1)`` each appear
``m - n`` times. For a ``(c, d)``-biregular graph each of the ``s`` largest
adjacency eigenvalues contributes the four roots of

    u^4 + (1/(c-1) + 1/(d-1) - lam^2/((c-1)(d-1))) u^2 + 1/((c-1)(d-1)),

together with ``+-((c-1)(d-1))^(-1/2)`` (``m - n`` times each) and
``+-i (d-1)^(-1/2)`` (``r - s`` times each).
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass

import numpy as np

from nbwalk.config import DEFAULT_TOLERANCES
from nbwalk.edgespace import build_edge_space, op_P_tilde
from nbwalk.errors import (
    DegreeTooSmall,
    DimensionOverflow,
    MissingPerron,
    NotBiregular,
    NotRegular,
)
from nbwalk.graph import Graph, adjacency_matrix, classify
from nbwalk.linalg import (
    MAX_GENERAL_DIM,
    ComplexMultiset,
    general_eigenvalues,
    quadratic_roots,
    quartic_even_roots,
    symmetric_eigen,
)


def adjacency_spectrum(g: Graph) -> np.ndarray:
    """Adjacency eigenvalues in descending order."""
    w, _ = symmetric_eigen(adjacency_matrix(g), vectors=False)
    return w[::-1]


def nb_spectrum_regular(g: Graph) -> ComplexMultiset:
    profile = classify(g)
    if profile.kind != "regular":
        raise NotRegular(f"graph is {profile}, not regular")
    d = profile.d
    values: list[complex] = []
    k = g.m - g.n
    values += [complex(1.0 / (d - 1))] * k + [complex(-1.0 / (d - 1))] * k
    for lam in adjacency_spectrum(g):
        values.extend(quadratic_roots(-lam / (d - 1), 1.0 / (d - 1)))
    return ComplexMultiset.from_values(values)


def biregular_quartic(c: int, d: int, lam: float) -> tuple[float, float]:
    """Coefficients ``(p, q)`` of ``u^4 + p u^2 + q`` for adjacency eigenvalue ``lam``."""
    a, b = c - 1, d - 1
    return 1.0 / a + 1.0 / b - lam * lam / (a * b), 1.0 / (a * b)


def nb_spectrum_biregular(g: Graph) -> ComplexMultiset:
    profile = classify(g)
    if profile.kind != "biregular":
        raise NotBiregular(f"graph is {profile}, not biregular")
    c, d, r, s = profile.c, profile.d, profile.r, profile.s
    values: list[complex] = []
    k = g.m - g.n
    real = 1.0 / math.sqrt((c - 1) * (d - 1))
    imag = 1.0 / math.sqrt(d - 1)
    values += [complex(real)] * k + [complex(-real)] * k
    values += [complex(0.0, imag)] * (r - s) + [complex(0.0, -imag)] * (r - s)
    for lam in adjacency_spectrum(g)[:s]:
        values.extend(quartic_even_roots(*biregular_quartic(c, d, lam)))
    return ComplexMultiset.from_values(values)


def nb_spectrum_closed_form(g: Graph) -> ComplexMultiset:
    kind = classify(g).kind
    if kind == "regular":
        return nb_spectrum_regular(g)
    if kind == "biregular":
        return nb_spectrum_biregular(g)
    raise NotRegular("closed-form spectrum needs a regular or biregular graph")


def nb_spectrum_dense(g: Graph) -> ComplexMultiset:
    """Spectrum of P~ computed directly by Hessenberg + Francis QR."""
    if 2 * g.m > MAX_GENERAL_DIM:
        raise DimensionOverflow(f"2m = {2 * g.m} exceeds {MAX_GENERAL_DIM}")
    return general_eigenvalues(op_P_tilde(build_edge_space(g)))


def second_eigenvalue_modulus(
    spec: ComplexMultiset, *, tol: float = DEFAULT_TOLERANCES.perron
) -> tuple[complex, float]:
    """Largest-modulus eigenvalue after removing one copy of the Perron value 1."""
    values = list(spec.values())
    perron = [i for i, z in enumerate(values) if abs(z - 1.0) <= tol]
    if not perron:
        raise MissingPerron("spectrum has no eigenvalue within tolerance of 1")
    values.pop(perron[0])
    if not values:
        return complex(0.0), 0.0
    # values are in canonical order, so max() keeps the first among equal moduli
    best = max(values, key=abs)
    return complex(best), float(abs(best))


@dataclass(frozen=True)
class SpectrumReport:
    closed_form: ComplexMultiset | None
    brute_force: ComplexMultiset | None
    max_distance: float | None
    second: complex
    second_modulus: float
    periodic: bool


def spectrum_report(g: Graph, method: str = "both") -> SpectrumReport:
    closed = nb_spectrum_closed_form(g) if method in ("closed-form", "both") else None
    dense = nb_spectrum_dense(g) if method in ("dense", "both") else None
    dist = closed.max_match_distance(dense) if closed is not None and dense is not None else None
    spec = dense if dense is not None else closed
    mu, mod = second_eigenvalue_modulus(spec)
    return SpectrumReport(closed, dense, dist, mu, mod, periodic=mod > 1.0 - 1e-9)


# -- mixing comparisons --------------------------------------------------------

@dataclass(frozen=True)
class RegularMixingCase:
    d: int
    lam: float
    regime: str  # "real" or "complex"
    mu: complex
    modulus: float
    lower: float  # lam / (2(d-1))
    upper: float  # lam / d, the simple-walk eigenvalue
    bounds_hold: bool


def regular_mixing_comparison(d: int, lam: float) -> RegularMixingCase:
    """Non-backtracking eigenvalue attached to adjacency eigenvalue ``lam`` of a d-regular graph.

    Real regime (``lam >= 2 sqrt(d-1)``): checks
    ``lam/(2(d-1)) < mu <= lam/d``, with equality on the left only at the
    double root ``lam = 2 sqrt(d-1)``. Complex regime: ``|mu| = 1/sqrt(d-1)``.
    """
    if d < 3:
        raise DegreeTooSmall(f"comparison needs d >= 3, got {d}")
    if not 0.0 <= lam <= d:
        raise ValueError(f"lam must lie in [0, {d}], got {lam}")
    mu = quadratic_roots(-lam / (d - 1), 1.0 / (d - 1))[0]
    lower = lam / (2 * (d - 1))
    upper = lam / d
    disc = lam * lam - 4 * (d - 1)
    # rounding at lam = 2 sqrt(d-1) can push the discriminant just below zero
    boundary = abs(disc) <= 16 * sys.float_info.epsilon * lam * lam
    if disc >= 0 or boundary:
        mu_r = mu.real
        if not boundary:
            left = lower < mu_r
        else:
            # a double root is only resolved to about sqrt(machine epsilon)
            left = math.isclose(mu_r, lower, rel_tol=1e-7)
        ok = left and mu_r <= upper * (1 + 1e-12)
        return RegularMixingCase(d, lam, "real", mu, abs(mu), lower, upper, ok)
    mod = abs(mu)
    ok = abs(mod * mod - 1.0 / (d - 1)) < 1e-12
    return RegularMixingCase(d, lam, "complex", mu, mod, lower, upper, ok)


@dataclass(frozen=True)
class BiregularMixingCase:
    c: int
    d: int
    lam: float
    roots: tuple[complex, complex, complex, complex]
    moduli: tuple[float, ...]
    window: tuple[float, float]  # open interval for lam^2
    in_window: bool
    common_modulus: float  # ((c-1)(d-1))^(-1/4)
    single_modulus: bool


def biregular_mixing_comparison(c: int, d: int, lam: float, *, tol: float = 1e-10) -> BiregularMixingCase:
    """Moduli of the four roots tied to adjacency eigenvalue ``lam`` of a (c,d)-biregular graph.

    All four roots share modulus ``((c-1)(d-1))^(-1/4)`` exactly when
    ``(sqrt(c-1) - sqrt(d-1))^2 < lam^2 < (sqrt(c-1) + sqrt(d-1))^2``, i.e.
    when the quadratic in ``u^2`` has a negative discriminant.
    """
    if min(c, d) < 2:
        raise DegreeTooSmall(f"degrees must be at least 2, got c={c}, d={d}")
    if not 0.0 <= lam <= math.sqrt(c * d) * (1 + 1e-12):
        raise ValueError(f"lam must lie in [0, sqrt(cd)], got {lam}")
    roots = quartic_even_roots(*biregular_quartic(c, d, lam))
    lo = (math.sqrt(c - 1) - math.sqrt(d - 1)) ** 2
    hi = (math.sqrt(c - 1) + math.sqrt(d - 1)) ** 2
    common = ((c - 1) * (d - 1)) ** -0.25
    moduli = tuple(sorted({round(abs(z), 12) for z in roots}, reverse=True))
    single = all(abs(abs(z) - common) < tol for z in roots)
    return BiregularMixingCase(
        c, d, lam, roots, moduli, (lo, hi), lo < lam * lam < hi, common, single
    )
