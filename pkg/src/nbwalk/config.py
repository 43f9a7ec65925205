"""Numerical tolerances shared by every check in the package."""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    symmetry: float = 1e-12
    jacobi_offdiag: float = 1e-12
    identity_residual: float = 1e-9
    operator_residual: float = 1e-10
    eigen_cluster: float = 1e-8
    spectrum_match: float = 1e-6
    null_drop: float = 1e-10
    perron: float = 1e-9
    distribution_sum: float = 1e-12

    def override(self, **changes: float) -> "Tolerances":
        for key, value in changes.items():
            if value <= 0:
                raise ValueError(f"tolerance {key} must be positive, got {value}")
        return replace(self, **changes)


DEFAULT_TOLERANCES = Tolerances()
