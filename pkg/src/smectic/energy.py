"""Compression/bending energy of periodic fields and its L^2 gradient.

For an admissible field w the energy at layer-scale eps is

    energy_eps = ( compression / eps + eps * bending ) / 2

with compression = || |d1|^-1 (d2 w - d1 w^2/2) ||^2 and bending = ||d1 w||^2.
The eps-independent value sqrt(compression * bending) is the minimum of
energy_eps over eps > 0 (AM-GM).
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

from .fields import AdmissibleField, inner, project_vanishing_x1_mean
from .operators import d1, d2, eta_with_residual, inv_abs_d1, multiply_dealiased


@dataclass(frozen=True)
class EnergyReport:
    compression: float
    bending: float
    eps: float
    energy_eps: float
    energy_indep: float
    eta_k1zero_residual: float

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)


def energy_eps(w: AdmissibleField, eps: float) -> EnergyReport:
    """Evaluate the eps-energy of w with all diagnostics."""
    if eps <= 0.0:
        raise ValueError(f"eps must be positive, got {eps}")
    e, residual = eta_with_residual(w)
    compression = inv_abs_d1(e).l2() ** 2
    bending = d1(w).l2() ** 2
    return EnergyReport(
        compression=compression,
        bending=bending,
        eps=eps,
        energy_eps=0.5 * (compression / eps + eps * bending),
        energy_indep=(compression * bending) ** 0.5,
        eta_k1zero_residual=residual,
    )


def energy_indep(w: AdmissibleField) -> float:
    """sqrt(compression * bending) = min over eps > 0 of energy_eps."""
    return energy_eps(w, 1.0).energy_indep


def gradient_eps(w: AdmissibleField, eps: float) -> AdmissibleField:
    """L^2 gradient of energy_eps at w, projected onto the admissible subspace.

    Derived from the adjoint of the linearization
    d/dt eta(w + t v)|_0 = d2 v - d1(w v):

        g = (1/eps) * (-d2 G + w * d1 G) - eps * d11 w,   G = |d1|^-2 eta_w.

    Validated against central finite differences of energy_eps (see the test
    suite); do not modify one without the other.
    """
    if eps <= 0.0:
        raise ValueError(f"eps must be positive, got {eps}")
    e, _ = eta_with_residual(w)
    big_g = inv_abs_d1(inv_abs_d1(e))
    compression_part = multiply_dealiased(w, d1(big_g)) - d2(big_g)
    g = (1.0 / eps) * compression_part - eps * d1(d1(w))
    return project_vanishing_x1_mean(g)


def directional_derivative(w: AdmissibleField, v: AdmissibleField, eps: float) -> float:
    """<gradient_eps(w), v> - convenience pairing used by solver and tests."""
    return inner(gradient_eps(w, eps), v)
