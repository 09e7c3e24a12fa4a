"""First-order descent minimization of the eps-energy over the admissible set.

The zero field is the global minimizer, so meaningful experiments anchor the
iterate either by a quadratic penalty toward a target field or by freezing a
set of spectral modes (mode pinning does not perturb the energy landscape away
from the pins and is preferred for sweeps).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .energy import energy_eps, gradient_eps
from .errors import LineSearchFailure
from .fields import AdmissibleField, GridSpec, TorusField, inner, random_band_limited
from .operators import multiply_dealiased  # noqa: F401  (re-export convenience)

ARMIJO_C = 1e-4
MAX_BACKTRACKS = 60
BB_CLIP = (1e-6, 1e3)


@dataclass(frozen=True)
class AnchorPenalty:
    target: AdmissibleField
    lam: float

    def __post_init__(self):
        if self.lam < 0.0:
            raise ValueError("penalty weight must be >= 0")


@dataclass(frozen=True)
class AnchorPins:
    """Spectral coefficients held fixed: ((m1, m2), value) pairs.

    Conjugate modes are pinned implicitly so the field stays real.
    """

    pins: tuple[tuple[tuple[int, int], complex], ...]


@dataclass(frozen=True)
class MinimizeOptions:
    max_iters: int = 500
    grad_tol: float = 1e-9
    energy_rel_tol: float = 1e-14
    step_rule: str = "barzilai-borwein-safeguarded"
    anchor: AnchorPenalty | AnchorPins | None = None
    initial_step: float = 1.0
    precondition: bool = True

    def __post_init__(self):
        if self.step_rule not in ("backtracking-armijo", "barzilai-borwein-safeguarded"):
            raise ValueError(f"unknown step rule {self.step_rule!r}")
        if self.max_iters < 0 or self.grad_tol <= 0 or self.energy_rel_tol <= 0:
            raise ValueError("tolerances must be positive")


@dataclass
class MinimizeReport:
    iterations: int
    final_energy: object
    grad_norm_history: list[float] = field(default_factory=list)
    energy_history: list[float] = field(default_factory=list)
    termination: str = "max-iters"

    def to_json(self) -> str:
        return json.dumps({
            "iterations": self.iterations,
            "final_energy": self.final_energy.__dict__,
            "grad_norm_history": self.grad_norm_history,
            "energy_history": self.energy_history,
            "termination": self.termination,
        }, indent=2)


# -- gradient validity gate --------------------------------------------------

_GRADIENT_CERTIFICATES: dict[tuple[int, int], bool] = {}


def gradient_certificate(grid: GridSpec, eps: float = 0.0625,
                         tol: float = 1e-5) -> bool:
    """Finite-difference check of the analytic gradient, cached per grid."""
    key = (grid.n1, grid.n2)
    if key in _GRADIENT_CERTIFICATES:
        return _GRADIENT_CERTIFICATES[key]
    kmax = max(2, min(grid.n1, grid.n2) // 8)
    w = random_band_limited(grid, seed=20240, kmax=kmax, amplitude=0.5)
    v = random_band_limited(grid, seed=20241, kmax=kmax, amplitude=0.5)
    t = 1e-5
    plus = energy_eps(_admissible(w + t * v), eps).energy_eps
    minus = energy_eps(_admissible(w + (-t) * v), eps).energy_eps
    numeric = (plus - minus) / (2.0 * t)
    analytic = inner(gradient_eps(w, eps), v)
    ok = abs(numeric - analytic) <= tol * max(abs(numeric), 1e-12)
    _GRADIENT_CERTIFICATES[key] = ok
    return ok


def _admissible(f: TorusField) -> AdmissibleField:
    """Project onto the admissible subspace and filter the outer spectral band
    (|m| > 7n/16) so iterates keep dealiasing headroom."""
    spec = f.spectrum.copy()
    spec[0, :] = 0.0
    m1, m2 = f.grid.modes1(), f.grid.modes2()
    outer = (np.abs(m1) > 7 * f.grid.n1 // 16) | (np.abs(m2) > 7 * f.grid.n2 // 16)
    spec[outer] = 0.0
    return AdmissibleField.from_spectrum(f.grid, spec)


# -- anchoring helpers -------------------------------------------------------

def lowest_mode_pins(w: AdmissibleField, count: int) -> AnchorPins:
    """Pin the `count` admissible modes of smallest |k| at their coefficients
    in w (conjugate pairs counted once, zero values pinned as zero)."""
    m1 = w.grid.modes1() + 0 * w.grid.modes2()
    m2 = w.grid.modes2() + 0 * w.grid.modes1()
    spec = w.spectrum
    entries = []
    for i in range(w.grid.n1):
        for j in range(w.grid.n2):
            a, b = int(m1[i, j]), int(m2[i, j])
            if a == 0:
                continue
            if (a, b) < (-a, -b):
                continue  # keep one representative per conjugate pair
            entries.append((a * a + b * b, (a, b), complex(spec[i, j])))
    entries.sort(key=lambda e: (e[0], e[1]))
    return AnchorPins(pins=tuple((mode, val) for _, mode, val in entries[:count]))


def _pin_indices(grid: GridSpec, pins: AnchorPins) -> list[tuple[int, int, complex]]:
    out = []
    for (a, b), val in pins.pins:
        out.append((a % grid.n1, b % grid.n2, val))
        out.append(((-a) % grid.n1, (-b) % grid.n2, np.conj(val)))
    return out


def _apply_pins(f: AdmissibleField, idx: list[tuple[int, int, complex]]) -> AdmissibleField:
    spec = f.spectrum.copy()
    for i, j, val in idx:
        spec[i, j] = val
    return AdmissibleField.from_spectrum(f.grid, spec)


def _zero_pins(f: AdmissibleField, idx: list[tuple[int, int, complex]]) -> AdmissibleField:
    spec = f.spectrum.copy()
    for i, j, _ in idx:
        spec[i, j] = 0.0
    return AdmissibleField.from_spectrum(f.grid, spec)


# -- descent -----------------------------------------------------------------

def _precondition(g: AdmissibleField, eps: float, step: float) -> AdmissibleField:
    """Semi-implicit damping of the stiff bending modes."""
    k1 = g.grid.k1()
    return AdmissibleField.from_spectrum(g.grid, g.spectrum / (1.0 + step * eps * k1 ** 2))


def descent_step(w: AdmissibleField, g: AdmissibleField, step: float,
                 rule: str, objective, f_w: float,
                 direction: AdmissibleField | None = None):
    """One Armijo-gated step along -direction (default -g).

    Returns (w_next, accepted, step_used, f_next).  A zero gradient is a
    fixed point and counts as accepted.
    """
    d = direction if direction is not None else g
    slope = inner(g, d)
    if slope <= 0.0:
        return w, True, step, f_w
    alpha = step
    for _ in range(MAX_BACKTRACKS):
        cand = _admissible(w + (-alpha) * d)
        f_cand = objective(cand)
        if f_cand <= f_w - ARMIJO_C * alpha * slope:
            return cand, True, alpha, f_cand
        alpha *= 0.5
    return w, False, alpha, f_w


def minimize(w0: AdmissibleField, eps: float, opts: MinimizeOptions
             ) -> tuple[AdmissibleField, MinimizeReport]:
    """Descent on energy_eps (plus optional penalty) from w0.

    Every accepted step decreases the objective; the iterate stays admissible
    and, when pinned, keeps the pinned coefficients bit-fixed.
    """
    if not gradient_certificate(w0.grid):
        raise RuntimeError("gradient finite-difference certificate failed for "
                           f"grid {w0.grid.n1}x{w0.grid.n2}; refusing to run")

    pins_idx = []
    penalty = None
    if isinstance(opts.anchor, AnchorPins):
        pins_idx = _pin_indices(w0.grid, opts.anchor)
        for i, j, val in pins_idx:
            if abs(w0.spectrum[i, j] - val) > 1e-12 * (1.0 + abs(val)):
                raise ValueError("w0 does not satisfy the pinned modes")
    elif isinstance(opts.anchor, AnchorPenalty):
        penalty = opts.anchor

    def objective(w: AdmissibleField) -> float:
        val = energy_eps(w, eps).energy_eps
        if penalty is not None:
            val += penalty.lam * (w - penalty.target).l2() ** 2
        return val

    def gradient(w: AdmissibleField) -> AdmissibleField:
        g = gradient_eps(w, eps)
        if penalty is not None:
            g = _admissible(g + (2.0 * penalty.lam) * (w - penalty.target))
        if pins_idx:
            g = _zero_pins(g, pins_idx)
        return g

    w = _admissible(w0)
    if pins_idx:
        w = _apply_pins(w, pins_idx)
    f_w = objective(w)
    g = gradient(w)
    report = MinimizeReport(iterations=0, final_energy=energy_eps(w, eps),
                            energy_history=[f_w],
                            grad_norm_history=[g.l2()])
    step = opts.initial_step
    prev_w = prev_g = None
    termination = "max-iters"

    for it in range(opts.max_iters):
        gnorm = g.l2()
        if gnorm <= opts.grad_tol:
            termination = "gradient"
            break

        if opts.step_rule == "barzilai-borwein-safeguarded" and prev_w is not None:
            s = w - prev_w
            y = g - prev_g
            sy = inner(_admissible(s), _admissible(y))
            if sy > 0.0:
                bb = inner(_admissible(s), _admissible(s)) / sy
                step = float(np.clip(bb, BB_CLIP[0] * opts.initial_step,
                                     BB_CLIP[1] * opts.initial_step))

        direction = _precondition(g, eps, step) if opts.precondition else g
        if pins_idx:
            direction = _zero_pins(direction, pins_idx)
        prev_w, prev_g = w, g
        w_next, accepted, step_used, f_next = descent_step(
            w, g, step, opts.step_rule, objective, f_w, direction)
        report.iterations = it + 1
        if not accepted:
            # LineSearchFailure: reported, terminates with max-iters status
            report.termination = "max-iters"
            report.final_energy = energy_eps(w, eps)
            raise LineSearchFailure(
                f"no Armijo decrease after {MAX_BACKTRACKS} backtracks at "
                f"iteration {it} (grad norm {gnorm:.3e})")
        stalled = abs(f_w - f_next) <= opts.energy_rel_tol * max(1.0, abs(f_w))
        w, f_w = w_next, f_next
        g = gradient(w)
        report.energy_history.append(f_w)
        report.grad_norm_history.append(g.l2())
        step = step_used if opts.step_rule == "backtracking-armijo" else step
        if stalled:
            termination = "energy-stall"
            break
    report.termination = termination
    report.final_energy = energy_eps(w, eps)
    return w, report
