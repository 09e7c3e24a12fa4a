"""Fourier-multiplier operators and dealiased nonlinearities.

All derivative symbols zero the Nyquist mode so that derivatives of real
fields stay real.  Products are evaluated on zero-padded grids (3/2 rule for
quadratic, factor 2 for cubic terms), which leaves every retained mode
|m| < n/2 alias-free regardless of the input band.
"""

from __future__ import annotations

import numpy as np

from .errors import BandLimitExceeded
from .fields import (AdmissibleField, GridSpec, TorusField, as_admissible,
                     project_vanishing_x1_mean, require_admissible)

#: Relative spectral mass allowed in the outer band (|m| > 7/16 * n) before a
#: nonlinear evaluation is refused as under-resolved.
HEADROOM_TOL = 1e-6


def _nyquist_mask1(grid: GridSpec) -> np.ndarray:
    return grid.modes1() == -grid.n1 // 2


def _nyquist_mask2(grid: GridSpec) -> np.ndarray:
    return grid.modes2() == -grid.n2 // 2


def d1(f: TorusField) -> TorusField:
    """Spectral x1-derivative (symbol i*k1, Nyquist zeroed)."""
    sym = 1j * f.grid.k1()
    sym = np.where(_nyquist_mask1(f.grid), 0.0, sym)
    return type(f).from_spectrum(f.grid, f.spectrum * sym)


def d2(f: TorusField) -> TorusField:
    """Spectral x2-derivative (symbol i*k2, Nyquist zeroed)."""
    sym = 1j * f.grid.k2()
    sym = np.where(_nyquist_mask2(f.grid), 0.0, sym)
    return TorusField.from_spectrum(f.grid, f.spectrum * sym)


def inv_abs_d1(f: TorusField) -> AdmissibleField:
    """|d1|^-1: divide by |k1|, defined only on vanishing-x1-mean input."""
    require_admissible(f)
    k1 = f.grid.k1()
    with np.errstate(divide="ignore"):
        sym = np.where(k1 == 0.0, 0.0, 1.0 / np.abs(k1))
    return AdmissibleField.from_spectrum(f.grid, f.spectrum * sym)


def frac_abs_d1(f: TorusField, s: float) -> AdmissibleField:
    """|d1|^s for s in (0, 1]: multiply by |k1|^s on the admissible subspace."""
    if not 0.0 < s <= 1.0:
        raise ValueError(f"s must lie in (0, 1], got {s}")
    require_admissible(f)
    k1 = f.grid.k1()
    sym = np.where(k1 == 0.0, 0.0, np.abs(k1) ** s)
    return AdmissibleField.from_spectrum(f.grid, f.spectrum * sym)


def _shift(f: TorusField, h: float, axis: int) -> TorusField:
    grid = f.grid
    if axis == 1:
        k, nyq = grid.k1(), _nyquist_mask1(grid)
    else:
        k, nyq = grid.k2(), _nyquist_mask2(grid)
    # cos at Nyquist, full phase elsewhere: keeps real fields real and
    # shift(f, 0) == f exactly
    sym = np.cos(k * h) + 1j * np.where(nyq, 0.0, np.sin(k * h))
    return type(f).from_spectrum(grid, f.spectrum * sym)


def shift1(f: TorusField, h: float) -> TorusField:
    """Translate by h in x1: exact for the trigonometric interpolant at any
    real h, not only grid multiples."""
    return _shift(f, h, axis=1)


def shift2(f: TorusField, h: float) -> TorusField:
    """Translate by h in x2."""
    return _shift(f, h, axis=2)


def diff1(f: TorusField, h: float) -> TorusField:
    """Directional finite difference f(. + h e1) - f."""
    return shift1(f, h) - f


def diff2(f: TorusField, h: float) -> TorusField:
    """Directional finite difference f(. + h e2) - f."""
    return shift2(f, h) - f


def band_headroom_residual(f: TorusField, frac: float = 7.0 / 16.0) -> float:
    """Relative L^2 mass beyond |m1| > frac*n1 or |m2| > frac*n2."""
    norm = f.l2()
    if norm == 0.0:
        return 0.0
    outer = (np.abs(f.grid.modes1()) > frac * f.grid.n1) | \
            (np.abs(f.grid.modes2()) > frac * f.grid.n2)
    return float(np.sqrt(np.sum(np.abs(f.spectrum[outer]) ** 2)) / norm)


def require_band_headroom(f: TorusField, tol: float = HEADROOM_TOL) -> None:
    res = band_headroom_residual(f)
    if res > tol:
        raise BandLimitExceeded(
            f"outer-band spectral mass {res:.3e} exceeds {tol:.1e}; "
            "grid too coarse for alias-controlled products")


def _pad_spectrum(spec: np.ndarray, grid: GridSpec, p1: int, p2: int) -> np.ndarray:
    out = np.zeros((p1, p2), dtype=complex)
    h1, h2 = grid.n1 // 2, grid.n2 // 2
    out[:h1, :h2] = spec[:h1, :h2]
    out[:h1, -h2:] = spec[:h1, -h2:]
    out[-h1:, :h2] = spec[-h1:, :h2]
    out[-h1:, -h2:] = spec[-h1:, -h2:]
    return out


def _truncate_spectrum(spec: np.ndarray, grid: GridSpec) -> np.ndarray:
    p1, p2 = spec.shape
    h1, h2 = grid.n1 // 2, grid.n2 // 2
    out = np.zeros(grid.shape, dtype=complex)
    out[:h1, :h2] = spec[:h1, :h2]
    out[:h1, -h2:] = spec[:h1, -h2:]
    out[-h1:, :h2] = spec[-h1:, :h2]
    out[-h1:, -h2:] = spec[-h1:, -h2:]
    return out


def _even(n: int) -> int:
    return n + (n % 2)


def _padded_product(fields: list[TorusField], factor: float) -> TorusField:
    grid = fields[0].grid
    p1, p2 = _even(int(np.ceil(factor * grid.n1))), _even(int(np.ceil(factor * grid.n2)))
    prod = np.ones((p1, p2))
    scale = (p1 * p2)
    for f in fields:
        padded = _pad_spectrum(f.spectrum, grid, p1, p2)
        prod = prod * np.real(np.fft.ifft2(padded) * scale)
    spec = _truncate_spectrum(np.fft.fft2(prod) / scale, grid)
    return TorusField.from_spectrum(grid, spec)


def multiply_dealiased(f: TorusField, g: TorusField) -> TorusField:
    """Pointwise product on a 3/2 zero-padded grid, truncated back; the
    retained band is alias-free for any input."""
    return _padded_product([f, g], 1.5)


def square_dealiased(f: TorusField) -> TorusField:
    """Alias-free f^2 (3/2-rule zero padding)."""
    require_band_headroom(f)
    return _padded_product([f, f], 1.5)


def cube_dealiased(f: TorusField) -> TorusField:
    """Alias-free f^3 (factor-2 zero padding)."""
    require_band_headroom(f)
    return _padded_product([f, f, f], 2.0)


def eta(w: AdmissibleField) -> AdmissibleField:
    """Burgers quantity eta_w = d2 w - d1(w^2/2).

    Analytically the result has no k1 = 0 content; roundoff there is removed
    by projection (the residual is available via fields.k1zero_residual before
    projecting).
    """
    require_admissible(w)
    raw = d2(w) - 0.5 * d1(square_dealiased(w))
    return project_vanishing_x1_mean(raw)


def eta_with_residual(w: AdmissibleField) -> tuple[AdmissibleField, float]:
    """eta_w together with the relative k1 = 0 residual before projection."""
    from .fields import k1zero_residual
    require_admissible(w)
    raw = d2(w) - 0.5 * d1(square_dealiased(w))
    return project_vanishing_x1_mean(raw), k1zero_residual(raw)
