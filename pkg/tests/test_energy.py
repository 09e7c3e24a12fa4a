import json

import numpy as np
import pytest

from smectic.energy import (directional_derivative, energy_eps, energy_indep,
                            gradient_eps)
from smectic.fields import (AdmissibleField, GridSpec, as_admissible, inner,
                            random_band_limited)

GRID = GridSpec(128, 128)


def sine1(grid, a=1.0):
    return AdmissibleField.from_samples(
        grid, np.repeat(a * np.sin(2 * np.pi * grid.x1()), grid.n2, axis=1))


class TestClosedForms:
    @pytest.mark.parametrize("a", [0.5, 1.0, 2.0])
    @pytest.mark.parametrize("eps", [1.0 / 16.0, 1.0 / 64.0])
    def test_single_mode(self, a, eps):
        rep = energy_eps(sine1(GRID, a), eps)
        assert rep.compression == pytest.approx(a ** 4 / 32.0, rel=1e-12)
        assert rep.bending == pytest.approx(2 * np.pi ** 2 * a ** 2, rel=1e-12)
        assert rep.energy_eps == pytest.approx(
            a ** 4 / (64.0 * eps) + np.pi ** 2 * a ** 2 * eps, rel=1e-10)
        assert rep.energy_indep == pytest.approx(np.pi * a ** 3 / 4.0, rel=1e-10)

    def test_zero_field(self):
        rep = energy_eps(AdmissibleField.zero(GRID), 0.1)
        assert rep.energy_eps == 0.0
        assert rep.energy_indep == 0.0

    def test_indep_is_min_over_eps(self):
        w = random_band_limited(GRID, seed=1, kmax=16, amplitude=0.5)
        e_star = energy_indep(w)
        for eps in np.geomspace(1e-3, 1.0, 25):
            assert energy_eps(w, eps).energy_eps >= e_star * (1 - 1e-12)
        rep = energy_eps(w, 1.0)
        eps_opt = np.sqrt(rep.compression / rep.bending)
        assert energy_eps(w, eps_opt).energy_eps == pytest.approx(e_star, rel=1e-12)

    def test_eps_validation(self):
        with pytest.raises(ValueError):
            energy_eps(sine1(GRID), 0.0)
        with pytest.raises(ValueError):
            gradient_eps(sine1(GRID), -1.0)

    def test_report_json(self):
        rep = energy_eps(sine1(GRID), 0.25)
        data = json.loads(rep.to_json())
        assert data["eps"] == 0.25
        assert data["eta_k1zero_residual"] <= 1e-12


class TestGradient:
    @pytest.mark.parametrize("eps", [1.0 / 16.0, 1.0 / 64.0])
    def test_matches_central_differences(self, eps):
        w = random_band_limited(GRID, seed=2, kmax=16, amplitude=0.5)
        v = random_band_limited(GRID, seed=3, kmax=16, amplitude=0.5)
        t = 1e-5
        plus = energy_eps(as_admissible(w + t * v), eps).energy_eps
        minus = energy_eps(as_admissible(w + (-t) * v), eps).energy_eps
        numeric = (plus - minus) / (2 * t)
        analytic = directional_derivative(w, v, eps)
        assert analytic == pytest.approx(numeric, rel=1e-5)

    def test_single_mode_pairing(self):
        # <g, w> for w = a sin(2 pi x1): a^4/(16 eps) + 2 pi^2 a^2 eps
        a, eps = 0.9, 0.125
        w = sine1(GRID, a)
        val = inner(gradient_eps(w, eps), w)
        assert val == pytest.approx(a ** 4 / (16 * eps) + 2 * np.pi ** 2 * a ** 2 * eps,
                                    rel=1e-10)

    def test_gradient_is_admissible(self):
        w = random_band_limited(GRID, seed=4, kmax=16, amplitude=0.5)
        g = gradient_eps(w, 0.1)
        assert np.all(g.spectrum[0, :] == 0.0)

    def test_zero_at_origin(self):
        g = gradient_eps(AdmissibleField.zero(GRID), 0.1)
        assert g.l2() == 0.0
