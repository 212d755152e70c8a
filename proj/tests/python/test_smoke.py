# Copyright 2026 The adiaerr Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import numpy as np
import pytest

import adiaerr


def test_version():
    assert adiaerr.__version__ == adiaerr.version()
    assert adiaerr.version()


def test_hamiltonian_is_symmetric_and_matches_spectrum():
    h = adiaerr.hamiltonian("zzxz", 6, 1.0, 1.0, 0.5)
    assert h.shape == (64, 64)
    assert np.allclose(h, h.T)
    e0 = np.linalg.eigvalsh(h)[0]
    assert math.isclose(adiaerr.ground_energy_exact("zzxz", 6, 1.0, 1.0, 0.5), e0, abs_tol=1e-10)


def test_field_only_chain():
    # H = -sum X has ground energy -n on both the dense and the mps path.
    assert math.isclose(adiaerr.ground_energy_exact("zzxz", 8, 0.0, 1.0, 0.0), -8.0, abs_tol=1e-12)
    assert math.isclose(adiaerr.ground_energy_mps("zzxz", 8, 0.0, 1.0, 0.0), -8.0, abs_tol=1e-8)
    assert math.isclose(adiaerr.energy_jump("zzxz", 6, 0.0, 1.0, 0.0, 3, "Y"), 2.0, abs_tol=1e-12)


def test_freefermion_ground_matches_dense():
    e_ff = adiaerr.ground_energy_freefermion(8, 1.3, 1.0)
    e_ex = adiaerr.ground_energy_exact("zzxz", 8, 1.3, 1.0, 0.0)
    assert math.isclose(e_ff, e_ex, abs_tol=1e-9)
    omega = adiaerr.mode_energies(8, 1.3, 1.0)
    assert len(omega) == 8
    assert math.isclose(e_ff, -0.5 * sum(omega), abs_tol=1e-9)


def test_concentration_bound():
    bound, valid = adiaerr.concentration_bound(0.0, 0.0, 40.0, D=1, sigma=1.0, m=100.0)
    assert math.isclose(bound, math.exp(-4.0), abs_tol=1e-12)
    assert valid


def test_run_experiment_returns_paired_runs():
    config = {
        "name": "smoke",
        "path": "zzxz_sweep",
        "sizes": [6],
        "duration": 2,
        "engine": "exact",
        "record_every": 50,
        "observe": {"populations": True},
    }
    runs = adiaerr.run_experiment(config)
    assert [r["label"] for r in runs] == ["clean", "noisy"]
    noisy = runs[1]
    assert noisy["n"] == 6
    assert noisy["delta_e"][0] == 0.0
    assert noisy["delta_e"][-1] > 0.0
    assert math.isclose(sum(noisy["final_populations"]) + noisy["final_p_rest"], 1.0, abs_tol=1e-9)
    assert noisy["csv"].splitlines()[0].startswith("t,")


def test_invalid_config_raises():
    assert adiaerr.validate_config({"sizes": [30], "engine": "exact", "path": "zzxz_sweep"})
    with pytest.raises(adiaerr.InputError):
        adiaerr.run_experiment({"sizes": [30], "engine": "exact", "path": "zzxz_sweep"})
    with pytest.raises(ValueError):
        adiaerr.run_experiment({"bogus_key": 1})


def test_markov_starts_at_one():
    d = adiaerr.markov(20, 10, 500, seed=3)
    assert d["mean"][0] == 1.0
    assert d["return_probability"][0] == 0.0
    assert len(d["mean"]) == 11


def test_cross_validate_small():
    checks = adiaerr.cross_validate(4)
    assert checks and all(c["passed"] for c in checks)
