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

"""Error propagation in adiabatic sweeps on 1D spin chains.

Configs are the same JSON documents the ``adiaerr`` command reads; pass them
as dicts or strings.
"""

import json as _json

from . import _core
from ._core import (
    CapacityError,
    InputError,
    NumericalError,
    concentration_bound,
    cross_validate,
    energy_jump,
    ground_energy_exact,
    ground_energy_freefermion,
    ground_energy_mps,
    hamiltonian,
    markov,
    mode_energies,
    version,
)

__version__ = version()


def _as_text(config):
    return config if isinstance(config, str) else _json.dumps(config)


def validate_config(config):
    """Problems found in ``config``; an empty list means it is valid."""
    return _core.validate_config(_as_text(config))


def run_experiment(config):
    """Clean and noisy runs for every size in ``config``, one dict per run."""
    return _core.run_experiment(_as_text(config))


__all__ = [
    "CapacityError",
    "InputError",
    "NumericalError",
    "concentration_bound",
    "cross_validate",
    "energy_jump",
    "ground_energy_exact",
    "ground_energy_freefermion",
    "ground_energy_mps",
    "hamiltonian",
    "markov",
    "mode_energies",
    "run_experiment",
    "validate_config",
    "version",
]
