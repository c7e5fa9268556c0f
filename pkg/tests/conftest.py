import time

import pytest

from fria.majorant import TABLE2_CONSTANTS, run_refinement_experiment
from fria.mesh import build_lshape, build_unit_square
from fria.weights import DiagonalWeight

ANISO = DiagonalWeight((1.0, 1e-4))


@pytest.fixture(scope="session")
def mesh_cache():
    """Build-once cache for the structured meshes shared across modules."""
    cache = {}

    def get(domain, k):
        key = (domain, k)
        if key not in cache:
            cache[key] = build_lshape(k) if domain == "lshape" else build_unit_square(k)
        return cache[key]

    return get


@pytest.fixture(scope="session")
def table2_experiment():
    """The five-level refinement study, run once, with its wall time."""
    t0 = time.perf_counter()
    rows = run_refinement_experiment(range(5), ANISO, 1.0, TABLE2_CONSTANTS)
    return rows, time.perf_counter() - t0
