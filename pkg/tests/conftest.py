import numpy as np
import pytest

from cpmmg.casemodel import load_bundled_case, parse_case_document
from cpmmg.series import ExogenousSeries, build_series


def single_mg_doc(lam=1.0, mu=100.0, peak=1.0, segments=((1.0, 1.0),), ders=None):
    """One microgrid fed by one failing upstream element; cyber side never fails."""
    mg = {"tag": "MG1", "mgcc": "MGCC1", "sections": [{"id": "MG1.A"}],
          "load_points": [{"id": "LP1", "peak_load": peak, "segments": [list(s) for s in segments]}]}
    mg.update(ders or {})
    return {
        "name": "single",
        "components": [
            {"id": "UP", "kind": "upstream", "failure_rate": lam, "repair_rate": mu},
            {"id": "DMS", "kind": "dms"},
            {"id": "MGCC1", "kind": "mgcc"},
            {"id": "CL1", "kind": "cyber-link"},
            {"id": "SF", "kind": "switch"},
        ],
        "microgrids": [mg],
        "substation": {"microgrid": "MG1", "switch": "SF", "capacity": 10.0},
        "control": {"dms": "DMS", "upstream": "UP"},
        "cyber_edges": [{"id": "CL1", "a": "DMS", "b": "MGCC1"}],
        "series": {"constant": {"load_frac": 1.0, "price": 0.05}},
    }


def flat_series(n=8760, load=1.0, wind=0.0, pv=0.0, price=0.05):
    return ExogenousSeries(np.full(n, wind), np.full(n, pv), np.full(n, load), np.full(n, price))


@pytest.fixture(scope="session")
def bundled():
    return load_bundled_case()


@pytest.fixture(scope="session")
def bundled_series(bundled):
    return build_series(bundled.series)


@pytest.fixture
def single_case():
    return parse_case_document(single_mg_doc())
