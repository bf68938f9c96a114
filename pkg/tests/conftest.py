import json
from pathlib import Path

import pytest

from src.settings import OracleSettings
from src.weyl import WeylOracle

CONFIGS_DIR = Path(__file__).resolve().parent.parent / "resources" / "configs"


@pytest.fixture
def configs_dir():
    return CONFIGS_DIR


@pytest.fixture
def load_raw():
    def _load(name):
        return json.loads((CONFIGS_DIR / f"{name}.json").read_text(encoding="utf-8"))
    return _load


@pytest.fixture
def raw_pair():
    return {
        "background_index": 0,
        "singularities": [
            {"id": "a", "x": 0.0, "y": 0.0, "alpha": 0.5},
            {"id": "b", "x": 1.0, "y": 0.0, "alpha": 0.5},
        ],
    }


@pytest.fixture(scope="session")
def oracle():
    return WeylOracle(OracleSettings())


@pytest.fixture
def clean_env(monkeypatch):
    # setenv antes de delenv garante que o teardown apague o que um .env carregar
    for variable in ("DEFICIENCY_REL_TOL", "DEFICIENCY_RMAX", "DEFICIENCY_BOUNDARY_BAND", "DEFICIENCY_JOBS"):
        monkeypatch.setenv(variable, "")
        monkeypatch.delenv(variable)
    return monkeypatch
