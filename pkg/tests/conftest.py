import pathlib

import pytest

from daisy import synthetic
from daisy.service import Engine, EngineConfig


@pytest.fixture(scope="session")
def fixture_cache(tmp_path_factory) -> pathlib.Path:
    """Offline corpus shared across tests (read-only)."""
    cache = tmp_path_factory.mktemp("fixture-cache")
    synthetic.write_fixture_cache(cache)
    return cache


@pytest.fixture()
def engine_factory(fixture_cache, tmp_path):
    """Engines bound to the shared offline cache, each with a fresh data dir."""
    counter = {"n": 0}

    def make(data_dir: pathlib.Path | None = None, **overrides) -> Engine:
        if data_dir is None:
            counter["n"] += 1
            data_dir = tmp_path / f"data-{counter['n']}"
        kwargs = {"cache_dir": fixture_cache, "offline": True}
        kwargs.update(overrides)
        return Engine(EngineConfig(data_dir=data_dir, **kwargs))

    return make


@pytest.fixture()
def engine(engine_factory) -> Engine:
    return engine_factory()
