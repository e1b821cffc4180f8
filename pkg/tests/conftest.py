import pytest

from src.oscillator.model import make_params
from src.qseries.cache import get_cache


@pytest.fixture(autouse=True)
def fresh_cache():
    get_cache().clear()
    yield
    get_cache().clear()


@pytest.fixture
def classical():
    return make_params()


@pytest.fixture(params=[0.6, 1.0, 1.6], ids=lambda h: f"h={h:g}")
def reference_params(request):
    return make_params(h=request.param)


@pytest.fixture
def config_home(tmp_path, monkeypatch):
    monkeypatch.setenv("QDEFORM_HOME", str(tmp_path / "home"))
    return tmp_path / "home"
