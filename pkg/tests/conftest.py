import pytest

from harvestr.analysis.scenario import SiteConfig
from harvestr.models.geometry import LabLoopGeometry, RailSiteGeometry
from harvestr.models.magnetics import RAILWAY_HZ
from harvestr.models.presets import get_coil


@pytest.fixture
def coil_a():
    return get_coil("coil-a")


@pytest.fixture
def coil_b():
    return get_coil("coil-b")


@pytest.fixture
def rail_site():
    return RailSiteGeometry(r_n=0.5, d_rr=1.435)


@pytest.fixture
def bench_loop():
    return LabLoopGeometry(r=0.25, a=1.2, b=3.0)


@pytest.fixture
def site_a(coil_a, rail_site):
    return SiteConfig(geometry=rail_site, coil=coil_a, frequency=RAILWAY_HZ)


@pytest.fixture
def write_file(tmp_path):
    """Write ``text`` to ``tmp_path / name`` and return the path."""

    def write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return write
