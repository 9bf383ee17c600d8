import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from wiretap_space.receiver import DetectorModel


@pytest.fixture
def day_detector() -> DetectorModel:
    """Daytime reference detector: clear-sky stray light, quiet dark counts."""
    return DetectorModel(p_dark=1e-7, eta_optical=1.0, stray_mean=1e-4)
