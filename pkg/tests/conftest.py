import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from emistat.panel import EmissionsPanel


@pytest.fixture
def small_panel():
    """Three countries, four years, one missing cell."""
    values = np.array([
        [1.0, 1.2, 1.4, 1.6],
        [10.0, 11.0, np.nan, 13.0],
        [250.0, 240.0, 230.0, 220.0],
    ])
    return EmissionsPanel(("AAA", "BBB", "CCC"), (2000, 2001, 2002, 2003), values)


def edgar_path():
    """Optional real-data panel for the data-dependent acceptance checks."""
    path = os.environ.get("EMISTAT_EDGAR_CSV")
    if path and os.path.exists(path):
        return path
    default = os.path.join(os.path.dirname(__file__), "..", "data", "edgar.csv")
    return default if os.path.exists(default) else None
