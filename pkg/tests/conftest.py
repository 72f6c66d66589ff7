import math

import pytest

from ricci_liouville import MetricParams


@pytest.fixture(scope="session")
def ref_params():
    """Reference member: b = 1/sqrt(6), c1 = 1, c2 = c1/6 - 2 = -11/6."""
    return MetricParams(b=1.0 / math.sqrt(6.0), c1=1.0, c2=-11.0 / 6.0)
