import pytest

import affapprox as ax


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # compile the jitted backend once so timed checks measure computation
    ax.warmup()
