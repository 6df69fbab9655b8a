import sys
from pathlib import Path

import pytest

# Add the repository root to the path so `kstandard` imports without installation
sys.path.append(str(Path(__file__).parent.parent.parent))

from kstandard.scripts.pathalg import PathAlgebra, make_arn  # noqa: E402


@pytest.fixture(scope="session")
def a12():
    return PathAlgebra(make_arn(1, 2), 32003)


@pytest.fixture(scope="session")
def a13():
    return PathAlgebra(make_arn(1, 3), 32003)


@pytest.fixture(scope="session")
def a23():
    return PathAlgebra(make_arn(2, 3), 32003)


@pytest.fixture(scope="session")
def a12_small():
    """A(1,2) over F_5: small enough for exhaustive searches."""
    return PathAlgebra(make_arn(1, 2), 5)


CONFIGURATIONS = [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)]


@pytest.fixture(scope="session", params=CONFIGURATIONS, ids=lambda rn: f"A({rn[0]},{rn[1]})")
def algebra(request):
    """Each supported A(r, N) over F_32003."""
    return PathAlgebra(make_arn(*request.param), 32003)
