import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ggtlab import presentation, choose_oracle


@pytest.fixture(scope="session")
def z3():
    """Cyclic group of order three."""
    p = presentation("a", "aaa")
    return p, choose_oracle(p)


@pytest.fixture(scope="session")
def z2():
    """Free abelian group of rank two."""
    p = presentation("ab", "abAB")
    return p, choose_oracle(p)


@pytest.fixture(scope="session")
def f2():
    """Free group of rank two (empty-word relator set)."""
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # the empty relator is flagged, by design
        p = presentation("ab", "")
    return p, choose_oracle(p)


@pytest.fixture(scope="session")
def zline():
    """Infinite cyclic group."""
    p = presentation("a")
    return p, choose_oracle(p)


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    """Compile the jitted kernels once so timing budgets measure compute."""
    try:
        from ggtlab import _kernels
    except ImportError:
        return
    _kernels.warmup()
