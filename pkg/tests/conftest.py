import math

import pytest

from hwalk import groups, su2


@pytest.fixture(scope="session")
def sl23():
    return groups.build_slq(2, 3)


@pytest.fixture(scope="session")
def sl25():
    return groups.build_slq(2, 5)


@pytest.fixture(scope="session")
def z17():
    return groups.cyclic(17)


@pytest.fixture(scope="session")
def s4():
    return groups.symmetric_group(4)


def make_su2_gates():
    """The six rotations (1 +- 2i)/sqrt5, (1 +- 2j)/sqrt5, (1 +- 2k)/sqrt5 plus 1."""
    s = 1.0 / math.sqrt(5.0)
    gates = [su2.SU2Element.identity()]
    for axis in (1, 2, 3):
        for sign in (1.0, -1.0):
            q = [s, 0.0, 0.0, 0.0]
            q[axis] = sign * 2.0 * s
            gates.append(su2.SU2Element(*q))
    return gates


@pytest.fixture(scope="session")
def su2_gates():
    return make_su2_gates()
