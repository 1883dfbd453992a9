from __future__ import annotations

import pytest

from designforge import data_path
from designforge.permgroup import GroupTable, parse_cycles

# base blocks of the three reference designs (1-based published labels)
BASE_BLOCK_LAMBDA3 = tuple(p - 1 for p in (3, 7, 29, 30, 67, 68, 84, 96, 100, 101, 107, 134))
BASE_BLOCK_LAMBDA12_PUBLISHED = tuple(
    p - 1 for p in (1, 2, 6, 15, 30, 35, 47, 56, 81, 118, 122, 135)
)
BASE_BLOCK_LAMBDA6 = tuple(p - 1 for p in (30, 31, 40, 44, 56, 67, 71, 84, 85, 93, 122, 125))


@pytest.fixture(scope="session")
def psl33() -> GroupTable:
    return GroupTable.from_file(data_path("psl33.gens"))


@pytest.fixture(scope="session")
def pgl33() -> GroupTable:
    return GroupTable.from_file(data_path("pgl33.gens"))


@pytest.fixture(scope="session")
def sym4() -> GroupTable:
    return GroupTable.generate([parse_cycles("(1,2)", 4), parse_cycles("(1,2,3,4)", 4)])


@pytest.fixture(scope="session")
def sym3() -> GroupTable:
    return GroupTable.generate([parse_cycles("(1,2)", 3), parse_cycles("(1,2,3)", 3)])
