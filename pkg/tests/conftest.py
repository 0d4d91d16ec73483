import time

import pytest

from peierls import full_count_table


@pytest.fixture(scope="session")
def table12():
    """Full census to length 12, shared by the acceptance criteria."""
    t0 = time.time()
    table = full_count_table(12)
    table.meta["build_seconds"] = time.time() - t0
    return table


@pytest.fixture(scope="session")
def table10():
    return full_count_table(10)
