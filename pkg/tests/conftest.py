import random

import pytest

from schedlift.model import Instance


def micro_instances(count: int, seed: int = 0, max_vars: int = 10, max_size: int = 9) -> list:
    """Seeded random instances with m in {2, 3} and m * n <= max_vars."""
    rng = random.Random(seed)
    machines = tuple(m for m in (2, 3) if 2 * m <= max_vars)
    out = []
    while len(out) < count:
        m = rng.choice(machines)
        n = rng.randint(2, max_vars // m)
        out.append(Instance.from_sizes(m, [rng.randint(1, max_size) for _ in range(n)]))
    return out


@pytest.fixture
def rng():
    return random.Random(12345)


ACCEPTANCE: dict = {}


def record_criterion(number: int, passed: bool):
    ACCEPTANCE[number] = passed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ACCEPTANCE[number] else 'FAIL'}")
