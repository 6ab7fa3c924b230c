import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st


def rationals(max_num=50, max_den=20):
    return st.builds(Fraction, st.integers(-max_num, max_num), st.integers(1, max_den))


def random_rationals(rng: random.Random, n: int, avoid=()):
    out = []
    while len(out) < n:
        x = Fraction(rng.randint(-40, 40), rng.randint(1, 13))
        if x not in avoid and x not in out:
            out.append(x)
    return out


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if getattr(rep, "when", "call") != "call":
                continue
            props = dict(getattr(rep, "user_properties", []))
            if "criterion" in props:
                lines.append((props["criterion"], "PASS" if outcome == "passed" else "FAIL"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for label, verdict in sorted(lines, key=lambda t: int(t[0].split()[0])):
            terminalreporter.write_line(f"criterion {label}: {verdict}")
