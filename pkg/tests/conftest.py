import numpy as np
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from menger.ddf import make_ddf

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

GRID = 1 / 64


@st.composite
def ddfs(draw, max_breaks=5, hi=5.0, d_plus=None):
    """Dyadic step d.d.f.s: breakpoints on a 1/64 grid, values on a 1/16 grid."""
    n = draw(st.integers(1, max_breaks))
    ticks = draw(st.lists(st.integers(0, int(hi / GRID)), min_size=n, max_size=n, unique=True))
    levels = sorted(draw(st.lists(st.integers(1, 16), min_size=n, max_size=n)))
    vals = [v / 16 for v in levels]
    full = draw(st.booleans()) if d_plus is None else d_plus
    if full:
        vals[-1] = 1.0
    return make_ddf([t * GRID for t in sorted(ticks)], vals)


def grid_points(hi=6.0, step=1 / 128):
    """Evaluation points off the 1/64 breakpoint grid, plus the grid itself."""
    on = np.arange(0, hi, GRID)
    return np.concatenate([on, on + step])


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
