import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from temquant import make_fri_signal, filter_fri, make_sos_kernel

settings.register_profile(
    "default", max_examples=40, deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_fri(rng, L=3, T=1.0, grid_step=0.05, on_grid=True):
    if on_grid:
        n = int(round(T / grid_step))
        delays = np.sort(rng.choice(np.arange(1, n + 1), L, replace=False)) * grid_step
    else:
        delays = np.sort(rng.uniform(0.01, T, L))
    return make_fri_signal(rng.uniform(-1, 1, L), delays, T)


def random_trig(rng, k_max=4, T=1.0, L=3):
    return filter_fri(random_fri(rng, L, T), make_sos_kernel(k_max, T))


# criterion id -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(ACCEPTANCE, key=lambda s: (int(s.rstrip("ab")), s)):
        ok, detail = ACCEPTANCE[cid]
        terminalreporter.write_line(f"criterion {cid:>3}: {'PASS' if ok else 'FAIL'}  {detail}")
