"""Shared helpers and independent oracles for the test suite."""

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def band_energy(x, f0, sample_rate=10.0, half_width=0.03):
    """Energy of ``x`` within ``f0 +- half_width`` Hz, from the raw DFT."""
    spec = np.fft.rfft(np.asarray(x, dtype=np.float64))
    f = np.fft.rfftfreq(len(x), 1.0 / sample_rate)
    return float(np.sum(np.abs(spec[np.abs(f - f0) <= half_width]) ** 2))


def band_share(part, whole, f0, sample_rate=10.0, half_width=0.03):
    """Fraction of ``whole``'s band energy around ``f0`` carried by ``part``."""
    return band_energy(part, f0, sample_rate, half_width) / band_energy(whole, f0, sample_rate, half_width)


def rel_rms_error(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return float(np.sqrt(np.mean((a - b) ** 2)) / np.sqrt(np.mean(b * b)))


def tone(freq, duration=300.0, sample_rate=10.0, amplitude=1.0, phase=0.0, func=np.sin):
    t = np.arange(int(round(duration * sample_rate))) / sample_rate
    return t, amplitude * func(2.0 * np.pi * freq * t + phase)


def interior(n, trim=0.1):
    k = int(round(trim * n))
    return slice(k, n - k)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# --- acceptance reporting -------------------------------------------------
# Tests marked ``@pytest.mark.criterion(k, "title")`` get one PASS/FAIL line
# each in the terminal summary, with their wall time against a 30 s budget.

CRITERION_BUDGET_S = 30.0
_criterion_results = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion check")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        number, title = marker.args
        _criterion_results[number] = (title, report.passed, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _criterion_results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criterion_results):
        title, passed, duration = _criterion_results[number]
        in_budget = duration < CRITERION_BUDGET_S
        status = "PASS" if passed and in_budget else "FAIL"
        note = "" if in_budget else f" (over the {CRITERION_BUDGET_S:.0f} s budget)"
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {title}  [{duration:.1f} s]{note}")
