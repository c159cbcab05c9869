import numpy as np
import pytest

from ftgi import PatternLayout, TimeObject

ACCEPTANCE_LINES = []


def dft_oracle(x, n_bins):
    """Direct DFT by explicit summation, bins 0..n_bins-1, divided by N."""
    x = np.asarray(x, dtype=float)
    N = x.size
    out = np.empty(n_bins, dtype=complex)
    for k in range(n_bins):
        total = 0j
        for m in range(N):
            angle = -2.0 * np.pi * ((k * m) % N) / N
            total += x[m] * complex(np.cos(angle), np.sin(angle))
        out[k] = total / N
    return out


def trig_synthesis(coeffs, N):
    """``F_0 + 2 sum_k Re(F_k e^{i 2 pi k m / N})`` evaluated directly."""
    m = np.arange(N)
    out = np.full(N, coeffs[0].real)
    for k in range(1, len(coeffs)):
        out += 2 * (coeffs[k] * np.exp(2j * np.pi * k * m / N)).real
    return out


def random_bandlimited(rng, n_bins=100, N=800, rate=800.0):
    """Nonnegative object with random complex content on bins 0..n_bins-1."""
    m = np.arange(N)
    amps = rng.normal(size=n_bins - 1) + 1j * rng.normal(size=n_bins - 1)
    k = np.arange(1, n_bins)
    ac = 2 * (amps[:, None] * np.exp(2j * np.pi * np.outer(k, m) / N)).real.sum(axis=0)
    offset = -ac.min() + rng.uniform(0.5, 2.0)
    return TimeObject(ac + offset, rate)


@pytest.fixture
def layout():
    return PatternLayout()


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def report():
    def _report(number, passed, detail):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
