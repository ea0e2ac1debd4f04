import numpy as np
import pytest

from invreg.loss import FeatureVector, Observation


def random_psd(rng, n, rank):
    a = rng.standard_normal((rank, n))
    return a.T @ a


def random_spd(rng, n):
    a = rng.standard_normal((n, n))
    return a @ a.T + n * np.eye(n)


def ar_stream(rng, coefs, length, intercept=0.0, noise=1.0):
    """Simulate a stationary AR process and featurize it with an intercept."""
    p = len(coefs)
    s = np.zeros(length + p)
    for t in range(p, s.size):
        s[t] = intercept + np.dot(coefs, s[t - p:t][::-1]) + noise * rng.standard_normal()
    return [Observation(FeatureVector.from_checked(s[t - p:t][::-1]), float(s[t])) for t in range(p, s.size)]


def gaussian_history(rng, n, t):
    x = rng.standard_normal((t, n - 1))
    y = rng.standard_normal(t)
    return [Observation(FeatureVector.from_checked(xi), float(yi)) for xi, yi in zip(x, y)]


def central_gradient(f, theta, h=1e-5):
    g = np.zeros_like(theta)
    for i in range(theta.size):
        e = np.zeros_like(theta)
        e[i] = h
        g[i] = (f(theta + e) - f(theta - e)) / (2 * h)
    return g


def central_hessian(f, theta, h=1e-4):
    n = theta.size
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            ei = np.zeros(n)
            ej = np.zeros(n)
            ei[i] = h
            ej[j] = h
            out[i, j] = (f(theta + ei + ej) - f(theta + ei - ej) - f(theta - ei + ej) + f(theta - ei - ej)) / (4 * h * h)
    return out


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def record_acceptance(name: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
