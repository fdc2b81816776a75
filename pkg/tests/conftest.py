import numpy as np
import pytest

from qimp import ImageBuffer, StateVector


def random_amplitudes(rng, n, real=False):
    v = rng.normal(size=1 << n)
    if not real:
        v = v + 1j * rng.normal(size=1 << n)
    return v / np.linalg.norm(v)


def random_state(rng, n, real=False):
    return StateVector(random_amplitudes(rng, n, real))


def random_image(rng, rows, cols, depth_bits=8, low=0):
    return ImageBuffer(rng.integers(low, 1 << depth_bits, size=(rows, cols)), depth_bits)


def column_chain(pixels):
    """Column-chained vector (I11, I21, ..., Ir1, I12, ...), built by explicit loops."""
    rows, cols = pixels.shape
    return np.array([pixels[i, j] for j in range(cols) for i in range(rows)], dtype=float)


def normalized_padded(pixels):
    flat = column_chain(np.asarray(pixels))
    n = max(1, int(np.ceil(np.log2(flat.size))))
    c = np.zeros(2**n)
    c[: flat.size] = flat / np.sqrt(np.sum(flat**2))
    return c


# -- explicit 2^n x 2^n matrices, built from bit arithmetic ----------------

def hadamard_matrix(n, qubit):
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    return np.kron(np.kron(np.eye(2 ** (n - 1 - qubit)), h), np.eye(2**qubit))


def permutation_matrix(n, mapping):
    """Matrix sending basis |i> to |mapping(i)>."""
    dim = 2**n
    m = np.zeros((dim, dim))
    for i in range(dim):
        m[mapping(i), i] = 1
    return m


def _bit(i, k):
    return (i >> k) & 1


def swap_map(a, b):
    def f(i):
        if _bit(i, a) != _bit(i, b):
            i ^= (1 << a) | (1 << b)
        return i

    return f


def cswap_map(c, a, b):
    inner = swap_map(a, b)
    return lambda i: inner(i) if _bit(i, c) else i


def shift_map(n, amount):
    # new[i] = old[i + amount]  <=>  |i> -> |i - amount>
    return lambda i: (i - amount) % 2**n


# -- acceptance reporting ---------------------------------------------------

_ACCEPTANCE = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "acceptance" in report.keywords:
        _ACCEPTANCE.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
