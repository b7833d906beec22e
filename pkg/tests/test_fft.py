import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modlab.fft import block_ifft, fft, fftn, ifft, ifftn, is_power_of_two


def _rand(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


@pytest.mark.parametrize("n", [1, 2, 8, 64, 128, 1024, 2**15])
def test_matches_numpy(n):
    x = _rand(np.random.default_rng(n), n)
    scale = max(1.0, np.abs(np.fft.fft(x)).max())
    assert np.max(np.abs(fft(x) - np.fft.fft(x))) / scale < 1e-13
    assert np.max(np.abs(ifft(x) - np.fft.ifft(x))) < 1e-13


def test_axes_and_2d():
    x = _rand(np.random.default_rng(0), 32, 64)
    assert np.allclose(fft(x, axis=0), np.fft.fft(x, axis=0), atol=1e-12)
    assert np.allclose(fftn(x, (0, 1)), np.fft.fft2(x), atol=1e-11)
    assert np.allclose(ifftn(fftn(x, (0, 1)), (0, 1)), x, atol=1e-13)


def test_rejects_non_power_of_two():
    with pytest.raises(ValueError):
        fft(np.ones(12))


def test_power_of_two():
    assert [n for n in range(1, 20) if is_power_of_two(n)] == [1, 2, 4, 8, 16]
    assert not is_power_of_two(0)


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 12), st.integers(0, 10_000))
def test_round_trip(bits, seed):
    x = _rand(np.random.default_rng(seed), 2**bits)
    assert np.max(np.abs(ifft(fft(x)) - x)) < 1e-12


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 11), st.integers(0, 10_000))
def test_linearity_and_parseval(bits, seed):
    rng = np.random.default_rng(seed)
    n = 2**bits
    x, y = _rand(rng, n), _rand(rng, n)
    a = complex(rng.standard_normal(), rng.standard_normal())
    assert np.allclose(fft(a * x + y), a * fft(x) + fft(y), atol=1e-10)
    assert np.isclose(np.sum(np.abs(fft(x)) ** 2) / n, np.sum(np.abs(x) ** 2))


@pytest.mark.parametrize("n, w, start", [(1024, 7, 100), (2**14, 63, 8000), (256, 256, 0), (64, 1, 63)])
def test_block_ifft(n, w, start):
    rng = np.random.default_rng(w)
    if start + w > n:
        start = n - w
    block = _rand(rng, w, 3)
    full = np.zeros((n, 3), dtype=complex)
    full[start:start + w] = block
    expected = np.fft.ifft(full, axis=0)
    got = block_ifft(block, start, n)
    assert np.max(np.abs(got - expected)) < 1e-13
    no_phase = block_ifft(block, start, n, phase=False)
    assert np.allclose(np.abs(no_phase), np.abs(expected), atol=1e-13)


def test_block_too_wide():
    with pytest.raises(ValueError):
        block_ifft(np.ones((20, 1)), 0, 16)
