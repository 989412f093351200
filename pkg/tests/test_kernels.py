import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vvc_itx.kernels import (
    KernelMatrix,
    NoDecompositionError,
    OpCounter,
    QuantizationOverflowError,
    TransformType,
    UnsupportedSizeError,
    butterfly_inverse,
    butterfly_split,
    dct8_from_dst7,
    generate_basis,
    integer_kernel,
    perm_sign_pair,
    quantize_kernel,
    real_kernel,
    recompose,
    round_half_away,
)

T = TransformType
# sqrt(4/9) * sin(pi/9), evaluated with mpmath at 50 digits
DST7_4_11 = 0.2280134288837791


def test_generate_basis_examples():
    assert generate_basis(T.DCT2, 4, 1, 3) == pytest.approx(0.5, abs=1e-15)
    assert generate_basis(T.DST7, 1, 1, 1) == pytest.approx(1.0, abs=1e-15)
    assert generate_basis(T.DST7, 4, 1, 1) == pytest.approx(DST7_4_11, abs=1e-15)


def test_dst7_entry_against_mpmath():
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 40
    for n in (4, 8, 16, 32):
        for i, j in ((1, 1), (n, n), (2, n - 1)):
            ref = mpmath.sqrt(mpmath.mpf(4) / (2 * n + 1)) * mpmath.sin(
                mpmath.pi * (2 * i - 1) * j / (2 * n + 1))
            assert generate_basis(T.DST7, n, i, j) == pytest.approx(float(ref), abs=1e-14)


@pytest.mark.parametrize("bad", [(T.DST7, 64), (T.DCT8, 64), (T.DCT2, 3), (T.DCT2, 128)])
def test_unsupported_sizes(bad):
    with pytest.raises(UnsupportedSizeError):
        real_kernel(*bad)


@pytest.mark.parametrize("t,n", [(T.DCT2, n) for n in (4, 8, 16, 32, 64)] + [(t, n) for t in (T.DST7, T.DCT8) for n in (4, 8, 16, 32)])
def test_real_kernels_orthonormal(t, n):
    k = real_kernel(t, n).entries
    assert np.abs(k @ k.T - np.eye(n)).max() <= 1e-9


def test_quantize_examples():
    assert integer_kernel(T.DCT2, 4).entries[0].tolist() == [64, 64, 64, 64]
    assert integer_kernel(T.DST7, 4).entries[0, 0] == 29 == round(128 * DST7_4_11)
    zero = KernelMatrix(T.DCT2, np.zeros((4, 4)))
    assert not quantize_kernel(zero).entries.any()


def test_dct2_4_integer_kernel():
    assert integer_kernel(T.DCT2, 4).entries.tolist() == [
        [64, 64, 64, 64], [84, 35, -35, -84], [64, -64, -64, 64], [35, -84, 84, -35]]


@pytest.mark.parametrize("n", [4, 8, 16, 32, 64])
def test_dct2_first_row_constant(n):
    assert (integer_kernel(T.DCT2, n).entries[0] == 64).all()


def test_integer_entries_fit_8_bits():
    for t, sizes in ((T.DCT2, (4, 8, 16, 32, 64)), (T.DST7, (4, 8, 16, 32)), (T.DCT8, (4, 8, 16, 32))):
        for n in sizes:
            e = integer_kernel(t, n).entries
            assert e.min() >= -128 and e.max() <= 127


def test_quantization_overflow():
    with pytest.raises(QuantizationOverflowError):
        quantize_kernel(real_kernel(T.DCT2, 4), precision_bits=7)


def test_round_half_away():
    assert round_half_away(np.array([0.5, -0.5, 1.5, -2.5, 0.49])).tolist() == [1, -1, 2, -3, 0]


def test_perm_sign_pair_examples():
    p = perm_sign_pair(2)
    assert p.lam.tolist() == [[0, 1], [1, 0]]
    assert p.gamma.tolist() == [[1, 0], [0, -1]]
    p4 = perm_sign_pair(4)
    assert (p4.lam @ p4.gamma @ p4.gamma @ p4.lam == np.eye(4)).all()


@pytest.mark.parametrize("n", [4, 8, 16, 32])
def test_perm_sign_invariants(n):
    p = perm_sign_pair(n)
    for i in range(n):
        assert p.lam[i].sum() == 1 and p.lam[i, n - 1 - i] == 1
        assert p.gamma[i, i] == (-1) ** i
    assert (p.lam @ p.lam == np.eye(n)).all() and (p.gamma @ p.gamma == np.eye(n)).all()


@pytest.mark.parametrize("n", [4, 8, 16, 32])
def test_dct8_from_dst7(n):
    real = dct8_from_dst7(real_kernel(T.DST7, n)).entries
    assert np.abs(real - real_kernel(T.DCT8, n).entries).max() <= 1e-9
    ints = dct8_from_dst7(integer_kernel(T.DST7, n)).entries
    assert (ints == integer_kernel(T.DCT8, n).entries).all()


def test_dct8_from_dst7_size_one():
    assert dct8_from_dst7(1).entries == pytest.approx(np.array([[1.0]]), abs=1e-15)


@pytest.mark.parametrize("n", [8, 16, 32, 64])
def test_butterfly_roundtrip(n):
    k = integer_kernel(T.DCT2, n)
    d = butterfly_split(k)
    assert d.even_part.size == n // 2
    assert d.even_part == integer_kernel(T.DCT2, n // 2)
    assert recompose(d) == k


def test_butterfly_needs_size_8():
    with pytest.raises(NoDecompositionError):
        butterfly_split(integer_kernel(T.DCT2, 4))


@pytest.mark.parametrize("n", [8, 16, 32, 64])
def test_butterfly_equals_direct(n, rng):
    k = integer_kernel(T.DCT2, n)
    x = rng.integers(-(1 << 17), 1 << 17, size=(1000, n))
    assert (butterfly_inverse(k, x) == x @ k.entries).all()


def _mults(n):
    return n * n if n <= 4 else (n // 2) ** 2 + _mults(n // 2)


@pytest.mark.parametrize("n", [8, 16, 32, 64])
def test_butterfly_mult_recurrence(n):
    c = OpCounter()
    butterfly_inverse(integer_kernel(T.DCT2, n), np.zeros(n, dtype=np.int64), counter=c)
    assert c.mults == _mults(n)
    assert _mults(64) == 1376


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([8, 16, 32, 64]), st.data())
def test_butterfly_zeroed_property(n, data):
    k = integer_kernel(T.DCT2, n)
    n_eff = data.draw(st.sampled_from([m for m in (4, 8, 16, 32) if m <= n]))
    x = np.array(data.draw(st.lists(st.integers(-(1 << 17), (1 << 17) - 1), min_size=n, max_size=n)))
    x[n_eff:] = 0
    assert (butterfly_inverse(k, x, n_eff=n_eff) == x @ k.entries).all()


def test_kernel_matrix_read_only():
    k = integer_kernel(T.DST7, 8)
    with pytest.raises(ValueError):
        k.entries[0, 0] = 1
    assert math.isclose(k.scale, 64 * math.sqrt(8))
