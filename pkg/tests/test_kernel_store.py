import numpy as np
import pytest
from hypothesis import given, strategies as st

from vvc_itx.kernel_store import (
    KernelBank,
    KernelFormatError,
    MissingKernelError,
    decode_kernel,
    encode_kernel,
    synthetic_lfnst_kernels,
)
from vvc_itx.kernels import KernelMatrix, TransformType as T, integer_kernel


@given(st.sampled_from([(T.DCT2, 4), (T.DST7, 8), (T.LFNST16, 16)]), st.integers(0, 2**32 - 1))
def test_encode_decode_roundtrip(tn, seed):
    t, n = tn
    e = np.random.default_rng(seed).integers(-128, 128, size=(n, n))
    k = KernelMatrix(t, e, scale=1.0, precision_bits=8)
    assert decode_kernel(encode_kernel(k)) == k


def test_decode_rejects_garbage():
    good = encode_kernel(integer_kernel(T.DCT2, 4))
    for bad in (b"NOPE" + good[4:], good[:4] + b"\x09" + good[5:], good[:-2], good[:5] + b"\x07" + good[6:]):
        with pytest.raises(KernelFormatError):
            decode_kernel(bad)


def test_bank_roundtrip(tmp_path):
    bank = KernelBank.default()
    files = bank.save(tmp_path)
    assert len(files) == 25
    loaded = KernelBank.load(tmp_path)
    assert loaded.mts(T.DCT8, 16) == integer_kernel(T.DCT8, 16)
    assert loaded.lfnst(48, 3, 2) == bank.lfnst(48, 3, 2)


def test_bank_missing_file(tmp_path):
    KernelBank.default().save(tmp_path)
    (tmp_path / "dst7_32.itxk").unlink()
    with pytest.raises(MissingKernelError):
        KernelBank.load(tmp_path)


def test_synthetic_lfnst_shapes():
    ks = synthetic_lfnst_kernels()
    assert len(ks) == 16
    assert sum(k.entries.size for k in ks.values()) == 8192
    for (out, _, _), k in ks.items():
        assert k.entries.shape == (16, out)
        assert k.entries.min() >= -128 and k.entries.max() <= 127
