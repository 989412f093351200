import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vvc_itx.engine import (
    CoeffBlock,
    Direction,
    StageConfig,
    TransformSpec,
    effective_size,
    inverse_mts_1d,
    inverse_mts_2d,
    mult_count_1d,
)
from vvc_itx.kernels import TransformType as T, UnsupportedSizeError, integer_kernel
from vvc_itx.oracle import naive_inverse_1d, naive_inverse_2d, zero_beyond
from vvc_itx.pipeline import all_mts_specs
from vvc_itx.signaling import mts_pair

SIZES = (4, 8, 16, 32, 64)
LIM = 1 << 17


def _oracle_2d(y, hor_t, ver_t, cfg=StageConfig()):
    h, w = y.shape
    y = zero_beyond(y, effective_size(w, hor_t), effective_size(h, ver_t))
    return naive_inverse_2d(y, integer_kernel(hor_t, w), integer_kernel(ver_t, h), cfg.s1, cfg.s2,
                            vertical_first=cfg.first_direction == "vertical")


def _legal_pairs(w, h):
    idxs = [0] if max(w, h) >= 64 else range(5)
    return [mts_pair(i) for i in idxs]


def test_effective_size_examples():
    assert effective_size(64, T.DCT2) == 32
    assert effective_size(32, T.DST7) == 16
    assert effective_size(8, T.DCT8) == 8


def test_stage_config_defaults():
    cfg = StageConfig()
    assert (cfg.s1, cfg.s2, cfg.lfnst_shift) == (7, 10, 7)
    assert StageConfig(bit_depth=8).s2 == 12
    with pytest.raises(ValueError):
        StageConfig(s1=21)


def test_transform_spec_validation():
    with pytest.raises(UnsupportedSizeError):
        TransformSpec(T.DST7, 64)
    assert TransformSpec(T.DCT2, 64, Direction.VERTICAL).size == 64


def test_coeff_block_range():
    with pytest.raises(ValueError):
        CoeffBlock(np.full((4, 4), LIM))
    assert CoeffBlock(np.zeros((4, 8))).width == 8


@pytest.mark.parametrize("spec", all_mts_specs(), ids=lambda s: f"{s.tr_type.name}-{s.size}")
def test_1d_matches_oracle_with_junk(spec, rng):
    x = rng.integers(-LIM, LIM, size=(50, spec.size))
    n_eff = effective_size(spec.size, spec.tr_type)
    clean = x.copy()
    clean[:, n_eff:] = 0
    got = inverse_mts_1d(x, spec, 7, 18)
    want = naive_inverse_1d(clean, integer_kernel(spec.tr_type, spec.size), 7, 18)
    assert (got == want).all()


def test_1d_zero_vector():
    assert not inverse_mts_1d(np.zeros(32), TransformSpec(T.DCT8, 32), 7, 18).any()


@pytest.mark.parametrize("w,h", list(itertools.product(SIZES, SIZES)))
def test_2d_oracle_equivalence(w, h, rng):
    for hor_t, ver_t in _legal_pairs(w, h):
        for _ in range(8):
            y = rng.integers(-LIM, LIM, size=(h, w))
            got = inverse_mts_2d(CoeffBlock(y), TransformSpec(hor_t, w), TransformSpec(ver_t, h)).samples
            assert (got == _oracle_2d(y, hor_t, ver_t)).all(), (w, h, hor_t, ver_t)


def test_2d_horizontal_first(rng):
    cfg = StageConfig(first_direction="horizontal")
    y = rng.integers(-LIM, LIM, size=(32, 4))
    got = inverse_mts_2d(y, TransformSpec(T.DST7, 4), TransformSpec(T.DCT8, 32), cfg).samples
    assert (got == _oracle_2d(y, T.DST7, T.DCT8, cfg)).all()


def test_2d_zero_block():
    z = np.zeros((64, 64), dtype=np.int64)
    assert not inverse_mts_2d(z, TransformSpec(T.DCT2, 64), TransformSpec(T.DCT2, 64)).samples.any()


def test_2d_dimension_mismatch():
    with pytest.raises(ValueError):
        inverse_mts_2d(np.zeros((8, 4)), TransformSpec(T.DCT2, 8), TransformSpec(T.DCT2, 8))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SIZES), st.sampled_from(SIZES), st.integers(0, 4), st.integers(0, 2**32 - 1))
def test_zeroing_neutrality(w, h, idx, seed):
    hor_t, ver_t = mts_pair(idx if max(w, h) < 64 else 0)
    rng = np.random.default_rng(seed)
    y = rng.integers(-LIM, LIM, size=(h, w))
    junk = y.copy()
    ew, eh = effective_size(w, hor_t), effective_size(h, ver_t)
    junk[:, ew:] = rng.integers(-LIM, LIM, size=junk[:, ew:].shape)
    junk[eh:, :] = rng.integers(-LIM, LIM, size=junk[eh:, :].shape)
    hor, ver = TransformSpec(hor_t, w), TransformSpec(ver_t, h)
    assert (inverse_mts_2d(y, hor, ver).samples == inverse_mts_2d(junk, hor, ver).samples).all()


@pytest.mark.parametrize("idx", range(5))
def test_clamp_conformance_saturating_inputs(idx):
    hor_t, ver_t = mts_pair(idx)
    for sign in (1, -1):
        y = np.full((32, 32), sign * (LIM - 1))
        y[1::2, ::2] *= -1
        out = inverse_mts_2d(y, TransformSpec(hor_t, 32), TransformSpec(ver_t, 32)).samples
        assert out.min() >= -1024 and out.max() <= 1023
        mid = inverse_mts_1d(y.T, TransformSpec(ver_t, 32), 7, 18)
        assert mid.min() >= -LIM and mid.max() <= LIM - 1


def test_mult_count_examples():
    assert mult_count_1d(TransformSpec(T.DST7, 32)) == 512
    assert mult_count_1d(TransformSpec(T.DCT8, 32)) == 512
    assert mult_count_1d(TransformSpec(T.DST7, 4)) == 16
    assert mult_count_1d(TransformSpec(T.DCT2, 64)) == 688 <= 1024
    assert mult_count_1d(TransformSpec(T.DCT2, 64), zeroing=False) == 1376


@pytest.mark.parametrize("spec", all_mts_specs(), ids=lambda s: f"{s.tr_type.name}-{s.size}")
def test_mult_budget(spec):
    assert mult_count_1d(spec) <= 32 * (spec.size // 2)
