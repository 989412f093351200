"""Transform kernels for the inverse MTS path.

Real-valued DCT-II / DST-VII / DCT-VIII bases, their 8-bit integer
quantization, the DST-VII -> DCT-VIII permutation/sign relation and the
DCT-II even/odd (butterfly) decomposition.

Kernel matrices are stored basis-major: ``entries[i, j]`` is basis function
``i`` evaluated at sample ``j`` (0-based).  An inverse 1-D transform of a
coefficient vector ``c`` is therefore ``entries.T @ c``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np


class TransformType(enum.IntEnum):
    DCT2 = 0
    DST7 = 1
    DCT8 = 2
    LFNST16 = 3
    LFNST48 = 4


MTS_SIZES = {
    TransformType.DCT2: (4, 8, 16, 32, 64),
    TransformType.DST7: (4, 8, 16, 32),
    TransformType.DCT8: (4, 8, 16, 32),
}

# Sizes accepted by the raw formulas; 1 and 2 are handy degenerate cases.
_FORMULA_SIZES = {
    TransformType.DCT2: (1, 2, 4, 8, 16, 32, 64),
    TransformType.DST7: (1, 2, 4, 8, 16, 32),
    TransformType.DCT8: (1, 2, 4, 8, 16, 32),
}

DEFAULT_PRECISION_BITS = 8


class UnsupportedSizeError(ValueError):
    pass


class QuantizationOverflowError(ValueError):
    pass


class NoDecompositionError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class KernelMatrix:
    """A transform kernel, real or integer.

    ``scale`` and ``precision_bits`` are ``None`` for the real variant.
    """

    transform_type: TransformType
    entries: np.ndarray
    scale: float | None = None
    precision_bits: int | None = None

    def __post_init__(self):
        arr = np.array(self.entries, copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    @property
    def is_integer(self) -> bool:
        return self.precision_bits is not None

    def __eq__(self, other):
        if not isinstance(other, KernelMatrix):
            return NotImplemented
        return (
            self.transform_type == other.transform_type
            and self.precision_bits == other.precision_bits
            and self.entries.shape == other.entries.shape
            and bool(np.array_equal(self.entries, other.entries))
        )

    __hash__ = None


def _check_size(transform_type: TransformType, n: int) -> None:
    allowed = _FORMULA_SIZES.get(TransformType(transform_type))
    if allowed is None or n not in allowed:
        raise UnsupportedSizeError(
            f"{TransformType(transform_type).name} is not defined for N={n}"
        )


def generate_basis(transform_type: TransformType, n: int, i: int, j: int) -> float:
    """Entry (i, j) of the real N-point kernel, 1-based indices."""
    _check_size(transform_type, n)
    if not (1 <= i <= n and 1 <= j <= n):
        raise IndexError(f"(i, j)=({i}, {j}) outside 1..{n}")
    if transform_type == TransformType.DCT2:
        gamma = math.sqrt(0.5) if i == 1 else 1.0
        return gamma * math.sqrt(2.0 / n) * math.cos(math.pi * (i - 1) * (2 * j - 1) / (2 * n))
    if transform_type == TransformType.DST7:
        return math.sqrt(4.0 / (2 * n + 1)) * math.sin(math.pi * (2 * i - 1) * j / (2 * n + 1))
    return math.sqrt(4.0 / (2 * n + 1)) * math.cos(
        math.pi * (2 * i - 1) * (2 * j - 1) / (2 * (2 * n + 1))
    )


@lru_cache(maxsize=None)
def real_kernel(transform_type: TransformType, n: int) -> KernelMatrix:
    transform_type = TransformType(transform_type)
    _check_size(transform_type, n)
    entries = np.array(
        [[generate_basis(transform_type, n, i, j) for j in range(1, n + 1)] for i in range(1, n + 1)]
    )
    return KernelMatrix(transform_type, entries)


def round_half_away(x):
    x = np.asarray(x, dtype=np.float64)
    return (np.sign(x) * np.floor(np.abs(x) + 0.5)).astype(np.int64)


def default_scale(n: int) -> float:
    return 64.0 * math.sqrt(n)


def quantize_kernel(
    kernel: KernelMatrix,
    precision_bits: int = DEFAULT_PRECISION_BITS,
    scale: float | None = None,
) -> KernelMatrix:
    """Round ``scale * entry`` half away from zero into signed ``precision_bits``."""
    if scale is None:
        scale = default_scale(kernel.size)
    q = round_half_away(scale * np.asarray(kernel.entries, dtype=np.float64))
    lo, hi = -(1 << (precision_bits - 1)), (1 << (precision_bits - 1)) - 1
    if q.size and (q.min() < lo or q.max() > hi):
        raise QuantizationOverflowError(
            f"{kernel.transform_type.name}-{kernel.size}: range [{q.min()}, {q.max()}] "
            f"does not fit {precision_bits} signed bits"
        )
    return KernelMatrix(kernel.transform_type, q, scale=scale, precision_bits=precision_bits)


@lru_cache(maxsize=None)
def integer_kernel(transform_type: TransformType, n: int, precision_bits: int = DEFAULT_PRECISION_BITS) -> KernelMatrix:
    return quantize_kernel(real_kernel(transform_type, n), precision_bits)


@dataclass(frozen=True, eq=False)
class PermSignPair:
    size: int
    lam: np.ndarray
    gamma: np.ndarray


def perm_sign_pair(n: int) -> PermSignPair:
    if n not in (1, 2, 4, 8, 16, 32):
        raise UnsupportedSizeError(f"no permutation/sign pair for N={n}")
    lam = np.fliplr(np.eye(n, dtype=np.int64))
    gamma = np.diag([(-1) ** i for i in range(n)]).astype(np.int64)
    lam.setflags(write=False)
    gamma.setflags(write=False)
    return PermSignPair(n, lam, gamma)


def dct8_from_dst7(dst7: int | KernelMatrix) -> KernelMatrix:
    """DCT-VIII kernel obtained from a DST-VII kernel.

    Computes ``C8^T = Lambda @ S7^T @ Gamma`` and returns it basis-major
    (i.e. ``C8`` itself).  An integer DST-VII input yields an integer DCT-VIII
    with the same scale and precision.
    """
    if isinstance(dst7, int):
        dst7 = real_kernel(TransformType.DST7, dst7)
    if dst7.transform_type != TransformType.DST7:
        raise ValueError(f"expected a DST7 kernel, got {dst7.transform_type.name}")
    ps = perm_sign_pair(dst7.size)
    c8_t = ps.lam @ dst7.entries.T @ ps.gamma
    return KernelMatrix(TransformType.DCT8, c8_t.T, scale=dst7.scale, precision_bits=dst7.precision_bits)


# -- butterfly ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ButterflyDecomposition:
    """One even/odd split of an N-point DCT-II kernel.

    ``recombine_map[j] = (k, sign)`` means output sample ``j`` is
    ``even[k] + sign * odd[k]``.
    """

    size: int
    even_part: KernelMatrix
    odd_matrix: np.ndarray
    recombine_map: np.ndarray


def _recombine_map(n: int) -> np.ndarray:
    half = n // 2
    rmap = np.empty((n, 2), dtype=np.int64)
    for k in range(half):
        rmap[k] = (k, 1)
        rmap[n - 1 - k] = (k, -1)
    return rmap


def butterfly_split(kernel: KernelMatrix) -> ButterflyDecomposition:
    n = kernel.size
    if kernel.transform_type != TransformType.DCT2:
        raise NoDecompositionError(f"butterfly split needs DCT2, got {kernel.transform_type.name}")
    if n < 8 or n & (n - 1):
        raise NoDecompositionError(f"no butterfly decomposition for N={n}")
    half = n // 2
    k = kernel.entries
    even = k[0::2, :half]
    odd = k[1::2, :half]
    # the split is only valid if the kernel carries the DCT-II symmetries exactly
    if not (np.array_equal(k[0::2, half:], even[:, ::-1]) and np.array_equal(k[1::2, half:], -odd[:, ::-1])):
        raise NoDecompositionError(f"DCT2-{n} kernel lacks even/odd symmetry")
    even_kernel = KernelMatrix(
        TransformType.DCT2,
        even,
        scale=None if kernel.scale is None else kernel.scale / math.sqrt(2.0),
        precision_bits=kernel.precision_bits,
    )
    return ButterflyDecomposition(n, even_kernel, np.array(odd), _recombine_map(n))


def recompose(decomp: ButterflyDecomposition) -> KernelMatrix:
    n, half = decomp.size, decomp.size // 2
    even = decomp.even_part.entries
    out = np.zeros((n, n), dtype=even.dtype)
    for j, (k, sign) in enumerate(decomp.recombine_map):
        out[0::2, j] = even[:, k]
        out[1::2, j] = sign * decomp.odd_matrix[:, k]
    scale = None if decomp.even_part.scale is None else decomp.even_part.scale * math.sqrt(2.0)
    return KernelMatrix(TransformType.DCT2, out, scale=scale, precision_bits=decomp.even_part.precision_bits)


_SPLITS: dict[int, tuple[KernelMatrix, ButterflyDecomposition]] = {}


def _split_cached(kernel: KernelMatrix) -> ButterflyDecomposition:
    hit = _SPLITS.get(id(kernel))
    if hit is None or hit[0] is not kernel:
        hit = (kernel, butterfly_split(kernel))
        _SPLITS[id(kernel)] = hit
    return hit[1]


class OpCounter:
    def __init__(self):
        self.mults = 0
        self.adds = 0

    def __repr__(self):
        return f"OpCounter(mults={self.mults}, adds={self.adds})"


def butterfly_inverse(
    kernel: KernelMatrix,
    coeffs: np.ndarray,
    n_eff: int | None = None,
    counter: OpCounter | None = None,
) -> np.ndarray:
    """``kernel.T @ coeffs`` for a DCT-II kernel, via recursive even/odd split.

    ``coeffs`` has the transform axis last and may carry leading batch axes.
    Inputs at index ``>= n_eff`` are taken as zero and never multiplied.
    The recursion bottoms out at a direct 4-point product.  Exact in integers.
    Counted operations are per vector.
    """
    n = kernel.size
    coeffs = np.asarray(coeffs)
    if coeffs.shape[-1] != n:
        raise ValueError(f"vector length {coeffs.shape[-1]} != kernel size {n}")
    if n_eff is None:
        n_eff = n
    n_eff = min(n_eff, n)

    if n <= 4:
        used = kernel.entries[:n_eff]
        if counter is not None:
            counter.mults += n_eff * n
            counter.adds += max(n_eff - 1, 0) * n
        return coeffs[..., :n_eff] @ used

    decomp = _split_cached(kernel)
    half = n // 2
    n_odd = n_eff // 2
    even_out = butterfly_inverse(decomp.even_part, coeffs[..., 0::2], (n_eff + 1) // 2, counter)
    odd_out = coeffs[..., 1::2][..., :n_odd] @ decomp.odd_matrix[:n_odd]
    if counter is not None:
        counter.mults += n_odd * half
        counter.adds += max(n_odd - 1, 0) * half + n
    idx = decomp.recombine_map[:, 0]
    sign = decomp.recombine_map[:, 1]
    return even_out[..., idx] + sign * odd_out[..., idx]


def dct2_input_profile(n: int, n_eff: int | None = None) -> list[int]:
    """Multiplications attributable to each (nonzero) input of the butterfly.

    Entry ``i`` is the number of products input ``i`` takes part in; the sum
    equals the operation count of :func:`butterfly_inverse`.
    """
    if n_eff is None:
        n_eff = n
    n_eff = min(n_eff, n)
    if n <= 4:
        return [n] * n_eff
    half = n // 2
    sub = dct2_input_profile(half, (n_eff + 1) // 2)
    prof = [0] * n_eff
    for i in range(n_eff):
        prof[i] = half if i % 2 else sub[i // 2]
    return prof
