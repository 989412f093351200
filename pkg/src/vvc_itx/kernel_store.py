"""Binary kernel files and the in-memory kernel bank.

File layout (little-endian)::

    magic            4 bytes  b"ITXK"
    version          u8       1
    transform_type   u8       0=DCT2 1=DST7 2=DCT8 3=LFNST16 4=LFNST48
    rows             u16
    cols             u16
    precision_bits   u8
    entries          rows*cols x i16, row-major
"""

from __future__ import annotations

import os
import struct
import tempfile
from pathlib import Path

import numpy as np

from .kernels import (
    DEFAULT_PRECISION_BITS,
    MTS_SIZES,
    KernelMatrix,
    TransformType,
    dct8_from_dst7,
    integer_kernel,
)

MAGIC = b"ITXK"
VERSION = 1
_HEADER = struct.Struct("<4sBBHHB")

LFNST_SETS = 4
LFNST_KERNELS_PER_SET = 2
LFNST_ROWS = 16
LFNST_SCALE_BITS = 7
DEFAULT_LFNST_SEED = 20200715


class KernelFormatError(ValueError):
    pass


class MissingKernelError(KeyError):
    pass


def encode_kernel(kernel: KernelMatrix) -> bytes:
    if not kernel.is_integer:
        raise KernelFormatError("only integer kernels can be serialized")
    rows, cols = kernel.entries.shape
    header = _HEADER.pack(MAGIC, VERSION, int(kernel.transform_type), rows, cols, kernel.precision_bits)
    return header + np.asarray(kernel.entries, dtype="<i2").tobytes()


def decode_kernel(data: bytes) -> KernelMatrix:
    if len(data) < _HEADER.size:
        raise KernelFormatError("truncated header")
    magic, version, ttype, rows, cols, bits = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise KernelFormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise KernelFormatError(f"unsupported version {version}")
    try:
        ttype = TransformType(ttype)
    except ValueError:
        raise KernelFormatError(f"unknown transform type {ttype}") from None
    payload = data[_HEADER.size:]
    if len(payload) != rows * cols * 2:
        raise KernelFormatError(f"payload is {len(payload)} bytes, expected {rows * cols * 2}")
    entries = np.frombuffer(payload, dtype="<i2").astype(np.int64).reshape(rows, cols)
    lo, hi = -(1 << (bits - 1)), (1 << (bits - 1)) - 1
    if entries.size and (entries.min() < lo or entries.max() > hi):
        raise KernelFormatError(f"entries exceed {bits} signed bits")
    return KernelMatrix(ttype, entries, precision_bits=bits)


def write_kernel(path: str | os.PathLike, kernel: KernelMatrix) -> None:
    Path(path).write_bytes(encode_kernel(kernel))


def read_kernel(path: str | os.PathLike) -> KernelMatrix:
    return decode_kernel(Path(path).read_bytes())


def mts_filename(ttype: TransformType, n: int) -> str:
    return f"{TransformType(ttype).name.lower()}_{n}.itxk"


def lfnst_filename(out_size: int, set_idx: int, lfnst_idx: int) -> str:
    return f"lfnst{out_size}_set{set_idx}_idx{lfnst_idx}.itxk"


def synthetic_lfnst_kernels(seed: int = DEFAULT_LFNST_SEED) -> dict[tuple[int, int, int], KernelMatrix]:
    """Deterministic stand-in LFNST kernels.

    Each kernel is 16 orthonormal rows in R^16 or R^48, scaled by 2^7 and
    rounded into int8.  Keys are ``(out_size, set_idx, lfnst_idx)`` with
    ``lfnst_idx`` in 1..2.
    """
    rng = np.random.default_rng(seed)
    out = {}
    for out_size, ttype in ((16, TransformType.LFNST16), (48, TransformType.LFNST48)):
        for set_idx in range(LFNST_SETS):
            for lfnst_idx in (1, 2):
                q, _ = np.linalg.qr(rng.standard_normal((out_size, LFNST_ROWS)))
                rows = q.T  # 16 orthonormal rows of length out_size
                ent = np.clip(np.rint(rows * (1 << LFNST_SCALE_BITS)), -128, 127).astype(np.int64)
                out[(out_size, set_idx, lfnst_idx)] = KernelMatrix(ttype, ent, precision_bits=8)
    return out


class KernelBank:
    """Integer kernels used by the engines.

    DCT-VIII is never stored: it is derived from DST-VII through the
    permutation/sign relation whenever requested.
    """

    def __init__(self, mts: dict[tuple[TransformType, int], KernelMatrix], lfnst: dict[tuple[int, int, int], KernelMatrix]):
        self._mts = dict(mts)
        self._lfnst = dict(lfnst)
        for (ttype, n), k in list(self._mts.items()):
            if ttype == TransformType.DST7:
                self._mts[(TransformType.DCT8, n)] = dct8_from_dst7(k)

    @classmethod
    def default(cls, precision_bits: int = DEFAULT_PRECISION_BITS, seed: int = DEFAULT_LFNST_SEED) -> "KernelBank":
        mts = {}
        for ttype in (TransformType.DCT2, TransformType.DST7):
            for n in MTS_SIZES[ttype]:
                mts[(ttype, n)] = integer_kernel(ttype, n, precision_bits)
        return cls(mts, synthetic_lfnst_kernels(seed))

    @classmethod
    def load(cls, directory: str | os.PathLike) -> "KernelBank":
        """Load every kernel from ``directory``; any missing file is an error."""
        directory = Path(directory)
        if not directory.is_dir():
            raise MissingKernelError(f"kernel directory {directory} does not exist")
        mts = {}
        for ttype in (TransformType.DCT2, TransformType.DST7):
            for n in MTS_SIZES[ttype]:
                path = directory / mts_filename(ttype, n)
                if not path.exists():
                    raise MissingKernelError(str(path))
                k = read_kernel(path)
                if k.transform_type != ttype or k.entries.shape != (n, n):
                    raise KernelFormatError(f"{path.name}: unexpected type/shape")
                mts[(ttype, n)] = k
        lfnst = {}
        for out_size, ttype in ((16, TransformType.LFNST16), (48, TransformType.LFNST48)):
            for set_idx in range(LFNST_SETS):
                for lfnst_idx in (1, 2):
                    path = directory / lfnst_filename(out_size, set_idx, lfnst_idx)
                    if not path.exists():
                        raise MissingKernelError(str(path))
                    k = read_kernel(path)
                    if k.transform_type != ttype or k.entries.shape != (LFNST_ROWS, out_size):
                        raise KernelFormatError(f"{path.name}: unexpected type/shape")
                    lfnst[(out_size, set_idx, lfnst_idx)] = k
        return cls(mts, lfnst)

    def save(self, directory: str | os.PathLike) -> list[Path]:
        """Write all stored kernels; either every file lands or none does."""
        directory = Path(directory)
        files = {}
        for (ttype, n), k in self._mts.items():
            if ttype != TransformType.DCT8:
                files[mts_filename(ttype, n)] = encode_kernel(k)
        for (out_size, set_idx, lfnst_idx), k in self._lfnst.items():
            files[lfnst_filename(out_size, set_idx, lfnst_idx)] = encode_kernel(k)
        directory.mkdir(parents=True, exist_ok=True)
        staging = Path(tempfile.mkdtemp(prefix=".itxk-", dir=directory))
        written = []
        try:
            for name, blob in sorted(files.items()):
                (staging / name).write_bytes(blob)
            for name in sorted(files):
                os.replace(staging / name, directory / name)
                written.append(directory / name)
        except BaseException:
            for p in written:
                p.unlink(missing_ok=True)
            raise
        finally:
            for p in staging.iterdir():
                p.unlink()
            staging.rmdir()
        return written

    def mts(self, ttype: TransformType, n: int) -> KernelMatrix:
        try:
            return self._mts[(TransformType(ttype), n)]
        except KeyError:
            raise MissingKernelError(f"{TransformType(ttype).name}-{n}") from None

    def lfnst(self, out_size: int, set_idx: int, lfnst_idx: int) -> KernelMatrix:
        try:
            return self._lfnst[(out_size, set_idx, lfnst_idx)]
        except KeyError:
            raise MissingKernelError(f"LFNST{out_size} set {set_idx} idx {lfnst_idx}") from None

    def stored_mts(self) -> dict[tuple[TransformType, int], KernelMatrix]:
        return {key: k for key, k in self._mts.items() if key[0] != TransformType.DCT8}

    def lfnst_kernels(self) -> dict[tuple[int, int, int], KernelMatrix]:
        return dict(self._lfnst)


_DEFAULT_BANK: KernelBank | None = None


def default_bank() -> KernelBank:
    global _DEFAULT_BANK
    if _DEFAULT_BANK is None:
        _DEFAULT_BANK = KernelBank.default()
    return _DEFAULT_BANK
