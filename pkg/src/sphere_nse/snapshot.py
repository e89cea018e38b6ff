"""Binary snapshots of spectral coefficients.

Layout (little-endian):

    offset  size  field
    0       4     magic b"SNSE"
    4       4     uint32 format version
    8       4     uint32 truncation N
    12      4     uint32 grid size M
    16      8     float64 time t
    24      16    experiment id, ASCII, NUL padded
    40      32    SHA-256 digest of the canonical configuration
    72      ...   float64 (re, im) pairs of alpha_{L,m}, L = 1..N, m = 0..L

Negative orders are not stored; they follow from the reality condition
alpha_{L,-m} = (-1)^m conj(alpha_{L,m}).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .grid_transform import grid_size_for
from .harmonic_basis import ModeIndex

MAGIC = b"SNSE"
VERSION = 1
_HEADER = struct.Struct("<4sIIId16s32s")


class SnapshotError(OSError):
    pass


class CorruptSnapshotError(SnapshotError):
    pass


class SnapshotVersionError(SnapshotError):
    pass


@dataclass(frozen=True)
class SnapshotMeta:
    N: int
    M: int
    t: float
    experiment: str
    config_hash: bytes
    version: int = VERSION


def _nonnegative_index(modes: ModeIndex) -> np.ndarray:
    return np.array([modes.flat(L, m) for L in range(1, modes.N + 1) for m in range(L + 1)])


def encode_snapshot(alpha, t: float, experiment: str = "", config_hash: bytes = b"",
                    M: int | None = None) -> bytes:
    alpha = np.asarray(alpha, dtype=complex)
    modes = ModeIndex.from_size(alpha.size)
    M = grid_size_for(modes.N) if M is None else M
    header = _HEADER.pack(MAGIC, VERSION, modes.N, M, float(t),
                          experiment.encode("ascii")[:16], config_hash[:32])
    payload = alpha[_nonnegative_index(modes)]
    pairs = np.empty((payload.size, 2), dtype="<f8")
    pairs[:, 0] = payload.real
    pairs[:, 1] = payload.imag
    return header + pairs.tobytes()


def decode_snapshot(blob: bytes) -> tuple[np.ndarray, SnapshotMeta]:
    if len(blob) < _HEADER.size:
        raise CorruptSnapshotError("file shorter than snapshot header")
    magic, version, N, M, t, exp, digest = _HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise CorruptSnapshotError(f"bad magic {magic!r}")
    if version != VERSION:
        raise SnapshotVersionError(f"snapshot version {version}, reader supports {VERSION}")
    if N < 1:
        raise CorruptSnapshotError(f"invalid truncation N={N}")
    count = N * (N + 3) // 2
    body = blob[_HEADER.size:]
    if len(body) != 16 * count:
        raise CorruptSnapshotError(f"payload has {len(body)} bytes, expected {16 * count}")
    pairs = np.frombuffer(body, dtype="<f8").reshape(count, 2)
    modes = ModeIndex(N)
    alpha = np.zeros(modes.size, dtype=complex)
    idx = _nonnegative_index(modes)
    alpha[idx] = pairs[:, 0] + 1j * pairs[:, 1]
    m = modes.orders
    neg = m < 0
    partner = modes.flat(modes.degrees[neg], -m[neg])
    sign = np.where(m[neg] % 2, -1.0, 1.0)
    alpha[neg] = sign * np.conj(alpha[partner])
    meta = SnapshotMeta(N, M, t, exp.rstrip(b"\0").decode("ascii"), digest, version)
    return alpha, meta


def save_snapshot(path, alpha, t: float, experiment: str = "", config_hash: bytes = b"",
                  M: int | None = None) -> None:
    with open(path, "wb") as fh:
        fh.write(encode_snapshot(alpha, t, experiment, config_hash, M))


def load_snapshot(path) -> tuple[np.ndarray, SnapshotMeta]:
    with open(path, "rb") as fh:
        return decode_snapshot(fh.read())
