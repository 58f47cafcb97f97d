"""Three-user MIMO channel sets: generation, specialisation, duality, files.

User indices in the public API are 1-based and wrap modulo 3, so
``ch.h(4, 2)`` is the same matrix as ``ch.h(1, 2)``.
"""

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ChannelFileError, PreconditionError

K_USERS = 3


@dataclass(frozen=True)
class SystemParams:
    M: int
    N: int
    d: int

    def __post_init__(self):
        for name in ("M", "N", "d"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or v < 1:
                raise PreconditionError(f"{name} must be a positive integer, got {v!r}")
        if self.d > min(self.M, self.N):
            raise PreconditionError(f"d={self.d} exceeds min(M, N)={min(self.M, self.N)}")


@dataclass(frozen=True, eq=False)
class ChannelSet:
    """Nine N x M channel matrices; ``H[i-1, j-1]`` maps transmitter j to receiver i."""

    M: int
    N: int
    H: np.ndarray

    def __post_init__(self):
        h = np.array(self.H, dtype=np.complex128)
        if h.shape != (K_USERS, K_USERS, self.N, self.M):
            raise PreconditionError(
                f"channel array must have shape (3, 3, {self.N}, {self.M}), got {h.shape}"
            )
        if not np.all(np.isfinite(h)):
            raise PreconditionError("channel entries must be finite")
        h.setflags(write=False)
        object.__setattr__(self, "H", h)

    def h(self, i, j):
        """Channel from transmitter ``j`` to receiver ``i`` (1-based, mod 3)."""
        return self.H[(i - 1) % K_USERS, (j - 1) % K_USERS]

    def plus(self, i):
        """Cross channel at receiver i from transmitter i+1."""
        return self.h(i, i + 1)

    def minus(self, i):
        """Cross channel at receiver i from transmitter i-1."""
        return self.h(i, i - 1)

    def restrict(self, m=None, n=None):
        """Channels seen through the first ``m`` transmit / ``n`` receive antennas."""
        m = self.M if m is None else m
        n = self.N if n is None else n
        return ChannelSet(m, n, self.H[:, :, :n, :m])

    def __eq__(self, other):
        if not isinstance(other, ChannelSet):
            return NotImplemented
        return self.M == other.M and self.N == other.N and np.array_equal(self.H, other.H)

    __hash__ = None


def _stream(seed, i, j):
    # Philox is counter based; each (seed, i, j) key owns an independent stream.
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, i, j])))


def standard_complex_normal(rng, shape):
    x = rng.standard_normal(shape)
    y = rng.standard_normal(shape)
    return (x + 1j * y) / np.sqrt(2.0)


def generate_channels(M, N, seed):
    """I.i.d. unit-variance circular complex Gaussian channels.

    The matrix for receiver i, transmitter j is drawn from a stream keyed by
    ``(seed, i, j)`` alone, so it does not depend on generation order.
    """
    if M < 1 or N < 1:
        raise PreconditionError(f"M and N must be >= 1, got M={M}, N={N}")
    if seed < 0:
        raise PreconditionError(f"seed must be non-negative, got {seed}")
    H = np.empty((K_USERS, K_USERS, N, M), dtype=np.complex128)
    for i in range(1, K_USERS + 1):
        for j in range(1, K_USERS + 1):
            H[i - 1, j - 1] = standard_complex_normal(_stream(seed, i, j), (N, M))
    return ChannelSet(M, N, H)


def specialized_blocks(M, N):
    """The 0/1 matrices B = [I_M; 0] and C = [0; I_M] of shape N x M (integer)."""
    if N < M:
        raise PreconditionError(f"specialised channels need N >= M, got M={M}, N={N}")
    B = np.zeros((N, M), dtype=np.int64)
    C = np.zeros((N, M), dtype=np.int64)
    B[:M] = np.eye(M, dtype=np.int64)
    C[N - M:] = np.eye(M, dtype=np.int64)
    return B, C


def specialized_channels(M, N):
    """Channel set with every H_{i,+} = B, every H_{i,-} = C, and H_ii = B."""
    B, C = specialized_blocks(M, N)
    H = np.empty((K_USERS, K_USERS, N, M), dtype=np.complex128)
    for i in range(K_USERS):
        H[i, i] = B
        H[i, (i + 1) % K_USERS] = B
        H[i, (i - 1) % K_USERS] = C
    return ChannelSet(M, N, H)


def transpose_dual(ch):
    """Reciprocal system: roles of M and N swap and H'[j][i] = H[i][j]^T."""
    H = np.transpose(ch.H, (1, 0, 3, 2))
    return ChannelSet(ch.N, ch.M, H)


# ---------------------------------------------------------------------------
# JSON encoding
# ---------------------------------------------------------------------------

def encode_matrix(a):
    """Row-major nested lists of ``[re, im]`` pairs."""
    a = np.asarray(a, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in a]


def decode_matrix(obj, rows=None, cols=None, key="matrix"):
    try:
        arr = np.asarray(obj, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ChannelFileError(f"{key}: entries must be [re, im] number pairs") from exc
    if arr.size == 0 and rows is not None and cols is not None:
        if rows * cols == 0:
            return np.zeros((rows, cols), dtype=np.complex128)
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ChannelFileError(f"{key}: expected nested [[ [re, im], ... ], ...], got shape {arr.shape}")
    if (rows is not None and arr.shape[0] != rows) or (cols is not None and arr.shape[1] != cols):
        raise ChannelFileError(f"{key}: expected shape {rows}x{cols}, got {arr.shape[0]}x{arr.shape[1]}")
    if not np.all(np.isfinite(arr)):
        raise ChannelFileError(f"{key}: non-finite entry")
    return arr[..., 0] + 1j * arr[..., 1]


def channels_to_dict(ch):
    return {
        "M": int(ch.M),
        "N": int(ch.N),
        "K": K_USERS,
        "H": {
            f"H_{i}_{j}": encode_matrix(ch.h(i, j))
            for i in range(1, K_USERS + 1)
            for j in range(1, K_USERS + 1)
        },
    }


def _require_int(doc, key):
    if key not in doc:
        raise ChannelFileError(f"missing key {key!r}")
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise ChannelFileError(f"key {key!r} must be a positive integer, got {v!r}")
    return v


def channels_from_dict(doc):
    if not isinstance(doc, dict):
        raise ChannelFileError("channel file must hold a JSON object")
    M = _require_int(doc, "M")
    N = _require_int(doc, "N")
    if doc.get("K", K_USERS) != K_USERS:
        raise ChannelFileError(f"key 'K' must be {K_USERS}, got {doc.get('K')!r}")
    hs = doc.get("H")
    if not isinstance(hs, dict):
        raise ChannelFileError("missing key 'H'")
    H = np.empty((K_USERS, K_USERS, N, M), dtype=np.complex128)
    for i in range(1, K_USERS + 1):
        for j in range(1, K_USERS + 1):
            key = f"H_{i}_{j}"
            if key not in hs:
                raise ChannelFileError(f"missing key {key!r}")
            H[i - 1, j - 1] = decode_matrix(hs[key], N, M, key)
    return ChannelSet(M, N, H)


def dump_json(doc, path):
    # repr of a Python float is the shortest string that round-trips exactly
    text = json.dumps(doc, separators=(",", ":"))
    Path(path).write_text(text + "\n")


def load_json(path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ChannelFileError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from exc


def write_channels(ch, path):
    dump_json(channels_to_dict(ch), path)


def read_channels(path):
    return channels_from_dict(load_json(path))
