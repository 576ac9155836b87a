"""Randomness: seeded generator, D_sk, D_err, uniform R_q and the PRF.

Everything is driven by AES in counter mode, so a 32-byte seed replays the
whole protocol byte for byte and the PRF instantiation is a plain
AES-128-CTR keystream per (key, id).
"""
from __future__ import annotations

import hashlib
import os
from bisect import bisect_right
from functools import lru_cache

import mpmath
import numpy as np
from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes

from .errors import ParameterError
from .ring import RingElement

SEED_BYTES = 32
PRF_KEY_BYTES = 16
# tail cut for D_err, in units of sigma
TAIL_CUT = 8
_BUFFER = 1 << 16


def _aes_ctr(key: bytes, nonce: bytes):
    return Cipher(algorithms.AES(key), modes.CTR(nonce)).encryptor()


class RngHandle:
    """Deterministic byte stream (AES-256-CTR keyed by a 32-byte seed).

    Not thread-safe: hand it from one thread to another, never share it.
    """

    def __init__(self, seed: bytes):
        if len(seed) != SEED_BYTES:
            raise ParameterError(f"seed must be {SEED_BYTES} bytes, got {len(seed)}")
        self.seed = bytes(seed)
        self._stream = _aes_ctr(self.seed, bytes(16))
        self._buf = b""
        self._pos = 0

    @classmethod
    def from_string(cls, text: str) -> "RngHandle":
        """Seed from 64 hex digits, or from the SHA-256 of any other string."""
        try:
            raw = bytes.fromhex(text)
        except ValueError:
            raw = b""
        if len(raw) != SEED_BYTES:
            raw = hashlib.sha256(text.encode()).digest()
        return cls(raw)

    @classmethod
    def from_os(cls) -> "RngHandle":
        return cls(os.urandom(SEED_BYTES))

    def read(self, n: int) -> bytes:
        if n <= len(self._buf) - self._pos:
            out = self._buf[self._pos:self._pos + n]
            self._pos += n
            return out
        head = self._buf[self._pos:]
        need = n - len(head)
        chunk = self._stream.update(bytes(max(need, _BUFFER)))
        self._buf, self._pos = chunk, need
        return head + chunk[:need]

    def spawn(self) -> "RngHandle":
        """Independent child stream (derived from 32 bytes of this one)."""
        return RngHandle(self.read(SEED_BYTES))

    def getrandbits(self, k: int) -> int:
        if k <= 0:
            return 0
        nbytes = (k + 7) // 8
        return int.from_bytes(self.read(nbytes), "little") >> (8 * nbytes - k)

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection sampling."""
        if n <= 0:
            raise ParameterError("randbelow needs n >= 1")
        k = (n - 1).bit_length()
        while True:
            v = self.getrandbits(k)
            if v < n:
                return v

    def uint64(self, count: int) -> np.ndarray:
        return np.frombuffer(self.read(8 * count), dtype="<u8")


def sample_uniform_ring(n: int, q: int, rng: RngHandle) -> RingElement:
    """Each coefficient uniform in [0, q) (rejection sampling, no bias)."""
    k = (q - 1).bit_length()
    nbytes = (k + 7) // 8
    shift = 8 * nbytes - k
    out = []
    frombytes = int.from_bytes
    while len(out) < n:
        need = n - len(out)
        buf = rng.read(need * nbytes)
        for i in range(need):
            v = frombytes(buf[i * nbytes:(i + 1) * nbytes], "little") >> shift
            if v < q:
                out.append(v)
    return RingElement._raw(tuple(out), q)


def sample_sk(n: int, h_sk: int, q: int, rng: RngHandle) -> RingElement:
    """Ternary secret with exactly ``h_sk`` nonzero ±1 coefficients."""
    if not 0 < h_sk <= n:
        raise ParameterError(f"need 0 < h_sk <= N, got h_sk={h_sk}, N={n}")
    idx = list(range(n))
    # partial Fisher-Yates: the first h_sk slots become a uniform subset
    for i in range(h_sk):
        j = i + rng.randbelow(n - i)
        idx[i], idx[j] = idx[j], idx[i]
    signs = rng.getrandbits(h_sk)
    vals = [0] * n
    for t, pos in enumerate(idx[:h_sk]):
        vals[pos] = 1 if (signs >> t) & 1 else q - 1
    return RingElement._raw(tuple(vals), q)


@lru_cache(maxsize=16)
def _err_table(sigma: float) -> tuple[int, tuple[int, ...]]:
    """Support bound and 64-bit CDF thresholds for the rounded Gaussian.

    P(k) is the mass of a N(0, sigma^2) variable rounding to k, restricted
    to |k| <= TAIL_CUT*sigma and renormalised (equivalent to resampling).
    """
    bound = int(TAIL_CUT * sigma)
    if bound == 0:
        return 0, ()
    with mpmath.workdps(60):
        s = mpmath.mpf(sigma)
        cdf = [mpmath.ncdf((k + mpmath.mpf(1) / 2) / s) for k in range(-bound - 1, bound + 1)]
        mass = [cdf[i + 1] - cdf[i] for i in range(2 * bound + 1)]
        total = sum(mass)
        thresholds = []
        acc = mpmath.mpf(0)
        for m in mass[:-1]:
            acc += m
            thresholds.append(int(mpmath.floor(acc / total * 2**64)))
    return bound, tuple(thresholds)


def sample_err(n: int, sigma: float, q: int, rng: RngHandle) -> RingElement:
    """Rounded Gaussian coefficients, hard-bounded by 8·sigma."""
    if sigma <= 0:
        raise ParameterError("sigma must be positive")
    bound, thresholds = _err_table(float(sigma))
    if bound == 0:
        return RingElement.zero(n, q)
    u = rng.uint64(n).tolist()
    vals = [bisect_right(thresholds, x) - bound for x in u]
    return RingElement._raw(tuple(v % q for v in vals), q)


def fresh_prf_key(rng: RngHandle) -> bytes:
    return rng.read(PRF_KEY_BYTES)


def prf_expand(key: bytes, ident: int, n: int, q: int) -> tuple[RingElement, RingElement]:
    """PRF(K, id) ∈ R_q^2 from an AES-128-CTR keystream.

    The counter block starts at ``id`` (8 bytes, big-endian) followed by
    eight zero bytes. Each coefficient takes bitlen(q)+64 bits of keystream
    before reduction mod q, so the bias is below 2^-64.
    """
    if len(key) != PRF_KEY_BYTES:
        raise ParameterError(f"PRF key must be {PRF_KEY_BYTES} bytes")
    if ident < 0 or ident >= 1 << 64:
        raise ParameterError("PRF id must fit in 64 bits")
    width = (q.bit_length() + 64 + 7) // 8
    stream = _aes_ctr(key, ident.to_bytes(8, "big") + bytes(8))
    buf = stream.update(bytes(2 * n * width))
    frombytes = int.from_bytes
    vals = [frombytes(buf[i * width:(i + 1) * width], "little") % q for i in range(2 * n)]
    return RingElement._raw(tuple(vals[:n]), q), RingElement._raw(tuple(vals[n:]), q)
