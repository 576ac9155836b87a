"""Pure-numpy versions of the RNS/NTT kernels.

Every function here has a numba twin in ``jit.py`` with the same signature
and bit-identical output. Residues are int64 arrays holding values below
2**31, so every product fits in 63 bits.
"""
import numpy as np


def to_residues(limbs, pow16, primes):
    """Reduce 16-bit limb rows (N, L) into residues (k, N)."""
    acc = limbs @ pow16
    return (acc % primes).T.copy()


def ntt_forward(a, zetas, primes):
    k, n = a.shape
    m = primes[:, None, None]
    length = n // 2
    blocks = 1
    while length >= 1:
        view = a.reshape(k, blocks, 2, length)
        z = zetas[:, blocks:2 * blocks, None]
        u = view[:, :, 0, :]
        v = (view[:, :, 1, :] * z) % m
        hi = (u - v) % m
        view[:, :, 0, :] = (u + v) % m
        view[:, :, 1, :] = hi
        length //= 2
        blocks *= 2
    return a


def ntt_inverse(a, izetas, ninv, primes):
    k, n = a.shape
    m = primes[:, None, None]
    length = 1
    blocks = n // 2
    while length < n:
        view = a.reshape(k, blocks, 2, length)
        z = izetas[:, blocks:2 * blocks, None]
        u = view[:, :, 0, :]
        v = view[:, :, 1, :]
        lo = (u + v) % m
        hi = ((u - v) % m * z) % m
        view[:, :, 0, :] = lo
        view[:, :, 1, :] = hi
        length *= 2
        blocks //= 2
    a[:] = (a * ninv[:, None]) % primes[:, None]
    return a


def pointwise_mac(acc, x, y, primes):
    acc[:] = (acc + (x * y) % primes[:, None]) % primes[:, None]
    return acc


def crt_accumulate(res, inv, mq_limbs, primes, n_out):
    """Map residues back to ``(S, u)`` with ``v = S - u*M`` congruent mod q.

    ``S`` is returned as (N, n_out) 16-bit limbs of sum(y_i * (M_i mod q)).
    """
    y = (res * inv[:, None]) % primes[:, None]
    frac = (y / primes[:, None]).sum(axis=0)
    u = np.floor(frac + 0.5).astype(np.int64)
    acc = y.T @ mq_limbs
    n, width = acc.shape
    out = np.zeros((n, n_out), dtype=np.int64)
    out[:, :width] = acc
    carry = np.zeros(n, dtype=np.int64)
    for col in range(n_out):
        v = out[:, col] + carry
        out[:, col] = v & 0xFFFF
        carry = v >> 16
    return out, u
