"""numba-compiled RNS/NTT kernels (see ``numpy_impl`` for the reference)."""
import numpy as np
from numba import njit


@njit(cache=True)
def to_residues(limbs, pow16, primes):
    n, width = limbs.shape
    k = primes.shape[0]
    out = np.empty((k, n), dtype=np.int64)
    for i in range(k):
        m = primes[i]
        for c in range(n):
            acc = 0
            for j in range(width):
                acc += limbs[c, j] * pow16[j, i]
            out[i, c] = acc % m
    return out


@njit(cache=True)
def ntt_forward(a, zetas, primes):
    k, n = a.shape
    for i in range(k):
        m = primes[i]
        t = 1
        length = n // 2
        while length >= 1:
            start = 0
            while start < n:
                z = zetas[i, t]
                t += 1
                for j in range(start, start + length):
                    u = a[i, j]
                    v = (z * a[i, j + length]) % m
                    s = u + v
                    a[i, j] = s - m if s >= m else s
                    d = u - v
                    a[i, j + length] = d + m if d < 0 else d
                start += 2 * length
            length //= 2
    return a


@njit(cache=True)
def ntt_inverse(a, izetas, ninv, primes):
    k, n = a.shape
    for i in range(k):
        m = primes[i]
        length = 1
        while length < n:
            blocks = n // (2 * length)
            for b in range(blocks):
                z = izetas[i, blocks + b]
                start = 2 * b * length
                for j in range(start, start + length):
                    u = a[i, j]
                    v = a[i, j + length]
                    s = u + v
                    a[i, j] = s - m if s >= m else s
                    d = u - v
                    if d < 0:
                        d += m
                    a[i, j + length] = (d * z) % m
            length *= 2
        f = ninv[i]
        for j in range(n):
            a[i, j] = (a[i, j] * f) % m
    return a


@njit(cache=True)
def pointwise_mac(acc, x, y, primes):
    k, n = acc.shape
    for i in range(k):
        m = primes[i]
        for j in range(n):
            s = acc[i, j] + (x[i, j] * y[i, j]) % m
            acc[i, j] = s - m if s >= m else s
    return acc


@njit(cache=True)
def crt_accumulate(res, inv, mq_limbs, primes, n_out):
    k, n = res.shape
    width = mq_limbs.shape[1]
    out = np.zeros((n, n_out), dtype=np.int64)
    u = np.empty(n, dtype=np.int64)
    y = np.empty(k, dtype=np.int64)
    for c in range(n):
        frac = 0.0
        for i in range(k):
            yi = (res[i, c] * inv[i]) % primes[i]
            y[i] = yi
            frac += yi / primes[i]
        u[c] = np.int64(np.floor(frac + 0.5))
        for col in range(width):
            acc = 0
            for i in range(k):
                acc += y[i] * mq_limbs[i, col]
            out[c, col] = acc
        carry = 0
        for col in range(n_out):
            v = out[c, col] + carry
            out[c, col] = v & 0xFFFF
            carry = v >> 16
    return out, u
