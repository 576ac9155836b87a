"""Exact negacyclic products of big-modulus polynomials via multi-prime NTT.

A product in Z_q[X]/(X^N+1) is computed over the integers by running a
negacyclic NTT modulo a set of 31-bit primes p_i = 1 (mod 2N) whose product M
exceeds the largest possible coefficient magnitude by a wide margin, then
recombining with the CRT directly modulo q. The kernels doing the per-prime
work live in ``vhss._kernels``.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from . import _kernels

PRIME_BITS = 31
# Maximum number of products summed in one ``mul_sum`` call.
MAX_TERMS = 4
# Headroom bits between the coefficient bound and M/2 (keeps float rounding
# of the CRT quotient far from a tie).
MARGIN_BITS = 12


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for sp in (2, 3, 5, 7, 11, 13):
        if n % sp == 0:
            return n == sp
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic for n < 3.4e14
    for a in (2, 3, 5, 7, 11, 13, 17):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _ntt_primes(n: int, count: int) -> list[int]:
    step = 2 * n
    out = []
    cand = ((1 << PRIME_BITS) - 1) // step * step + 1
    while len(out) < count:
        if cand < step:
            raise ValueError(f"not enough NTT primes for N={n}")
        if _is_prime(cand):
            out.append(cand)
        cand -= step
    return out


def _root_2n(m: int, n: int) -> int:
    """A primitive 2N-th root of unity modulo the prime m."""
    e = (m - 1) // (2 * n)
    for x in range(2, m):
        g = pow(x, e, m)
        if pow(g, n, m) == m - 1:
            return g
    raise ValueError("no primitive root found")


def _bitrev(i: int, bits: int) -> int:
    return int(format(i, f"0{bits}b")[::-1], 2) if bits else 0


def _powers(base: int, count: int, m: int) -> np.ndarray:
    out = [1] * count
    for e in range(1, count):
        out[e] = out[e - 1] * base % m
    return np.array(out, dtype=np.int64)


def _limbs16(values: list[int], width: int) -> np.ndarray:
    nbytes = 2 * width
    buf = b"".join(v.to_bytes(nbytes, "little") for v in values)
    arr = np.frombuffer(buf, dtype="<u2").reshape(len(values), width)
    return arr.astype(np.int64)


class RnsPlan:
    """Precomputed tables for multiplying in Z_q[X]/(X^N+1)."""

    def __init__(self, n: int, q: int, max_terms: int = MAX_TERMS):
        self.n = n
        self.q = q
        bound_bits = (2 * q.bit_length() + n.bit_length()
                      + max_terms.bit_length() + MARGIN_BITS)
        primes: list[int] = []
        count = bound_bits // (PRIME_BITS - 1) + 1
        while True:
            primes = _ntt_primes(n, count)
            total = 1
            for m in primes:
                total *= m
            if total.bit_length() > bound_bits + 1:
                break
            count += 1
        self.primes = np.array(primes, dtype=np.int64)
        self.modulus_product = total
        k = len(primes)
        logn = n.bit_length() - 1

        zetas = np.zeros((k, n), dtype=np.int64)
        izetas = np.zeros((k, n), dtype=np.int64)
        ninv = np.zeros(k, dtype=np.int64)
        rev = np.array([_bitrev(t, logn) for t in range(n)], dtype=np.int64)
        for i, m in enumerate(primes):
            psi = _root_2n(m, n)
            zetas[i] = _powers(psi, n, m)[rev]
            izetas[i] = _powers(pow(psi, -1, m), n, m)[rev]
            ninv[i] = pow(n, -1, m)
        self.zetas, self.izetas, self.ninv = zetas, izetas, ninv

        self.in_width = max(1, -(-(q - 1).bit_length() // 16))
        self.pow16 = np.array(
            [[pow(2, 16 * j, m) for m in primes] for j in range(self.in_width)],
            dtype=np.int64,
        )

        self.q_width = max(1, -(-q.bit_length() // 16))
        cofactors = [total // m for m in primes]
        self.crt_inv = np.array(
            [pow(c % m, -1, m) for c, m in zip(cofactors, primes)], dtype=np.int64
        )
        self.crt_limbs = _limbs16([c % q for c in cofactors], self.q_width)
        self.m_mod_q = total % q
        # sum y_i*(M_i mod q) < k * 2**31 * q
        self.out_width = self.q_width + (k.bit_length() + PRIME_BITS) // 16 + 2

    def forward(self, coeffs) -> np.ndarray:
        """Residues of ``coeffs`` (canonical, < q) in NTT form, shape (k, N)."""
        res = _kernels.to_residues(_limbs16(list(coeffs), self.in_width),
                                   self.pow16, self.primes)
        return _kernels.ntt_forward(res, self.zetas, self.primes)

    def inverse(self, acc: np.ndarray) -> list[int]:
        """Canonical mod-q coefficients of the integer polynomial in ``acc``."""
        res = _kernels.ntt_inverse(acc.copy(), self.izetas, self.ninv, self.primes)
        limbs, u = _kernels.crt_accumulate(res, self.crt_inv, self.crt_limbs,
                                           self.primes, self.out_width)
        buf = limbs.astype("<u2").tobytes()
        w = 2 * self.out_width
        q, mq = self.q, self.m_mod_q
        frombytes = int.from_bytes
        return [(frombytes(buf[i * w:(i + 1) * w], "little") - int(ui) * mq) % q
                for i, ui in enumerate(u.tolist())]

    def mul_sum(self, pairs) -> list[int]:
        """Sum of products of already-transformed operand pairs."""
        if not 1 <= len(pairs) <= MAX_TERMS:
            raise ValueError(f"mul_sum takes 1..{MAX_TERMS} products")
        acc = np.zeros((len(self.primes), self.n), dtype=np.int64)
        for x, y in pairs:
            _kernels.pointwise_mac(acc, x, y, self.primes)
        return self.inverse(acc)


@lru_cache(maxsize=32)
def plan_for(n: int, q: int) -> RnsPlan:
    return RnsPlan(n, q)
