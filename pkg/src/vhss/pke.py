"""Ring-LWE public-key encryption with nearly linear decryption.

For sk = (1, s) and any ciphertext c = (c0, c1) produced here,
<sk, c> = c0 + c1·s = (q/p)·m + e (mod q) with ||e||∞ <= B_ct. The OKDM
routine encrypts x·s_j without knowing s, and ``pke_ddec`` lets two servers
holding additive shares of x·sk recover additive shares of x·m.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, ParameterError
from .params import Params
from .ring import RingElement, embed, mul_sum, ring_add, ring_mul, ring_neg
from .sampling import RngHandle, sample_err, sample_sk, sample_uniform_ring


@dataclass(frozen=True)
class PublicKey:
    params: Params
    a: RingElement
    b: RingElement


@dataclass(frozen=True)
class SecretKey:
    """sk = (s0, s1) = (1, s)."""

    s0: RingElement
    s1: RingElement

    def as_pair(self) -> tuple[RingElement, RingElement]:
        return (self.s0, self.s1)


@dataclass(frozen=True)
class Ciphertext:
    c0: RingElement
    c1: RingElement

    def __add__(self, other: "Ciphertext") -> "Ciphertext":
        return Ciphertext(ring_add(self.c0, other.c0), ring_add(self.c1, other.c1))


@dataclass(frozen=True)
class KdmCiphertext:
    """C^x: col1 encrypts x·1, col2 encrypts x·s.

    ``weight`` counts how many fresh ciphertexts were summed into this one.
    """

    col1: Ciphertext
    col2: Ciphertext
    weight: int = 1

    def entries(self) -> tuple[RingElement, ...]:
        return (self.col1.c0, self.col1.c1, self.col2.c0, self.col2.c1)


def _check_plaintext(params: Params, m: RingElement) -> None:
    if m.modulus != params.p or m.n != params.n:
        raise DomainError(
            f"plaintext must live in R_p (N={params.n}, p={params.p}); "
            f"got N={m.n}, modulus={m.modulus}")


def scale_up(params: Params, m: RingElement) -> RingElement:
    """(q/p)·m as an element of R_q (exact integer arithmetic)."""
    d, q = params.delta, params.q
    return RingElement._raw(tuple(d * c for c in m.coeffs), q)


def pke_gen(params: Params, rng: RngHandle) -> tuple[PublicKey, SecretKey]:
    n, q = params.n, params.q
    a = sample_uniform_ring(n, q, rng)
    s = sample_sk(n, params.h_sk, q, rng)
    e = sample_err(n, params.sigma, q, rng)
    b = ring_add(ring_mul(a, s), e)
    return PublicKey(params, a, b), SecretKey(RingElement.one(n, q), s)


def pke_enc(pk: PublicKey, m: RingElement, rng: RngHandle) -> Ciphertext:
    prm = pk.params
    _check_plaintext(prm, m)
    n, q = prm.n, prm.q
    v = sample_sk(n, prm.h_sk, q, rng)
    e0 = sample_err(n, prm.sigma, q, rng)
    e1 = sample_err(n, prm.sigma, q, rng)
    c1 = ring_add(ring_neg(ring_mul(pk.a, v)), e0)
    c0 = ring_add(ring_add(ring_mul(pk.b, v), e1), scale_up(prm, m))
    return Ciphertext(c0, c1)


def pke_okdm_component(pk: PublicKey, x: RingElement, j: int, rng: RngHandle) -> Ciphertext:
    """Encryption of x·s_j (s_1 = 1, s_2 = s) without the secret key."""
    if j == 1:
        return pke_enc(pk, x, rng)
    if j == 2:
        _check_plaintext(pk.params, x)
        c = pke_enc(pk, RingElement.zero(pk.params.n, pk.params.p), rng)
        return Ciphertext(c.c0, ring_add(c.c1, scale_up(pk.params, x)))
    raise ParameterError(f"component index must be 1 or 2, got {j}")


def pke_okdm(pk: PublicKey, x: RingElement, rng: RngHandle) -> KdmCiphertext:
    return KdmCiphertext(pke_okdm_component(pk, x, 1, rng),
                         pke_okdm_component(pk, x, 2, rng))


def decrypt_inner(sk: SecretKey, c: Ciphertext) -> RingElement:
    """<sk, c> = c0 + c1·s in R_q (white-box helper for tests and games)."""
    return ring_add(c.c0, ring_mul(c.c1, sk.s1))


def _round_lift(v: RingElement, p: int) -> RingElement:
    # per coefficient: centered v over q -> round((p/q)·v) mod p -> centered -> mod q
    q = v.modulus
    d = q // p
    dd = 2 * d
    hq, hp = q // 2, p // 2
    out = []
    append = out.append
    for c in v.coeffs:
        w = ((2 * (c - q if c > hq else c) + d) // dd) % p
        append((w - p) % q if w > hp else w)
    return RingElement._raw(tuple(out), q)


def pke_ddec(b: int, key_share: tuple[RingElement, RingElement], ct: Ciphertext,
             p: int) -> RingElement:
    """Server b's share of x·m from its share of x·sk.

    Returns (⌊(p/q)·(c0·t0 + c1·t1)⌉ mod p) mod q, where the mod-p value is
    taken as its centered representative before the lift to R_q. ``b`` does
    not change the arithmetic; it is kept for symmetry with the callers.
    """
    if b not in (1, 2):
        raise ParameterError(f"server index must be 1 or 2, got {b}")
    t0, t1 = key_share
    if t0.modulus % p:
        raise ParameterError(f"p={p} does not divide q={t0.modulus}")
    inner = mul_sum([(ct.c0, t0), (ct.c1, t1)])
    return _round_lift(inner, p)


def pke_ddec_matrix(b: int, key_share: tuple[RingElement, RingElement],
                    cmat: KdmCiphertext, p: int) -> tuple[RingElement, RingElement]:
    return (pke_ddec(b, key_share, cmat.col1, p), pke_ddec(b, key_share, cmat.col2, p))


def lift_plaintext(params: Params, x: RingElement) -> RingElement:
    """Move a small plaintext (e.g. from R_r) into R_p by centered embedding."""
    if x.n != params.n:
        raise DomainError(f"expected N={params.n}, got N={x.n}")
    return embed(x, params.p)
