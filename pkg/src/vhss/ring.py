"""Arithmetic in R_q = Z_q[X]/(X^N + 1) with arbitrary-precision moduli.

Coefficients are stored as canonical representatives in [0, q). The centered
view (−⌊q/2⌉, ⌊(q−1)/2⌉] is computed on demand; with ⌊·⌉ rounding half up,
a coefficient c is kept as c when c <= q // 2 and mapped to c − q otherwise
(so q = 16 gives the interval (−8, 8]). Mixing elements with
different N or modulus raises :class:`DimensionError`; there is no implicit
coercion between the moduli p, q and r of the scheme.
"""
from __future__ import annotations

import operator
from typing import Iterable, Sequence

from .errors import DimensionError, ParameterError
from . import rns

# Products with N at or below this size use the schoolbook path.
SCHOOLBOOK_MAX_N = 16


def check_modulus(value: int) -> int:
    if not isinstance(value, int) or value < 2:
        raise ParameterError(f"modulus must be an integer >= 2, got {value!r}")
    return value


def _is_pow2(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


class RingElement:
    """An element of Z_q[X]/(X^N + 1).

    Immutable. ``coeffs[i]`` is the coefficient of X^i, canonical in [0, q).
    """

    __slots__ = ("coeffs", "modulus", "_ntt")

    def __init__(self, coeffs: Iterable[int], modulus: int):
        coeffs = tuple(coeffs)
        check_modulus(modulus)
        if not _is_pow2(len(coeffs)):
            raise ParameterError(f"N must be a power of two, got {len(coeffs)}")
        for c in coeffs:
            if not 0 <= c < modulus:
                raise ParameterError(f"coefficient {c} not canonical mod {modulus}")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "_ntt", None)

    @classmethod
    def _raw(cls, coeffs: tuple, modulus: int) -> "RingElement":
        # trusted constructor: coeffs already canonical
        obj = object.__new__(cls)
        object.__setattr__(obj, "coeffs", coeffs)
        object.__setattr__(obj, "modulus", modulus)
        object.__setattr__(obj, "_ntt", None)
        return obj

    @classmethod
    def from_ints(cls, values: Sequence[int], modulus: int, n: int | None = None) -> "RingElement":
        """Reduce arbitrary (possibly negative) integers mod ``modulus``.

        ``values`` shorter than ``n`` are zero-padded.
        """
        check_modulus(modulus)
        n = len(values) if n is None else n
        if len(values) > n:
            raise DimensionError(f"{len(values)} coefficients do not fit N={n}")
        if not _is_pow2(n):
            raise ParameterError(f"N must be a power of two, got {n}")
        vals = [v % modulus for v in values]
        vals.extend([0] * (n - len(vals)))
        return cls._raw(tuple(vals), modulus)

    @classmethod
    def zero(cls, n: int, modulus: int) -> "RingElement":
        return cls.from_ints([], modulus, n)

    @classmethod
    def one(cls, n: int, modulus: int) -> "RingElement":
        return cls.from_ints([1], modulus, n)

    @classmethod
    def monomial(cls, i: int, n: int, modulus: int, coeff: int = 1) -> "RingElement":
        """coeff·X^i, reduced negacyclically if i >= N."""
        sign = -1 if (i // n) % 2 else 1
        vals = [0] * n
        vals[i % n] = sign * coeff
        return cls.from_ints(vals, modulus, n)

    def __setattr__(self, name, value):
        raise AttributeError("RingElement is immutable")

    @property
    def n(self) -> int:
        return len(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.modulus == other.modulus and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.modulus, self.coeffs))

    def __repr__(self) -> str:
        head = ", ".join(str(c) for c in self.centered()[:8])
        more = ", ..." if self.n > 8 else ""
        return f"RingElement(N={self.n}, q={self.modulus}, centered=[{head}{more}])"

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def centered(self) -> list[int]:
        return centered_lift(self)

    def ntt_form(self):
        """Cached RNS/NTT transform used by the fast multiplication path."""
        if self._ntt is None:
            plan = rns.plan_for(self.n, self.modulus)
            object.__setattr__(self, "_ntt", plan.forward(self.coeffs))
        return self._ntt

    def __add__(self, other: "RingElement") -> "RingElement":
        return ring_add(self, other)

    def __sub__(self, other: "RingElement") -> "RingElement":
        return ring_sub(self, other)

    def __mul__(self, other: "RingElement") -> "RingElement":
        return ring_mul(self, other)

    def __neg__(self) -> "RingElement":
        return ring_neg(self)


def _check_pair(a: RingElement, b: RingElement) -> None:
    if a.modulus != b.modulus or len(a.coeffs) != len(b.coeffs):
        raise DimensionError(
            f"ring mismatch: (N={a.n}, q={a.modulus}) vs (N={b.n}, q={b.modulus})"
        )


def ring_add(a: RingElement, b: RingElement) -> RingElement:
    _check_pair(a, b)
    q = a.modulus
    sums = map(operator.add, a.coeffs, b.coeffs)
    if q & (q - 1) == 0:
        return RingElement._raw(tuple(map((q - 1).__and__, sums)), q)
    return RingElement._raw(tuple([s - q if s >= q else s for s in sums]), q)


def ring_neg(a: RingElement) -> RingElement:
    q = a.modulus
    return RingElement._raw(tuple(q - x if x else 0 for x in a.coeffs), q)


def ring_sub(a: RingElement, b: RingElement) -> RingElement:
    _check_pair(a, b)
    q = a.modulus
    diffs = map(operator.sub, a.coeffs, b.coeffs)
    if q & (q - 1) == 0:
        # two's-complement masking reduces negative differences too
        return RingElement._raw(tuple(map((q - 1).__and__, diffs)), q)
    return RingElement._raw(tuple([d + q if d < 0 else d for d in diffs]), q)


def schoolbook_mul(a: RingElement, b: RingElement) -> RingElement:
    """Reference negacyclic product: expand, fold X^N = −1, reduce mod q."""
    _check_pair(a, b)
    n, q = a.n, a.modulus
    full = [0] * (2 * n)
    bc = b.coeffs
    for i, ai in enumerate(a.coeffs):
        if ai:
            for j, bj in enumerate(bc):
                full[i + j] += ai * bj
    return RingElement._raw(tuple((full[k] - full[k + n]) % q for k in range(n)), q)


def ntt_mul(a: RingElement, b: RingElement) -> RingElement:
    """Negacyclic product through the multi-prime NTT engine."""
    _check_pair(a, b)
    plan = rns.plan_for(a.n, a.modulus)
    return RingElement._raw(tuple(plan.mul_sum([(a.ntt_form(), b.ntt_form())])), a.modulus)


def ring_mul(a: RingElement, b: RingElement) -> RingElement:
    _check_pair(a, b)
    if a.n <= SCHOOLBOOK_MAX_N:
        return schoolbook_mul(a, b)
    return ntt_mul(a, b)


def mul_sum(pairs: Sequence[tuple[RingElement, RingElement]]) -> RingElement:
    """Σ a_i·b_i in R_q for up to ``rns.MAX_TERMS`` pairs, one inverse transform."""
    if not pairs:
        raise ValueError("mul_sum needs at least one pair")
    first = pairs[0][0]
    for a, b in pairs:
        _check_pair(first, a)
        _check_pair(a, b)
    if first.n <= SCHOOLBOOK_MAX_N:
        acc = schoolbook_mul(*pairs[0])
        for a, b in pairs[1:]:
            acc = ring_add(acc, schoolbook_mul(a, b))
        return acc
    plan = rns.plan_for(first.n, first.modulus)
    coeffs = plan.mul_sum([(a.ntt_form(), b.ntt_form()) for a, b in pairs])
    return RingElement._raw(tuple(coeffs), first.modulus)


def sparse_mul(c: RingElement, a: RingElement) -> RingElement:
    """c·a as a sum of signed rotations of a, one per nonzero coefficient of c.

    Cheaper than a transform when c has a handful of small terms (scalars,
    short plaintext constants).
    """
    _check_pair(c, a)
    n, q = a.n, a.modulus
    acc = None
    src = a.coeffs
    for i, v in enumerate(centered_lift(c)):
        if not v:
            continue
        # X^i·a: a_k moves to k+i, wrapping past X^N with a sign flip
        rot = [-x for x in src[n - i:]] + list(src[:n - i]) if i else src
        term = map(v.__mul__, rot)
        acc = list(term) if acc is None else list(map(operator.add, acc, term))
    if acc is None:
        return RingElement.zero(n, q)
    reduce = (q - 1).__and__ if q & (q - 1) == 0 else q.__rmod__
    return RingElement._raw(tuple(map(reduce, acc)), q)


# constants with at most this many nonzero terms skip the transform
SPARSE_MAX_TERMS = 8


def scalar_mul(c: RingElement, a: RingElement) -> RingElement:
    """c·a for a plaintext constant c already embedded in a's ring."""
    if support_size(c) <= SPARSE_MAX_TERMS:
        return sparse_mul(c, a)
    return ring_mul(c, a)


def centered_lift(a: RingElement) -> list[int]:
    """Centered representatives in (−⌊q/2⌉, ⌊(q−1)/2⌉]."""
    q = a.modulus
    half = q // 2
    return [c - q if c > half else c for c in a.coeffs]


def embed(a: RingElement, target: int) -> RingElement:
    """Centered lift of ``a`` re-reduced modulo ``target``.

    This is how small values move between rings (R_r → R_p, R_r → R_q,
    R_q → R_r); it is exact whenever the centered value fits the target.
    """
    check_modulus(target)
    q = a.modulus
    if target == q:
        return a
    if q % target == 0:
        # c and c − q agree mod target, so the lift can be skipped
        reduce = (target - 1).__and__ if target & (target - 1) == 0 else target.__rmod__
        return RingElement._raw(tuple(map(reduce, a.coeffs)), target)
    return RingElement._raw(tuple(v % target for v in centered_lift(a)), target)


def reduce_to(a: RingElement, target: int) -> RingElement:
    """Centered lift over q, then reduction mod ``target`` (need not divide q)."""
    return embed(a, target)


def round_scale(a: RingElement, target: int) -> RingElement:
    """Per coefficient ⌊(p/q)·v⌉ mod p on the centered value v.

    Ties round toward +∞. Requires p | q.
    """
    check_modulus(target)
    q = a.modulus
    if q % target:
        raise ParameterError(f"p={target} does not divide q={q}")
    d = q // target
    dd = 2 * d
    half = q // 2
    # floor((p/q)·v + 1/2) = floor((2v + d) / 2d)
    out = []
    append = out.append
    for c in a.coeffs:
        v = c - q if c > half else c
        append(((2 * v + d) // dd) % target)
    return RingElement._raw(tuple(out), target)


def inf_norm(a: RingElement) -> int:
    q = a.modulus
    half = q // 2
    best = 0
    for c in a.coeffs:
        m = q - c if c > half else c
        if m > best:
            best = m
    return best


def support_size(a: RingElement) -> int:
    return sum(1 for c in a.coeffs if c)
