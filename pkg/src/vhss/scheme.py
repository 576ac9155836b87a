"""Two-server verifiable homomorphic secret sharing.

Each server holds additive shares of sk = (1, s) and of vk = (ŝ, ŝ·s).
Every memory value x is carried twice: a share of x·sk (the result lane)
and a share of x·ŝ·sk (the tag lane). The output client adds the two
partial results and accepts y only when the tags add up to ŝ·y.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import DomainError, ParameterError, ValidationError
from .params import Params
from .pke import (KdmCiphertext, PublicKey, SecretKey, pke_ddec_matrix, pke_gen,
                  pke_okdm)
from .program import (AddCt, AddMem, Annotated, CMult, Load, Mult, Output, Program,
                      validate_program)
from .ring import RingElement, embed, reduce_to, ring_add, ring_mul, ring_sub, scalar_mul
from .sampling import RngHandle, fresh_prf_key, prf_expand, sample_sk, sample_uniform_ring

Pair = tuple[RingElement, RingElement]
PrfFn = Callable[[bytes, int, int, int], Pair]


@dataclass(frozen=True)
class VerificationKey:
    params: Params
    s_hat: RingElement
    s_hat_s: RingElement

    def as_pair(self) -> Pair:
        return (self.s_hat, self.s_hat_s)


@dataclass(frozen=True)
class EvaluationKey:
    params: Params
    server: int
    k1: bytes
    k2: bytes
    sk_share: Pair
    vk_share: Pair


@dataclass(frozen=True)
class MemoryShare:
    t: Pair
    tau: Pair


@dataclass(frozen=True)
class PartialResult:
    t: RingElement
    tau: RingElement


@dataclass(frozen=True)
class KeyBundle:
    pk: PublicKey
    vk: VerificationKey
    ek1: EvaluationKey
    ek2: EvaluationKey
    sk: SecretKey

    def ek(self, b: int) -> EvaluationKey:
        return self.ek1 if b == 1 else self.ek2


def zero_prf(key: bytes, ident: int, n: int, q: int) -> Pair:
    """Drop-in PRF replacement returning (0, 0); for ablation tests only."""
    z = RingElement.zero(n, q)
    return (z, z)


def vhss_gen(params: Params, rng: RngHandle) -> KeyBundle:
    n, q = params.n, params.q
    pk, sk = pke_gen(params, rng)
    s_hat = sample_sk(n, params.h_sk, q, rng)
    vk = VerificationKey(params, s_hat, ring_mul(s_hat, sk.s1))
    sk1 = (sample_uniform_ring(n, q, rng), sample_uniform_ring(n, q, rng))
    vk1 = (sample_uniform_ring(n, q, rng), sample_uniform_ring(n, q, rng))
    sk2 = (ring_sub(sk.s0, sk1[0]), ring_sub(sk.s1, sk1[1]))
    vk2 = (ring_sub(vk.s_hat, vk1[0]), ring_sub(vk.s_hat_s, vk1[1]))
    k1, k2 = fresh_prf_key(rng), fresh_prf_key(rng)
    return KeyBundle(pk, vk,
                     EvaluationKey(params, 1, k1, k2, sk1, vk1),
                     EvaluationKey(params, 2, k1, k2, sk2, vk2),
                     sk)


def _check_input(params: Params, x: RingElement) -> None:
    if x.n != params.n or x.modulus != params.r:
        raise DomainError(
            f"input must live in R_r (N={params.n}, r={params.r}); "
            f"got N={x.n}, modulus={x.modulus}")


def encode_input(params: Params, value) -> RingElement:
    """An int becomes the constant polynomial; a sequence fills X^0, X^1, ..."""
    if isinstance(value, RingElement):
        _check_input(params, value)
        return value
    if isinstance(value, int):
        value = [value]
    if len(value) > params.n:
        raise DomainError(f"at most N={params.n} coefficients")
    return RingElement.from_ints(list(value), params.r, params.n)


def vhss_enc(pk: PublicKey, x: RingElement, rng: RngHandle) -> KdmCiphertext:
    prm = pk.params
    _check_input(prm, x)
    return pke_okdm(pk, embed(x, prm.p), rng)


def _signed_add(b: int, pair: Pair, mask: Pair) -> Pair:
    op = ring_add if b == 1 else ring_sub
    return (op(pair[0], mask[0]), op(pair[1], mask[1]))


def _finish(ek: EvaluationKey, ident: int, t: Pair, tau: Pair, prf: PrfFn) -> MemoryShare:
    n, q = ek.params.n, ek.params.q
    return MemoryShare(_signed_add(ek.server, t, prf(ek.k1, ident, n, q)),
                       _signed_add(ek.server, tau, prf(ek.k2, ident, n, q)))


def _check_server(b: int, ek: EvaluationKey) -> None:
    if b not in (1, 2):
        raise ParameterError(f"server index must be 1 or 2, got {b}")
    if ek.server != b:
        raise ParameterError(f"evaluation key belongs to server {ek.server}, not {b}")


def eval_load(b: int, ek: EvaluationKey, ident: int, ct: KdmCiphertext, *,
              prf: PrfFn = prf_expand) -> MemoryShare:
    _check_server(b, ek)
    p = ek.params.p
    return _finish(ek, ident, pke_ddec_matrix(b, ek.sk_share, ct, p),
                   pke_ddec_matrix(b, ek.vk_share, ct, p), prf)


def eval_add_mem(b: int, ek: EvaluationKey, ident: int, x: MemoryShare, y: MemoryShare, *,
                 prf: PrfFn = prf_expand) -> MemoryShare:
    _check_server(b, ek)
    t = (ring_add(x.t[0], y.t[0]), ring_add(x.t[1], y.t[1]))
    tau = (ring_add(x.tau[0], y.tau[0]), ring_add(x.tau[1], y.tau[1]))
    return _finish(ek, ident, t, tau, prf)


def eval_add_ct(ident: int, c: KdmCiphertext, d: KdmCiphertext,
                b_add: int | None = None) -> KdmCiphertext:
    weight = c.weight + d.weight
    if b_add is not None and weight > b_add:
        raise ValidationError(f"sum of {weight} ciphertexts exceeds B_add={b_add}")
    return KdmCiphertext(c.col1 + d.col1, c.col2 + d.col2, weight)


def eval_cmult(b: int, ek: EvaluationKey, ident: int, const: RingElement, ct: KdmCiphertext, *,
               prf: PrfFn = prf_expand) -> MemoryShare:
    _check_server(b, ek)
    prm = ek.params
    _check_input(prm, const)
    c = embed(const, prm.q)
    sk_share = (scalar_mul(c, ek.sk_share[0]), scalar_mul(c, ek.sk_share[1]))
    vk_share = (scalar_mul(c, ek.vk_share[0]), scalar_mul(c, ek.vk_share[1]))
    return _finish(ek, ident, pke_ddec_matrix(b, sk_share, ct, prm.p),
                   pke_ddec_matrix(b, vk_share, ct, prm.p), prf)


def eval_mult(b: int, ek: EvaluationKey, ident: int, mem: MemoryShare, ct: KdmCiphertext, *,
              prf: PrfFn = prf_expand) -> MemoryShare:
    _check_server(b, ek)
    p = ek.params.p
    return _finish(ek, ident, pke_ddec_matrix(b, mem.t, ct, p),
                   pke_ddec_matrix(b, mem.tau, ct, p), prf)


def eval_output(b: int, mem: MemoryShare, r: int) -> PartialResult:
    return PartialResult(reduce_to(mem.t[0], r), reduce_to(mem.tau[0], r))


def vhss_eval(b: int, ek: EvaluationKey, cts: Sequence[KdmCiphertext],
              prog: Program | Annotated, *, prf: PrfFn = prf_expand) -> PartialResult:
    """Run a program on one server. Registers are dropped after their last use."""
    ann = prog if isinstance(prog, Annotated) else validate_program(prog, ek.params)
    prm = ek.params
    if len(cts) < ann.n_inputs:
        raise ValidationError(f"program reads {ann.n_inputs} inputs, got {len(cts)}")
    ctv: dict[int, KdmCiphertext] = dict(enumerate(cts))
    regs: dict[int, MemoryShare] = {}
    result = None
    for i, ins in enumerate(ann.program.instructions):
        if isinstance(ins, Load):
            regs[ins.dst] = eval_load(b, ek, i, ctv[ins.ct], prf=prf)
        elif isinstance(ins, AddMem):
            regs[ins.dst] = eval_add_mem(b, ek, i, regs[ins.a], regs[ins.b], prf=prf)
        elif isinstance(ins, AddCt):
            ctv[ins.dst] = eval_add_ct(i, ctv[ins.a], ctv[ins.b], prm.b_add)
        elif isinstance(ins, CMult):
            const = RingElement.from_ints(list(ins.const), prm.r, prm.n)
            regs[ins.dst] = eval_cmult(b, ek, i, const, ctv[ins.ct], prf=prf)
        elif isinstance(ins, Mult):
            regs[ins.dst] = eval_mult(b, ek, i, regs[ins.reg], ctv[ins.ct], prf=prf)
        elif isinstance(ins, Output):
            result = eval_output(b, regs[ins.reg], prm.r)
        for reg in [k for k, last in ann.last_use.items() if last == i]:
            regs.pop(reg, None)
    assert result is not None
    return result


def vhss_ver(vk: VerificationKey, y1: PartialResult, y2: PartialResult) -> RingElement | None:
    """Return y = f(x) when the tag checks out, else None (REJECT)."""
    r = vk.params.r
    y = ring_add(y1.t, y2.t)
    tau = ring_add(y1.tau, y2.tau)
    if tau == ring_mul(reduce_to(vk.s_hat, r), y):
        return y
    return None
