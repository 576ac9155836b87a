"""Parameter derivation and the exact correctness bound.

Given a plaintext bound B_max the scheme sets

    h_sk = N/2,  B_err = 8σ,  B_ct = B_err·(2·h_sk + 1),  B_sk = 1,
    p = N · B_max · h_sk · 2^(κ+2)                (next power of two)
    q = p · 2^k,  k minimal with q >= 2^(κ+3) · p · N² · B_max · B_ct · B_add

The q inequality is written with 2^(κ+3). A negative exponent cannot give a
per-multiplication failure probability of 2^-κ (the dominant term is
N²·B_max·B_ct·p/q), and with the positive exponent every row of
REFERENCE_ROWS comes out with the expected (N, lg p, lg q).

An extra factor B_add on the right-hand side keeps the per-decryption
failure probability at 2^-κ when up to B_add ciphertexts are summed; it
is 1 by default and then changes nothing.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .errors import ParameterError
from .sampling import TAIL_CUT

# B_max -> (N, documented security level in bits)
REFERENCE_ROWS = {
    2: (4096, 117.1),
    2**16: (4096, 86.5),
    2**32: (8192, 198.7),
    2**64: (8192, 128.9),
    2**128: (16384, 214.0),
    2**256: (16384, 96.7),
}


@dataclass(frozen=True)
class Params:
    n: int
    p: int
    q: int
    r: int
    sigma: float
    h_sk: int
    b_sk: int
    b_err: int
    b_ct: int
    b_add: int
    b_max: int
    kappa: int
    security: float | None = None

    def __post_init__(self):
        if self.n < 1 or self.n & (self.n - 1):
            raise ParameterError(f"N must be a power of two, got {self.n}")
        for name in ("p", "q", "r"):
            if getattr(self, name) < 2:
                raise ParameterError(f"{name} must be >= 2")
        if self.q % self.p:
            raise ParameterError("p must divide q")
        if not 0 < self.h_sk <= self.n:
            raise ParameterError("need 0 < h_sk <= N")
        if self.b_ct != self.b_err * (2 * self.h_sk + 1):
            raise ParameterError("B_ct must equal B_err·(2·h_sk + 1)")
        if self.b_add < 1 or self.b_max < 2:
            raise ParameterError("need B_add >= 1 and B_max >= 2")

    @property
    def delta(self) -> int:
        """The plaintext scaling factor q/p."""
        return self.q // self.p

    def summary(self) -> str:
        return (f"N={self.n} lg_p={self.p.bit_length() - 1} "
                f"lg_q={self.q.bit_length() - 1} r={self.r} B_max={self.b_max}")


@dataclass(frozen=True)
class ParamRequest:
    b_max: int
    kappa: int = 40
    sigma: float = 8
    b_add: int = 1
    n: int | None = None
    r: int | None = None
    h_sk: int | None = None

    def __post_init__(self):
        if self.b_max < 2:
            raise ParameterError("B_max must be >= 2")
        if self.kappa < 1:
            raise ParameterError("kappa must be >= 1")


def _next_pow2(x: int) -> int:
    return 1 << (x - 1).bit_length()


def derive_params(req: ParamRequest) -> Params:
    n = req.n
    security = None
    if n is None:
        if req.b_max not in REFERENCE_ROWS:
            raise ParameterError(
                f"no tabulated N for B_max={req.b_max}; pass N explicitly")
        n, security = REFERENCE_ROWS[req.b_max]
    elif REFERENCE_ROWS.get(req.b_max, (None,))[0] == n:
        security = REFERENCE_ROWS[req.b_max][1]
    h_sk = n // 2 if req.h_sk is None else req.h_sk
    if h_sk < 1:
        raise ParameterError("h_sk must be >= 1")
    b_err = int(TAIL_CUT * req.sigma)
    b_ct = b_err * (2 * h_sk + 1)
    p = _next_pow2(n * req.b_max * h_sk * 2 ** (req.kappa + 2))
    ratio = 2 ** (req.kappa + 3) * n * n * req.b_max * b_ct * req.b_add
    k = (ratio - 1).bit_length()
    r = req.b_max if req.r is None else req.r
    if not 2 <= r <= req.b_max:
        raise ParameterError("need 2 <= r <= B_max")
    if security is not None and (req.kappa, req.sigma, req.b_add, r, h_sk) != (40, 8, 1, req.b_max, n // 2):
        security = None
    return Params(n=n, p=p, q=p << k, r=r, sigma=req.sigma, h_sk=h_sk, b_sk=1,
                  b_err=b_err, b_ct=b_ct, b_add=req.b_add, b_max=req.b_max,
                  kappa=req.kappa, security=security)


def reference_profiles() -> list[Params]:
    return [derive_params(ParamRequest(b_max=b)) for b in REFERENCE_ROWS]


def toy_params(r: int = 16, b_add: int = 4) -> Params:
    """INSECURE N=8 profile for fast tests.

    Derived by the same formulas as the real rows (κ=40, σ=3, B_max=2^32),
    so every distributed decryption still fails with probability < 2^-40.
    """
    return derive_params(ParamRequest(b_max=2**32, n=8, sigma=3, r=r, b_add=b_add))


def tiny_pke_params() -> Params:
    """INSECURE N=8, p=2^10, q=2^30 profile.

    Only meant for the nearly-linear decryption checks and for watching
    distributed decryption fail at a measurable rate; p is far too small
    for evaluating programs.
    """
    sigma, h_sk = 3, 4
    b_err = int(TAIL_CUT * sigma)
    return Params(n=8, p=2**10, q=2**30, r=16, sigma=sigma, h_sk=h_sk, b_sk=1,
                  b_err=b_err, b_ct=b_err * (2 * h_sk + 1), b_add=1, b_max=16,
                  kappa=40)


def parse_int_expr(text: str) -> int:
    """Parse ``65536``, ``2^16`` or ``2**16``."""
    t = text.strip().replace("**", "^")
    if "^" in t:
        base, exp = t.split("^", 1)
        return int(base) ** int(exp)
    return int(t, 0)


def profile(name: str) -> Params:
    """``toy``, ``toy:<r>``, ``tiny`` or ``table2:<B_max>`` (e.g. ``table2:2^32``)."""
    kind, _, arg = name.partition(":")
    if kind == "toy":
        return toy_params(parse_int_expr(arg)) if arg else toy_params()
    if kind == "tiny":
        return tiny_pke_params()
    if kind == "table2":
        return derive_params(ParamRequest(b_max=parse_int_expr(arg)))
    raise ParameterError(f"unknown profile {name!r}")


def correctness_bound(params: Params, size_f: int, p_inp: int | None = None) -> Fraction:
    """Lower bound on Pr[Ver = f(x)] for a program with ``size_f`` operations.

    1 − N(B_max+1)/q − 4·size·N²·P·B_max·(B_ct·p/q + B_sk²/p)
      − 4·size·N·(p/q + 1/p), with P = P_inp+ (defaults to B_add). The
    PRF-advantage term is omitted.
    """
    if size_f < 1:
        raise ParameterError("size_f must be >= 1")
    n, p, q, bm = params.n, params.p, params.q, params.b_max
    pinp = params.b_add if p_inp is None else p_inp
    return (1
            - Fraction(n * (bm + 1), q)
            - 4 * size_f * n * n * pinp * bm * (Fraction(params.b_ct * p, q)
                                                 + Fraction(params.b_sk**2, p))
            - 4 * size_f * n * (Fraction(p, q) + Fraction(1, p)))


def ddec_success_bound(params: Params, x_norm: int, xm_norm: int,
                       b_add: int | None = None) -> Fraction:
    """Lower bound on Pr[DDec(1, t1, c) + DDec(2, t2, c) = x·m mod q].

    1 − N·(N·B_add·‖x‖∞·B_ct·p/q + ‖x·m‖∞/p + p/q + 1/p), over random shares.
    """
    n, p, q = params.n, params.p, params.q
    badd = params.b_add if b_add is None else b_add
    return 1 - n * (Fraction(n * badd * x_norm * params.b_ct * p, q) + Fraction(xm_norm, p)
                    + Fraction(p, q) + Fraction(1, p))


def format_table(rows: list[Params]) -> str:
    head = f"{'B_max':>8} {'N':>6} {'lg p':>5} {'lg q':>5} {'security':>9}"
    lines = [head]
    for prm in rows:
        bm = prm.b_max
        bm_s = f"2^{bm.bit_length() - 1}" if bm & (bm - 1) == 0 else str(bm)
        sec = f"{prm.security:.1f}" if prm.security is not None else "-"
        lines.append(f"{bm_s:>8} {prm.n:>6} {prm.p.bit_length() - 1:>5} "
                     f"{prm.q.bit_length() - 1:>5} {sec:>9}")
    return "\n".join(lines)


def with_sigma(params: Params, sigma: float) -> Params:
    """Copy of ``params`` with a different noise width (B_err, B_ct follow)."""
    b_err = int(TAIL_CUT * sigma)
    return replace(params, sigma=sigma, b_err=b_err, b_ct=b_err * (2 * params.h_sk + 1))
