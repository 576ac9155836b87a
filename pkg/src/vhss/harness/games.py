"""Executable correctness, verifiability and context-hiding experiments."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from scipy import stats

from ..params import Params, correctness_bound
from ..program import Annotated, parse_program, validate_program
from ..ring import RingElement, reduce_to, ring_add, ring_mul, ring_sub
from ..sampling import RngHandle, sample_uniform_ring
from ..scheme import (KeyBundle, PartialResult, VerificationKey, encode_input, vhss_enc,
                      vhss_eval, vhss_gen, vhss_ver)
from .oracle import plaintext_oracle
from .progen import random_instance

STRATEGIES = ("uniform", "perturb", "scaled", "replay")


@dataclass
class GameReport:
    game: str
    trials: int
    events: int
    bound: float
    passed: bool
    extra: dict = field(default_factory=dict)

    @property
    def rate(self) -> float:
        return self.events / self.trials if self.trials else 0.0

    def to_text(self) -> str:
        items = {"game": self.game, "trials": self.trials, "events": self.events,
                 "rate": f"{self.rate:.6g}", "bound": f"{self.bound:.6g}",
                 "pass": str(self.passed).lower(), **self.extra}
        return "\n".join(f"{k}={v}" for k, v in items.items())


def run_once(keys: KeyBundle, ann: Annotated, inputs, rng: RngHandle):
    """Encrypt, evaluate on both servers and verify; returns (y or None, y1, y2)."""
    cts = [vhss_enc(keys.pk, x, rng) for x in inputs]
    y1 = vhss_eval(1, keys.ek1, cts, ann)
    y2 = vhss_eval(2, keys.ek2, cts, ann)
    return vhss_ver(keys.vk, y1, y2), y1, y2


def run_correctness_game(params: Params, trials: int, rng: RngHandle, *,
                         max_size: int = 32, max_degree: int = 11) -> GameReport:
    """Fresh keys per trial; a failure is any Ver output other than f(x)."""
    failures = 0
    worst = Fraction(0)
    degree_sum = 0
    for _ in range(trials):
        inst = random_instance(params, rng, max_size, max_degree)
        keys = vhss_gen(params, rng)
        y, _, _ = run_once(keys, inst.program, inst.inputs, rng)
        if y != plaintext_oracle(inst.program.program, inst.inputs):
            failures += 1
        worst = max(worst, inst.program.failure_bound)
        degree_sum += inst.program.degree
    # per-trial failure bound of the largest program drawn
    bound = float(worst)
    return GameReport("correctness", trials, failures, bound,
                      failures <= bound * trials,
                      {"max_size": max_size, "max_degree": max_degree, "degree_sum": degree_sum})


def _nonzero_ring(n: int, r: int, rng: RngHandle) -> RingElement:
    while True:
        d = sample_uniform_ring(n, r, rng)
        if not d.is_zero():
            return d


def tamper(strategy: str, honest: PartialResult, stale: PartialResult, params: Params,
           rng: RngHandle) -> PartialResult:
    n, r = params.n, params.r
    if strategy == "uniform":
        return PartialResult(sample_uniform_ring(n, r, rng), sample_uniform_ring(n, r, rng))
    if strategy == "perturb":
        i = rng.randbelow(n)
        delta = RingElement.monomial(i, n, r, 1 + rng.randbelow(r - 1))
        if rng.randbelow(2):
            return PartialResult(ring_add(honest.t, delta), honest.tau)
        return PartialResult(honest.t, ring_add(honest.tau, delta))
    if strategy == "scaled":
        dy = _nonzero_ring(n, r, rng)
        c = sample_uniform_ring(n, r, rng)
        return PartialResult(ring_add(honest.t, dy), ring_add(honest.tau, ring_mul(c, dy)))
    if strategy == "replay":
        return stale
    raise ValueError(f"unknown strategy {strategy!r}")


def clopper_pearson_upper(k: int, n: int, conf: float = 0.99) -> float:
    if k >= n:
        return 1.0
    return float(stats.beta.ppf(conf, k + 1, n - k))


def clopper_pearson_lower(k: int, n: int, conf: float = 0.99) -> float:
    if k == 0:
        return 0.0
    return float(stats.beta.ppf(1 - conf, k, n - k + 1))


_VER_PROGRAM = "input ct0 bound=1 width=1\ninput ct1 bound=1 width=1\nload r0 ct0\nmult r1 r0 ct1\noutput r1\n"


def run_verifiability_game(params: Params, trials: int, adversary: str, rng: RngHandle, *,
                           queries_per_key: int = 100, white_box: bool = False) -> GameReport:
    """Count accepted wrong outputs.

    Keys are refreshed every ``queries_per_key`` queries. The adversary picks
    a server b, sees ek_b, and replaces that server's partial; ``adversary``
    is one of STRATEGIES or ``"mixed"`` (round robin). With ``white_box`` the
    tamper is Δτ = ŝ·Δy, built from the secret ŝ, so every query should win.
    """
    ann = validate_program(parse_program(_VER_PROGRAM), params)
    n, r = params.n, params.r
    forgeries = honest_rejects = 0
    keys = None
    for i in range(trials):
        if i % queries_per_key == 0:
            keys = vhss_gen(params, rng)
            xs = [encode_input(params, rng.randbelow(3) - 1) for _ in range(2)]
            _, stale1, stale2 = run_once(keys, ann, xs, rng)
        xs = [encode_input(params, rng.randbelow(3) - 1) for _ in range(2)]
        expected = plaintext_oracle(ann.program, xs)
        y, y1, y2 = run_once(keys, ann, xs, rng)
        if y != expected:
            honest_rejects += 1
        b = 1 + rng.randbelow(2)
        honest, stale = (y1, stale1) if b == 1 else (y2, stale2)
        if white_box:
            dy = _nonzero_ring(n, r, rng)
            s_hat = reduce_to(keys.vk.s_hat, r)
            forged = PartialResult(ring_add(honest.t, dy), ring_add(honest.tau, ring_mul(s_hat, dy)))
        else:
            strat = STRATEGIES[i % 4] if adversary == "mixed" else adversary
            forged = tamper(strat, honest, stale, params, rng)
        got = vhss_ver(keys.vk, forged, y2) if b == 1 else vhss_ver(keys.vk, y1, forged)
        if got is not None and got != expected:
            forgeries += 1
    bound = 4 / 2**n
    if white_box:
        passed = forgeries == trials
    else:
        passed = clopper_pearson_lower(forgeries, trials) <= bound
    return GameReport("verifiability", trials, forgeries, bound, passed,
                      {"adversary": "white-box" if white_box else adversary,
                       "upper99": f"{clopper_pearson_upper(forgeries, trials):.6g}",
                       "honest_rejects": honest_rejects})


def context_hiding_sim(vk: VerificationKey, y: RingElement,
                       rng: RngHandle) -> tuple[PartialResult, PartialResult]:
    """Partials with the right sums and uniform first shares, built without ek."""
    n, r = y.n, y.modulus
    t1 = sample_uniform_ring(n, r, rng)
    tau1 = sample_uniform_ring(n, r, rng)
    tag = ring_mul(reduce_to(vk.s_hat, r), y)
    return PartialResult(t1, tau1), PartialResult(ring_sub(y, t1), ring_sub(tag, tau1))


def run_hiding_game(params: Params, samples: int, rng: RngHandle,
                    alpha: float = 0.01) -> GameReport:
    """Chi-square two-sample test: honest t1 coefficients vs simulated ones.

    Each run contributes all N coefficients of t1; runs use fresh keys and a
    fresh random input to the identity-times-input program.
    """
    ann = validate_program(parse_program(_VER_PROGRAM), params)
    n, r = params.n, params.r
    honest = [0] * r
    simulated = [0] * r
    sim_fail = 0
    runs = -(-samples // n)
    for _ in range(runs):
        keys = vhss_gen(params, rng)
        xs = [encode_input(params, rng.randbelow(3) - 1) for _ in range(2)]
        y, y1, _ = run_once(keys, ann, xs, rng)
        for c in y1.t.coeffs:
            honest[c] += 1
        target = y if y is not None else plaintext_oracle(ann.program, xs)
        s1, s2 = context_hiding_sim(keys.vk, target, rng)
        if vhss_ver(keys.vk, s1, s2) != target:
            sim_fail += 1
        for c in s1.t.coeffs:
            simulated[c] += 1
    _, pvalue, _, _ = stats.chi2_contingency([honest, simulated])
    return GameReport("hiding", runs * n, sim_fail, alpha,
                      sim_fail == 0 and pvalue >= alpha,
                      {"p_value": f"{pvalue:.6g}"})
