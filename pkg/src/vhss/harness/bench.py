"""Wall-clock medians for the six subroutines and the degree sweep."""
from __future__ import annotations

import gc
import statistics
import time

import numpy as np

from ..params import Params
from ..program import parse_program, validate_program
from ..ring import RingElement
from ..sampling import RngHandle
from ..scheme import (MemoryShare, encode_input, eval_add_ct, eval_add_mem, eval_cmult,
                      eval_load, eval_mult, eval_output, vhss_enc, vhss_eval, vhss_gen)

SUBROUTINES = ("load", "add_mem", "add_ct", "cmult", "mult", "output")


def _time_ms(fn, reps: int, agg=statistics.median) -> float:
    times = []
    gc.disable()
    try:
        for _ in range(reps):
            t0 = time.perf_counter()
            fn()
            times.append(time.perf_counter() - t0)
    finally:
        gc.enable()
    return 1000 * agg(times)


def _fresh(mem: MemoryShare) -> MemoryShare:
    # a copy without cached transforms, as a newly computed share would be
    def cp(x):
        return RingElement._raw(x.coeffs, x.modulus)
    return MemoryShare((cp(mem.t[0]), cp(mem.t[1])), (cp(mem.tau[0]), cp(mem.tau[1])))


def bench_subroutines(params: Params, reps: int, rng: RngHandle) -> dict[str, float]:
    """Median milliseconds per call on server 1 (one warm-up call each)."""
    keys = vhss_gen(params, rng)
    ek = keys.ek1
    ct = vhss_enc(keys.pk, encode_input(params, 2), rng)
    const = encode_input(params, 3)
    mem = eval_load(1, ek, 0, ct)
    calls = {
        "load": lambda: eval_load(1, ek, 1, ct),
        "add_mem": lambda: eval_add_mem(1, ek, 2, _fresh(mem), mem),
        "add_ct": lambda: eval_add_ct(3, ct, ct),
        "cmult": lambda: eval_cmult(1, ek, 4, const, ct),
        "mult": lambda: eval_mult(1, ek, 5, _fresh(mem), ct),
        "output": lambda: eval_output(1, mem, params.r),
    }
    for fn in calls.values():
        fn()
    return {name: _time_ms(fn, reps) for name, fn in calls.items()}


def monomial_program(degree: int) -> str:
    lines = ["input ct0 bound=2 width=1", "load r0 ct0"]
    lines += [f"mult r{i} r{i - 1} ct0" for i in range(1, degree)]
    lines.append(f"output r{degree - 1}")
    return "\n".join(lines) + "\n"


def degree_sweep(params: Params, degrees, reps: int, rng: RngHandle) -> dict:
    """Fastest one-server evaluation time of x^d, and the R² of a linear fit.

    Degrees are interleaved within each repetition so slow drift in machine
    load hits all of them alike; the minimum over ``reps`` is kept.
    """
    keys = vhss_gen(params, rng)
    cts = [vhss_enc(keys.pk, encode_input(params, 2), rng)]
    degrees = list(degrees)
    anns = [validate_program(parse_program(monomial_program(d)), params) for d in degrees]
    vhss_eval(1, keys.ek1, cts, anns[0])
    best = [float("inf")] * len(degrees)
    for _ in range(reps):
        for k, ann in enumerate(anns):
            best[k] = min(best[k], _time_ms(lambda: vhss_eval(1, keys.ek1, cts, ann), 1))
    return {"degrees": degrees, "ms": best, "r2": r_squared(degrees, best)}


def r_squared(xs, ys) -> float:
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    total = ((y - y.mean()) ** 2).sum()
    return float(1 - (resid ** 2).sum() / total) if total else 1.0


def format_timings(timings: dict[str, float]) -> str:
    return "\n".join(f"{name}_ms={ms:.3f}" for name, ms in timings.items())
