"""Compare the numba and pure-numpy kernel backends on the RNS multiply path.

    python3 benchmarks/bench_kernels.py [--n 8192] [--bits 220] [--reps 7]

Both backends are loaded in one process; the script checks that they agree
bit for bit before timing them.
"""
import argparse
import statistics
import time

import numpy as np

from vhss import rns
from vhss._kernels import jit, numpy_impl
from vhss.rns import _limbs16
from vhss.sampling import RngHandle, sample_uniform_ring


def _time(fn, reps):
    fn()
    out = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        out.append(time.perf_counter() - t0)
    return 1000 * statistics.median(out)


def run(n, bits, reps):
    q = (1 << bits) - 159
    plan = rns.plan_for(n, q)
    rng = RngHandle.from_string("bench-kernels")
    a = sample_uniform_ring(n, q, rng)
    b = sample_uniform_ring(n, q, rng)
    limbs = _limbs16(list(a.coeffs), plan.in_width)
    limbs_b = _limbs16(list(b.coeffs), plan.in_width)
    rows = []
    results = {}
    for name, mod in (("numpy", numpy_impl), ("numba", jit)):
        if mod is None:
            continue
        res = mod.to_residues(limbs, plan.pow16, plan.primes)
        fa = mod.ntt_forward(res.copy(), plan.zetas, plan.primes)
        fb = mod.ntt_forward(mod.to_residues(limbs_b, plan.pow16, plan.primes),
                             plan.zetas, plan.primes)
        acc = np.zeros_like(fa)
        mod.pointwise_mac(acc, fa, fb, plan.primes)
        inv = mod.ntt_inverse(acc.copy(), plan.izetas, plan.ninv, plan.primes)
        limbs_out, u = mod.crt_accumulate(inv, plan.crt_inv, plan.crt_limbs, plan.primes,
                                          plan.out_width)
        results[name] = (fa, inv, limbs_out, u)

        def mac():
            z = np.zeros_like(fa)
            mod.pointwise_mac(z, fa, fb, plan.primes)

        rows.append((name, {
            "to_residues": _time(lambda: mod.to_residues(limbs, plan.pow16, plan.primes), reps),
            "ntt_forward": _time(lambda: mod.ntt_forward(res.copy(), plan.zetas, plan.primes), reps),
            "pointwise_mac": _time(mac, reps),
            "ntt_inverse": _time(lambda: mod.ntt_inverse(acc.copy(), plan.izetas, plan.ninv,
                                                         plan.primes), reps),
            "crt_accumulate": _time(lambda: mod.crt_accumulate(inv, plan.crt_inv, plan.crt_limbs,
                                                               plan.primes, plan.out_width), reps),
        }))
    if len(results) == 2:
        for x, y in zip(results["numpy"], results["numba"]):
            assert np.array_equal(x, y), "backends disagree"
    print(f"N={n} q_bits={bits} primes={len(plan.primes)} reps={reps}")
    kernels = list(rows[0][1])
    print(f"{'kernel':<16}" + "".join(f"{name + ' ms':>12}" for name, _ in rows)
          + ("   speedup" if len(rows) == 2 else ""))
    for k in kernels:
        line = f"{k:<16}" + "".join(f"{r[k]:>12.3f}" for _, r in rows)
        if len(rows) == 2:
            line += f"   {rows[0][1][k] / rows[1][1][k]:>6.2f}x"
        print(line)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=8192)
    ap.add_argument("--bits", type=int, default=220)
    ap.add_argument("--reps", type=int, default=7)
    args = ap.parse_args()
    if jit is None:
        print("numba backend unavailable (VHSS_NUMBA off or numba missing); numpy only")
    run(args.n, args.bits, args.reps)


if __name__ == "__main__":
    main()
