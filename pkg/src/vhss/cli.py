"""Command-line driver.

Exit codes: 0 success, 1 verification REJECT, 2 validation error,
3 I/O or format error.
"""
from __future__ import annotations

import argparse
import hashlib
import os
import sys
from pathlib import Path

from . import wire
from .errors import DecodeError, DomainError, ParameterError, ValidationError
from .params import (REFERENCE_ROWS, ParamRequest, derive_params, format_table, parse_int_expr,
                     profile)
from .program import parse_program, validate_program
from .sampling import SEED_BYTES, RngHandle

EXIT_OK, EXIT_REJECT, EXIT_INVALID, EXIT_IO = 0, 1, 2, 3

KEY_FILES = ("params", "pk", "vk", "ek1", "ek2")


def _rng(args, label: str) -> RngHandle:
    """Per-command stream: the global seed hashed with the command line."""
    seed = args.seed or os.environ.get("VHSS_SEED")
    if seed is None:
        return RngHandle.from_os()
    base = RngHandle.from_string(seed).seed
    return RngHandle(hashlib.sha256(base + b"|" + label.encode()).digest()[:SEED_BYTES])


def _params(args):
    if getattr(args, "keys", None):
        return wire.read_file(Path(args.keys) / "params.vhss", expect=wire.KIND_PARAMS)
    return profile(args.profile)


def _load_program(path: str, params):
    data = Path(path).read_bytes()
    if data.startswith(wire.MAGIC):
        return wire.decode(data, params, expect=wire.KIND_PROGRAM)
    try:
        text = data.decode()
    except UnicodeDecodeError:
        raise DecodeError(f"{path}: neither a program file nor text") from None
    return parse_program(text)


def cmd_params(args) -> int:
    if args.bmax is None:
        rows = [derive_params(ParamRequest(b_max=b, kappa=args.kappa)) for b in REFERENCE_ROWS]
    else:
        req = ParamRequest(b_max=parse_int_expr(args.bmax), kappa=args.kappa,
                           sigma=args.sigma, b_add=args.b_add, n=args.n,
                           r=None if args.r is None else parse_int_expr(args.r))
        rows = [derive_params(req)]
    print(format_table(rows))
    if args.out:
        if len(rows) != 1:
            raise ValidationError("--out needs a single row (pass --bmax)")
        wire.write_file(args.out, rows[0])
    return EXIT_OK


def cmd_keygen(args) -> int:
    from .scheme import vhss_gen

    params = profile(args.profile)
    keys = vhss_gen(params, _rng(args, "keygen"))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, obj in zip(KEY_FILES, (params, keys.pk, keys.vk, keys.ek1, keys.ek2)):
        wire.write_file(out / f"{name}.vhss", obj)
    print(f"wrote keys to {out} ({params.summary()})")
    return EXIT_OK


def cmd_encrypt(args) -> int:
    from .scheme import encode_input, vhss_enc

    params = _params(args)
    pk = wire.read_file(Path(args.keys) / "pk.vhss", params, wire.KIND_PK)
    values = [int(v) for v in args.value.split(",")]
    x = encode_input(params, values if len(values) > 1 else values[0])
    rng = _rng(args, f"encrypt|{args.value}|{args.out}")
    wire.write_file(args.out, vhss_enc(pk, x, rng), params)
    return EXIT_OK


def cmd_eval(args) -> int:
    from .scheme import vhss_eval

    params = _params(args)
    ek = wire.read_file(Path(args.keys) / f"ek{args.server}.vhss", params, wire.KIND_EK)
    prog = validate_program(_load_program(args.program, params), params)
    cts = [wire.read_file(p, params, wire.KIND_CT) for p in args.ct]
    y = vhss_eval(args.server, ek, cts, prog)
    wire.write_file(args.out, y, params)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .scheme import vhss_ver

    params = _params(args)
    vk = wire.read_file(Path(args.keys) / "vk.vhss", params, wire.KIND_VK)
    y1 = wire.read_file(args.partials[0], params, wire.KIND_PARTIAL)
    y2 = wire.read_file(args.partials[1], params, wire.KIND_PARTIAL)
    y = vhss_ver(vk, y1, y2)
    if y is None:
        print("REJECT")
        return EXIT_REJECT
    coeffs = y.centered() if args.centered else list(y.coeffs)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    print(",".join(str(c) for c in coeffs))
    return EXIT_OK


def cmd_game(args) -> int:
    from .harness import games

    params = profile(args.profile)
    rng = _rng(args, f"game|{args.which}")
    if args.which == "correctness":
        rep = games.run_correctness_game(params, args.trials, rng, max_size=args.max_size)
    elif args.which == "verifiability":
        rep = games.run_verifiability_game(params, args.trials, args.adversary, rng,
                                           white_box=args.white_box)
    else:
        rep = games.run_hiding_game(params, args.trials, rng)
    print(rep.to_text())
    return EXIT_OK if rep.passed else EXIT_REJECT


def cmd_bench(args) -> int:
    from .harness import bench

    params = profile(args.profile)
    rng = _rng(args, "bench")
    print(f"profile={args.profile}")
    print(bench.format_timings(bench.bench_subroutines(params, args.reps, rng)))
    if args.degrees:
        degs = [int(d) for d in args.degrees.split(",")]
        sweep = bench.degree_sweep(params, degs, args.reps, rng)
        for d, ms in zip(sweep["degrees"], sweep["ms"]):
            print(f"degree_{d}_ms={ms:.3f}")
        print(f"r2={sweep['r2']:.6f}")
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .harness.oracle import plaintext_oracle
    from .scheme import encode_input, vhss_enc, vhss_eval, vhss_gen, vhss_ver

    params = profile("toy:7")
    rng = _rng(args, "selftest")
    keys = vhss_gen(params, rng)
    prog = validate_program(parse_program("load r0 ct0\nmult r1 r0 ct1\noutput r1\n"), params)
    xs = [encode_input(params, 2), encode_input(params, 3)]
    cts = [vhss_enc(keys.pk, x, rng) for x in xs]
    y1 = vhss_eval(1, keys.ek1, cts, prog)
    y2 = vhss_eval(2, keys.ek2, cts, prog)
    round_trip = wire.decode(wire.encode(y1, params), params) == y1
    y = vhss_ver(keys.vk, y1, y2)
    ok = y is not None and y == plaintext_oracle(prog.program, xs) and round_trip
    print(f"selftest={'ok' if ok else 'FAIL'} y={y.coeffs[0] if y is not None else 'REJECT'}")
    return EXIT_OK if ok else EXIT_REJECT


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="vhss", description=__doc__.splitlines()[0])
    ap.add_argument("--seed", help="64 hex digits (or any string, hashed); env VHSS_SEED")
    ap.add_argument("--profile", default="toy",
                    help="toy, toy:<r>, tiny or table2:<B_max> (default toy)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="parameter derivation")
    psub = p.add_subparsers(dest="action", required=True)
    d = psub.add_parser("derive", help="print derived (N, lg p, lg q) rows")
    d.add_argument("--bmax", help="B_max, e.g. 2^32 (default: all tabulated rows)")
    d.add_argument("--kappa", type=int, default=40)
    d.add_argument("--sigma", type=float, default=8)
    d.add_argument("--b-add", type=int, default=1)
    d.add_argument("--n", type=int)
    d.add_argument("--r")
    d.add_argument("--out")
    d.set_defaults(func=cmd_params)

    k = sub.add_parser("keygen", help="write params, pk, vk, ek1, ek2 to a directory")
    k.add_argument("--out", required=True)
    k.set_defaults(func=cmd_keygen)

    e = sub.add_parser("encrypt", help="encrypt one input")
    e.add_argument("--keys", required=True)
    e.add_argument("--value", required=True, help="integer or comma-separated coefficients")
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_encrypt)

    v = sub.add_parser("eval", help="one server's evaluation")
    v.add_argument("--server", type=int, choices=(1, 2), required=True)
    v.add_argument("--keys", required=True)
    v.add_argument("--program", required=True)
    v.add_argument("--ct", nargs="+", required=True)
    v.add_argument("--out", required=True)
    v.set_defaults(func=cmd_eval)

    r = sub.add_parser("verify", help="combine two partial results")
    r.add_argument("--keys", required=True)
    r.add_argument("--centered", action="store_true", help="print centered coefficients")
    r.add_argument("partials", nargs=2)
    r.set_defaults(func=cmd_verify)

    g = sub.add_parser("game", help="run a security experiment")
    g.add_argument("which", choices=("correctness", "verifiability", "hiding"))
    g.add_argument("--trials", type=int, default=100)
    g.add_argument("--max-size", type=int, default=32)
    g.add_argument("--adversary", default="mixed",
                   choices=("uniform", "perturb", "scaled", "replay", "mixed"))
    g.add_argument("--white-box", action="store_true")
    g.set_defaults(func=cmd_game)

    b = sub.add_parser("bench", help="subroutine timings and degree sweep")
    b.add_argument("--reps", type=int, default=5)
    b.add_argument("--degrees", default="3,5,7,9,11")
    b.set_defaults(func=cmd_bench)

    s = sub.add_parser("selftest", help="quick end-to-end check at toy parameters")
    s.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValidationError, DomainError, ParameterError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
