"""Random validated programs for the games.

Distribution: 1 to 3 inputs, each declared with a random bound in {1, 2, 3}
and width in {1, 2}. The program opens with a load (or a cmult with a small
constant), then draws instructions with weights mult 6, load 2, addm 2,
cmult 1, addc 1 until it hits the size or degree cap; the
highest-degree register is output. Candidates failing validation are
redrawn with bounds and widths of 1.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import ValidationError
from ..params import Params
from ..program import (AddCt, AddMem, Annotated, CMult, InputDecl, Load, Mult, Output,
                       Program, validate_program)
from ..ring import RingElement
from ..sampling import RngHandle

_WEIGHTS = (("mult", 6), ("load", 2), ("addm", 2), ("cmult", 1), ("addc", 1))


@dataclass
class Instance:
    program: Annotated
    inputs: list[RingElement]


def _choice(rng: RngHandle, items):
    return items[rng.randbelow(len(items))]


def _weighted(rng: RngHandle, table) -> str:
    total = sum(w for _, w in table)
    pick = rng.randbelow(total)
    for name, w in table:
        if pick < w:
            return name
        pick -= w
    raise AssertionError


def _draw(params: Params, rng: RngHandle, max_size: int, max_degree: int,
          small: bool) -> Program:
    k = 1 + rng.randbelow(3)
    decls = [InputDecl(j, 1 if small else min(params.r // 2, 1 + rng.randbelow(3)),
                       1 if small else 1 + rng.randbelow(2)) for j in range(k)]
    cts = list(range(k))
    ct_weight = {j: 1 for j in cts}
    target = 1 + rng.randbelow(max_degree)
    ins: list = []
    deg: dict[int, int] = {}

    def const() -> tuple[int, ...]:
        return (1 + rng.randbelow(2),)

    if rng.randbelow(4):
        ins.append(Load(0, _choice(rng, cts)))
    else:
        ins.append(CMult(0, const(), _choice(rng, cts)))
    deg[0] = 1

    def usable() -> list[int]:
        return [c for c in cts if ct_weight[c] <= params.b_add]

    while len(ins) < max_size - 1:
        top = max(deg.values())
        if top >= target and rng.randbelow(2):
            break
        op = _weighted(rng, _WEIGHTS)
        nxt = len(deg)
        if op == "mult":
            cands = [r for r, d in deg.items() if d < max_degree]
            if not cands:
                break
            src = max(cands, key=lambda r: (deg[r], r)) if rng.randbelow(3) else _choice(rng, cands)
            ins.append(Mult(nxt, src, _choice(rng, usable())))
            deg[nxt] = deg[src] + 1
        elif op == "load":
            ins.append(Load(nxt, _choice(rng, usable())))
            deg[nxt] = 1
        elif op == "cmult":
            ins.append(CMult(nxt, const(), _choice(rng, usable())))
            deg[nxt] = 1
        elif op == "addm":
            regs = list(deg)
            a, b = _choice(rng, regs), _choice(rng, regs)
            ins.append(AddMem(nxt, a, b))
            deg[nxt] = max(deg[a], deg[b])
        else:
            a, b = _choice(rng, cts), _choice(rng, cts)
            if ct_weight[a] + ct_weight[b] > params.b_add:
                continue
            new = len(cts)
            ins.append(AddCt(new, a, b))
            cts.append(new)
            ct_weight[new] = ct_weight[a] + ct_weight[b]
    out = max(deg, key=lambda r: (deg[r], r))
    ins.append(Output(out))
    return Program(tuple(ins), tuple(decls))


def random_input(params: Params, decl: InputDecl, rng: RngHandle) -> RingElement:
    bound = params.r // 2 if decl.bound is None else decl.bound
    width = params.n if decl.width is None else decl.width
    vals = [rng.randbelow(2 * bound + 1) - bound for _ in range(width)]
    return RingElement.from_ints(vals, params.r, params.n)


def random_instance(params: Params, rng: RngHandle, max_size: int = 32,
                    max_degree: int = 11) -> Instance:
    """A validated program of size <= max_size and degree <= max_degree, plus inputs."""
    if max_size < 2:
        raise ValueError("max_size must be at least 2")
    for attempt in range(64):
        prog = _draw(params, rng, max_size, max_degree, small=attempt >= 8)
        try:
            ann = validate_program(prog, params)
        except ValidationError:
            continue
        inputs = [random_input(params, d, rng) for d in prog.inputs]
        return Instance(ann, inputs)
    raise ValidationError("could not draw a valid program for these parameters")
