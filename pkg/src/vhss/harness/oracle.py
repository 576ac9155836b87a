"""Ground truth: evaluate a program directly over R_r."""
from __future__ import annotations

from typing import Sequence

from ..params import Params
from ..program import AddCt, AddMem, CMult, Load, Mult, Output, Program, validate_program
from ..ring import RingElement, ring_add, ring_mul


def plaintext_oracle(prog: Program, inputs: Sequence[RingElement],
                     params: Params | None = None) -> RingElement:
    if params is not None:
        validate_program(prog, params)
    if not inputs:
        raise ValueError("need at least one input")
    n, r = inputs[0].n, inputs[0].modulus
    cts = dict(enumerate(inputs))
    regs: dict[int, RingElement] = {}
    for ins in prog.instructions:
        if isinstance(ins, Load):
            regs[ins.dst] = cts[ins.ct]
        elif isinstance(ins, AddMem):
            regs[ins.dst] = ring_add(regs[ins.a], regs[ins.b])
        elif isinstance(ins, AddCt):
            cts[ins.dst] = ring_add(cts[ins.a], cts[ins.b])
        elif isinstance(ins, CMult):
            regs[ins.dst] = ring_mul(RingElement.from_ints(list(ins.const), r, n), cts[ins.ct])
        elif isinstance(ins, Mult):
            regs[ins.dst] = ring_mul(regs[ins.reg], cts[ins.ct])
        elif isinstance(ins, Output):
            return regs[ins.reg]
    raise ValueError("program has no output")
