"""Restricted multiplication straight-line programs.

Text format, one instruction per line (ids are implicit 0-based positions)::

    load   r<k> ct<j>
    addm   r<k> r<i> r<j>
    addc   ct<k> ct<i> ct<j>
    cmult  r<k> <c0,c1,...> ct<j>
    mult   r<k> r<i> ct<j>
    output r<k>

Optional ``input ct<j> bound=<B> width=<w>`` lines declare how large an
input may be (``‖x‖∞ <= B`` and only X^0..X^(w-1) nonzero). They are not
instructions and take no id. ``#`` starts a comment.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .errors import ValidationError
from .params import Params, correctness_bound


@dataclass(frozen=True)
class Load:
    dst: int
    ct: int


@dataclass(frozen=True)
class AddMem:
    dst: int
    a: int
    b: int


@dataclass(frozen=True)
class AddCt:
    dst: int
    a: int
    b: int


@dataclass(frozen=True)
class CMult:
    dst: int
    const: tuple[int, ...]
    ct: int


@dataclass(frozen=True)
class Mult:
    dst: int
    reg: int
    ct: int


@dataclass(frozen=True)
class Output:
    reg: int


Instruction = Union[Load, AddMem, AddCt, CMult, Mult, Output]


@dataclass(frozen=True)
class InputDecl:
    ct: int
    bound: int | None = None
    width: int | None = None


@dataclass(frozen=True)
class Program:
    instructions: tuple[Instruction, ...]
    inputs: tuple[InputDecl, ...] = ()

    @property
    def size(self) -> int:
        return len(self.instructions)

    @property
    def n_inputs(self) -> int:
        defined = {ins.dst for ins in self.instructions if isinstance(ins, AddCt)}
        used = {d.ct for d in self.inputs}
        for ins in self.instructions:
            if isinstance(ins, (Load, CMult, Mult)):
                used.add(ins.ct)
            elif isinstance(ins, AddCt):
                used.update((ins.a, ins.b))
        free = used - defined
        return max(free) + 1 if free else 0

    def to_text(self) -> str:
        lines = []
        for d in self.inputs:
            extra = ""
            if d.bound is not None:
                extra += f" bound={d.bound}"
            if d.width is not None:
                extra += f" width={d.width}"
            lines.append(f"input ct{d.ct}{extra}")
        for ins in self.instructions:
            lines.append(format_instruction(ins))
        return "\n".join(lines) + "\n"


def format_instruction(ins: Instruction) -> str:
    if isinstance(ins, Load):
        return f"load r{ins.dst} ct{ins.ct}"
    if isinstance(ins, AddMem):
        return f"addm r{ins.dst} r{ins.a} r{ins.b}"
    if isinstance(ins, AddCt):
        return f"addc ct{ins.dst} ct{ins.a} ct{ins.b}"
    if isinstance(ins, CMult):
        return f"cmult r{ins.dst} {','.join(str(c) for c in ins.const)} ct{ins.ct}"
    if isinstance(ins, Mult):
        return f"mult r{ins.dst} r{ins.reg} ct{ins.ct}"
    if isinstance(ins, Output):
        return f"output r{ins.reg}"
    raise TypeError(f"not an instruction: {ins!r}")


_REG = re.compile(r"r(\d+)$")
_CT = re.compile(r"ct(\d+)$")


def _operand(tok: str, kind: str, lineno: int, op: str) -> int:
    m = (_REG if kind == "r" else _CT).match(tok)
    if m:
        return int(m.group(1))
    other = _CT if kind == "r" else _REG
    if op in ("mult", "cmult") and kind == "ct" and other.match(tok):
        raise ValidationError(
            f"line {lineno}: {op} needs a ciphertext operand, got register {tok}; "
            "memory x memory multiplication is impossible in this scheme")
    want = "register r<k>" if kind == "r" else "ciphertext ct<k>"
    raise ValidationError(f"line {lineno}: expected {want}, got {tok!r}")


_ARITY = {"load": 2, "addm": 3, "addc": 3, "cmult": 3, "mult": 3, "output": 1}


def parse_program(text: str) -> Program:
    instructions: list[Instruction] = []
    inputs: list[InputDecl] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        op, *args = line.split()
        op = op.lower()
        if op == "input":
            if not args:
                raise ValidationError(f"line {lineno}: input needs a ct<k> operand")
            ct = _operand(args[0], "ct", lineno, op)
            opts = {}
            for kv in args[1:]:
                key, sep, val = kv.partition("=")
                if not sep or key not in ("bound", "width"):
                    raise ValidationError(f"line {lineno}: bad input option {kv!r}")
                try:
                    opts[key] = int(val)
                except ValueError:
                    raise ValidationError(f"line {lineno}: bad integer {val!r}") from None
            inputs.append(InputDecl(ct, opts.get("bound"), opts.get("width")))
            continue
        if op not in _ARITY:
            raise ValidationError(f"line {lineno}: unknown instruction {op!r}")
        if len(args) != _ARITY[op]:
            raise ValidationError(
                f"line {lineno}: {op} takes {_ARITY[op]} operands, got {len(args)}")
        if op == "load":
            ins = Load(_operand(args[0], "r", lineno, op), _operand(args[1], "ct", lineno, op))
        elif op == "addm":
            ins = AddMem(*(_operand(a, "r", lineno, op) for a in args))
        elif op == "addc":
            ins = AddCt(*(_operand(a, "ct", lineno, op) for a in args))
        elif op == "cmult":
            try:
                const = tuple(int(c) for c in args[1].split(","))
            except ValueError:
                raise ValidationError(f"line {lineno}: bad constant {args[1]!r}") from None
            ins = CMult(_operand(args[0], "r", lineno, op), const,
                        _operand(args[2], "ct", lineno, op))
        elif op == "mult":
            ins = Mult(_operand(args[0], "r", lineno, op), _operand(args[1], "r", lineno, op),
                       _operand(args[2], "ct", lineno, op))
        else:
            ins = Output(_operand(args[0], "r", lineno, op))
        instructions.append(ins)
    return Program(tuple(instructions), tuple(inputs))


@dataclass
class Annotated:
    """Result of :func:`validate_program`."""

    program: Program
    n_inputs: int
    reg_bound: dict[int, int] = field(default_factory=dict)
    reg_width: dict[int, int] = field(default_factory=dict)
    ct_bound: dict[int, int] = field(default_factory=dict)
    ct_width: dict[int, int] = field(default_factory=dict)
    ct_weight: dict[int, int] = field(default_factory=dict)
    output_reg: int = -1
    max_bound: int = 0
    degree: int = 0
    last_use: dict[int, int] = field(default_factory=dict)
    success_bound: Fraction = Fraction(0)

    @property
    def failure_bound(self) -> Fraction:
        return 1 - self.success_bound


def centered_const(const, r: int) -> list[int]:
    half = r // 2
    vals = [c % r for c in const]
    return [v - r if v > half else v for v in vals]


def validate_program(prog: Program, params: Params) -> Annotated:
    """Static checks plus plaintext-magnitude interval analysis.

    Bounds propagate as B(load)=B(ct), B(addm)=B1+B2, B(addc)=B1+B2 and
    B(mult)=B(cmult)=min(w1, w2)·B1·B2, where w counts the coefficient
    positions that can be nonzero (w <= N, so this never exceeds the
    N·B1·B2 worst case). Every register must stay within B_max.
    """
    n, r = params.n, params.r
    if not prog.instructions:
        raise ValidationError("empty program")
    ann = Annotated(program=prog, n_inputs=prog.n_inputs)
    default_bound = r // 2

    addc_dsts = [ins.dst for ins in prog.instructions if isinstance(ins, AddCt)]
    for d in prog.inputs:
        if d.ct in addc_dsts:
            raise ValidationError(f"ct{d.ct} is declared as input but defined by addc")
        if d.bound is not None and d.bound < 0:
            raise ValidationError(f"ct{d.ct}: negative bound")
        if d.width is not None and not 1 <= d.width <= n:
            raise ValidationError(f"ct{d.ct}: width must be in 1..N")
    decl = {d.ct: d for d in prog.inputs}
    for j in range(ann.n_inputs):
        if j in addc_dsts:
            raise ValidationError(f"ct{j} is an input slot and cannot be an addc target")
        d = decl.get(j, InputDecl(j))
        ann.ct_bound[j] = default_bound if d.bound is None else d.bound
        ann.ct_width[j] = n if d.width is None else d.width
        ann.ct_weight[j] = 1
        if ann.ct_bound[j] > params.b_max:
            raise ValidationError(f"ct{j}: input bound {ann.ct_bound[j]} exceeds B_max")

    degree: dict[int, int] = {}
    ct_degree = {j: 1 for j in range(ann.n_inputs)}
    outputs = []
    reads_ct = False

    def need_reg(i: int, reg: int) -> None:
        if reg not in ann.reg_bound:
            raise ValidationError(f"instruction {i}: r{reg} used before definition")
        ann.last_use[reg] = i

    def need_ct(i: int, ct: int, consumed: bool) -> None:
        if ct not in ann.ct_bound:
            raise ValidationError(f"instruction {i}: ct{ct} used before definition")
        if consumed and ann.ct_weight[ct] > params.b_add:
            raise ValidationError(
                f"instruction {i}: ct{ct} sums {ann.ct_weight[ct]} ciphertexts, "
                f"more than B_add={params.b_add}")

    def define_reg(i: int, reg: int, bound: int, width: int, deg: int) -> None:
        if reg in ann.reg_bound:
            raise ValidationError(f"instruction {i}: r{reg} assigned twice")
        if bound > params.b_max:
            raise ValidationError(
                f"instruction {i}: r{reg} may reach {bound} > B_max={params.b_max}")
        ann.reg_bound[reg] = bound
        ann.reg_width[reg] = width
        degree[reg] = deg

    for i, ins in enumerate(prog.instructions):
        if isinstance(ins, Load):
            need_ct(i, ins.ct, True)
            reads_ct = True
            define_reg(i, ins.dst, ann.ct_bound[ins.ct], ann.ct_width[ins.ct], ct_degree[ins.ct])
        elif isinstance(ins, AddMem):
            need_reg(i, ins.a)
            need_reg(i, ins.b)
            define_reg(i, ins.dst, ann.reg_bound[ins.a] + ann.reg_bound[ins.b],
                       max(ann.reg_width[ins.a], ann.reg_width[ins.b]),
                       max(degree[ins.a], degree[ins.b]))
        elif isinstance(ins, AddCt):
            need_ct(i, ins.a, False)
            need_ct(i, ins.b, False)
            if ins.dst in ann.ct_bound:
                raise ValidationError(f"instruction {i}: ct{ins.dst} assigned twice")
            weight = ann.ct_weight[ins.a] + ann.ct_weight[ins.b]
            if weight > params.b_add:
                raise ValidationError(
                    f"instruction {i}: addc would sum {weight} ciphertexts, "
                    f"more than B_add={params.b_add}")
            ann.ct_bound[ins.dst] = ann.ct_bound[ins.a] + ann.ct_bound[ins.b]
            ann.ct_width[ins.dst] = max(ann.ct_width[ins.a], ann.ct_width[ins.b])
            ann.ct_weight[ins.dst] = weight
            ct_degree[ins.dst] = 1
            if ann.ct_bound[ins.dst] > params.b_max:
                raise ValidationError(f"instruction {i}: ct{ins.dst} may exceed B_max")
        elif isinstance(ins, CMult):
            need_ct(i, ins.ct, True)
            reads_ct = True
            if len(ins.const) > n:
                raise ValidationError(f"instruction {i}: constant has more than N coefficients")
            c = centered_const(ins.const, r)
            cb = max((abs(v) for v in c), default=0)
            cw = max((k + 1 for k, v in enumerate(c) if v), default=1)
            xb, xw = ann.ct_bound[ins.ct], ann.ct_width[ins.ct]
            define_reg(i, ins.dst, min(cw, xw) * cb * xb, min(n, cw + xw - 1),
                       ct_degree[ins.ct])
        elif isinstance(ins, Mult):
            need_reg(i, ins.reg)
            need_ct(i, ins.ct, True)
            reads_ct = True
            ab, aw = ann.reg_bound[ins.reg], ann.reg_width[ins.reg]
            xb, xw = ann.ct_bound[ins.ct], ann.ct_width[ins.ct]
            define_reg(i, ins.dst, min(aw, xw) * ab * xb, min(n, aw + xw - 1),
                       degree[ins.reg] + ct_degree[ins.ct])
        elif isinstance(ins, Output):
            need_reg(i, ins.reg)
            outputs.append(ins.reg)
        else:
            raise ValidationError(f"instruction {i}: unknown instruction {ins!r}")

    if not reads_ct:
        raise ValidationError("program never loads a ciphertext")
    if len(outputs) != 1:
        raise ValidationError(f"program must have exactly one output, found {len(outputs)}")
    ann.output_reg = outputs[0]
    ann.max_bound = max(ann.reg_bound.values())
    ann.degree = degree[ann.output_reg]
    ann.success_bound = correctness_bound(params, prog.size)
    return ann
