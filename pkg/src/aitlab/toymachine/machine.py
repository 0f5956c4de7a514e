"""A prefix-free toy universal machine over bit strings.

Opcodes are two bits, read MSB first::

    00 HALT    01 EMIT0    10 EMIT1
    11 LOOP <count: Elias gamma> <body length: Elias gamma> <body bits>

A LOOP body must decode as a sequence of EMIT0/EMIT1/LOOP instructions that
fills the body length exactly; it is checked when read, before the first
iteration. HALT inside a body is a fault. A program is valid only if HALT
executes with no unread bits, which makes the set of valid programs
prefix-free.

Cost model: every decoded opcode costs one step (body opcodes once per
iteration) and every emitted bit costs one step.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Union

INSTRUCTION_SET_VERSION = "toy-1"

HALT, EMIT0, EMIT1, LOOP = "00", "01", "10", "11"

Bits = Union[str, bytes, list, tuple]


class Status(enum.Enum):
    HALTED = "halted"
    OUT_OF_BUDGET = "out_of_budget"
    INVALID = "invalid"


@dataclass(frozen=True)
class RunResult:
    status: Status
    steps: int
    output: Optional[str] = None
    reason: Optional[str] = None

    @property
    def halted(self) -> bool:
        return self.status is Status.HALTED


class _Fault(Exception):
    pass


class _Exhausted(_Fault):
    pass


class _OutOfBudget(Exception):
    pass


def as_bits(bits: Bits) -> str:
    if isinstance(bits, str):
        s = bits.replace(" ", "")
    else:
        s = "".join("1" if int(b) else "0" for b in bits)
    if s.strip("01"):
        raise ValueError(f"not a bit string: {bits!r}")
    return s


def gamma_encode(value: int) -> str:
    if value < 1:
        raise ValueError("Elias gamma encodes integers >= 1")
    b = bin(value)[2:]
    return "0" * (len(b) - 1) + b


def gamma_decode(bits: str, pos: int, end: int) -> tuple[int, int]:
    """Read one gamma code from ``bits[pos:end]``; returns (value, new pos)."""
    zeros = 0
    while True:
        if pos + zeros >= end:
            raise _Exhausted("bits exhausted in gamma code")
        if bits[pos + zeros] == "1":
            break
        zeros += 1
    stop = pos + 2 * zeros + 1
    if stop > end:
        raise _Exhausted("bits exhausted in gamma code")
    return int(bits[pos + zeros:stop], 2), stop


# A parsed body is a tuple of instructions: "0", "1", or (count, body).

def parse_body(bits: str, pos: int, end: int) -> tuple:
    instrs = []
    while pos < end:
        if pos + 2 > end:
            raise _Fault("body overrun")
        op = bits[pos:pos + 2]
        pos += 2
        if op == HALT:
            raise _Fault("halt inside loop body")
        if op == EMIT0:
            instrs.append("0")
        elif op == EMIT1:
            instrs.append("1")
        else:
            try:
                count, pos = gamma_decode(bits, pos, end)
                length, pos = gamma_decode(bits, pos, end)
            except _Exhausted:
                raise _Fault("body overrun") from None
            if pos + length > end:
                raise _Fault("body overrun")
            instrs.append((count, parse_body(bits, pos, pos + length)))
            pos += length
    return tuple(instrs)


def body_cost(body: tuple) -> tuple[int, int]:
    """(steps, output bits) for one pass over a parsed body."""
    steps = out = 0
    for ins in body:
        if isinstance(ins, str):
            steps += 2
            out += 1
        else:
            s, o = body_cost(ins[1])
            steps += 1 + ins[0] * s
            out += ins[0] * o
    return steps, out


def body_output(body: tuple) -> str:
    return "".join(ins if isinstance(ins, str) else body_output(ins[1]) * ins[0]
                   for ins in body)


def decode_run(bits: Bits, step_budget: int) -> RunResult:
    """Run a program to a verdict: halted with output, out of budget, or invalid."""
    if step_budget < 1:
        raise ValueError("step_budget must be >= 1")
    bits = as_bits(bits)
    end = len(bits)
    pos = 0
    steps = 0
    out: list[str] = []
    try:
        while True:
            if pos + 2 > end:
                raise _Exhausted("bits exhausted before HALT")
            op = bits[pos:pos + 2]
            pos += 2
            steps += 1
            if steps > step_budget:
                raise _OutOfBudget
            if op == HALT:
                if pos != end:
                    raise _Fault("unread bits after HALT")
                return RunResult(Status.HALTED, steps, "".join(out))
            if op == EMIT0 or op == EMIT1:
                steps += 1
                if steps > step_budget:
                    raise _OutOfBudget
                out.append("0" if op == EMIT0 else "1")
                continue
            count, pos = gamma_decode(bits, pos, end)
            length, pos = gamma_decode(bits, pos, end)
            if pos + length > end:
                raise _Exhausted("bits exhausted in loop body")
            body = parse_body(bits, pos, pos + length)
            pos += length
            per_steps, _ = body_cost(body)
            # steps only grow, so checking the loop's total is equivalent
            # to checking after every single step
            if steps + count * per_steps > step_budget:
                raise _OutOfBudget
            steps += count * per_steps
            out.append(body_output(body) * count)
    except _OutOfBudget:
        return RunResult(Status.OUT_OF_BUDGET, step_budget, reason="step budget exhausted")
    except _Fault as exc:
        return RunResult(Status.INVALID, steps, reason=str(exc))


def assemble(*parts) -> str:
    """Build program bits from a tiny assembly.

    ``"0"``/``"1"`` emit a bit, ``("loop", count, [parts...])`` is a LOOP,
    and a trailing HALT is appended.
    """
    return _assemble(parts) + HALT


def _assemble(parts) -> str:
    out = []
    for p in parts:
        if p == "0":
            out.append(EMIT0)
        elif p == "1":
            out.append(EMIT1)
        else:
            _, count, inner = p
            body = _assemble(inner)
            out.append(LOOP + gamma_encode(count) + gamma_encode(len(body)) + body)
    return "".join(out)
