"""Linear programs: the postfix code the abstract machines execute.

A program is a tuple of ints.  A non-negative entry ``n`` is the command
``Var n``; the three structural commands are negative sentinels.  Command
sizes are unary in the index (``|Var n| = 1 + n``), everything else is 1.
"""

from __future__ import annotations

from typing import Iterable, Optional

from .terms import MAX_INDEX, App, Lam, Term, Var

LAM = -1
RET = -2
APP = -3

Program = tuple  # tuple[int, ...]

_NAMES = {LAM: "L", RET: "R", APP: "A"}
_CODES = {"L": LAM, "R": RET, "A": APP}


class ProgramFormatError(ValueError):
    pass


def command_size(c: int) -> int:
    return 1 + c if c >= 0 else 1


def size_program(P: Iterable[int]) -> int:
    """Sum of command sizes.  Unlike the 1 + sum convention, the empty program has size 0."""
    return sum(1 + c if c >= 0 else 1 for c in P)


def compile_term(s: Term) -> Program:
    out = []
    stack: list = [s]
    while stack:
        t = stack.pop()
        if isinstance(t, int):
            out.append(t)
        elif isinstance(t, Var):
            out.append(t.n)
        elif isinstance(t, App):
            stack.append(APP)
            stack.append(t.arg)
            stack.append(t.fun)
        else:
            out.append(LAM)
            stack.append(RET)
            stack.append(t.body)
    return tuple(out)


def decompile(P: Iterable[int]) -> Optional[Term]:
    """Left inverse of ``compile_term``; None when the program is not well formed.

    Runs the accumulator machine: ``depth`` counts unmatched Lam commands and
    ``acc`` holds the terms built so far.
    """
    depth = 0
    acc: list[Term] = []
    for c in P:
        if c >= 0:
            acc.append(Var(c))
        elif c == APP:
            if len(acc) < 2:
                return None
            t = acc.pop()
            s = acc.pop()
            acc.append(App(s, t))
        elif c == LAM:
            depth += 1
        else:
            if depth == 0 or not acc:
                return None
            depth -= 1
            acc.append(Lam(acc.pop()))
    if len(acc) != 1:
        return None
    return acc[0]


def jump_target(P: Program, start: int = 0) -> Optional[int]:
    """Index of the Ret closing the body that begins at ``start``, or None.

    The body is ``P[start:j]`` and the continuation ``P[j + 1:]``.
    """
    depth = 0
    for j in range(start, len(P)):
        c = P[j]
        if c == RET:
            if depth == 0:
                return j
            depth -= 1
        elif c == LAM:
            depth += 1
    return None


def split_body(P: Program) -> Optional[tuple[Program, Program]]:
    """Split ``P`` at the first unmatched Ret into (body, rest)."""
    j = jump_target(P)
    if j is None:
        return None
    return P[:j], P[j + 1:]


def subst_program(P: Program, k: int, Q: Program) -> Program:
    """Replace ``Var k`` (shifted under each Lam) by the commands of ``Q``.

    A Ret at level 0 ends the substitution and drops whatever follows it.
    """
    out = []
    level = k
    for c in P:
        if c == level:
            out.extend(Q)
        elif c == LAM:
            level += 1
            out.append(c)
        elif c == RET:
            out.append(c)
            if level == 0:
                break
            level -= 1
        else:
            out.append(c)
    return tuple(out)


def subst_size(P: Program, k: int, Q_size: int) -> int:
    """Size of ``subst_program(P, k, Q)`` without building it."""
    total = 0
    level = k
    for c in P:
        if c == level:
            total += Q_size
        elif c == RET:
            total += 1
            if level == 0:
                break
            level -= 1
        else:
            if c == LAM:
                level += 1
            total += 1 + c if c >= 0 else 1
    return total


def represents(P: Program, s: Term) -> bool:
    return isinstance(s, Lam) and compile_term(s.body) == tuple(P)


def dump_program(P: Iterable[int]) -> str:
    return " ".join(f"V{c}" if c >= 0 else _NAMES[c] for c in P)


def load_program(text: str) -> Program:
    out = []
    for tok in text.split():
        if tok in _CODES:
            out.append(_CODES[tok])
        elif len(tok) > 1 and tok[0] == "V" and tok[1:].isdigit():
            n = int(tok[1:])
            if n >= MAX_INDEX:
                raise ProgramFormatError(f"index too large: {tok}")
            out.append(n)
        else:
            raise ProgramFormatError(f"unknown command {tok!r}")
    return tuple(out)
