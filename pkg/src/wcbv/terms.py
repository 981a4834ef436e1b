"""De Bruijn terms of the weak call-by-value lambda calculus.

Reduction is deterministic: the function position is reduced first, then the
argument, and a redex fires only when both sides are abstractions.  Nothing
reduces under a binder.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Union

MAX_INDEX = 2**32


class NotClosed(ValueError):
    """Raised when an operation requiring a closed term receives an open one."""


class DepthExceeded(RuntimeError):
    pass


@dataclass(frozen=True, slots=True)
class Var:
    n: int

    def __post_init__(self):
        if not 0 <= self.n < MAX_INDEX:
            raise ValueError(f"de Bruijn index out of range: {self.n}")

    def __repr__(self):
        return f"Var({self.n})"


@dataclass(frozen=True, slots=True)
class App:
    fun: "Term"
    arg: "Term"

    def __repr__(self):
        return f"App({self.fun!r}, {self.arg!r})"


@dataclass(frozen=True, slots=True)
class Lam:
    body: "Term"

    def __repr__(self):
        return f"Lam({self.body!r})"


Term = Union[Var, App, Lam]


def size_term(s: Term) -> int:
    """Size with unary indices: |n| = 1+n, |λs| = 1+|s|, |st| = 1+|s|+|t|."""
    total = 0
    stack = [s]
    while stack:
        t = stack.pop()
        if isinstance(t, Var):
            total += 1 + t.n
        elif isinstance(t, Lam):
            total += 1
            stack.append(t.body)
        else:
            total += 1
            stack.append(t.fun)
            stack.append(t.arg)
    return total


def subst_term(s: Term, k: int, u: Term) -> Term:
    """Capturing substitution s[k := u]; ``u`` is inserted without shifting."""
    if isinstance(s, Var):
        return u if s.n == k else s
    if isinstance(s, App):
        return App(subst_term(s.fun, k, u), subst_term(s.arg, k, u))
    return Lam(subst_term(s.body, k + 1, u))


def bounded(s: Term, k: int) -> bool:
    """True iff every free index of ``s`` is below ``k``."""
    stack = [(s, k)]
    while stack:
        t, depth = stack.pop()
        if isinstance(t, Var):
            if t.n >= depth:
                return False
        elif isinstance(t, Lam):
            stack.append((t.body, depth + 1))
        else:
            stack.append((t.fun, depth))
            stack.append((t.arg, depth))
    return True


def closed(s: Term) -> bool:
    return bounded(s, 0)


def require_closed(s: Term) -> None:
    if not closed(s):
        raise NotClosed("term has free de Bruijn indices")


def step(s: Term) -> Optional[Term]:
    """One reduction step, or None if ``s`` is irreducible.

    Walks down to the unique redex keeping the path, then rebuilds the spine.
    """
    path = []
    cur = s
    while True:
        if not isinstance(cur, App):
            return None
        fun, arg = cur.fun, cur.arg
        if isinstance(fun, Lam):
            if isinstance(arg, Lam):
                result = subst_term(fun.body, 0, arg)
                break
            if isinstance(arg, App):
                path.append((False, fun))
                cur = arg
                continue
            return None
        if isinstance(fun, App):
            path.append((True, arg))
            cur = fun
            continue
        return None
    for on_left, other in reversed(path):
        result = App(result, other) if on_left else App(other, result)
    return result


@dataclass
class EvalReport:
    normal_form: Term
    time: int
    space: int
    trace: Optional[list] = field(default=None, repr=False)


@dataclass
class Diverged:
    """Fuel ran out before an abstraction was reached."""

    steps: int
    space: int
    last: Term = field(repr=False)


def evaluate(s: Term, fuel: int, trace: bool = False) -> Union[EvalReport, Diverged]:
    require_closed(s)
    seen = [s] if trace else None
    space = size_term(s)
    time = 0
    cur = s
    while not isinstance(cur, Lam):
        if time >= fuel:
            return Diverged(steps=time, space=space, last=cur)
        nxt = step(cur)
        if nxt is None:
            # unreachable for closed terms
            raise RuntimeError(f"closed term is stuck: {cur!r}")
        cur = nxt
        time += 1
        space = max(space, size_term(cur))
        if seen is not None:
            seen.append(cur)
    return EvalReport(normal_form=cur, time=time, space=space, trace=seen)


def eval_bigstep(s: Term, max_depth: int = 400) -> tuple[int, int, Term]:
    """Big-step derivation computing (time, space, normal form) at once.

    ``max_depth`` bounds the derivation's nesting; going past it raises
    DepthExceeded (also used as the only guard against divergence).
    """
    require_closed(s)

    def go(t: Term, depth: int) -> tuple[int, int, Term]:
        if depth > max_depth:
            raise DepthExceeded(f"big-step derivation deeper than {max_depth}")
        if isinstance(t, Lam):
            return 0, size_term(t), t
        if isinstance(t, Var):
            raise NotClosed("free variable reached during evaluation")
        k1, m1, f = go(t.fun, depth + 1)
        k2, m2, a = go(t.arg, depth + 1)
        k3, m3, u = go(subst_term(f.body, 0, a), depth + 1)
        m = max(1 + m1 + size_term(t.arg), 1 + size_term(f) + m2, m3)
        return k1 + k2 + 1 + k3, m, u

    return go(s, 0)


def church_bool(b: bool) -> Term:
    return Lam(Lam(Var(1))) if b else Lam(Lam(Var(0)))


def church_nat(n: int) -> Term:
    body: Term = Var(0)
    for _ in range(n):
        body = App(Var(1), body)
    return Lam(Lam(body))


IDENTITY = Lam(Var(0))
OMEGA = App(Lam(App(Var(0), Var(0))), Lam(App(Var(0), Var(0))))


class Family(enum.Enum):
    SIZE_EXPLOSION = "size-explosion"
    POINTER_EXPLOSION = "pointer-explosion"


# λx. true true (x 2 (λx.x))
SIZE_EXPLODER = Lam(
    App(
        App(church_bool(True), church_bool(True)),
        App(App(Var(0), church_nat(2)), IDENTITY),
    )
)

# (λxy. x x) true
POINTER_STEP = App(Lam(Lam(App(Var(1), Var(1)))), church_bool(True))


def gen_family(kind: Family, n: int) -> Term:
    if n < 1:
        raise ValueError("family index must be at least 1")
    if kind is Family.SIZE_EXPLOSION:
        return App(SIZE_EXPLODER, church_nat(n))
    t = church_bool(True)
    for _ in range(n):
        t = App(POINTER_STEP, t)
    return t
