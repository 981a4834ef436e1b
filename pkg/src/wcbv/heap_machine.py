"""Heap-based abstract machine: closures over an append-only environment heap.

Rules (stacks written top first)::

    (Var n::P, a)::T, V, H      -> (P, a)::T, g::V, H         if H[a, n] = g
    (Lam::P, a)::T, V, H        -> (P', a)::T, (Q, a)::V, H   if P = Q ++ Ret::P'
    (App::P, a)::T, g::(Q, b)::V, H -> (Q, b')::(P, a)::T, V, H ++ [g; b]
    ([], a)::T, V, H            -> T, V, H

Address 0 is the empty environment; ``put`` returns ``len(H) + 1``, so cell
``a`` lives at ``H[a - 1]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .programs import APP, LAM, RET, Program, compile_term, decompile, dump_program, jump_target, size_program
from .terms import App, Lam, Term, Var, require_closed


@dataclass(frozen=True)
class Closure:
    code: Program
    env: int

    @property
    def size(self) -> int:
        return size_program(self.code) + self.env


@dataclass(frozen=True)
class HeapEntry:
    head: Closure
    tail: int

    @property
    def size(self) -> int:
        return self.head.size + self.tail


Heap = Sequence[HeapEntry]


@dataclass(frozen=True)
class HeapState:
    """Stacks are listed top first; the heap in address order."""

    tasks: tuple
    values: tuple
    heap: tuple


def heap_lookup(H: Heap, a: int, n: int) -> Optional[Closure]:
    while True:
        if a < 1 or a > len(H):
            return None
        cell = H[a - 1]
        if n == 0:
            return cell.head
        a = cell.tail
        n -= 1


def heap_put(H: Heap, e: HeapEntry) -> tuple[tuple, int]:
    return (*H, e), len(H) + 1


def state_size_heap(state: HeapState) -> int:
    return (
        sum(g.size for g in state.tasks)
        + sum(g.size for g in state.values)
        + sum(e.size for e in state.heap)
    )


def initial_heap(s: Term) -> HeapState:
    require_closed(s)
    return HeapState(tasks=(Closure(compile_term(s), 0),), values=(), heap=())


class HeapMachine:
    """Mutable runner.  Tasks are ``[code, pc, env]``; the size is kept incrementally."""

    def __init__(self, state: HeapState):
        self.tasks = [[g.code, 0, g.env] for g in reversed(state.tasks)]
        self.values = [(g, g.size) for g in reversed(state.values)]
        self.heap = list(state.heap)
        self.size = state_size_heap(state)
        self.max_code_size = max(
            [size_program(g.code) for g in state.tasks]
            + [size_program(g.code) for g in state.values]
            + [size_program(e.head.code) for e in state.heap]
            + [0]
        )

    @classmethod
    def for_term(cls, s: Term) -> "HeapMachine":
        return cls(initial_heap(s))

    def snapshot(self) -> HeapState:
        return HeapState(
            tasks=tuple(Closure(code[pc:], env) for code, pc, env in reversed(self.tasks)),
            values=tuple(g for g, _ in reversed(self.values)),
            heap=tuple(self.heap),
        )

    @property
    def terminal(self) -> bool:
        return not self.tasks and len(self.values) == 1

    def result(self) -> Optional[Closure]:
        return self.values[0][0] if self.terminal else None

    def step(self) -> Optional[str]:
        if not self.tasks:
            return None
        top = self.tasks[-1]
        code, pc, env = top
        if pc >= len(code):
            self.tasks.pop()
            self.size -= env
            return "ret"
        c = code[pc]
        if c >= 0:
            g = heap_lookup(self.heap, env, c)
            if g is None:
                return None
            g_size = g.size
            top[1] = pc + 1
            self.values.append((g, g_size))
            self.size += g_size - (1 + c)
            return "var"
        if c == LAM:
            j = jump_target(code, pc + 1)
            if j is None:
                return None
            body = code[pc + 1:j]
            body_size = size_program(body)
            top[1] = j + 1
            self.values.append((Closure(body, env), body_size + env))
            self.size += env - 2
            self.max_code_size = max(self.max_code_size, body_size)
            return "lam"
        if c == APP and len(self.values) >= 2:
            g, g_size = self.values.pop()
            fun, fun_size = self.values.pop()
            self.heap.append(HeapEntry(g, fun.env))
            address = len(self.heap)
            top[1] = pc + 1
            self.tasks.append([fun.code, 0, address])
            # task (Q, b') replaces value (Q, b); new cell costs |g| + b
            self.size += -1 - g_size - fun_size + (fun_size - fun.env + address) + (g_size + fun.env)
            return "app"
        return None

    def structure(self) -> dict:
        """Quantities bounded by the step count during a run from an initial state."""
        addresses = [env for _, _, env in self.tasks]
        addresses += [g.env for g, _ in self.values]
        addresses += [e.head.env for e in self.heap] + [e.tail for e in self.heap]
        return {
            "stack_length": len(self.tasks) + len(self.values),
            "heap_length": len(self.heap),
            "max_address": max(addresses, default=0),
            "max_code_size": self.max_code_size,
        }


def heap_step(state: HeapState) -> Optional[HeapState]:
    machine = HeapMachine(state)
    if machine.step() is None:
        return None
    return machine.snapshot()


@dataclass
class HeapOutcome:
    """Either a result closure with its heap, or failure (``closure`` is None)."""

    steps_taken: int
    peak_state_size: int
    closure: Optional[Closure] = None
    heap: Optional[tuple] = field(default=None, repr=False)
    diagnostic: str = ""
    trace: Optional[list] = field(default=None, repr=False)

    @property
    def ok(self) -> bool:
        return self.closure is not None


class HeapRun:
    """Resumable run: the first ``k`` steps are shared by every budget >= k."""

    def __init__(self, s: Term, on_step: Optional[Callable[[int, str, HeapMachine], None]] = None):
        self.machine = HeapMachine.for_term(s)
        self.prefix_peak = [self.machine.size]
        self.on_step = on_step
        self.stuck = False

    @property
    def built(self) -> int:
        return len(self.prefix_peak) - 1

    def query(self, k: int) -> HeapOutcome:
        machine = self.machine
        while self.built < k and not machine.terminal and not self.stuck:
            rule = machine.step()
            if rule is None:
                self.stuck = True
                break
            self.prefix_peak.append(max(self.prefix_peak[-1], machine.size))
            if self.on_step is not None:
                self.on_step(self.built, rule, machine)
        end = min(k, self.built)
        peak = self.prefix_peak[end]
        if machine.terminal and self.built <= k:
            return HeapOutcome(end, peak, closure=machine.result(), heap=tuple(machine.heap))
        if self.stuck and self.built <= k:
            return HeapOutcome(end, peak, diagnostic="no rule applies and the state is not terminal")
        return HeapOutcome(end, peak, diagnostic=f"step budget {k} exhausted")


def trace_record(step: int, rule: str, machine: HeapMachine) -> dict:
    return {"step": step, "rule": rule, "state_size": machine.size, "heap_len": len(machine.heap)}


def run_heap(s: Term, k: int, trace: bool = False) -> HeapOutcome:
    records = [] if trace else None

    def record(step, rule, machine):
        records.append(trace_record(step, rule, machine))

    out = HeapRun(s, on_step=record if trace else None).query(k)
    out.trace = records
    return out


def unfold(H: Heap, g: Closure) -> Optional[Program]:
    """Unfold a closure into the program of the abstraction it represents.

    Returns ``Lam :: f(code, env, 1) ++ [Ret]``.  Variables at or above the
    local binder depth are replaced by the unfolding of the closure they are
    bound to; an explicit stack of suspended (code, pc, env, depth) frames
    replaces recursion.
    """
    out = [LAM]
    stack = [(g.code, 0, g.env, 1)]
    while stack:
        code, pc, env, depth = stack.pop()
        if code is None:
            out.append(RET)
            continue
        while pc < len(code):
            c = code[pc]
            pc += 1
            if c == APP:
                out.append(APP)
            elif c == LAM:
                out.append(LAM)
                depth += 1
            elif c == RET:
                if depth == 0:
                    return None
                out.append(RET)
                depth -= 1
            elif c < depth:
                out.append(c)
            else:
                bound = heap_lookup(H, env, c - depth)
                if bound is None:
                    return None
                out.append(LAM)
                stack.append((code, pc, env, depth))
                stack.append((None, 0, 0, 0))
                stack.append((bound.code, 0, bound.env, 1))
                break
    out.append(RET)
    return tuple(out)


def unfold_term(H: Heap, g: Closure) -> Optional[Term]:
    P = unfold(H, g)
    return None if P is None else decompile(P)


def unfolds_check(H: Heap, k: int, s: Term, a: int, target: Term) -> bool:
    """Decide whether ``s`` under environment ``a`` unfolds to ``target``.

    Bound indices (below ``k``) stay put; a free index is looked up and the
    abstraction its closure represents is unfolded in the closure's own
    environment.  The heap is assumed acyclic, as every run produces.
    """
    if isinstance(s, Var):
        if s.n < k:
            return target == s
        g = heap_lookup(H, a, s.n - k)
        if g is None:
            return False
        body = decompile(g.code)
        if body is None or compile_term(body) != g.code:
            return False
        return unfolds_check(H, 0, Lam(body), g.env, target)
    if isinstance(s, Lam):
        return isinstance(target, Lam) and unfolds_check(H, k + 1, s.body, a, target.body)
    return (
        isinstance(target, App)
        and unfolds_check(H, k, s.fun, a, target.fun)
        and unfolds_check(H, k, s.arg, a, target.arg)
    )


def represents_in(H: Heap, g: Closure, s: Term) -> bool:
    """g represents s relative to H: g's code is the body of some λt unfolding to s."""
    body = decompile(g.code)
    if body is None or compile_term(body) != g.code:
        return False
    return unfolds_check(H, 0, Lam(body), g.env, s)


def dump_heap(H: Heap) -> list:
    return [{"head": {"code": dump_program(e.head.code), "env": e.head.env}, "tail": e.tail} for e in H]
