"""Substitution-based abstract machine with tail-call optimisation.

A state is a pair of program stacks (tasks, values).  Two rules:

* lambda: ``(Lam::P)::T, V -> tailRec(P', T), Q::V`` where P splits as
  ``Q ++ Ret :: P'``
* application: ``(App::P)::T, Q::R::V -> R[0 := Lam::Q++[Ret]] :: tailRec(P, T), V``

``tailRec`` drops an empty continuation instead of pushing it.
"""

from __future__ import annotations

import bisect
import enum
from dataclasses import dataclass, field
from typing import Callable, Optional

from .programs import (
    APP,
    LAM,
    RET,
    Program,
    compile_term,
    dump_program,
    jump_target,
    size_program,
    subst_program,
    subst_size,
)
from .terms import Term, require_closed


@dataclass(frozen=True)
class SubstState:
    """Machine state; both stacks are listed top first."""

    tasks: tuple
    values: tuple


def initial_subst(s: Term) -> SubstState:
    require_closed(s)
    return SubstState(tasks=(compile_term(s),), values=())


def state_size(state: SubstState) -> int:
    return sum(map(size_program, state.tasks)) + sum(map(size_program, state.values))


class SubstMachine:
    """Mutable runner over a SubstState.

    Tasks are kept as ``[code, pc]`` pairs so advancing through a program does
    not copy it; values carry their cached size.  The top of each stack is the
    end of its list.
    """

    def __init__(self, state: SubstState):
        self.tasks = [[P, 0] for P in reversed(state.tasks)]
        self.values = [(Q, size_program(Q)) for Q in reversed(state.values)]
        self.size = state_size(state)

    @classmethod
    def for_term(cls, s: Term) -> "SubstMachine":
        return cls(initial_subst(s))

    def snapshot(self) -> SubstState:
        return SubstState(
            tasks=tuple(code[pc:] for code, pc in reversed(self.tasks)),
            values=tuple(Q for Q, _ in reversed(self.values)),
        )

    @property
    def terminal(self) -> bool:
        return not self.tasks

    def result(self) -> Optional[Program]:
        if not self.tasks and len(self.values) == 1:
            return self.values[0][0]
        return None

    def rule(self) -> Optional[str]:
        if not self.tasks:
            return None
        code, pc = self.tasks[-1]
        if pc >= len(code):
            return None
        c = code[pc]
        if c == LAM and jump_target(code, pc + 1) is not None:
            return "lam"
        if c == APP and len(self.values) >= 2:
            return "app"
        return None

    def next_size(self) -> Optional[int]:
        """Size of the successor state, computed without building it."""
        rule = self.rule()
        if rule == "lam":
            return self.size - 2
        if rule == "app":
            Q, q_size = self.values[-1]
            R, r_size = self.values[-2]
            return self.size - 1 - q_size - r_size + subst_size(R, 0, q_size + 2)
        return None

    def _advance_top(self, pc: int) -> None:
        # tailRec: an exhausted continuation is dropped, never pushed
        if pc >= len(self.tasks[-1][0]):
            self.tasks.pop()
        else:
            self.tasks[-1][1] = pc

    def step(self) -> Optional[str]:
        rule = self.rule()
        if rule == "lam":
            code, pc = self.tasks[-1]
            j = jump_target(code, pc + 1)
            body = code[pc + 1:j]
            self._advance_top(j + 1)
            self.values.append((body, size_program(body)))
            self.size -= 2
        elif rule == "app":
            Q, q_size = self.values.pop()
            R, r_size = self.values.pop()
            new = subst_program(R, 0, (LAM, *Q, RET))
            new_size = size_program(new)
            self._advance_top(self.tasks[-1][1] + 1)
            self.tasks.append([new, 0])
            self.size += new_size - 1 - q_size - r_size
        return rule


def subst_step(state: SubstState) -> Optional[SubstState]:
    machine = SubstMachine(state)
    if machine.step() is None:
        return None
    return machine.snapshot()


class Outcome(enum.Enum):
    NORMAL = "normal"
    SPACE_BOUND_REACHED = "space-bound-reached"
    SPACE_BOUND_NOT_REACHED = "space-bound-not-reached"


@dataclass
class SubstOutcome:
    outcome: Outcome
    steps_taken: int
    peak_state_size: int
    result: Optional[Program] = None
    trace: Optional[list] = field(default=None, repr=False)


def trace_record(step: int, rule: str, machine: SubstMachine) -> dict:
    snap = machine.snapshot()
    return {
        "step": step,
        "rule": rule,
        "state_size": machine.size,
        "tasks": [dump_program(P) for P in snap.tasks],
        "values": [dump_program(Q) for Q in snap.values],
    }


class SubstRun:
    """A budgeted run that can be queried again with larger budgets.

    The machine is deterministic, so a query with step budget ``k`` and space
    budget ``m`` only depends on the first ``k`` states of one trajectory.
    The trajectory is extended lazily and a state larger than the current
    space budget is never built; its size is counted first.
    """

    def __init__(self, s: Term, on_step: Optional[Callable[[int, str, SubstMachine], None]] = None):
        self.machine = SubstMachine.for_term(s)
        self.sizes = [self.machine.size]
        self.prefix_peak = [self.machine.size]
        self.on_step = on_step
        self._stuck = False

    @property
    def built(self) -> int:
        return len(self.sizes) - 1

    def _extend(self, k: int, m: int) -> Optional[int]:
        """Build states up to index ``k``; return the index of a state over ``m``."""
        machine = self.machine
        while self.built < k and not machine.terminal and not self._stuck:
            nxt = machine.next_size()
            if nxt is None:
                self._stuck = True
                break
            if nxt > m:
                return self.built + 1
            rule = machine.step()
            self.sizes.append(machine.size)
            self.prefix_peak.append(max(self.prefix_peak[-1], machine.size))
            if self.on_step is not None:
                self.on_step(self.built, rule, machine)
        return None

    def _abort(self, j: int) -> SubstOutcome:
        if j == 0:
            return SubstOutcome(Outcome.SPACE_BOUND_REACHED, 0, self.sizes[0])
        return SubstOutcome(Outcome.SPACE_BOUND_REACHED, j - 1, self.prefix_peak[j - 1])

    def query(self, k: int, m: int) -> SubstOutcome:
        limit = min(k, self.built)
        j = bisect.bisect_right(self.prefix_peak, m, hi=limit + 1)
        if j <= limit:
            return self._abort(j)
        over = self._extend(k, m)
        if over is not None:
            return self._abort(over)
        if self.built <= k:
            if self.machine.terminal:
                return SubstOutcome(
                    Outcome.NORMAL,
                    self.built,
                    self.prefix_peak[self.built],
                    result=self.machine.result(),
                )
            if self._stuck:
                raise RuntimeError("substitution machine is stuck on a closed term")
        end = min(k, self.built)
        return SubstOutcome(Outcome.SPACE_BOUND_NOT_REACHED, end, self.prefix_peak[end])


def run_subst(s: Term, k: int, m: int, trace: bool = False) -> SubstOutcome:
    """Run at most ``k`` steps without ever holding a state larger than ``m``."""
    records = [] if trace else None

    def record(step, rule, machine):
        records.append(trace_record(step, rule, machine))

    run = SubstRun(s, on_step=record if trace else None)
    out = run.query(k, m)
    out.trace = records
    return out
