"""Interleaved simulation: substitution machine first, heap machine as fallback.

For k = 0, 1, 2, ... the substitution machine gets k steps and space budget
m = |s| * p(k).  If it finishes, its program is the answer.  If it runs out
of space, the term is big enough that the heap machine's k-step state
(bounded by |s| * p(k)) costs no more than the term itself, so the heap
machine is tried with k steps.  Otherwise k grows by one.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .heap_machine import HeapRun, unfold
from .programs import LAM, RET, decompile
from .subst_machine import Outcome, SubstRun
from .terms import EvalReport, Term, require_closed, size_term

DEFAULT_K_CAP = 2**20


def poly_p(k: int) -> int:
    """(k+1)(3k+4): times |s| it dominates the heap machine's k-step state size."""
    return (k + 1) * (3 * k + 4)


class Path(enum.Enum):
    SUBST_NORMAL = "subst-normal"
    SUBST_STEP_OUT = "subst-step-out"
    HEAP_TRIED = "heap-tried"
    HEAP_SUCCEEDED = "heap-succeeded"


@dataclass
class Iteration:
    k: int
    m: int
    path: Path
    subst_steps: int
    subst_peak: int
    heap_steps: int = 0
    heap_peak: int = 0


@dataclass
class CombinedReport:
    normal_form: Term
    iterations: list = field(repr=False)
    final_k: int
    final_m: int
    peak_subst_size: int
    peak_heap_size: int
    modeled_space: int
    total_steps: int

    @property
    def final_path(self) -> Path:
        return self.iterations[-1].path


@dataclass
class BudgetExhausted:
    k_cap: int
    iterations: list = field(repr=False)
    peak_subst_size: int
    peak_heap_size: int


def counter_bits(n: int) -> int:
    return math.ceil(math.log2(n + 2))


def run_combined(s: Term, k_cap: int = DEFAULT_K_CAP) -> Union[CombinedReport, BudgetExhausted]:
    require_closed(s)
    size = size_term(s)
    subst = SubstRun(s)
    heap: Optional[HeapRun] = None
    iterations = []
    peak_subst = peak_heap = total = 0

    for k in range(k_cap + 1):
        m = size * poly_p(k)
        out = subst.query(k, m)
        total += out.steps_taken
        peak_subst = max(peak_subst, out.peak_state_size)
        it = Iteration(k, m, Path.SUBST_STEP_OUT, out.steps_taken, out.peak_state_size)
        iterations.append(it)
        normal_form = None

        if out.outcome is Outcome.NORMAL:
            it.path = Path.SUBST_NORMAL
            normal_form = decompile((LAM, *out.result, RET))
        elif out.outcome is Outcome.SPACE_BOUND_REACHED:
            if heap is None:
                heap = HeapRun(s)
            h = heap.query(k)
            total += h.steps_taken
            peak_heap = max(peak_heap, h.peak_state_size)
            it.heap_steps, it.heap_peak = h.steps_taken, h.peak_state_size
            it.path = Path.HEAP_TRIED
            if h.ok:
                it.path = Path.HEAP_SUCCEEDED
                normal_form = decompile(unfold(h.heap, h.closure))

        if normal_form is not None:
            return CombinedReport(
                normal_form=normal_form,
                iterations=iterations,
                final_k=k,
                final_m=m,
                peak_subst_size=peak_subst,
                peak_heap_size=peak_heap,
                modeled_space=max(peak_subst, peak_heap) + counter_bits(k) + counter_bits(m),
                total_steps=total,
            )

    return BudgetExhausted(k_cap, iterations, peak_subst, peak_heap)


def space_meter(report: CombinedReport, reference: EvalReport) -> Fraction:
    """Realised space overhead of the combined simulation over the term's own space."""
    return Fraction(report.modeled_space, reference.space)
