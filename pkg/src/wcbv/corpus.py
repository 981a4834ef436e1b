"""Seeded random corpora of closed terms, and an all-strategies agreement check."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, Optional

from .combined import CombinedReport, run_combined
from .heap_machine import run_heap, unfold_term
from .programs import LAM, RET, decompile
from .subst_machine import Outcome, run_subst
from .syntax import parse
from .terms import App, Diverged, Lam, Term, Var, church_nat, evaluate, size_term, step

LIBRARY = [church_nat(n) for n in range(4)] + [
    parse(src)
    for src in (
        r"true",
        r"false",
        r"\x. x",
        r"\x y z. x z (y z)",
        r"\n f x. f (n f x)",
        r"\m n f x. m f (n f x)",
        r"\m n f. m (n f)",
        r"\p. p false true",
    )
]


def random_term(rng: random.Random, budget: int, depth: int = 0, leaves: float = 0.0) -> Term:
    """A random term with about ``budget`` nodes whose free indices are below ``depth``.

    Closed whenever ``depth`` is 0.  Small indices are favoured since every
    index costs its value in size.  With probability ``leaves`` a leaf is a
    closed combinator from LIBRARY instead of a variable.
    """
    if budget <= 1 or (budget <= 3 and rng.random() < 0.5):
        if depth == 0 or rng.random() < leaves:
            return rng.choice(LIBRARY) if leaves else Lam(Var(0))
        return Var(min(int(rng.expovariate(1.0)), depth - 1))
    if depth == 0 or rng.random() < 0.55:
        left = rng.randint(1, budget - 2) if budget > 2 else 1
        return App(
            random_term(rng, left, depth, leaves),
            random_term(rng, budget - 1 - left, depth, leaves),
        )
    return Lam(random_term(rng, budget - 1, depth + 1, leaves))


def random_closed_redex(rng: random.Random, budget: int) -> Term:
    """A closed application, so evaluation does at least some work."""
    left = rng.randint(2, max(2, budget - 2))
    return App(Lam(random_term(rng, left, 1)), random_term(rng, max(1, budget - left), 0))


def random_chain(rng: random.Random, length: int) -> Term:
    """A left-nested application of library combinators, e.g. ``mult #3 #2 succ #0``."""
    t = rng.choice(LIBRARY)
    for _ in range(length - 1):
        t = App(t, rng.choice(LIBRARY))
    return t


def _normalises_within(s: Term, max_time: int, max_space: int) -> bool:
    for _ in range(max_time + 1):
        if isinstance(s, Lam):
            return True
        if size_term(s) > max_space:
            return False
        s = step(s)
    return False


def build_corpus(
    count: int,
    seed: int = 0,
    max_time: int = 500,
    max_space: int = 2000,
    min_size: int = 4,
    max_size: int = 40,
) -> list[Term]:
    """``count`` distinct closed terms normalising within ``max_time`` steps.

    Terms whose intermediate size passes ``max_space`` are skipped so that a
    corpus stays cheap to run through every machine.
    """
    rng = random.Random(seed)
    seen = set()
    corpus = []
    while len(corpus) < count:
        budget = rng.randint(min_size, max_size)
        roll = rng.random()
        if roll < 0.35:
            s = random_closed_redex(rng, budget)
        elif roll < 0.5:
            s = random_chain(rng, rng.randint(3, 6))
        elif roll < 0.8:
            s = random_term(rng, budget // 2, leaves=0.6)
        else:
            s = random_term(rng, budget)
        if s in seen:
            continue
        seen.add(s)
        if not _normalises_within(s, max_time, max_space):
            continue
        corpus.append(s)
    return corpus


@dataclass
class Agreement:
    term: Term
    time: int
    space: int
    subst_steps: int
    subst_peak: int
    heap_steps: int
    heap_peak: int
    combined: Optional[CombinedReport]
    agree: bool


def check_term(s: Term, fuel: int = 10**5) -> Optional[Agreement]:
    """Run every strategy with sufficient budgets; None if the term diverges within ``fuel``."""
    ref = evaluate(s, fuel)
    if isinstance(ref, Diverged):
        return None
    nf = ref.normal_form
    sub = run_subst(s, 3 * ref.time + 1, 2 * ref.space)
    heap = run_heap(s, 4 * ref.time + 2)
    comb = run_combined(s, 4 * ref.time + 2)
    results = [
        sub.outcome is Outcome.NORMAL and decompile((LAM, *sub.result, RET)) == nf,
        heap.ok and unfold_term(heap.heap, heap.closure) == nf,
        isinstance(comb, CombinedReport) and comb.normal_form == nf,
    ]
    return Agreement(
        term=s,
        time=ref.time,
        space=ref.space,
        subst_steps=sub.steps_taken,
        subst_peak=sub.peak_state_size,
        heap_steps=heap.steps_taken,
        heap_peak=heap.peak_state_size,
        combined=comb if isinstance(comb, CombinedReport) else None,
        agree=all(results),
    )


def iter_closed_terms(max_size: int) -> Iterator[Term]:
    """Every closed term of size at most ``max_size`` (unary index sizes)."""
    for n in range(1, max_size + 1):
        yield from _terms_of_size(n, 0)


def _terms_of_size(n: int, depth: int) -> Iterator[Term]:
    # |Var i| = 1 + i, so size n admits index n - 1 only
    if 0 <= n - 1 < depth:
        yield Var(n - 1)
    if n >= 2:
        for body in _terms_of_size(n - 1, depth + 1):
            yield Lam(body)
    for left in range(1, n - 1):
        for f in _terms_of_size(left, depth):
            for a in _terms_of_size(n - 1 - left, depth):
                yield App(f, a)
