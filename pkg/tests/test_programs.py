import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import abstractions, open_terms, terms
from wcbv.programs import (
    APP,
    LAM,
    RET,
    ProgramFormatError,
    compile_term,
    decompile,
    dump_program,
    jump_target,
    load_program,
    represents,
    size_program,
    split_body,
    subst_program,
    subst_size,
)
from wcbv.terms import App, Lam, Var, size_term, subst_term

I = Lam(Var(0))

commands = st.one_of(st.sampled_from([LAM, RET, APP]), st.integers(0, 4))
programs = st.lists(commands, max_size=12).map(tuple)


def test_compile_examples():
    assert compile_term(Var(2)) == (2,)
    assert compile_term(I) == (LAM, 0, RET)
    assert compile_term(App(I, I)) == (LAM, 0, RET, LAM, 0, RET, APP)


def test_decompile_examples():
    assert decompile((LAM, 0, RET)) == I
    assert decompile((3,)) == Var(3)
    assert decompile((APP,)) is None
    assert decompile(()) is None
    assert decompile((0, 0)) is None
    assert decompile((RET,)) is None


def test_size_examples():
    assert size_program((0,)) == 1
    assert size_program((LAM, 0, RET)) == 3 == 2 * size_term(I) - 1
    assert size_program(()) == 0
    assert size_program((5,)) == 6


def test_jump_target_examples():
    assert split_body((0, RET)) == ((0,), ())
    assert split_body((LAM, 0, RET, RET, APP)) == ((LAM, 0, RET), (APP,))
    assert split_body((0,)) is None
    assert jump_target((LAM, LAM, 0, RET, RET), 1) == 4


def test_subst_program_examples():
    Q = compile_term(I)
    assert subst_program((0,), 0, Q) == Q
    assert subst_program((LAM, 1, RET), 0, Q) == (LAM, *Q, RET)
    assert compile_term(subst_term(Lam(Var(1)), 0, I)) == (LAM, *Q, RET)
    assert subst_program((), 5, Q) == ()
    # a Ret at level 0 cuts the rest
    assert subst_program((0, RET, 0, APP), 0, Q) == (*Q, RET)


def test_represents_examples():
    assert represents((0,), I)
    assert not represents((0,), Var(0))
    assert represents((LAM, 0, RET), Lam(Lam(Var(0))))


def test_dump_format():
    assert dump_program((LAM, 0, RET, LAM, 12, RET, APP)) == "L V0 R L V12 R A"
    assert load_program("L V0 R") == (LAM, 0, RET)
    assert load_program("") == ()
    for bad in ("X", "V", "Vx", "v0", "V-1"):
        with pytest.raises(ProgramFormatError):
            load_program(bad)


@given(programs)
def test_dump_round_trip(P):
    assert load_program(dump_program(P)) == P


@given(open_terms())
def test_decompile_inverts_compile(s):
    assert decompile(compile_term(s)) == s


@given(open_terms(), open_terms())
def test_compile_is_injective(s, t):
    assert (compile_term(s) == compile_term(t)) == (s == t)


@given(open_terms(max_nodes=60))
def test_size_sandwich(s):
    n = size_term(s)
    assert 1 <= n <= size_program(compile_term(s)) <= 2 * n - 1


@given(open_terms(), programs)
def test_jump_target_after_compiled_body(s, P):
    code = compile_term(s)
    assert split_body(code + (RET,) + P) == (code, P)


@given(programs)
def test_split_body_returns_sublists(P):
    split = split_body(P)
    if split is None:
        return
    body, rest = split
    j = len(body)
    assert P[:j] == body and P[j] == RET and P[j + 1:] == rest


@given(open_terms(), abstractions(depth=2))
def test_subst_commutes_with_compile(s, t):
    for k in range(3):
        assert subst_program(compile_term(s), k, compile_term(t)) == compile_term(subst_term(s, k, t))


@given(programs, st.integers(0, 3), programs)
def test_subst_size_predicts_size(P, k, Q):
    assert subst_size(P, k, size_program(Q)) == size_program(subst_program(P, k, Q))


@given(terms())
def test_represents_compiled_bodies(v):
    if isinstance(v, Lam):
        assert represents(compile_term(v.body), v)


def all_programs(max_sigma):
    """Every command sequence whose command sizes sum to at most ``max_sigma``."""
    out = [()]
    frontier = [((), 0)]
    while frontier:
        nxt = []
        for P, size in frontier:
            for c in itertools.chain((LAM, RET, APP), range(max_sigma)):
                cs = 1 + c if c >= 0 else 1
                if size + cs <= max_sigma:
                    nxt.append((P + (c,), size + cs))
        out.extend(P for P, _ in nxt)
        frontier = nxt
    return out


def test_program_enumeration_counts():
    # 1 + Σ convention: counts of programs with 1 + Σ ≤ n
    counts = [len(all_programs(n - 1)) for n in range(1, 7)]
    # c(s) = 3 c(s-1) + sum_j c(s-j): three unit commands, Var j-1 costs j
    exact = [1]
    for sigma in range(1, 6):
        exact.append(3 * exact[-1] + sum(exact))
    assert counts == list(itertools.accumulate(exact)) == [1, 5, 22, 95, 409, 1760]
    assert all(c <= 5 ** (n - 1) for n, c in enumerate(counts, start=1))
