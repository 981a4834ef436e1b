import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import abstractions, normalising_terms, open_terms, terms
from wcbv.terms import (
    IDENTITY,
    MAX_INDEX,
    OMEGA,
    App,
    Diverged,
    EvalReport,
    Family,
    Lam,
    NotClosed,
    Var,
    bounded,
    church_bool,
    church_nat,
    closed,
    eval_bigstep,
    evaluate,
    gen_family,
    size_term,
    step,
    subst_term,
)

I = Lam(Var(0))


def naive_subst(s, k, u):
    match s:
        case Var(n):
            return u if n == k else s
        case App(f, a):
            return App(naive_subst(f, k, u), naive_subst(a, k, u))
        case Lam(b):
            return Lam(naive_subst(b, k + 1, u))


def naive_free(s, depth=0):
    match s:
        case Var(n):
            return {n - depth} if n >= depth else set()
        case App(f, a):
            return naive_free(f, depth) | naive_free(a, depth)
        case Lam(b):
            return naive_free(b, depth + 1)


@pytest.mark.parametrize(
    "s, expected",
    [(Var(0), 1), (I, 2), (App(I, I), 5), (Var(4), 5), (church_nat(2), 9)],
)
def test_size(s, expected):
    assert size_term(s) == expected


@pytest.mark.parametrize(
    "s, k, u, expected",
    [
        (Var(0), 0, I, I),
        (I, 0, Var(7), I),
        (App(Var(0), Var(1)), 1, I, App(Var(0), I)),
        # capturing: u is inserted unshifted under the binder
        (Lam(Var(1)), 0, Var(0), Lam(Var(0))),
    ],
)
def test_subst_examples(s, k, u, expected):
    assert subst_term(s, k, u) == expected


@given(open_terms(), st.integers(0, 4), open_terms(max_nodes=8))
def test_subst_matches_naive(s, k, u):
    assert subst_term(s, k, u) == naive_subst(s, k, u)


@pytest.mark.parametrize(
    "s, k, expected",
    [(Var(0), 0, False), (I, 0, True), (App(Var(1), Lam(Var(1))), 2, True), (App(Var(1), I), 1, False)],
)
def test_bounded_examples(s, k, expected):
    assert bounded(s, k) is expected


@given(open_terms(), st.integers(0, 5))
def test_bounded_matches_free_indices(s, k):
    assert bounded(s, k) == all(n < k for n in naive_free(s))


def test_step_examples():
    assert step(App(I, I)) == I
    assert step(I) is None
    assert step(App(App(I, I), I)) == App(I, I)
    # argument is reduced once the function is a value
    assert step(App(I, App(I, I))) == App(I, I)
    assert step(OMEGA) == OMEGA


@given(terms())
def test_step_preserves_closedness(s):
    t = step(s)
    if t is not None:
        assert closed(t)


@given(terms())
def test_step_is_deterministic(s):
    assert step(s) == step(s)


@given(terms())
def test_only_abstractions_are_stuck(s):
    assert (step(s) is None) == isinstance(s, Lam)


def test_evaluate_examples():
    r = evaluate(App(I, I), 10)
    assert (r.normal_form, r.time, r.space) == (I, 1, 5)
    r = evaluate(I, 0)
    assert (r.normal_form, r.time, r.space) == (I, 0, 2)
    d = evaluate(OMEGA, 1000)
    assert isinstance(d, Diverged)
    assert d.steps == 1000 and d.last == OMEGA


def test_evaluate_fuel_is_exact():
    assert isinstance(evaluate(App(I, I), 1), EvalReport)
    assert isinstance(evaluate(App(I, I), 0), Diverged)


def test_evaluate_rejects_open_terms():
    with pytest.raises(NotClosed):
        evaluate(Var(0), 10)
    with pytest.raises(NotClosed):
        eval_bigstep(App(I, Var(0)))


def test_index_limit():
    with pytest.raises(ValueError):
        Var(MAX_INDEX + 1)
    with pytest.raises(ValueError):
        Var(-1)


@given(normalising_terms())
def test_trace_has_no_repeats_and_space_covers_it(s):
    r = evaluate(s, 300, trace=True)
    assert len(r.trace) == r.time + 1
    assert len(set(r.trace)) == len(r.trace)
    assert r.space == max(map(size_term, r.trace))
    assert r.space >= max(size_term(s), size_term(r.normal_form))


@given(normalising_terms())
def test_bigstep_agrees_with_small_step(s):
    r = evaluate(s, 300)
    assert eval_bigstep(s) == (r.time, r.space, r.normal_form)


def test_bigstep_examples():
    assert eval_bigstep(I) == (0, 2, I)
    assert eval_bigstep(App(I, I)) == (1, 5, I)
    # the input itself has size 1 + 2 + 5 = 8
    assert eval_bigstep(App(I, App(I, I))) == (2, 8, I)


def test_church_encodings():
    assert church_bool(True) == Lam(Lam(Var(1)))
    assert church_bool(False) == Lam(Lam(Var(0)))
    assert church_nat(0) == Lam(Lam(Var(0)))
    assert church_nat(2) == Lam(Lam(App(Var(1), App(Var(1), Var(0)))))
    assert IDENTITY == I


# frozen from the reference evaluator
SIZE_EXPLOSION = {1: (6, 32), 2: (7, 35), 3: (8, 50), 4: (9, 98), 8: (13, 1538), 12: (17, 24578)}


@pytest.mark.parametrize("n", sorted(SIZE_EXPLOSION))
def test_size_explosion_measures(n):
    s = gen_family(Family.SIZE_EXPLOSION, n)
    r = evaluate(s, 10**4)
    assert (r.time, r.space) == SIZE_EXPLOSION[n]
    assert size_term(s) == 29 + 3 * n
    assert r.normal_form == church_bool(True)
    if n >= 3:
        assert r.space == 6 * 2**n + 2


@pytest.mark.parametrize("n", range(1, 21))
def test_pointer_explosion_time(n):
    r = evaluate(gen_family(Family.POINTER_EXPLOSION, n), 10**4)
    assert r.time == 3 * n
    assert r.normal_form == Lam(Lam(Lam(Var(1))))


def test_gen_family_rejects_zero():
    with pytest.raises(ValueError):
        gen_family(Family.SIZE_EXPLOSION, 0)


@given(abstractions())
def test_values_are_normal(v):
    r = evaluate(v, 0)
    assert r.normal_form == v and r.time == 0
