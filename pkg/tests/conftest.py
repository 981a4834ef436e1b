import sys

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from wcbv.corpus import _normalises_within
from wcbv.terms import App, Lam, Var

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20_000))

settings.register_profile(
    "default",
    deadline=None,
    max_examples=200,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("default")


@st.composite
def terms(draw, depth=0, max_nodes=25):
    """Terms whose free indices are all below ``depth``; closed when depth is 0."""

    def go(depth, fuel):
        kinds = []
        if depth > 0:
            kinds.append("var")
        if fuel >= 2:
            kinds.append("lam")
        if fuel >= 3:
            kinds.append("app")
        if not kinds:
            return Lam(Var(0))
        kind = draw(st.sampled_from(kinds))
        if kind == "var":
            return Var(draw(st.integers(0, depth - 1)))
        if kind == "lam":
            return Lam(go(depth + 1, fuel - 1))
        left = draw(st.integers(1, fuel - 2))
        return App(go(depth, left), go(depth, fuel - 1 - left))

    return go(depth, draw(st.integers(1, max_nodes)))


def open_terms(max_depth=3, max_nodes=25):
    return st.integers(0, max_depth).flatmap(lambda d: terms(depth=d, max_nodes=max_nodes))


def abstractions(depth=0, max_nodes=15):
    return terms(depth=depth + 1, max_nodes=max_nodes).map(Lam)


def normalising_terms(max_nodes=25, max_time=300, max_space=3000):
    return terms(max_nodes=max_nodes).filter(lambda s: _normalises_within(s, max_time, max_space))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
