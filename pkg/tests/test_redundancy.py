import collections
import itertools
import math
import random

import pytest
from hypothesis import given, strategies as st

from rrvars.errors import ConfigError, IntegrityFailure, LookupMiss, TypeMismatch
from rrvars.redundancy import (
    FaultScenario, RedundanceState, RedundancyManager, controller_step, corrupt_value, inject_faults, vote,
)
from rrvars.registry import CellStore, Registry
from rrvars.runtime import Runtime
from rrvars.values import Kind, TypeCode


def counter_vote(values):
    """Oracle: exact-equality majority by counting."""
    (value, count), = collections.Counter(values).most_common(1)
    n = len(values)
    return (value if 2 * count > n else None), count, n - count


def check_against_oracle(values):
    r = vote(values)
    value, count, dissent = counter_vote(values)
    assert (r.value, r.majority_count, r.dissent, r.tie) == (value, count, dissent, value is None)


def test_vote_unanimous():
    r = vote([7, 7, 7])
    assert (r.value, r.majority_count, r.dissent, r.tie) == (7, 3, 0, False)


def test_vote_one_dissent():
    r = vote([7, 7, 9])
    assert (r.value, r.majority_count, r.dissent, r.tie) == (7, 2, 1, False)


def test_vote_three_way_tie():
    r = vote([1, 2, 3])
    assert r.tie and r.value is None
    assert r.majority_count == 1 and r.dissent == 2


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_vote_exhaustive_small_alphabet(n):
    for values in itertools.product(range(3), repeat=n):
        check_against_oracle(list(values))


def test_vote_strings():
    assert vote(["ab", "ab", "zz"]).value == "ab"


def test_vote_float_epsilon():
    r = vote([1.0, 1.0 + 1e-12, 5.0], epsilon=1e-9)
    assert r.value == 1.0 and r.majority_count == 2
    assert vote([1.0, 1.0 + 1e-6, 5.0], epsilon=1e-9).tie


@given(st.integers(1, 4).flatmap(lambda f: st.tuples(
    st.just(2 * f + 1), st.integers(-5, 5), st.lists(st.integers(-5, 5), min_size=f, max_size=f))))
def test_majority_soundness(case):
    r, v, others = case
    values = [v] * (r - len(others)) + others
    random.Random(len(others)).shuffle(values)
    assert vote(values).value == v


def test_vote_result_invariants():
    for values in itertools.product("abc", repeat=5):
        r = vote(list(values))
        assert r.majority_count + r.dissent == 5
        assert r.tie == (r.value is None) == (2 * r.majority_count <= 5)


# manager


def make_manager(degree=3, adaptive=False, names=("x",), type_code=TypeCode.INT):
    reg = Registry()
    reg.aopen("reflex")
    reg.aopen("rtype")
    store = CellStore()
    mgr = RedundancyManager(reg, store, degree=degree, adaptive=adaptive)
    for n in names:
        reg.reflex.awrite(n, store.allocate(n, type_code, {Kind.REDUNDANT}, mgr.target_degree))
        reg.rtype.awrite(n, type_code)
    return mgr


def slots(mgr, name="x"):
    return mgr.registry.descriptor(name).slots


def test_assign_writes_every_replica():
    mgr = make_manager()
    mgr.redundant_assign("x", 5)
    assert [mgr.store.cell_read(s) for s in slots(mgr)] == [5, 5, 5]


def test_assign_rescales_to_ideal_degree():
    mgr = make_manager(adaptive=True)
    mgr.state = RedundanceState(ideal_degree=5)
    mgr.redundant_assign("x", 8)
    assert len(slots(mgr)) == 5
    assert all(mgr.store.cell_read(s) == 8 for s in slots(mgr))


def test_assign_to_non_redundant_is_lookup_miss():
    mgr = make_manager()
    mgr.registry.reflex.awrite("cpu", mgr.store.allocate("cpu", TypeCode.INT, {Kind.REFLECTIVE}))
    with pytest.raises(LookupMiss):
        mgr.redundant_assign("cpu", 1)
    with pytest.raises(LookupMiss):
        mgr.redundant_assign("nosuch", 1)


def test_assign_type_mismatch():
    with pytest.raises(TypeMismatch):
        make_manager().redundant_assign("x", "five")


def test_read_clean():
    mgr = make_manager()
    mgr.redundant_assign("x", 5)
    assert mgr.redundant_read("x") == 5
    assert mgr.state.window == (0,)


def test_read_repairs_single_fault():
    mgr = make_manager()
    mgr.redundant_assign("x", 5)
    mgr.store.values[slots(mgr)[1]] = 9
    assert mgr.redundant_read("x") == 5
    assert mgr.store.cell_read(slots(mgr)[1]) == 5
    assert mgr.state.window == (1,)


def test_read_tie_is_integrity_failure():
    mgr = make_manager()
    for s, v in zip(slots(mgr), [1, 2, 3]):
        mgr.store.values[s] = v
    with pytest.raises(IntegrityFailure):
        mgr.redundant_read("x")
    # the controller still saw the disturbance
    assert mgr.state.window == (2,)


def test_repair_idempotence():
    mgr = make_manager(degree=5)
    mgr.redundant_assign("x", 11)
    for s in slots(mgr)[:2]:
        mgr.store.values[s] = -1
    mgr.redundant_read("x")
    mgr.redundant_read("x")
    assert mgr.state.window == (2, 0)


def test_float_and_string_variables():
    mgr = make_manager(names=("s",), type_code=TypeCode.STRING)
    mgr.redundant_assign("s", "hello")
    mgr.store.values[slots(mgr, "s")[0]] = "jello"
    assert mgr.redundant_read("s") == "hello"
    fm = make_manager(names=("f",), type_code=TypeCode.FLOAT)
    fm.redundant_assign("f", 2)
    assert fm.redundant_read("f") == 2.0


# controller


def recurrence(dissents, alpha=0.25, window=16):
    """Oracle: the smoothing recurrence written out directly."""
    hist, f, out = [], 0.0, []
    for d in dissents:
        hist.append(d)
        f = (1 - alpha) * f + alpha * max(hist[-window:])
        out.append(min(9, max(3, 2 * math.ceil(f) + 1)))
    return out


def run_controller(dissents):
    state, out = RedundanceState(), []
    for d in dissents:
        state = controller_step(state, d)
        out.append(state.ideal_degree)
    return out


def test_controller_steady_zero():
    assert run_controller([0] * 50) == [3] * 50


def test_controller_constant_two_reaches_five():
    degrees = run_controller([2] * 16)
    assert degrees == recurrence([2] * 16)
    # frozen from the recurrence: first 5 at step 3
    assert degrees.index(5) + 1 == 3


def test_controller_clamps_at_nine():
    degrees = run_controller([5] * 20)
    assert degrees == recurrence([5] * 20)
    assert degrees[-1] == 9 and max(degrees) == 9


def test_controller_relaxes_after_faults():
    stream = [2] * 40 + [0] * 64
    degrees = run_controller(stream)
    assert degrees == recurrence(stream)
    # frozen from the recurrence: back to 3 on the 18th clean step
    assert degrees[40:].index(3) + 1 == 18


def test_controller_matches_recurrence_on_random_streams():
    rng = random.Random(0)
    for _ in range(50):
        stream = [rng.choice([0, 0, 0, 1, 2, 3, 4]) for _ in range(80)]
        assert run_controller(stream) == recurrence(stream)


def test_controller_window_length():
    state = RedundanceState()
    for d in range(40):
        state = controller_step(state, d % 3)
    assert len(state.window) == 16


def test_controller_monotone_in_window_elements():
    rng = random.Random(1)
    for _ in range(2000):
        window = tuple(rng.randint(0, 5) for _ in range(15))
        f_hat = rng.uniform(0, 5)
        d = rng.randint(0, 5)
        base = controller_step(RedundanceState(window, f_hat), d).ideal_degree
        i = rng.randrange(16)
        bumped = list(window) + [d]
        bumped[i] = min(5, bumped[i] + rng.randint(1, 5))
        higher = controller_step(RedundanceState(tuple(bumped[:15]), f_hat), bumped[15]).ideal_degree
        assert higher >= base


def test_controller_rejects_negative():
    with pytest.raises(ValueError):
        controller_step(RedundanceState(), -1)


# fault injection


def filled_store():
    store = CellStore(64, 8)
    for i in range(6):
        d = store.allocate(f"v{i}", TypeCode.INT, {Kind.REDUNDANT}, 3)
        for s in d.slots:
            store.cell_write(s, i * 10)
    return store


def test_bernoulli_zero_never_fires():
    store = filled_store()
    for tick in range(100):
        assert inject_faults(store, FaultScenario.bernoulli(0.0, seed=4), tick) == []


def test_scripted_fault_lands():
    store = filled_store()
    cell = store.allocated()[12 % len(store.allocated())]
    scenario = FaultScenario.scripted([(5, cell, 99)])
    assert inject_faults(store, scenario, 4) == []
    old = store.cell_read(cell)
    assert inject_faults(store, scenario, 5) == [(cell, old, 99)]
    assert store.cell_read(cell) == 99


def test_same_seed_same_faults():
    scenario = FaultScenario.bernoulli(0.2, seed=42)
    logs = []
    for _ in range(2):
        store = filled_store()
        logs.append([inject_faults(store, scenario, t) for t in range(30)])
    assert logs[0] == logs[1]
    assert any(logs[0])
    store = filled_store()
    other = [inject_faults(store, FaultScenario.bernoulli(0.2, seed=43), t) for t in range(30)]
    assert other != logs[0]


def test_burst_corrupts_range_at_its_tick():
    store = filled_store()
    scenario = FaultScenario.burst(start=0, length=8, tick=3)
    assert inject_faults(store, scenario, 2) == []
    log = inject_faults(store, scenario, 3)
    assert [c for c, _, _ in log] == [c for c in range(8) if store.types[c] is not None]


def test_out_of_range_scripted_cell_is_noted():
    store = filled_store()
    notes = []
    assert inject_faults(store, FaultScenario.scripted([(1, 10_000, 5)]), 1, notes) == []
    assert notes and "10000" in notes[0]


@given(st.integers() | st.floats(allow_nan=False, allow_infinity=False) | st.text(max_size=5))
def test_corruption_always_changes_value(value):
    new = corrupt_value(value)
    assert new != value and type(new) is type(value)


def test_corruption_rules():
    assert corrupt_value(5) == ~5
    assert corrupt_value(2.0) == -1.0
    assert corrupt_value("abc")[1:] == "bc"


def test_scenario_file_formats():
    s = FaultScenario.parse("seed=7\nmode=bernoulli p=0.01\n")
    assert (s.seed, s.mode, s.p) == (7, "bernoulli", 0.01)
    s = FaultScenario.parse("seed=1\nmode=burst start=512 len=64 tick=10\n")
    assert (s.mode, s.start, s.length, s.tick) == ("burst", 512, 64, 10)
    s = FaultScenario.parse("# scripted\nseed=3\nat 5 cell 12 value 99\nat 6 cell 13 value -2\n")
    assert s.mode == "scripted" and s.script == ((5, 12, 99), (6, 13, -2))
    with pytest.raises(ConfigError):
        FaultScenario.parse("mode=gamma")
    with pytest.raises(ConfigError):
        FaultScenario.parse("at five cell 1 value 2")


def test_redundance_variable_reads_are_voted():
    rt = Runtime()
    rt.aopen("reflex")
    rt.aopen("rtype")
    d = rt.register_variable("redundance", TypeCode.INT, {Kind.REFLECTIVE, Kind.REDUNDANT})
    rt.register_type("redundance", TypeCode.INT)
    assert d.degree == 3
    rt.store.values[d.slots[0]] = 77
    assert rt.read("redundance") == 3
    assert rt.last_vote["redundance"].dissent == 1
    assert any(r[1] == "VOTE" and r[2] == "redundance" for r in rt.trace.records)
