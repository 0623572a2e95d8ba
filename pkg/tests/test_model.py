import itertools

import pytest
from hypothesis import given, settings, strategies as st

from multispread.model import (
    CompiledModel,
    DiagonalTransitionError,
    MalformedStateError,
    ModelBuilder,
    ModelError,
)

from conftest import GOLDEN, epidemic_builder, epidemic_model


def brute_force_transitions(sizes, policy):
    """Every ordered pair of grid points that differ in one adjacent coordinate."""
    points = list(itertools.product(*(range(k) for k in sizes)))
    found = set()
    for a in points:
        for b in points:
            diff = [i for i in range(len(sizes)) if a[i] != b[i]]
            if len(diff) != 1:
                continue
            i = diff[0]
            gap = abs(a[i] - b[i])
            if gap == 1 or (policy == "cyclic" and sizes[i] >= 3 and gap == sizes[i] - 1):
                found.add((a, b))
    return found


def compiled_as_indices(model):
    out = set()
    for k, proc in enumerate(model.processes):
        for src, dst in model.allowed_transitions(proc.name):
            idx = lambda s: tuple(p.states.index(t) for p, t in zip(model.processes, s))
            out.add((idx(src), idx(dst)))
    return out


def test_add_process_registration_order():
    b = epidemic_builder()
    assert [p.name for p in b.processes] == ["ill", "aware", "vacc"]


def test_add_process_errors():
    with pytest.raises(ModelError):
        ModelBuilder().add_process("ill", ["s"])
    with pytest.raises(ModelError):
        ModelBuilder().add_process("aware", ["n", "a"]).add_process("aware", ["n", "a"])
    with pytest.raises(ModelError):
        ModelBuilder().add_process("x", ["a", "a"])
    for bad in (["a.b", "c"], ["a>b", "c"], ["a", ""]):
        with pytest.raises(ModelError):
            ModelBuilder().add_process("x", bad)


def test_compile_needs_a_process():
    with pytest.raises(ModelError):
        ModelBuilder().compile()


def test_epidemic_grid_has_twelve_points():
    assert epidemic_builder().compile().n_global_states() == 12
    assert len(epidemic_builder().compile().global_states()) == 12


@pytest.mark.parametrize(
    "policy, per_process, total",
    [("linear", {"ill": 16, "aware": 12, "vacc": 12}, 40), ("cyclic", {"ill": 24, "aware": 12, "vacc": 12}, 48)],
)
def test_epidemic_transition_counts(policy, per_process, total):
    model = epidemic_builder().compile(adjacency_policy=policy)
    assert {p: len(model.allowed_transitions(p)) for p in per_process} == per_process
    assert len(model.allowed_transitions()) == total
    assert compiled_as_indices(model) == brute_force_transitions([3, 2, 2], policy)


def formula_count(sizes, policy):
    total = 0
    for i, k in enumerate(sizes):
        a = k - 1 if policy == "linear" else (k if k >= 3 else 1)
        others = 1
        for j, m in enumerate(sizes):
            if j != i:
                others *= m
        total += a * 2 * others
    return total


def all_size_combos(limit=64):
    """Every tuple of process sizes (>=2 each) with product <= limit."""
    out = []

    def grow(prefix, prod):
        if prefix:
            out.append(tuple(prefix))
        for k in range(2, limit + 1):
            if prod * k > limit:
                break
            grow(prefix + [k], prod * k)

    grow([], 1)
    return out


@pytest.mark.parametrize("policy", ["linear", "cyclic"])
def test_count_property_all_small_grids(policy):
    combos = all_size_combos()
    assert len(combos) > 100
    for sizes in combos:
        b = ModelBuilder()
        for i, k in enumerate(sizes):
            b.add_process(f"p{i}", [f"t{j}" for j in range(k)])
        model = b.compile(adjacency_policy=policy)
        got = compiled_as_indices(model)
        assert got == brute_force_transitions(list(sizes), policy), sizes
        assert len(got) == formula_count(sizes, policy), sizes


def test_sirs_matrix_positions():
    model = ModelBuilder().add_process("ill", ["s", "i", "r"]).compile(None, "cyclic")
    model.set_transition("s", "i", 0.3)   # infection
    model.set_transition("i", "r", 0.1)   # recovery
    model.set_transition("r", "s", 0.02)  # loss of immunity
    expected = {("s", "i"): 0.3, ("i", "r"): 0.1, ("r", "s"): 0.02}
    for a in "sir":
        for b in "sir":
            assert model.weight(a, b) == expected.get((a, b), 0.0)
    assert set(model.allowed_transitions()) == {
        (("s",), ("i",)), (("i",), ("s",)), (("i",), ("r",)),
        (("r",), ("i",)), (("r",), ("s",)), (("s",), ("r",)),
    }


def test_linear_sir_has_no_wrap():
    model = ModelBuilder().add_process("ill", ["s", "i", "r"]).compile(0.5, "linear")
    with pytest.raises(ModelError):
        model.set_transition("r", "s", 0.1)
    assert model.weight("r", "s") == 0.0


def test_set_transition_accepts_axis_move():
    model = epidemic_builder().compile()
    model.set_transition("s.n.u", "i.n.u", 0.4)
    assert model.weight("s.n.u", "i.n.u") == 0.4


def test_two_process_diagonal_rejected():
    model = ModelBuilder().add_process("vacc", ["u", "v"]).add_process("ill", ["s", "i", "r"]).compile()
    with pytest.raises(DiagonalTransitionError) as exc:
        model.set_transition("u.i", "v.r", 0.3)
    assert "diagonal" in str(exc.value)


def test_set_transition_errors():
    model = epidemic_builder().compile(adjacency_policy="linear")
    with pytest.raises(ModelError):
        model.set_transition("s.n.u", "i.n.u", 1.5)
    with pytest.raises(ModelError):
        model.set_transition("s.n.u", "i.n.u", -0.1)
    with pytest.raises(ModelError):
        model.set_transition("s.n.u", "r.n.u", 0.1)  # not adjacent
    with pytest.raises(MalformedStateError):
        model.set_transition("s.n.x", "i.n.x", 0.1)
    with pytest.raises(ModelError):
        model.set_transition("s.n.u", "s.n.u", 0.1)


def test_weight_defaults_and_identity():
    model = epidemic_model()
    assert model.weight("s.n.u", "i.n.u") == 0.4
    assert model.weight("s.n.u", "s.n.u") == 0.0
    assert model.weight("s.n.u", "s.n.v") == 0.005
    assert model.weight("s.n.u", "i.a.u") == 0.0  # diagonal
    assert model.weight("s.n.u", "r.n.u") == 0.0  # non-adjacent


def test_weight_rejects_malformed_text():
    model = epidemic_model()
    for bad in ("s.n", "s.n.u.x", "snu", "q.n.u"):
        with pytest.raises(MalformedStateError):
            model.weight(bad, "s.n.u")


def test_background_applies_in_both_directions():
    model = epidemic_builder().compile(0.005, "linear")
    assert all(w == 0.005 for t in model.tables for w in t.values())
    none = epidemic_builder().compile(None, "linear")
    assert all(w == 0.0 for t in none.tables for w in t.values())


def test_frozen_model_rejects_changes():
    model = epidemic_model().freeze()
    with pytest.raises(ModelError):
        model.set_transition("s.n.u", "i.n.u", 0.2)


def test_describe_golden():
    assert epidemic_model().describe() == (GOLDEN / "epidemic_model_report.txt").read_text()


def test_describe_empty_transition_section():
    text = epidemic_builder().compile(None).describe()
    assert text.endswith("transitions:\n")
    assert "processes: 3" in text


def test_describe_is_sorted_and_nonzero_only():
    model = epidemic_model(background=None)
    lines = model.describe().split("transitions:\n")[1].splitlines()
    assert len(lines) == 11
    keys = [l.split()[0] for l in lines]
    assert keys == sorted(keys)


weights = st.floats(0, 1, allow_nan=False)


@settings(max_examples=100, deadline=None)
@given(
    sizes=st.lists(st.integers(2, 4), min_size=1, max_size=3),
    policy=st.sampled_from(["linear", "cyclic"]),
    data=st.data(),
)
def test_set_then_weight_round_trip(sizes, policy, data):
    b = ModelBuilder()
    for i, k in enumerate(sizes):
        b.add_process(f"p{i}", [f"t{j}" for j in range(k)])
    model = b.compile(None, policy)
    allowed = model.allowed_transitions()
    src, dst = data.draw(st.sampled_from(allowed))
    w1, w2 = data.draw(weights), data.draw(weights)
    s, d = CompiledModel.format_state(src), CompiledModel.format_state(dst)
    model.set_transition(s, d, w1)
    model.set_transition(s, d, w2)
    assert model.weight(s, d) == w2
    for k, table in enumerate(model.tables):
        for (a, b_), w in table.items():
            diff = [i for i in range(len(a)) if a[i] != b_[i]]
            assert diff == [k]
            if (a, b_) != (src, dst):
                assert w == 0.0
