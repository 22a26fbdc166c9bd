import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rowqubo import (DomainError, MinKUnionInstance, ParseError, QuboModel, UsageError, build_qubo,
                     decode, energies, energy, export, import_coordinate_text, ising_energy,
                     solve_exact, to_ising)

from conftest import all_assignments, direct_hamiltonian


def split(vmap, inst, a):
    x = [int(a[v]) for v in vmap.set_vars]
    y = {v: int(a[i]) for v, i in vmap.element_vars.items()}
    return x, y


def test_table1_layout(table1_qubo, table1_instance):
    model, vmap = table1_qubo
    assert model.n == 13 == vmap.n
    assert vmap.set_vars == (0, 1, 2, 3, 4)
    assert dict(vmap.element_vars) == {v: 4 + v for v in range(1, 9)}
    pen = model.penalties
    assert (pen.A, pen.B, pen.C, pen.k) == (9, 9, 1, 3)
    assert model.offset == 81


def test_table1_coefficients(table1_qubo, table1_instance):
    model, vmap = table1_qubo
    q = model.coefficients
    assert q[(0, 0)] == -27
    for j, s in enumerate(table1_instance.sets):
        assert q[(j, j)] == 9 * (1 - 6) + 9 * len(s)
        for v in s:
            assert q[(j, vmap.element_vars[v])] == -9
    for a in range(5):
        for b in range(a + 1, 5):
            assert q[(a, b)] == 18
    for v, i in vmap.element_vars.items():
        assert q[(i, i)] == 1
    assert model.num_terms == 5 + 10 + 15 + 8 == 38
    assert all(i <= j and c != 0 for (i, j), c in q.items())


def test_frozen_coefficients_agree_with_oracle(table1_qubo, table1_instance):
    """Every single- and two-bit assignment pins one coefficient."""
    model, vmap = table1_qubo
    zero = np.zeros(model.n, dtype=int)

    def oracle(a):
        x, y = split(vmap, table1_instance, a)
        return direct_hamiltonian(table1_instance, 9, 9, 1, x, y)

    base = oracle(zero)
    assert base == model.offset
    for i in range(model.n):
        ei = zero.copy(); ei[i] = 1
        lin = oracle(ei) - base
        assert model.coefficients.get((i, i), 0) == lin
        for j in range(i + 1, model.n):
            eij = ei.copy(); eij[j] = 1
            ej = zero.copy(); ej[j] = 1
            assert model.coefficients.get((i, j), 0) == oracle(eij) - oracle(ej) - lin


def test_energy_examples(table1_qubo, table1_instance):
    model, vmap = table1_qubo
    sol_a = vmap.assignment([0, 1, 2], [1, 2, 3, 6, 8])
    assert energy(model, sol_a) == 5
    assert energy(model, np.zeros(13, dtype=int)) == 81
    everything = vmap.assignment(range(5), range(1, 9))
    assert energy(model, everything) == 9 * (3 - 5) ** 2 + 8 == 44


def test_energy_length_mismatch(table1_qubo):
    model, _ = table1_qubo
    with pytest.raises(DomainError):
        energy(model, [0] * 12)
    with pytest.raises(DomainError):
        energy(model, [2] + [0] * 12)


def test_k_zero_energy():
    inst = MinKUnionInstance([1, 2], [{1}, {2}], 0)
    model, vmap = build_qubo(inst)
    assert model.offset == 0
    assert energy(model, [0] * model.n) == 0


def test_decode_solution_a(table1_qubo, table1_instance):
    model, vmap = table1_qubo
    rep = decode(model, vmap, table1_instance, vmap.assignment([0, 1, 2], [1, 2, 3, 6, 8]))
    assert rep.chosen == (0, 1, 2) and rep.objective == 5
    assert rep.exactly_k and rep.y_consistent and rep.energy_matches_objective


def test_decode_all_zeros(table1_qubo, table1_instance):
    model, vmap = table1_qubo
    rep = decode(model, vmap, table1_instance, [0] * 13)
    assert not rep.exactly_k
    assert rep.objective == 0 and rep.energy == 81
    assert rep.energy_matches_objective is None


def test_decode_spurious_y(table1_qubo, table1_instance):
    model, vmap = table1_qubo
    rep = decode(model, vmap, table1_instance, vmap.assignment([1, 2, 4], range(1, 9)))
    assert rep.chosen == (1, 2, 4) and rep.objective == 5
    assert rep.exactly_k and not rep.y_consistent
    assert rep.energy == 8


@pytest.mark.parametrize("pen, message", [
    ((9, 8, 1), "A = B"),
    ((8, 8, 1), "C\\*\\|V\\|"),
    ((0, 0, 1), "positive"),
    ((9, 9, 0), "positive"),
])
def test_penalty_validation(table1_instance, pen, message):
    with pytest.raises(UsageError, match=message):
        build_qubo(table1_instance, pen)


def test_custom_penalties(table1_instance):
    model, vmap = build_qubo(table1_instance, (20, 20, 2))
    assert model.offset == 180
    assert energy(model, vmap.assignment([1, 2, 4], [2, 3, 6, 7, 8])) == 10


def test_direct_sum_random_instances():
    rng = np.random.default_rng(11)
    for _ in range(8):
        n_el = int(rng.integers(1, 9))
        sets = [set(rng.choice(np.arange(1, n_el + 1), size=int(rng.integers(0, n_el + 1)),
                               replace=False).tolist()) for _ in range(int(rng.integers(1, 9)))]
        inst = MinKUnionInstance(range(1, n_el + 1), sets, int(rng.integers(0, len(sets) + 1)))
        model, vmap = build_qubo(inst)
        pen = model.penalties
        X = rng.integers(0, 2, size=(10_000, model.n))
        got = energies(model, X)
        for a, e in zip(X[:500], got[:500]):
            x, y = split(vmap, inst, a)
            assert e == direct_hamiltonian(inst, pen.A, pen.B, pen.C, x, y)
        # vectorized oracle over the full batch
        xs = X[:, :inst.num_sets]
        ys = X[:, inst.num_sets:]
        pos = {v: i for i, v in enumerate(inst.ground_set)}
        h_a = pen.A * (inst.k - xs.sum(axis=1)) ** 2
        h_b = pen.B * sum((1 - ys[:, pos[v]]) * xs[:, j] for j, s in enumerate(inst.sets) for v in s)
        h_c = pen.C * ys.sum(axis=1)
        np.testing.assert_array_equal(got, h_a + h_b + h_c)


small_instances = st.integers(1, 8).flatmap(lambda n_el: st.lists(
    st.sets(st.integers(1, n_el)), min_size=1, max_size=8
).flatmap(lambda sets: st.tuples(st.just(n_el), st.just(sets), st.integers(0, len(sets)))))


@settings(max_examples=40, deadline=None)
@given(small_instances)
def test_exactness_exhaustive(data):
    n_el, sets, k = data
    inst = MinKUnionInstance(range(1, n_el + 1), sets, k)
    model, vmap = build_qubo(inst)
    assert model.n == inst.num_sets + inst.num_elements
    X = all_assignments(model.n)
    es = energies(model, X)
    opt = solve_exact(inst).objective
    assert es.min() == model.penalties.C * opt
    for a in X[es == es.min()]:
        rep = decode(model, vmap, inst, a)
        assert rep.exactly_k and rep.y_consistent and rep.energy_matches_objective
        assert rep.objective == opt


@settings(max_examples=40, deadline=None)
@given(small_instances)
def test_penalty_sufficiency(data):
    n_el, sets, k = data
    inst = MinKUnionInstance(range(1, n_el + 1), sets, k)
    model, vmap = build_qubo(inst)
    A, B, C = model.penalties.A, model.penalties.B, model.penalties.C
    X = all_assignments(model.n)
    es = energies(model, X)
    wrong_count = X[:, :inst.num_sets].sum(axis=1) != k
    assert np.all(es[wrong_count] >= A)
    assert A > C * inst.num_elements
    # dropping a covered y-bit from an optimal assignment costs at least B - C
    best = solve_exact(inst)
    a = vmap.assignment(best.indices, best.union)
    for v in best.union:
        broken = a.copy()
        broken[vmap.element_vars[v]] = 0
        assert energy(model, broken) >= energy(model, a) + B - C
        assert energy(model, broken) >= B


def test_variable_count_is_linear():
    for n_el, n_sets in [(1, 1), (8, 5), (40, 10)]:
        inst = MinKUnionInstance(range(n_el), [set(range(n_el))] * n_sets, 1)
        assert build_qubo(inst)[0].n == n_el + n_sets


def test_to_ising_single_variable():
    ising = to_ising(QuboModel(1, {(0, 0): 2}))
    assert ising.h == (1.0,) and ising.J == {} and ising.offset == 1.0


def test_to_ising_zero():
    ising = to_ising(QuboModel(3, {}))
    assert ising.h == (0.0, 0.0, 0.0) and ising.J == {} and ising.offset == 0.0


def test_to_ising_table1_spectrum(table1_qubo):
    model, _ = table1_qubo
    ising = to_ising(model)
    X = all_assignments(model.n)
    qubo_e = energies(model, X)
    S = 2 * X - 1
    J = np.zeros((model.n, model.n))
    for (i, j), w in ising.J.items():
        J[i, j] = w
    ising_e = ising.offset + S @ np.array(ising.h) + np.einsum("mi,ij,mj->m", S, J, S)
    np.testing.assert_array_equal(ising_e, qubo_e)
    assert ising_e.min() == 5
    for a in X[:64]:
        assert ising_energy(ising, 2 * a - 1) == energy(model, a)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 10).flatmap(lambda n: st.tuples(
    st.just(n),
    st.dictionaries(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)),
                    st.integers(-50, 50), max_size=30),
    st.integers(-100, 100))))
def test_to_ising_spectrum_random(data):
    n, terms, offset = data
    model = QuboModel(n, terms, offset)
    ising = to_ising(model)
    for a in all_assignments(n):
        assert ising_energy(ising, 2 * a - 1) == energy(model, a)


def test_export_single_term():
    model = QuboModel(13, {(0, 0): -27}, 81)
    assert export(model) == "n 13 1 81\n0 0 -27\n"


def test_export_empty():
    assert export(QuboModel(0, {})) == "n 0 0 0\n"


def test_export_table1_roundtrip(table1_qubo):
    model, vmap = table1_qubo
    text = export(model, vmap)
    lines = text.splitlines()
    assert lines[0] == "n 13 38 81"
    assert len(lines) == 39
    pairs = [tuple(map(int, line.split()[:2])) for line in lines[1:]]
    assert pairs == sorted(pairs)
    again = import_coordinate_text(text)
    assert again.coefficients == model.coefficients and again.offset == model.offset
    assert export(again) == text


def test_import_rejects_garbage():
    with pytest.raises(ParseError):
        import_coordinate_text("n 2 1 0\n0 x 3\n")
    with pytest.raises(ParseError):
        import_coordinate_text("n 2 2 0\n0 0 3\n")
    with pytest.raises(ParseError):
        import_coordinate_text("")


def test_model_merges_and_drops_zeros():
    model = QuboModel(2, {(1, 0): 3, (0, 1): -3, (1, 1): 2})
    assert model.coefficients == {(1, 1): 2}
