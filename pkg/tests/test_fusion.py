# -*- coding: utf-8 -*-
import math

import numpy as np
import pytest

from quditfuse.analysis import entropy, reduced_density
from quditfuse.exceptions import DimensionError, NumericError, ZeroProbabilityError
from quditfuse.fusion import (
    AncillaInput, ClusterInput, collision_probability_formula, effective_rows,
    fuse, herald, interferometer_size, mode_roles, pair_cluster_inputs,
    product_form_collision, schmidt_decompose, total_probability
)
from quditfuse.graphstate import build_graph_state, line_graph, pair_graph


def test_schmidt_decompose_pair_graph():
    state = build_graph_state(pair_graph(3))
    form = schmidt_decompose(state, ['q0'])
    assert form.rank == 3
    assert np.allclose(form.coefficients, 1 / np.sqrt(3))
    assert form.reconstruction_error(state) < 1e-12


def test_schmidt_decompose_line_graph_leg_at_end():
    state = build_graph_state(line_graph(3, 3))
    form = schmidt_decompose(state, ['q0', 'q1'])
    assert form.rank == 3
    assert abs(np.sum(form.coefficients ** 2) - 1) < 1e-12
    with pytest.raises(DimensionError):
        schmidt_decompose(state, ['q0', 'q1', 'q2'])


def test_cluster_input():
    inp = ClusterInput.from_graph(line_graph(2, 3), 'q2', name='left')
    assert inp.rank == 2
    assert inp.leg_dim == 2
    assert inp.v_subsystems == [('left:q0', 2), ('left:q1', 2)]
    assert np.allclose(inp.phi.conj().T @ inp.phi, np.eye(2))


def test_ancilla_input():
    ancilla = AncillaInput(d=3)
    assert ancilla.rank == 1
    assert ancilla.is_ancilla
    assert np.allclose(ancilla.psi[:, 0], [1, 0, 0])
    with pytest.raises(NumericError):
        AncillaInput([1, 1])
    with pytest.raises(DimensionError):
        AncillaInput()


def test_sizes_and_roles():
    inputs = pair_cluster_inputs(3, ancillae=1)
    assert interferometer_size(inputs) == 7
    assert interferometer_size(inputs, vacuum_pads=2) == 9
    assert interferometer_size(inputs, basis='physical') == 9
    roles = mode_roles(inputs, vacuum_pads=1)
    assert len(roles) == 8


def test_size_mismatch(haar):
    with pytest.raises(DimensionError):
        fuse(pair_cluster_inputs(2), haar(5))


def test_interferometer_roles(qubit_inputs, pbs):
    roles = mode_roles(qubit_inputs)
    assert effective_rows(qubit_inputs, pbs.with_roles(roles)).shape == (4, 4)
    with pytest.raises(DimensionError):
        effective_rows(qubit_inputs, pbs.with_roles(roles[::-1]))

    padded = mode_roles(qubit_inputs, vacuum_pads=1)
    outcomes = fuse(qubit_inputs, np.eye(5), vacuum_pads=1)
    assert all(o.mode_roles == padded for o in outcomes)
    clicks = dict((tuple(o.pattern), o.vacuum_clicks) for o in outcomes)
    assert clicks[(0, 2)] == 0
    assert clicks[(0, 4)] == 1
    assert clicks[(4, 4)] == 2


def test_pbs_fusion(qubit_inputs, pbs):
    outcomes = fuse(qubit_inputs, pbs)
    assert len(outcomes) == 10
    assert abs(total_probability(outcomes) - 1) < 1e-12
    relevant = [o for o in outcomes if o.relevant]
    assert abs(sum(o.probability for o in relevant) - 0.5) < 1e-12
    live = [o for o in relevant if not o.is_null]
    assert sorted(o.pattern.label for o in live) == ['0-2', '0-3', '1-2', '1-3']
    for o in live:
        assert abs(o.probability - 0.125) < 1e-12
        assert abs(entropy(reduced_density(o, 0)) - math.log(2)) < 1e-9
    for o in outcomes:
        if not o.relevant:
            assert abs(o.probability - 0.125) < 1e-12


def test_pbs_heralded_state(qubit_inputs, pbs):
    outcome = herald(qubit_inputs, pbs, [0, 2])
    state = outcome.heralded_state
    assert state.labels == ['c1:q0', 'c2:q0']
    assert abs(state.norm() - 1) < 1e-12
    rho = reduced_density(state, 'c1:q0')
    assert np.allclose(rho.matrix, np.eye(2) / 2)


def test_collisions_are_products(qubit_inputs, pbs):
    for k in range(4):
        outcome = herald(qubit_inputs, pbs, [k, k])
        factors = product_form_collision(pbs, qubit_inputs, k)
        assert factors.first.labels == ['c1:q0']
        assert factors.second.labels == ['c2:q0']
        product = np.kron(factors.first.amplitudes, factors.second.amplitudes)
        assert np.allclose(outcome.heralded_state.amplitudes, product)
        assert abs(factors.probability - outcome.probability) < 1e-12
        assert abs(collision_probability_formula(pbs, qubit_inputs, k) - 0.125) < 1e-12


def test_collision_probability_formula(qutrit_inputs, haar):
    u = haar(6, seed=21)
    for k in range(6):
        outcome = herald(qutrit_inputs, u, [k, k])
        assert abs(collision_probability_formula(u, qutrit_inputs, k) - outcome.probability) < 1e-12


def test_identity_fusion(qubit_inputs):
    u = np.eye(4)
    alphas = qubit_inputs[0].alphas
    betas = qubit_inputs[1].alphas
    for o in fuse(qubit_inputs, u):
        k, l = o.pattern
        if k < 2 <= l:
            assert abs(o.probability - alphas[k] ** 2 * betas[l - 2] ** 2) < 1e-12
            expected = np.zeros((2, 2))
            expected[k, l - 2] = 1
            assert np.allclose(o.coefficients, expected)
        else:
            assert o.probability == 0
            assert o.is_null
            assert o.heralded_state is None

    factors = product_form_collision(u, qubit_inputs, 0)
    assert np.allclose(factors.first.amplitudes, qubit_inputs[0].phi[:, 0])
    assert factors.second is None
    assert factors.probability == 0


def test_collision_with_both_factors_vanishing(qubit_inputs):
    with pytest.raises(ZeroProbabilityError):
        product_form_collision(np.eye(5), qubit_inputs, 4, vacuum_pads=1)


@pytest.mark.parametrize("d,ancillae", [
    (2, 0), (2, 1), (2, 2), (3, 0), (3, 1), (3, 2), (4, 0), (4, 1),
])
def test_probability_conservation(haar, d, ancillae):
    inputs = pair_cluster_inputs(d, ancillae)
    u = haar(interferometer_size(inputs), seed=d * 10 + ancillae)
    assert abs(total_probability(fuse(inputs, u)) - 1) < 1e-10


@pytest.mark.parametrize("basis,pads", [('physical', 0), ('schmidt', 2)])
def test_probability_conservation_other_layouts(haar, basis, pads):
    inputs = pair_cluster_inputs(3, 1)
    u = haar(interferometer_size(inputs, pads, basis), seed=4)
    assert abs(total_probability(fuse(inputs, u, vacuum_pads=pads, basis=basis)) - 1) < 1e-10


def test_vacuum_pads_widen_rows(qubit_inputs, haar):
    u = haar(6, seed=12)
    rows = effective_rows(qubit_inputs, u, vacuum_pads=2)
    assert rows.shape == (4, 6)


def test_pairwise_method_agrees(qutrit_inputs, haar):
    u = haar(6, seed=30)
    a = fuse(qutrit_inputs, u)
    b = fuse(qutrit_inputs, u, method='pairwise')
    for x, y in zip(a, b):
        assert abs(x.probability - y.probability) < 1e-13


def test_threads_do_not_change_results(qutrit_inputs, haar):
    u = haar(6, seed=31)
    a = fuse(qutrit_inputs, u)
    b = fuse(qutrit_inputs, u, threads=4)
    assert [o.pattern for o in a] == [o.pattern for o in b]
    assert [o.probability for o in a] == [o.probability for o in b]


def test_ancilla_state_matters_only_physically(haar):
    inputs = pair_cluster_inputs(2, 1)
    tilted = pair_cluster_inputs(2, 1, ancilla_states=[np.array([0, 1])])
    u = haar(5, seed=2)
    a = [o.probability for o in fuse(inputs, u)]
    b = [o.probability for o in fuse(tilted, u)]
    assert np.allclose(a, b)

    u = haar(6, seed=2)
    a = [o.probability for o in fuse(inputs, u, basis='physical')]
    b = [o.probability for o in fuse(tilted, u, basis='physical')]
    assert not np.allclose(a, b)
