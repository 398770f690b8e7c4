# -*- coding: utf-8 -*-
import itertools

import numpy as np
import pytest

from quditfuse import graphstate
from quditfuse.exceptions import DimensionError, NumericError
from quditfuse.graphstate import (
    LocalOperator, PureState, QuditDim, QuditGraph, build_graph_state, cz_gate, line_graph,
    pair_graph, pauli_x, pauli_z, stabilizer, verify_stabilizers
)


@pytest.mark.parametrize("d", range(2, 7))
def test_pauli_algebra(d):
    x, z = pauli_x(d), pauli_z(d)
    omega = QuditDim(d).omega
    assert np.allclose(np.linalg.matrix_power(x, d), np.eye(d))
    assert np.allclose(np.linalg.matrix_power(z, d), np.eye(d))
    assert np.allclose(z @ x, omega * x @ z)
    for j in range(d):
        e = np.zeros(d)
        e[j] = 1
        assert np.allclose(x @ e, np.roll(e, 1))


def test_dimension_must_be_at_least_two():
    with pytest.raises(DimensionError):
        QuditDim(1)
    with pytest.raises(DimensionError):
        QuditDim(2.5)
    with pytest.raises(DimensionError):
        QuditDim('x')
    with pytest.raises(DimensionError):
        QuditDim(None)


def test_cz_gate():
    assert np.allclose(np.diag(cz_gate(2)), [1, 1, 1, -1])
    phases = np.diag(cz_gate(3)).reshape(3, 3)
    omega = QuditDim(3).omega
    assert np.isclose(phases[1, 1], omega)
    assert np.isclose(phases[2, 2], omega)
    assert np.isclose(phases[1, 2], omega ** 2)


def test_pair_graph_amplitudes():
    state = build_graph_state(pair_graph(2))
    assert np.allclose(state.amplitudes, [0.5, 0.5, 0.5, -0.5])

    state = build_graph_state(pair_graph(3))
    omega = QuditDim(3).omega
    amps = state.tensor()
    assert np.isclose(amps[1, 2], omega ** 2 / 3)
    assert np.isclose(amps[2, 2], omega / 3)
    assert np.isclose(state.norm(), 1)


@pytest.mark.parametrize("d,n", [(2, 4), (3, 3), (4, 3), (5, 2)])
def test_closed_form_matches_gates(d, n):
    graph = line_graph(d, n)
    closed = build_graph_state(graph, 'closed')
    gates = build_graph_state(graph, 'gates')
    assert np.allclose(closed.amplitudes, gates.amplitudes, atol=1e-13)


def test_star_graph_gates():
    graph = QuditGraph(3, ['c', 'a', 'b'], [('a', 'c'), ('c', 'b')])
    closed = build_graph_state(graph, 'closed')
    gates = build_graph_state(graph, 'gates')
    assert np.allclose(closed.amplitudes, gates.amplitudes, atol=1e-13)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_stabilizers_hold(d):
    graph = line_graph(d, 3)
    report = verify_stabilizers(graph, build_graph_state(graph))
    assert report.passed
    assert all(r < 1e-12 for r in report.residuals.values())


def test_stabilizers_on_a_qutrit_path():
    graph = line_graph(3, 4)
    report = verify_stabilizers(graph, build_graph_state(graph))
    assert report.passed
    assert list(report.residuals) == ['q0', 'q1', 'q2', 'q3']


def test_stabilizers_on_random_graphs(rng):
    for _ in range(30):
        d = int(rng.integers(2, 5))
        n = int(rng.integers(1, 6))
        vertices = ['v{}'.format(i) for i in range(n)]
        edges = [e for e in itertools.combinations(vertices, 2) if rng.random() < 0.5]
        graph = QuditGraph(d, vertices, edges)
        state = build_graph_state(graph)
        assert np.allclose(state.amplitudes, build_graph_state(graph, 'gates').amplitudes)
        report = verify_stabilizers(graph, state)
        assert report.passed, (d, edges, report.residuals)


def test_non_unitary_stabilizer_is_refused(monkeypatch):
    graph = pair_graph(3)
    state = build_graph_state(graph)
    assert stabilizer(graph, 'q0').is_unitary()
    assert not LocalOperator({'q0': 2 * np.eye(3)}).is_unitary()
    monkeypatch.setattr(graphstate, 'pauli_z', lambda dim: 2 * np.eye(dim.d))
    with pytest.raises(NumericError):
        verify_stabilizers(graph, state)


def test_literal_stabilizer_fails_for_qutrits():
    graph = pair_graph(3)
    state = build_graph_state(graph)
    moved = stabilizer(graph, 'q0', literal=True).apply(state)
    residual = np.linalg.norm(moved.amplitudes - state.amplitudes)
    assert abs(residual - np.sqrt(2)) < 1e-12


def test_literal_stabilizer_agrees_for_qubits():
    graph = pair_graph(2)
    state = build_graph_state(graph)
    moved = stabilizer(graph, 'q0', literal=True).apply(state)
    assert np.allclose(moved.amplitudes, state.amplitudes)


def test_sign_flip_is_detected():
    graph = pair_graph(3)
    state = build_graph_state(graph)
    amps = state.amplitudes.copy()
    amps[4] *= -1
    broken = PureState(state.subsystems, amps)
    report = verify_stabilizers(graph, broken)
    assert not report.passed
    assert max(report.residuals.values()) > 0.1


@pytest.mark.parametrize("vertices,edges", [
    (['a', 'a'], []),
    (['a', 'b'], [('a', 'a')]),
    (['a', 'b'], [('a', 'c')]),
    (['a', 'b'], [('a', 'b'), ('b', 'a')]),
    (['a', 'b'], [('a', 'b', 'c')]),
    (5, []),
    ('ab', []),
    (['a', 'b'], [3]),
    (['a', 'b'], ['ab']),
    (['a', 'b'], 7),
    ([['a'], 'b'], []),
])
def test_invalid_graphs(vertices, edges):
    with pytest.raises(DimensionError):
        QuditGraph(3, vertices, edges)


def test_edges_from_a_generator():
    edges = (e for e in [('a', 'b'), ('b', 'c')])
    graph = QuditGraph(2, ['a', 'b', 'c'], edges)
    assert len(graph.edges) == 2
    assert graph.neighbors('b') == ['a', 'c']
    assert verify_stabilizers(graph, build_graph_state(graph)).passed


def test_amplitude_cap():
    with pytest.raises(DimensionError):
        build_graph_state(line_graph(4, 13))
    with pytest.raises(DimensionError):
        build_graph_state(line_graph(3, 4), cap=50)


def test_graph_mapping():
    graph = QuditGraph.from_mapping(
        {'vertices': ['x', 'y', 'z'], 'edges': [['x', 'y']]}, d=4
    )
    assert graph.d == 4
    assert graph.neighbors('x') == ['y']
    assert graph.neighbors('z') == []
    assert QuditGraph.from_mapping(graph.to_mapping()).edges == graph.edges
    with pytest.raises(DimensionError):
        QuditGraph.from_mapping({'d': 3, 'vertices': ['x']}, d=4)
    with pytest.raises(DimensionError):
        QuditGraph.from_mapping({'vertices': ['x'], 'colour': 'red'}, d=3)


def test_pure_state_checks():
    with pytest.raises(NumericError):
        PureState([('a', 2)], [1, 1])
    with pytest.raises(DimensionError):
        PureState([('a', 2)], [1, 0, 0])
    with pytest.raises(DimensionError):
        PureState([('a', 2), ('a', 2)], [1, 0, 0, 0])
    state = PureState([('a', 2)], [3, 4], normalized=False).renormalized()
    assert np.allclose(state.amplitudes, [0.6, 0.8])
