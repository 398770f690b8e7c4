# -*- coding: utf-8 -*-
"""
广义 type-II fusion。

每个输入 ``X_m = V_m ⊗ W_m`` 先做施密特分解
``|Φ_m> = Σ_i α_{m,i} |φ_{m,i}>|ψ_{m,i}>``，第 i 个施密特信道对应干涉仪的
一行。测量所有输出模式后，剩下的 ``∏V_m`` 上的态就是 heralded state。
"""
from __future__ import absolute_import, unicode_literals

from collections import namedtuple

import numpy as np
from scipy.linalg import svd

from quditfuse.exceptions import (
    DimensionError, NumericError, ZeroProbabilityError
)
from quditfuse.fock import (
    AmplitudeTable, DetectionPattern, IndexMap, Interferometer, ModeRole
)
from quditfuse.graphstate import PureState, build_graph_state, pair_graph
from quditfuse.logger import logger
from quditfuse.utils import cached_property, parallel_map

__all__ = [
    'SchmidtForm', 'ClusterInput', 'AncillaInput', 'FusionOutcome',
    'schmidt_decompose', 'fuse', 'herald', 'outcome_probability',
    'product_form_collision', 'effective_rows', 'pair_cluster_inputs',
    'interferometer_size', 'mode_roles'
]

SCHMIDT_TOL = 1e-12
PROBABILITY_FLOOR = 1e-14
RECONSTRUCTION_TOL = 1e-11


class SchmidtForm(object):
    """
    一个二分下的施密特形式 ``Σ_i α_i |φ_i>|ψ_i>``。

    :param left: 左边的 ``(label, dim)`` 列表
    :param right: 右边的 ``(label, dim)`` 列表
    :param coefficients: 降序排列的正系数 α
    :param left_basis: ``n_left × k`` 矩阵，每一列是一个 φ_i
    :param right_basis: ``n_right × k`` 矩阵，每一列是一个 ψ_i
    """

    def __init__(self, left, right, coefficients, left_basis, right_basis):
        self.left = list(left)
        self.right = list(right)
        self.coefficients = np.asarray(coefficients, dtype=float)
        self.left_basis = np.asarray(left_basis, dtype=complex)
        self.right_basis = np.asarray(right_basis, dtype=complex)

    @property
    def rank(self):
        return len(self.coefficients)

    def reconstruct(self):
        """
        按 ``left + right`` 的子系统顺序重建态矢量。
        """
        matrix = (self.left_basis * self.coefficients) @ self.right_basis.T
        return PureState(self.left + self.right, matrix.reshape(-1), False)

    def reconstruction_error(self, state):
        order = [state.position(label) for label, _ in self.left + self.right]
        target = np.transpose(state.tensor(), order).reshape(-1)
        return float(np.linalg.norm(self.reconstruct().amplitudes - target))


def schmidt_decompose(state, cut, tol=SCHMIDT_TOL):
    """
    对 ``state`` 在 ``cut | 其余子系统`` 处做施密特分解。

    :param state: :class:`PureState`
    :param cut: 左边子系统的 label 列表
    :param tol: 小于该值的系数被丢掉
    :return: :class:`SchmidtForm`
    """
    left = [state.position(label) for label in cut]
    right = [p for p in range(len(state.subsystems)) if p not in left]
    if not left or not right:
        raise DimensionError("both sides of the cut must be non-empty")
    dims = state.dims
    n_left = int(np.prod([dims[p] for p in left]))
    matrix = np.transpose(state.tensor(), left + right).reshape(n_left, -1)
    u, s, vh = svd(matrix, full_matrices=False)
    k = int(np.count_nonzero(s > tol))
    return SchmidtForm(
        [state.subsystems[p] for p in left],
        [state.subsystems[p] for p in right],
        s[:k], u[:, :k], vh[:k].T
    )


class ClusterInput(object):
    """
    一个参与 fusion 的 cluster。``leg`` 是被测量的 qudit ``W_m``，其余的
    qudit 组成 ``V_m``。

    :param state: cluster 的 :class:`PureState`
    :param leg: 被测量 qudit 的 label
    :param name: 输入的名字，heralded state 的 label 会加上这个前缀
    """

    is_ancilla = False

    def __init__(self, state, leg, name='c', tol=SCHMIDT_TOL):
        self.state = state
        self.leg = leg
        self.name = name
        state.position(leg)
        cut = [label for label in state.labels if label != leg]
        self.schmidt = schmidt_decompose(state, cut, tol=tol)
        error = self.schmidt.reconstruction_error(state)
        if error > RECONSTRUCTION_TOL:
            raise NumericError("Schmidt reconstruction error {!r}".format(error))

    @classmethod
    def from_graph(cls, graph, leg, name='c'):
        return cls(build_graph_state(graph), leg, name=name)

    @property
    def rank(self):
        return self.schmidt.rank

    @property
    def alphas(self):
        return self.schmidt.coefficients

    @property
    def phi(self):
        return self.schmidt.left_basis

    @property
    def psi(self):
        return self.schmidt.right_basis

    @property
    def leg_dim(self):
        return self.state.dims[self.state.position(self.leg)]

    @property
    def v_subsystems(self):
        return [
            ('{}:{}'.format(self.name, label), dim)
            for label, dim in self.schmidt.left
        ]

    def __repr__(self):
        return "ClusterInput(name={!r}, leg={!r}, k={})".format(
            self.name, self.leg, self.rank
        )


class AncillaInput(object):
    """
    单光子 ancilla：``k_m = 1``，``|φ_{m,1}> = |vac>``。

    :param leg_state: 光子在 d 个模式上的态，默认 ``|0>``
    :param d: ``leg_state`` 为空时使用的维数
    """

    is_ancilla = True

    def __init__(self, leg_state=None, d=None, name='a'):
        if leg_state is None:
            if d is None:
                raise DimensionError("ancilla needs a state or a dimension")
            leg_state = np.zeros(int(d), dtype=complex)
            leg_state[0] = 1
        leg_state = np.asarray(leg_state, dtype=complex).reshape(-1)
        if abs(np.linalg.norm(leg_state) - 1) > 1e-12:
            raise NumericError("ancilla state is not normalized")
        self.leg_state = leg_state
        self.name = name

    rank = 1

    @property
    def alphas(self):
        return np.ones(1)

    @property
    def phi(self):
        return np.ones((1, 1), dtype=complex)

    @property
    def psi(self):
        return self.leg_state.reshape(-1, 1)

    @property
    def leg_dim(self):
        return self.leg_state.shape[0]

    v_subsystems = ()

    def __repr__(self):
        return "AncillaInput(name={!r}, d={})".format(self.name, self.leg_dim)


def pair_cluster_inputs(d, ancillae=0, ancilla_states=None):
    """
    两个 ``q0 - q1`` cluster（leg 为 ``q1``，施密特秩为 d）加上
    ``ancillae`` 个 ancilla。
    """
    graph = pair_graph(d)
    inputs = [
        ClusterInput.from_graph(graph, 'q1', name='c1'),
        ClusterInput.from_graph(graph, 'q1', name='c2'),
    ]
    states = list(ancilla_states or [])
    for n in range(ancillae):
        state = states[n] if n < len(states) else None
        inputs.append(AncillaInput(state, d=d, name='a{}'.format(n + 1)))
    return inputs


def _modes(inputs, basis):
    if basis == 'schmidt':
        return [inp.rank for inp in inputs]
    if basis == 'physical':
        return [inp.leg_dim for inp in inputs]
    raise ValueError("unknown basis {!r}".format(basis))


def interferometer_size(inputs, vacuum_pads=0, basis='schmidt'):
    return sum(_modes(inputs, basis)) + vacuum_pads


def mode_roles(inputs, vacuum_pads=0, basis='schmidt'):
    roles = []
    for m, (inp, width) in enumerate(zip(inputs, _modes(inputs, basis))):
        kind = ModeRole.ANCILLA if inp.is_ancilla else ModeRole.LEG
        roles.extend([ModeRole(kind, m)] * width)
    roles.extend([ModeRole(ModeRole.VACUUM, None)] * vacuum_pads)
    return roles


def effective_rows(inputs, u, vacuum_pads=0, basis='schmidt'):
    """
    进入振幅计算的行矩阵（``Σk_m × K``）。

    ``schmidt`` 下干涉仪直接作用在施密特信道上，行数是 ``Σk_m + pads``；
    ``physical`` 下每个 leg/ancilla 占据 d 个物理模式，施密特信道的行是
    ``ψ_m^T U_block``。

    :param inputs: 输入列表
    :param u: :class:`Interferometer` 或矩阵
    """
    if not isinstance(u, Interferometer):
        u = Interferometer(u)
    widths = _modes(inputs, basis)
    expected = sum(widths) + vacuum_pads
    if u.size != expected:
        raise DimensionError(
            "interferometer has {} modes, inputs need {} ({} + {} pads)".format(
                u.size, expected, sum(widths), vacuum_pads
            )
        )
    roles = mode_roles(inputs, vacuum_pads, basis)
    if u.mode_roles is not None and u.mode_roles != roles:
        raise DimensionError("interferometer mode roles do not match the inputs")
    if basis == 'schmidt':
        return u.matrix[:sum(widths)]
    blocks = IndexMap(widths)
    return np.vstack([
        inp.psi.T @ u.matrix[blocks.block(m)] for m, inp in enumerate(inputs)
    ])


class FusionOutcome(object):
    """
    一个探测模式的结果。

    :param pattern: :class:`DetectionPattern`
    :param probability: 出现的概率
    :param norm_factor: 归一化因子 ``N``（系数 ``a`` 约定下）
    :param coefficients: 施密特坐标下归一化后的 ``(k_1, ..., k_M)`` 张量，
        概率过小时为 ``None``
    :param inputs: 产生这个结果的输入
    :param mode_roles: 每个输出模式的 :class:`~quditfuse.fock.ModeRole`
    """

    def __init__(self, pattern, probability, norm_factor, coefficients, inputs,
                 mode_roles=None):
        self.pattern = pattern
        self.probability = probability
        self.norm_factor = norm_factor
        self.coefficients = coefficients
        self.inputs = tuple(inputs)
        self.mode_roles = mode_roles

    @property
    def relevant(self):
        return self.pattern.is_collision_free

    @property
    def photons(self):
        return len(self.pattern)

    @property
    def vacuum_clicks(self):
        """
        落在真空 pad 模式上的光子数。
        """
        if self.mode_roles is None:
            return 0
        return sum(
            1 for c in self.pattern if self.mode_roles[c].kind == ModeRole.VACUUM
        )

    @property
    def is_null(self):
        return self.coefficients is None

    @cached_property
    def heralded_state(self):
        """
        计算基下剩余 qudit 上的 heralded state，概率过小时为 ``None``。
        """
        if self.coefficients is None:
            return None
        psi = self.coefficients
        for m, inp in enumerate(self.inputs):
            psi = np.moveaxis(np.tensordot(inp.phi, psi, axes=([1], [m])), 0, m)
        subsystems = []
        for inp in self.inputs:
            subsystems.extend(inp.v_subsystems)
        return PureState(subsystems, psi.reshape(-1))

    def __repr__(self):
        return "FusionOutcome(pattern={}, p={:.6g})".format(
            list(self.pattern), self.probability
        )


def _weights(inputs):
    weights = np.ones(())
    for inp in inputs:
        weights = np.multiply.outer(weights, inp.alphas)
    return weights


def _herald(table, weights, pattern, inputs, floor, roles=None):
    block = table.tensor(pattern) * weights
    norm = float(np.linalg.norm(block))
    probability = norm ** 2 / pattern.multiplicity
    coefficients = block / norm if probability >= floor else None
    return FusionOutcome(pattern, probability, norm, coefficients, inputs, roles)


def herald(inputs, u, pattern, vacuum_pads=0, basis='schmidt',
           method='permanent', floor=PROBABILITY_FLOOR):
    """
    单个探测模式的 heralded 结果。
    """
    rows = effective_rows(inputs, u, vacuum_pads, basis)
    table = AmplitudeTable(rows, [inp.rank for inp in inputs], method=method)
    pattern = DetectionPattern(pattern).validate(rows.shape[1], len(inputs))
    return _herald(table, _weights(inputs), pattern, inputs, floor,
                   mode_roles(inputs, vacuum_pads, basis))


def fuse(inputs, u, vacuum_pads=0, basis='schmidt', method='permanent',
         threads=1, floor=PROBABILITY_FLOOR):
    """
    对所有可能的探测模式给出 heralded state 和概率。

    :param inputs: :class:`ClusterInput` / :class:`AncillaInput` 列表
    :param u: :class:`Interferometer` 或矩阵
    :param vacuum_pads: 没有光子输入的真空模式个数
    :param basis: ``'schmidt'`` 或 ``'physical'``
    :param method: 传给 :class:`~quditfuse.fock.AmplitudeTable`
    :param threads: 并行计算不同探测模式的线程数
    :param floor: 概率小于该值的结果不做归一化
    :return: :class:`FusionOutcome` 列表，按探测模式排序
    """
    if not inputs:
        raise DimensionError("fusion needs at least one input")
    rows = effective_rows(inputs, u, vacuum_pads, basis)
    table = AmplitudeTable(rows, [inp.rank for inp in inputs], method=method)
    weights = _weights(inputs)
    patterns = table.patterns
    roles = mode_roles(inputs, vacuum_pads, basis)
    logger.debug(
        "fusing %d inputs over %d modes: %d patterns", len(inputs),
        rows.shape[1], len(patterns)
    )
    return parallel_map(
        lambda p: _herald(table, weights, p, inputs, floor, roles),
        patterns, threads
    )


def outcome_probability(outcome):
    """
    结果的概率：无碰撞时是 ``N²``，M=2 的碰撞结果是 ``N²/2``，一般情形是
    ``N² / ∏n_k!``。
    """
    return outcome.probability


def total_probability(outcomes):
    return float(sum(o.probability for o in outcomes))


CollisionFactors = namedtuple('CollisionFactors', ['first', 'second', 'probability'])


def _two_blocks(inputs, u, vacuum_pads, basis):
    if len(inputs) != 2:
        raise DimensionError("collision factorisation needs exactly two inputs")
    rows = effective_rows(inputs, u, vacuum_pads, basis)
    index = IndexMap([inp.rank for inp in inputs])
    return rows[index.block(0)], rows[index.block(1)]


def collision_probability_formula(u, inputs, k, vacuum_pads=0, basis='schmidt'):
    """
    ``p_kk = 2 (Σ_i |α_i U_ik|²)(Σ_j |β_j U_jk|²)``。
    """
    first, second = _two_blocks(inputs, u, vacuum_pads, basis)
    a = np.sum(np.abs(inputs[0].alphas * first[:, k]) ** 2)
    b = np.sum(np.abs(inputs[1].alphas * second[:, k]) ** 2)
    return float(2 * a * b)


def product_form_collision(u, inputs, k, vacuum_pads=0, basis='schmidt',
                           floor=PROBABILITY_FLOOR):
    """
    M=2 时碰撞结果 ``(k, k)`` 的两个因子
    ``Σ_i α_i U_ik |φ_{1,i}>`` 和 ``Σ_j β_j U_jk |φ_{2,j}>``，各自归一化后
    作为剩余 qudit 上的 :class:`PureState` 返回。某个因子为零时返回
    ``None``，两个都为零时抛出 :class:`ZeroProbabilityError`。
    """
    first, second = _two_blocks(inputs, u, vacuum_pads, basis)
    factors = []
    for inp, block in zip(inputs, (first, second)):
        vector = inp.alphas * block[:, k]
        norm = np.linalg.norm(vector)
        if norm ** 2 >= floor:
            factor = PureState(inp.v_subsystems, inp.phi @ (vector / norm))
        else:
            factor = None
        factors.append((factor, norm))
    if factors[0][0] is None and factors[1][0] is None:
        raise ZeroProbabilityError("both factors of ({0}, {0}) vanish".format(k))
    probability = 2 * float(factors[0][1] * factors[1][1]) ** 2
    return CollisionFactors(factors[0][0], factors[1][0], probability)
