# -*- coding: utf-8 -*-
"""
qudit 的 Pauli 算符、图态以及稳定子检查。

所有态矢量都按声明的子系统顺序做 row-major 排列：第一个子系统是最高位。
"""
from __future__ import absolute_import, unicode_literals

from collections import OrderedDict, namedtuple

import networkx as nx
import numpy as np

from quditfuse.exceptions import DimensionError, NumericError
from quditfuse.utils import is_string

__all__ = [
    'QuditDim', 'QuditGraph', 'PureState', 'LocalOperator',
    'pauli_x', 'pauli_z', 'cz_gate', 'build_graph_state', 'stabilizer',
    'verify_stabilizers', 'line_graph', 'pair_graph'
]

AMPLITUDE_CAP = 2 ** 24
NORM_TOL = 1e-12


class QuditDim(object):
    """
    单个 qudit 的维数 ``d``。``omega`` 总是由 ``d`` 算出来，不单独保存。

    :param d: 维数，至少为 2
    """

    __slots__ = ('d', )

    def __init__(self, d):
        if isinstance(d, QuditDim):
            d = d.d
        try:
            valid = int(d) == d and d >= 2
        except (TypeError, ValueError):
            valid = False
        if not valid:
            raise DimensionError("qudit dimension must be >= 2, got {}".format(d))
        self.d = int(d)

    @property
    def omega(self):
        return np.exp(2j * np.pi / self.d)

    def __eq__(self, other):
        return isinstance(other, QuditDim) and other.d == self.d

    def __hash__(self):
        return hash(self.d)

    def __repr__(self):
        return "QuditDim({})".format(self.d)


def _roots(dim):
    # ω^k，k 先对 d 取模
    d = dim.d
    return np.exp(2j * np.pi * np.arange(d) / d)


def pauli_x(dim):
    """
    循环移位算符 ``X|j> = |j+1 mod d>``。
    """
    dim = QuditDim(dim)
    return np.roll(np.eye(dim.d, dtype=complex), 1, axis=0)


def pauli_z(dim):
    """
    相位算符 ``Z|j> = ω^j |j>``。
    """
    dim = QuditDim(dim)
    return np.diag(_roots(dim))


def cz_phases(dim):
    """
    ``S_ab`` 的对角元，排成 d×d 矩阵：第 (j, k) 个元素是 ω^{jk}。
    """
    dim = QuditDim(dim)
    j = np.arange(dim.d)
    return _roots(dim)[np.outer(j, j) % dim.d]


def cz_gate(dim):
    """
    两个 qudit 之间的受控相位门 ``S_ab = Σ ω^{jk} |j,k><j,k|``，
    返回 d²×d² 的对角矩阵。
    """
    return np.diag(cz_phases(dim).reshape(-1))


def _as_list(value, what):
    if is_string(value) or isinstance(value, dict):
        raise DimensionError("{} must be a list, got {!r}".format(what, value))
    try:
        return list(value)
    except TypeError:
        raise DimensionError("{} must be a list, got {!r}".format(what, value))


class QuditGraph(object):
    """
    用来生成图态的图。

    :param dim: qudit 维数，``int`` 或者 :class:`QuditDim`
    :param vertices: 有序的顶点列表
    :param edges: 无向边的列表，每条边是一个 ``(a, b)``
    """

    def __init__(self, dim, vertices, edges=()):
        self.dim = QuditDim(dim)
        self.vertices = _as_list(vertices, 'vertices')
        edges = _as_list(edges, 'edges')
        try:
            distinct = len(set(self.vertices))
        except TypeError:
            raise DimensionError("vertices must be hashable labels")
        if distinct != len(self.vertices):
            raise DimensionError("duplicate vertices in {}".format(self.vertices))
        graph = nx.Graph()
        graph.add_nodes_from(self.vertices)
        for edge in edges:
            if is_string(edge) or not isinstance(edge, (list, tuple)) or len(edge) != 2:
                raise DimensionError("{!r} is not a vertex pair".format(edge))
            a, b = edge
            if a == b:
                raise DimensionError("self-loop on vertex {!r}".format(a))
            for v in (a, b):
                if v not in graph:
                    raise DimensionError("edge endpoint {!r} is not a vertex".format(v))
            if graph.has_edge(a, b):
                raise DimensionError("duplicate edge ({!r}, {!r})".format(a, b))
            graph.add_edge(a, b)
        self._graph = graph
        self.edges = [tuple(e) for e in edges]

    @property
    def d(self):
        return self.dim.d

    def position(self, vertex):
        try:
            return self.vertices.index(vertex)
        except ValueError:
            raise DimensionError("unknown vertex {!r}".format(vertex))

    def neighbors(self, vertex):
        self.position(vertex)
        return [v for v in self.vertices if self._graph.has_edge(vertex, v)]

    @classmethod
    def from_mapping(cls, mapping, d=None):
        """
        从 ``{d, vertices, edges}`` 形式的 ``dict`` 创建图。

        :param mapping: 图的描述
        :param d: 场景里给出的维数，如果描述里也写了 ``d``，两者必须一致
        """
        if not isinstance(mapping, dict):
            raise DimensionError("graph description must be a mapping")
        unknown = set(mapping) - {'d', 'vertices', 'edges'}
        if unknown:
            raise DimensionError("unknown graph keys {}".format(sorted(unknown)))
        own = mapping.get('d')
        if own is not None and d is not None and QuditDim(own) != QuditDim(d):
            raise DimensionError("graph d={} does not match d={}".format(own, d))
        dim = own if own is not None else d
        if dim is None:
            raise DimensionError("graph description has no d")
        if 'vertices' not in mapping:
            raise DimensionError("graph description has no vertices")
        return cls(dim, mapping['vertices'], mapping.get('edges', []))

    def to_mapping(self):
        return {
            'd': self.d,
            'vertices': list(self.vertices),
            'edges': [list(e) for e in self.edges],
        }

    def __repr__(self):
        return "QuditGraph(d={}, vertices={!r}, edges={!r})".format(
            self.d, self.vertices, self.edges
        )


def line_graph(d, n, prefix='q'):
    """
    一维 cluster：``q0 - q1 - ... - q{n-1}``。
    """
    vertices = ['{}{}'.format(prefix, i) for i in range(n)]
    return QuditGraph(d, vertices, list(zip(vertices[:-1], vertices[1:])))


def pair_graph(d):
    """
    两个顶点一条边的 cluster，第二个顶点作为 fusion 的 leg 时施密特秩为 d。
    """
    return line_graph(d, 2)



class PureState(object):
    """
    有限维子系统张量积上的稠密态矢量。

    :param subsystems: 有序的 ``(label, dim)`` 列表
    :param amplitudes: 长度为各维数乘积的复数向量
    :param normalized: 为 ``True`` 时要求模长为 1（误差 1e-12），
        未归一化的态必须显式传 ``False``
    """

    def __init__(self, subsystems, amplitudes, normalized=True):
        self.subsystems = [(label, int(dim)) for label, dim in subsystems]
        labels = self.labels
        if len(set(labels)) != len(labels):
            raise DimensionError("duplicate subsystem labels {}".format(labels))
        amplitudes = np.asarray(amplitudes, dtype=complex).reshape(-1)
        size = int(np.prod(self.dims, dtype=np.int64)) if self.dims else 1
        if amplitudes.shape[0] != size:
            raise DimensionError(
                "expected {} amplitudes, got {}".format(size, amplitudes.shape[0])
            )
        self.amplitudes = amplitudes
        self.normalized = normalized
        if normalized and abs(self.norm() - 1) > NORM_TOL:
            raise NumericError(
                "state norm {!r} is not 1; pass normalized=False".format(self.norm())
            )

    @property
    def labels(self):
        return [label for label, _ in self.subsystems]

    @property
    def dims(self):
        return [dim for _, dim in self.subsystems]

    def position(self, label):
        try:
            return self.labels.index(label)
        except ValueError:
            raise DimensionError("unknown subsystem {!r}".format(label))

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def tensor(self):
        return self.amplitudes.reshape(self.dims or ())

    def apply(self, operator):
        """
        作用一个算符，返回未归一化标记的新态。``operator`` 可以是
        :class:`LocalOperator` 或者全空间上的稠密矩阵。
        """
        if isinstance(operator, LocalOperator):
            return operator.apply(self)
        operator = np.asarray(operator, dtype=complex)
        if operator.shape != (self.amplitudes.size, ) * 2:
            raise DimensionError("operator shape {} does not match state".format(
                operator.shape
            ))
        return PureState(self.subsystems, operator @ self.amplitudes, False)

    def renormalized(self):
        norm = self.norm()
        if norm == 0:
            raise NumericError("cannot normalize the null vector")
        return PureState(self.subsystems, self.amplitudes / norm)

    def __repr__(self):
        return "PureState({!r})".format(self.subsystems)


class LocalOperator(object):
    """
    若干单体算符的张量积，没有出现的子系统上是单位算符。

    :param factors: ``{label: d×d matrix}``
    """

    def __init__(self, factors):
        self.factors = OrderedDict(
            (label, np.asarray(m, dtype=complex)) for label, m in factors.items()
        )

    def apply(self, state):
        psi = state.tensor()
        for label, matrix in self.factors.items():
            axis = state.position(label)
            if matrix.shape != (state.dims[axis], ) * 2:
                raise DimensionError("factor on {!r} has shape {}".format(
                    label, matrix.shape
                ))
            psi = np.moveaxis(np.tensordot(matrix, psi, axes=([1], [axis])), 0, axis)
        return PureState(state.subsystems, psi.reshape(-1), False)

    def is_unitary(self, tol=1e-12):
        return all(
            np.allclose(m @ m.conj().T, np.eye(m.shape[0]), atol=tol)
            for m in self.factors.values()
        )


def _check_cap(graph, cap):
    n = len(graph.vertices)
    if n and graph.d ** n > cap:
        raise DimensionError(
            "d^n = {}^{} exceeds the amplitude cap {}".format(graph.d, n, cap)
        )


def build_graph_state(graph, method='closed', cap=AMPLITUDE_CAP):
    """
    生成图态 ``∏ S_ab ∏ |+>_c``。

    :param graph: :class:`QuditGraph`
    :param method: ``'closed'`` 直接写出振幅 d^{-n/2} ω^{Σ j_a j_b}，
        ``'gates'`` 逐个作用 ``S_ab``
    :param cap: 振幅个数的上限
    :return: :class:`PureState`
    """
    _check_cap(graph, cap)
    d = graph.d
    n = len(graph.vertices)
    subsystems = [(v, d) for v in graph.vertices]
    if method == 'closed':
        index = np.indices((d, ) * n).reshape(n, -1)
        exponent = np.zeros(index.shape[1], dtype=np.int64)
        for a, b in graph.edges:
            exponent += index[graph.position(a)] * index[graph.position(b)]
        amplitudes = _roots(graph.dim)[exponent % d] / np.sqrt(float(d) ** n)
    elif method == 'gates':
        psi = np.full((d, ) * n, 1 / np.sqrt(float(d) ** n), dtype=complex)
        phases = cz_phases(graph.dim)
        for a, b in graph.edges:
            pa, pb = graph.position(a), graph.position(b)
            shape = [1] * n
            shape[pa] = shape[pb] = d
            block = phases if pa < pb else phases.T
            psi = psi * block.reshape(shape)
        amplitudes = psi.reshape(-1)
    else:
        raise ValueError("unknown method {!r}".format(method))
    return PureState(subsystems, amplitudes)


def stabilizer(graph, vertex, literal=False):
    """
    顶点 ``a`` 的稳定子。

    在 ``X|j> = |j+1>``、``Z|j> = ω^j|j>``、``S_ab = Σ ω^{jk}`` 的约定下，
    固定图态的是 ``K_a = X_a^† ∏_{(a,b)∈E} Z_b^†``。``literal=True`` 返回
    ``X_a^† ∏ Z_b``，它只在 d=2 时与前者相同。

    :return: :class:`LocalOperator`
    """
    graph.position(vertex)
    factors = OrderedDict()
    factors[vertex] = pauli_x(graph.dim).conj().T
    z = pauli_z(graph.dim)
    for b in graph.neighbors(vertex):
        factors[b] = z if literal else z.conj().T
    return LocalOperator(factors)


StabilizerReport = namedtuple('StabilizerReport', ['residuals', 'tol', 'passed'])


def verify_stabilizers(graph, state, tol=1e-12):
    """
    对每个顶点计算 ``||K_a|Φ> - |Φ>||``。

    :return: :class:`StabilizerReport`，``residuals`` 按顶点顺序排列
    """
    expected = [(v, graph.d) for v in graph.vertices]
    if state.subsystems != expected:
        raise DimensionError("state subsystems {} do not match graph {}".format(
            state.subsystems, expected
        ))
    residuals = OrderedDict()
    for v in graph.vertices:
        operator = stabilizer(graph, v)
        if not operator.is_unitary():
            raise NumericError("stabilizer of {!r} is not unitary".format(v))
        moved = operator.apply(state)
        residuals[v] = float(np.linalg.norm(moved.amplitudes - state.amplitudes))
    passed = all(r < tol for r in residuals.values())
    return StabilizerReport(residuals, tol, passed)
