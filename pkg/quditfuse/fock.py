# -*- coding: utf-8 -*-
"""
玻色子振幅内核。

干涉仪把输入信道的产生算符变换为 ``a_r^† = Σ_k U_{rk} c_k^†``。
探测模式 (detection pattern) 是被点亮的输出模式组成的多重集。

系数约定：:func:`coeff_multi` 与 :func:`oracle_expand` 默认返回对 S_M
全体置换求和的系数 ``a``，也就是态 ``Σ_L (1/∏n_k!) a_L ∏c^†|vac>`` 里的
``a_L``。归一化 Fock 态上的物理振幅是 ``a_L * born_weight(L)``。
"""
from __future__ import absolute_import, unicode_literals

import io
import itertools
import math
from collections import Counter, defaultdict, namedtuple

import numpy as np
from thewalrus import perm

from quditfuse.exceptions import DimensionError, NonUnitaryError
from quditfuse.utils import format_float

__all__ = [
    'Interferometer', 'ModeRole', 'DetectionPattern', 'IndexMap',
    'coeff_two', 'coeff_multi', 'amplitude_tensor', 'AmplitudeTable',
    'oracle_expand', 'born_weight', 'enumerate_patterns', 'preset_unitary',
    'dump_unitary', 'load_unitary'
]

UNITARY_TOL = 1e-10
ORACLE_MAX_PHOTONS = 5
ORACLE_MAX_MODES = 10

ModeRole = namedtuple('ModeRole', ['kind', 'parent'])
ModeRole.LEG = 'leg'
ModeRole.ANCILLA = 'ancilla'
ModeRole.VACUUM = 'vacuum'


class Interferometer(object):
    """
    K×K 酉矩阵。构造时检查 ``U U^† = I``，不满足则抛出
    :class:`NonUnitaryError`，不做任何修正。

    :param matrix: K×K 复矩阵
    :param mode_roles: 每一行对应的 :class:`ModeRole`，可以为空
    :param tol: 酉性检查的容差
    """

    def __init__(self, matrix, mode_roles=None, tol=UNITARY_TOL):
        matrix = np.array(matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise DimensionError("interferometer must be square, got {}".format(
                matrix.shape
            ))
        error = unitarity_error(matrix)
        if not error < tol:
            raise NonUnitaryError(
                "matrix is not unitary: ||UU^† - I|| = {!r}".format(error)
            )
        if mode_roles is not None and len(mode_roles) != matrix.shape[0]:
            raise DimensionError("{} mode roles for {} modes".format(
                len(mode_roles), matrix.shape[0]
            ))
        self.matrix = matrix
        self.mode_roles = list(mode_roles) if mode_roles is not None else None

    @property
    def size(self):
        return self.matrix.shape[0]

    def with_roles(self, mode_roles):
        return Interferometer(self.matrix, mode_roles)

    def __repr__(self):
        return "Interferometer(K={})".format(self.size)


def unitarity_error(matrix):
    matrix = np.asarray(matrix)
    return float(np.linalg.norm(
        matrix @ matrix.conj().T - np.eye(matrix.shape[0])
    ))


def as_matrix(u):
    if isinstance(u, Interferometer):
        return u.matrix
    return np.asarray(u, dtype=complex)


class DetectionPattern(tuple):
    """
    探测模式，按模式编号排好序的元组，例如 ``(0, 0, 3)`` 表示
    模式 0 有两个光子、模式 3 有一个光子。
    """

    def __new__(cls, clicks):
        clicks = tuple(sorted(int(c) for c in clicks))
        return super(DetectionPattern, cls).__new__(cls, clicks)

    def validate(self, modes, photons=None):
        if any(c < 0 or c >= modes for c in self):
            raise DimensionError("pattern {} has a mode outside 0..{}".format(
                list(self), modes - 1
            ))
        if photons is not None and len(self) != photons:
            raise DimensionError("pattern {} does not hold {} photons".format(
                list(self), photons
            ))
        return self

    def occupation(self):
        return Counter(self)

    @property
    def is_collision_free(self):
        return len(set(self)) == len(self)

    @property
    def multiplicity(self):
        """
        ``∏_k n_k!``。
        """
        return int(np.prod([math.factorial(n) for n in self.occupation().values()]))

    @property
    def label(self):
        return '-'.join(str(c) for c in self)


def enumerate_patterns(modes, photons):
    """
    所有 ``photons`` 个光子落在 ``modes`` 个模式里的探测模式。
    """
    return [
        DetectionPattern(p)
        for p in itertools.combinations_with_replacement(range(modes), photons)
    ]


class IndexMap(object):
    """
    输入信道的行号映射 ``f(m, i) = i + Σ_{m'<m} k_{m'}``（从 0 开始）。

    :param ranks: 每个输入的施密特秩 ``k_m``
    """

    def __init__(self, ranks):
        self.ranks = [int(k) for k in ranks]
        if any(k < 1 for k in self.ranks):
            raise DimensionError("every input needs rank >= 1: {}".format(self.ranks))
        self.offsets = np.concatenate([[0], np.cumsum(self.ranks)]).astype(int)

    @property
    def total(self):
        return int(self.offsets[-1])

    def __call__(self, m, i):
        if not 0 <= m < len(self.ranks):
            raise DimensionError("input {} out of range".format(m))
        if not 0 <= i < self.ranks[m]:
            raise DimensionError("index {} out of range for input {} (k={})".format(
                i, m, self.ranks[m]
            ))
        return int(self.offsets[m] + i)

    def rows(self, inputs):
        if len(inputs) != len(self.ranks):
            raise DimensionError("expected {} indices, got {}".format(
                len(self.ranks), len(inputs)
            ))
        return [self(m, i) for m, i in enumerate(inputs)]

    def block(self, m):
        return slice(int(self.offsets[m]), int(self.offsets[m + 1]))


def _check_index(matrix, *indices):
    rows, cols = matrix.shape
    for name, value, bound in zip('ijkl', indices, (rows, rows, cols, cols)):
        if not 0 <= value < bound:
            raise DimensionError("{}={} out of range 0..{}".format(name, value, bound - 1))


def coeff_two(u, i, j, k, l):
    """
    两光子系数 ``a_{ij,kl} = U_ik U_jl + U_il U_jk``。

    :param u: :class:`Interferometer` 或者矩阵
    :param i: 第一个 cluster 的行号
    :param j: 第二个 cluster 的行号（已经加上 ``k_1`` 的偏移）
    :param k: 输出模式
    :param l: 输出模式，可以等于 ``k``
    """
    matrix = as_matrix(u)
    _check_index(matrix, i, j, k, l)
    return complex(matrix[i, k] * matrix[j, l] + matrix[i, l] * matrix[j, k])


def coeff_multi(u, inputs, pattern, ranks=None):
    """
    M 光子系数 ``a = Σ_{τ∈S_M} ∏_m U_{f(m,i_m), l_τ(m)}``，即子矩阵的积和式。

    :param u: :class:`Interferometer` 或者矩阵
    :param inputs: ``(i_1, ..., i_M)``；给了 ``ranks`` 时是各输入内部的
        施密特下标，否则直接是行号
    :param pattern: 探测模式
    :param ranks: 各输入的 ``k_m``
    """
    matrix = as_matrix(u)
    pattern = DetectionPattern(pattern).validate(matrix.shape[1])
    if len(pattern) != len(inputs):
        raise DimensionError("pattern size {} != photon number {}".format(
            len(pattern), len(inputs)
        ))
    rows = IndexMap(ranks).rows(inputs) if ranks is not None else list(inputs)
    for r in rows:
        if not 0 <= r < matrix.shape[0]:
            raise DimensionError("row {} out of range".format(r))
    return complex(perm(matrix[np.ix_(rows, list(pattern))]))


def amplitude_tensor(rows, ranks, pattern, method='permanent'):
    """
    一次算出所有输入多重下标的系数，返回形状为 ``(k_1, ..., k_M)`` 的张量。

    :param rows: 输入信道对应的 ``Σk_m × K`` 行矩阵
    :param ranks: 各输入的 ``k_m``
    :param pattern: 探测模式
    :param method: ``'permanent'`` 对 S_M 求和；``'pairwise'`` 只用于
        M=2，直接按 ``a_{ij,kl}`` 的公式计算
    """
    index = IndexMap(ranks)
    pattern = list(pattern)
    photons = len(ranks)
    if len(pattern) != photons:
        raise DimensionError("pattern size {} != photon number {}".format(
            len(pattern), photons
        ))
    blocks = [rows[index.block(m)][:, pattern] for m in range(photons)]
    if method == 'pairwise':
        if photons != 2:
            raise DimensionError("pairwise coefficients need exactly two photons")
        first, second = blocks
        return (
            np.outer(first[:, 0], second[:, 1]) +
            np.outer(first[:, 1], second[:, 0])
        )
    if method != 'permanent':
        raise ValueError("unknown method {!r}".format(method))
    total = np.zeros(tuple(index.ranks), dtype=complex)
    for tau in itertools.permutations(range(photons)):
        term = blocks[0][:, tau[0]]
        for m in range(1, photons):
            term = np.multiply.outer(term, blocks[m][:, tau[m]])
        total += term
    return total


class AmplitudeTable(object):
    """
    ``(输入多重下标, 探测模式) -> a`` 的系数表。每个探测模式的张量在
    第一次访问时用 :func:`amplitude_tensor` 算出并缓存。
    """

    def __init__(self, rows, ranks, method='permanent'):
        self.rows = np.asarray(rows, dtype=complex)
        self.ranks = tuple(ranks)
        self.method = method
        self._tensors = {}

    @property
    def modes(self):
        return self.rows.shape[1]

    @property
    def patterns(self):
        return enumerate_patterns(self.modes, len(self.ranks))

    def tensor(self, pattern):
        pattern = DetectionPattern(pattern).validate(self.modes, len(self.ranks))
        if pattern not in self._tensors:
            self._tensors[pattern] = amplitude_tensor(
                self.rows, self.ranks, pattern, method=self.method
            )
        return self._tensors[pattern]

    def __getitem__(self, key):
        multi_index, pattern = key
        return complex(self.tensor(pattern)[tuple(multi_index)])

    def items(self):
        for pattern in self.patterns:
            tensor = self.tensor(pattern)
            for multi_index in np.ndindex(*self.ranks):
                yield (multi_index, pattern), complex(tensor[multi_index])


def born_weight(pattern):
    """
    把系数 ``a`` 换成归一化 Fock 态振幅的因子 ``1/sqrt(∏ n_k!)``。
    无碰撞时为 1，双击同一模式时为 √2/2。
    """
    return 1.0 / math.sqrt(DetectionPattern(pattern).multiplicity)


def oracle_expand(u, rows, convention='symmetrized'):
    """
    直接展开 ``∏_m (Σ_k U_{r_m,k} c_k^†)``，按单项式收集系数。
    和积和式无关，用来独立验证 :func:`coeff_multi`。

    :param u: :class:`Interferometer` 或者矩阵
    :param rows: 每个光子所在的输入行
    :param convention: ``'symmetrized'`` 返回乘上 ``∏n_k!`` 的系数（与
        :func:`coeff_multi` 一致）；``'monomial'`` 返回单项式的原始系数
    :return: ``{DetectionPattern: complex}``
    """
    matrix = as_matrix(u)
    if len(rows) > ORACLE_MAX_PHOTONS or matrix.shape[1] > ORACLE_MAX_MODES:
        raise DimensionError("oracle is limited to {} photons and {} modes".format(
            ORACLE_MAX_PHOTONS, ORACLE_MAX_MODES
        ))
    poly = {(): 1 + 0j}
    for r in rows:
        expanded = defaultdict(complex)
        for monomial, coefficient in poly.items():
            for k in range(matrix.shape[1]):
                key = tuple(sorted(monomial + (k, )))
                expanded[key] += coefficient * matrix[r, k]
        poly = expanded
    result = {}
    for monomial, coefficient in poly.items():
        pattern = DetectionPattern(monomial)
        if convention == 'symmetrized':
            coefficient = coefficient * pattern.multiplicity
        elif convention != 'monomial':
            raise ValueError("unknown convention {!r}".format(convention))
        result[pattern] = complex(coefficient)
    return result


def _dft(size):
    j = np.arange(size)
    return np.exp(2j * np.pi * np.outer(j, j) / size) / np.sqrt(size)


def preset_unitary(name):
    """
    预设的干涉仪：

    * ``qubit-type2-eq8``：qubit type-II fusion 的对角偏振分束器矩阵
    * ``identity-K``：K 维单位矩阵
    * ``dft-K``：K 维离散傅里叶变换
    """
    if name == 'qubit-type2-eq8':
        return Interferometer(0.5 * np.array([
            [1, 1, 1, -1],
            [1, 1, -1, 1],
            [1, -1, 1, 1],
            [-1, 1, 1, 1],
        ], dtype=complex))
    kind, _, size = name.rpartition('-')
    if kind in ('identity', 'dft') and size.isdigit() and int(size) >= 1:
        size = int(size)
        if kind == 'identity':
            return Interferometer(np.eye(size, dtype=complex))
        return Interferometer(_dft(size))
    raise KeyError("unknown preset {!r}".format(name))


def dump_unitary(u):
    """
    文本格式：第一行是 K，之后 K 行，每行 K 对 ``re im``，17 位有效数字。
    """
    matrix = as_matrix(u)
    lines = [str(matrix.shape[0])]
    for row in matrix:
        lines.append(' '.join(
            '{} {}'.format(format_float(x.real), format_float(x.imag)) for x in row
        ))
    return '\n'.join(lines) + '\n'


def load_unitary(text):
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise DimensionError("empty unitary document")
    try:
        size = int(lines[0])
    except ValueError:
        raise DimensionError("first line must be the size K, got {!r}".format(lines[0]))
    if len(lines) != size + 1:
        raise DimensionError("expected {} rows, got {}".format(size, len(lines) - 1))
    matrix = np.zeros((size, size), dtype=complex)
    for r, line in enumerate(lines[1:]):
        try:
            values = [float(x) for x in line.split()]
        except ValueError as e:
            raise DimensionError("row {}: {}".format(r, e))
        if len(values) != 2 * size:
            raise DimensionError("row {} has {} numbers, expected {}".format(
                r, len(values), 2 * size
            ))
        matrix[r] = np.array(values[0::2]) + 1j * np.array(values[1::2])
    return Interferometer(matrix)


def read_unitary(filename):
    with io.open(filename, encoding='utf-8') as f:
        return load_unitary(f.read())


def write_unitary(filename, u):
    with io.open(filename, 'w', encoding='utf-8') as f:
        f.write(dump_unitary(u))
