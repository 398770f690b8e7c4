# -*- coding: utf-8 -*-
"""
纠缠诊断与秩上界的数值检查。

:class:`ReducedDensity` 的矩阵采用 ``ρ[a, b] = <φ_a|ρ|φ_b>``；按
``(ρ)_{i1 i2}`` 写出的 ``V^† A V / k_1`` 形式是它的转置。
"""
from __future__ import absolute_import, unicode_literals

import math
from collections import namedtuple

import numpy as np
from scipy.linalg import eigh, eigvalsh, null_space

try:
    from inspect import signature
except ImportError:
    from funcsigs import signature

from quditfuse.exceptions import DimensionError, NumericError, ZeroProbabilityError
from quditfuse.fock import IndexMap
from quditfuse.fusion import (
    FusionOutcome, effective_rows, fuse, herald, interferometer_size,
    pair_cluster_inputs
)
from quditfuse.graphstate import PureState
from quditfuse.logger import logger
from quditfuse.utils import cached_property, derive_seed, parallel_map

__all__ = [
    'ReducedDensity', 'RankCertificate', 'FactorizedForm',
    'OutcomeDiagnostics', 'SweepReport', 'reduced_density', 'entropy',
    'entropy_vector', 'numerical_rank', 'factorized_form',
    'scalar_condition_residual', 'scalar_residual_floor',
    'kernel_certificate', 'diagnose', 'run_checks', 'theorem_sweep'
]

DENSITY_TOL = 1e-12
EIGEN_FLOOR = 1e-14
RANK_TOL = 1e-10
KERNEL_TOL = 1e-9
RESIDUAL_THRESHOLD = 1e-8
SPECTRUM_TOL = 1e-10
FACTORIZED_TOL = 1e-10
ENTROPY_SLACK = 1e-9
PROBABILITY_TOL = 1e-10
ZERO_PROBABILITY = 1e-12
PRODUCT_SCHMIDT_TOL = 1e-6


class ReducedDensity(object):
    """
    约化密度矩阵。构造时检查厄米性、半正定与迹为 1。

    :param kept_subsystem: 保留下来的子系统（label 或输入的名字）
    :param matrix: 方阵
    :param basis: ``'schmidt'`` 或 ``'computational'``
    :param validate: 为 ``False`` 时跳过检查
    """

    def __init__(self, kept_subsystem, matrix, basis='computational',
                 validate=True, tol=DENSITY_TOL):
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise DimensionError("density matrix must be square")
        self.kept_subsystem = kept_subsystem
        self.matrix = matrix
        self.basis = basis
        if validate:
            self._validate(tol)

    def _validate(self, tol):
        if np.max(np.abs(self.matrix - self.matrix.conj().T), initial=0) > tol:
            raise NumericError("density matrix is not Hermitian")
        if abs(np.trace(self.matrix) - 1) > tol:
            raise NumericError("density matrix trace is {!r}".format(
                np.trace(self.matrix)
            ))
        if self.eigenvalues[0] < -tol:
            raise NumericError("density matrix has eigenvalue {!r}".format(
                self.eigenvalues[0]
            ))

    @property
    def dim(self):
        return self.matrix.shape[0]

    @cached_property
    def eigenvalues(self):
        # 升序
        return eigvalsh(0.5 * (self.matrix + self.matrix.conj().T))

    def __repr__(self):
        return "ReducedDensity({!r}, dim={})".format(self.kept_subsystem, self.dim)


def _as_matrix(rho):
    if isinstance(rho, ReducedDensity):
        return rho.matrix
    return np.asarray(rho, dtype=complex)


def _eigenvalues(rho):
    if isinstance(rho, ReducedDensity):
        return rho.eigenvalues
    matrix = _as_matrix(rho)
    return eigvalsh(0.5 * (matrix + matrix.conj().T))


def _density_from_block(block, axis):
    block = np.moveaxis(block, axis, 0)
    block = block.reshape(block.shape[0], -1)
    rho = block @ block.conj().T
    return 0.5 * (rho + rho.conj().T)


def reduced_density(target, keep=0):
    """
    对其余子系统求偏迹。

    :param target: :class:`PureState` 或 :class:`FusionOutcome`
    :param keep: 对 :class:`PureState` 是一个 label 或 label 列表；
        对 :class:`FusionOutcome` 是输入的序号，结果写在该输入的施密特基下
    :return: :class:`ReducedDensity`
    """
    if isinstance(target, FusionOutcome):
        if target.coefficients is None:
            raise ZeroProbabilityError("outcome {} has no heralded state".format(
                list(target.pattern)
            ))
        if not 0 <= keep < len(target.inputs):
            raise DimensionError("unknown input {}".format(keep))
        matrix = _density_from_block(target.coefficients, keep)
        return ReducedDensity(target.inputs[keep].name, matrix, basis='schmidt')
    if not isinstance(target, PureState):
        raise TypeError("{!r} is neither a PureState nor a FusionOutcome".format(target))
    labels = [keep] if not isinstance(keep, (list, tuple)) else list(keep)
    axes = [target.position(label) for label in labels]
    rest = [p for p in range(len(target.subsystems)) if p not in axes]
    tensor = np.transpose(target.tensor(), axes + rest)
    kept = int(np.prod([target.dims[p] for p in axes]))
    matrix = _density_from_block(tensor.reshape(kept, -1), 0)
    return ReducedDensity(labels[0] if len(labels) == 1 else tuple(labels), matrix)


def entropy(rho, base=None):
    """
    冯·诺依曼熵 ``-Tr ρ ln ρ``，只计入大于 1e-14 的本征值。

    :param base: 只用于显示，例如传 ``d`` 得到以 d 为底的数值
    """
    values = _eigenvalues(rho)
    values = values[values > EIGEN_FLOOR]
    result = float(-np.sum(values * np.log(values)))
    if base is not None:
        result /= math.log(base)
    return result


def numerical_rank(rho, tol=RANK_TOL):
    """
    大于 ``tol * λ_max`` 的本征值个数。
    """
    values = _eigenvalues(rho)
    if values.size == 0 or values[-1] <= 0:
        return 0
    return int(np.count_nonzero(values > tol * values[-1]))


def scalar_condition_residual(rho, k1=None):
    """
    ``||ρ - I/k_1||_F``，只有最大纠缠时为 0。
    """
    matrix = _as_matrix(rho)
    k1 = matrix.shape[0] if k1 is None else k1
    if matrix.shape[0] != k1:
        raise DimensionError("rho is {0}x{0}, k1={1}".format(matrix.shape[0], k1))
    return float(np.linalg.norm(matrix - np.eye(k1) / k1))


def scalar_residual_floor(k, r):
    """
    秩不超过 ``r`` 的 k×k 密度矩阵到 ``I/k`` 的最小 Frobenius 距离。
    最优点是 r 个本征值都取 1/r。
    """
    r = min(r, k)
    return math.sqrt(r * (1.0 / r - 1.0 / k) ** 2 + (k - r) / float(k * k))


def entropy_vector(outcome):
    """
    每个非 ancilla 输入各自的约化熵。
    """
    return [
        entropy(reduced_density(outcome, m))
        for m, inp in enumerate(outcome.inputs) if not inp.is_ancilla
    ]


FactorizedForm = namedtuple('FactorizedForm', ['V', 'A', 'error'])


def factorized_form(u, pattern, inputs, vacuum_pads=0, basis='schmidt'):
    """
    对 M=2 的无碰撞结果 ``(k, l)`` 构造 ``ρ = V^† A V / k_1``。

    ``V`` 的第 s 列是 ``(α_s U_sk, α_s U_sl)``，
    ``A = [[X_ll, X_lk], [X_kl, X_kk]]``，
    ``X_{k'l'} = (k_1/N²) Σ_j β_j² U*_{jk'} U_{jl'}``。

    :return: :class:`FactorizedForm`，``error`` 是重建误差
    """
    if len(inputs) != 2:
        raise DimensionError("factorized form needs exactly two inputs")
    outcome = herald(inputs, u, pattern, vacuum_pads=vacuum_pads, basis=basis)
    if not outcome.relevant:
        raise DimensionError("pattern {} is a collision".format(list(outcome.pattern)))
    if outcome.coefficients is None:
        raise ZeroProbabilityError("pattern {} has zero probability".format(
            list(outcome.pattern)
        ))
    return _factorized(outcome, effective_rows(inputs, u, vacuum_pads, basis))


def _factorized(outcome, rows):
    inputs = outcome.inputs
    k, l = outcome.pattern
    index = IndexMap([inp.rank for inp in inputs])
    first, second = rows[index.block(0)], rows[index.block(1)]
    alphas, betas = inputs[0].alphas, inputs[1].alphas
    k1 = inputs[0].rank
    n2 = outcome.norm_factor ** 2

    def x(a, b):
        return k1 / n2 * np.sum(betas ** 2 * second[:, a].conj() * second[:, b])

    v = np.vstack([alphas * first[:, k], alphas * first[:, l]])
    a = np.array([[x(l, l), x(l, k)], [x(k, l), x(k, k)]])
    rho = reduced_density(outcome, 0).matrix.T
    error = float(np.linalg.norm(rho - v.conj().T @ a @ v / k1))
    return FactorizedForm(v, a, error)


class RankCertificate(object):
    """
    核空间证书：``D = span{α ⊙ U[:, l_m]}``，``D^⊥`` 中的每个向量 z 都满足
    ``ρz = 0``，所以 ``dim ker ρ >= k_1 - M``。
    """

    def __init__(self, spanning_vectors, kernel_vectors, kernel_dimension_lower_bound,
                 numerical_rank, tolerance, max_residual):
        self.spanning_vectors = spanning_vectors
        self.kernel_vectors = kernel_vectors
        self.kernel_dimension_lower_bound = kernel_dimension_lower_bound
        self.numerical_rank = numerical_rank
        self.tolerance = tolerance
        self.max_residual = max_residual

    @property
    def holds(self):
        return (
            self.kernel_vectors.shape[1] >= self.kernel_dimension_lower_bound and
            self.max_residual < self.tolerance and
            self.numerical_rank <= self.spanning_vectors.shape[1]
        )


def kernel_certificate(outcome, rows, keep=0, tol=KERNEL_TOL, rank_tol=RANK_TOL):
    """
    为 ``outcome`` 在第 ``keep`` 个输入上的约化密度矩阵构造核空间证书。

    :param rows: :func:`~quditfuse.fusion.effective_rows` 的结果
    """
    inp = outcome.inputs[keep]
    index = IndexMap([i.rank for i in outcome.inputs])
    block = rows[index.block(keep)][:, list(outcome.pattern)]
    spanning = inp.alphas[:, None] * block
    kernel = null_space(spanning.conj().T)
    rho = reduced_density(outcome, keep)
    residuals = [np.linalg.norm(rho.matrix @ z) for z in kernel.T]
    return RankCertificate(
        spanning, kernel, max(inp.rank - outcome.photons, 0),
        numerical_rank(rho, rank_tol), tol, float(max(residuals, default=0.0))
    )


class OutcomeDiagnostics(object):
    """
    一个结果的全部诊断量，按需计算。

    :param outcome: :class:`FusionOutcome`
    :param rows: 这次 fusion 使用的行矩阵
    """

    def __init__(self, outcome, rows, rank_tol=RANK_TOL):
        self.outcome = outcome
        self.rows = rows
        self.rank_tol = rank_tol
        self.sides = [
            m for m, inp in enumerate(outcome.inputs) if not inp.is_ancilla
        ]

    @property
    def pattern(self):
        return self.outcome.pattern

    @property
    def photons(self):
        return self.outcome.photons

    @property
    def is_null(self):
        return self.outcome.is_null

    @cached_property
    def densities(self):
        return [reduced_density(self.outcome, m) for m in self.sides]

    @property
    def rho(self):
        return self.densities[0]

    @property
    def rho_other(self):
        return self.densities[1] if len(self.densities) > 1 else None

    @cached_property
    def ranks(self):
        return [numerical_rank(r, self.rank_tol) for r in self.densities]

    @property
    def rank(self):
        return self.ranks[0]

    @cached_property
    def entropies(self):
        return [entropy(r) for r in self.densities]

    @property
    def entropy(self):
        return self.entropies[0]

    @cached_property
    def residuals(self):
        return [scalar_condition_residual(r) for r in self.densities]

    @property
    def residual(self):
        return self.residuals[0]

    @property
    def residual_other(self):
        return self.residuals[1] if len(self.residuals) > 1 else float('nan')

    @property
    def second_schmidt_coefficient(self):
        values = self.rho.eigenvalues
        return math.sqrt(max(values[-2], 0.0)) if values.size > 1 else 0.0

    @cached_property
    def certificates(self):
        return [
            kernel_certificate(self.outcome, self.rows, m, rank_tol=self.rank_tol)
            for m in self.sides
        ]

    @cached_property
    def entropy_vector(self):
        return list(self.entropies)

    @cached_property
    def factorized_error(self):
        if len(self.outcome.inputs) != 2 or not self.outcome.relevant:
            return None
        return _factorized(self.outcome, self.rows).error


def diagnose(outcome, rows, inputs=None, rank_tol=RANK_TOL):
    """
    :param rows: 产生 ``outcome`` 的 :func:`~quditfuse.fusion.effective_rows`
    :param inputs: 给出时检查 ``outcome`` 确实来自这些输入
    """
    if inputs is not None and tuple(inputs) != outcome.inputs:
        raise DimensionError("outcome was produced by other inputs")
    if outcome.is_null:
        raise ZeroProbabilityError("outcome {} has no heralded state".format(
            list(outcome.pattern)
        ))
    return OutcomeDiagnostics(outcome, rows, rank_tol)


# outcome checks，返回 None 表示通过，返回字符串表示违反

def check_rank_bound(diag):
    if max(diag.ranks) > diag.photons:
        return "rank {} exceeds {} measured photons".format(max(diag.ranks), diag.photons)


def check_entropy_bound(diag):
    for s, r in zip(diag.entropies, diag.ranks):
        if r and s > math.log(r) + ENTROPY_SLACK:
            return "entropy {!r} exceeds ln(rank={})".format(s, r)


def check_spectra_match(diag):
    if len(diag.densities) != 2:
        return
    a, b = (np.sort(r.eigenvalues)[::-1] for r in diag.densities)
    size = max(a.size, b.size)
    a = np.pad(a, (0, size - a.size))
    b = np.pad(b, (0, size - b.size))
    gap = float(np.max(np.abs(a - b)))
    if gap > SPECTRUM_TOL:
        return "spectra across the cut differ by {!r}".format(gap)


def check_kernel_certificate(diag):
    for m, cert in zip(diag.sides, diag.certificates):
        if cert.kernel_dimension_lower_bound and not cert.holds:
            return "kernel certificate fails on input {}: {} vectors, residual {!r}".format(
                m, cert.kernel_vectors.shape[1], cert.max_residual
            )


def check_collision_product(diag):
    if diag.photons == 2 and len(diag.sides) == 2 and not diag.outcome.relevant:
        if diag.rank != 1:
            return "collision outcome has rank {}".format(diag.rank)


def check_factorized_form(diag):
    if len(diag.outcome.inputs) != 2 or not diag.outcome.relevant:
        return
    form = _factorized(diag.outcome, diag.rows)
    if form.error > FACTORIZED_TOL:
        return "factorized form error {!r}".format(form.error)
    if diag.rank > np.linalg.matrix_rank(form.A):
        return "rank(rho) > rank(A)"


# run checks，作用在一次 fusion 的全部诊断上

def check_probability_conservation(diags):
    total = sum(d.outcome.probability for d in diags)
    if abs(total - 1) > PROBABILITY_TOL:
        return "outcome probabilities sum to {!r}".format(total)


def _two_cluster_pairs(diags):
    return [
        d for d in diags
        if d.photons == 2 and len(d.sides) == 2
    ]


def check_product_probability(diags):
    pairs = _two_cluster_pairs(diags)
    if not pairs:
        return
    collisions = sum(d.outcome.probability for d in pairs if not d.outcome.relevant)
    if collisions > ZERO_PROBABILITY:
        return
    if any(d.rank > 1 for d in pairs if d.outcome.relevant and not d.is_null):
        return "product-state probability is zero"


def check_vanishing_collision(diags):
    pairs = _two_cluster_pairs(diags)
    vanishing = set(
        d.pattern[0] for d in pairs
        if not d.outcome.relevant and d.outcome.probability < ZERO_PROBABILITY
    )
    for d in pairs:
        if d.outcome.relevant and not d.is_null and vanishing & set(d.pattern):
            if d.second_schmidt_coefficient > PRODUCT_SCHMIDT_TOL:
                return "p_kk = 0 but outcome {} is entangled".format(list(d.pattern))


def check_no_maximal_entanglement(diags):
    for d in _two_cluster_pairs(diags):
        if not d.outcome.relevant or d.is_null:
            continue
        for rho, residual in zip(d.densities, d.residuals):
            if rho.dim > 2 and residual < RESIDUAL_THRESHOLD:
                return "outcome {} is maximally entangled with k={}".format(
                    list(d.pattern), rho.dim
                )


DEFAULT_CHECKS = {
    'outcome': [
        check_rank_bound, check_entropy_bound, check_spectra_match,
        check_kernel_certificate, check_collision_product,
        check_factorized_form,
    ],
    'run': [
        check_probability_conservation, check_product_probability,
        check_vanishing_collision, check_no_maximal_entanglement,
    ],
}


def _argc(func):
    return len(signature(func).parameters.keys())


TrialContext = namedtuple('TrialContext', ['d', 'ancillae', 'trial', 'seed', 'unitary'])

SweepRow = namedtuple('SweepRow', [
    'd', 'ancillae', 'trial', 'seed', 'pattern', 'probability', 'relevant',
    'rank', 'entropy', 'residual', 'residual_other'
])


class SweepReport(object):
    """
    :func:`theorem_sweep` 的结果：逐结果的行、汇总统计以及违反记录。
    """

    def __init__(self, d, ancillae, trials, seed, rows, violations):
        self.d = d
        self.ancillae = ancillae
        self.trials = trials
        self.seed = seed
        self.rows = rows
        self.violations = violations

    @property
    def passed(self):
        return not self.violations

    @cached_property
    def summary(self):
        live = [r for r in self.rows if r.rank is not None]
        relevant = [r for r in live if r.relevant]
        return {
            'd': self.d,
            'ancillae': self.ancillae,
            'trials': self.trials,
            'seed': self.seed,
            'outcomes': len(self.rows),
            'max_rank': max((r.rank for r in live), default=0),
            'max_entropy': max((r.entropy for r in live), default=0.0),
            'min_residual': min((r.residual for r in relevant), default=float('nan')),
            'violations': len(self.violations),
        }


def run_checks(diags, checks=None, hooks=(), context=None):
    """
    先用 ``hooks`` 替换诊断，再对每个非零结果跑 outcome checks，最后对整次
    fusion 跑 run checks。

    :return: ``(diags, failures)``，``failures`` 的每一项是
        ``(check 名, pattern 或 None, 说明)``
    """
    checks = checks or DEFAULT_CHECKS
    for hook in hooks:
        diags = [hook(*[diag, context][:_argc(hook)]) or diag for diag in diags]
    failures = []
    for diag in diags:
        if diag.is_null:
            continue
        for check in checks.get('outcome', []):
            message = check(*[diag, context][:_argc(check)])
            if message:
                failures.append((check.__name__, diag.pattern.label, message))
    for check in checks.get('run', []):
        message = check(*[diags, context][:_argc(check)])
        if message:
            failures.append((check.__name__, None, message))
    return diags, failures


def _run_trial(inputs, d, ancillae, trial, seed, vacuum_pads, checks, hooks, rank_tol):
    from quditfuse.optimize import HaarSampler, haar_sample

    trial_seed = derive_seed(seed, trial)
    size = interferometer_size(inputs, vacuum_pads)
    u = haar_sample(HaarSampler(trial_seed), size)
    rows = effective_rows(inputs, u, vacuum_pads)
    context = TrialContext(d, ancillae, trial, trial_seed, u)
    diags, failures = run_checks(
        [
            OutcomeDiagnostics(o, rows, rank_tol)
            for o in fuse(inputs, u, vacuum_pads=vacuum_pads)
        ],
        checks, hooks, context
    )
    violations = [
        {
            'd': d, 'ancillae': ancillae, 'trial': trial, 'seed': trial_seed,
            'pattern': pattern, 'check': name, 'detail': message,
        } for name, pattern, message in failures
    ]
    table = []
    for diag in diags:
        live = not diag.is_null
        table.append(SweepRow(
            d, ancillae, trial, trial_seed, diag.pattern.label,
            diag.outcome.probability, diag.outcome.relevant,
            diag.rank if live else None, diag.entropy if live else None,
            diag.residual if live else None, diag.residual_other if live else None
        ))
    return table, violations


def theorem_sweep(d, ancillae=0, trials=1, seed=0, vacuum_pads=0, checks=None,
                  hooks=(), threads=1, rank_tol=RANK_TOL):
    """
    在 Haar 随机干涉仪上检查秩上界以及相关性质。
    第 t 个 trial 使用种子 ``seed + t``，与线程调度无关。

    :param d: qudit 维数
    :param ancillae: ancilla 个数，测得光子数 M = 2 + ancillae
    :param trials: trial 个数
    :param seed: 基础种子
    :param checks: ``{'outcome': [...], 'run': [...]}``，默认
        :data:`DEFAULT_CHECKS`
    :param hooks: 在检查之前作用在每个诊断上的函数
    :return: :class:`SweepReport`
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    checks = checks or DEFAULT_CHECKS
    inputs = pair_cluster_inputs(d, ancillae)
    results = parallel_map(
        lambda t: _run_trial(
            inputs, d, ancillae, t, seed, vacuum_pads, checks, hooks, rank_tol
        ),
        range(trials), threads
    )
    rows, violations = [], []
    for table, found in results:
        rows.extend(table)
        violations.extend(found)
    for v in violations:
        logger.error(
            "violation d=%s ancillae=%s trial=%s seed=%s pattern=%s %s: %s",
            v['d'], v['ancillae'], v['trial'], v['seed'], v['pattern'],
            v['check'], v['detail']
        )
    report = SweepReport(d, ancillae, trials, seed, rows, violations)
    logger.info(
        "sweep d=%d ancillae=%d trials=%d: max rank %d, %d violations",
        d, ancillae, trials, report.summary['max_rank'], len(violations)
    )
    return report
