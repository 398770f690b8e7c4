# -*- coding: utf-8 -*-
"""
在干涉仪酉矩阵（以及 ancilla 态）上搜索 heralded 成功概率。

候选按 ``(目标值, 光滑代理值)`` 比较，代理值只负责在目标平坦时给出方向，
报告出来的永远是真实目标值。
"""
from __future__ import absolute_import, unicode_literals

import math
from collections import namedtuple

import numpy as np
import six
from scipy.linalg import expm, qr
from scipy.optimize import least_squares

from quditfuse.analysis import RANK_TOL, RESIDUAL_THRESHOLD, OutcomeDiagnostics
from quditfuse.exceptions import ConfigError, DimensionError, TheoremViolation
from quditfuse.fock import Interferometer, as_matrix, preset_unitary
from quditfuse.fusion import (
    AncillaInput, effective_rows, fuse, interferometer_size
)
from quditfuse.logger import logger
from quditfuse.scenario.base import RegistryMetaClass
from quditfuse.utils import derive_seed, parallel_map

__all__ = [
    'HaarSampler', 'UnitaryParams', 'Objective', 'OptimizeResult',
    'haar_sample', 'success_probability', 'optimize', 'tradeoff_curve',
    'haar_scan', 'certificate_unitary'
]

ENTROPY_SLACK = 1e-9
VALUE_TOL = 1e-12
INITIAL_STEP = 0.5
MIN_STEP = 1e-10
# 最大残差低于它的结果交给最小二乘精修
POLISH_RADIUS = 1e-2
POLISH_EVALS_PER_PARAM = 30
ROUTING_TOL = 1e-12


class HaarSampler(object):
    """
    相同的 ``seed`` 给出相同的酉矩阵序列。
    """

    def __init__(self, seed):
        self.seed = int(seed)
        self.rng = np.random.default_rng(self.seed)

    def unitary(self, size):
        z = (
            self.rng.standard_normal((size, size)) +
            1j * self.rng.standard_normal((size, size))
        ) / math.sqrt(2)
        q, r = qr(z)
        phases = np.diag(r)
        return q * (phases / np.abs(phases))


def haar_sample(sampler, K):
    """
    QR 分解复高斯矩阵，再用 R 对角元的相位修正 Q 的列，得到严格的 Haar 分布。
    """
    if K < 1:
        raise DimensionError("K must be >= 1")
    return Interferometer(sampler.unitary(K))


class UnitaryParams(object):
    """
    ``U = U_0 · exp(i H(x))``，``H`` 由 K² 个实数确定：先是 K 个对角元，
    然后依次是上三角部分的实部和虚部。

    :param size: K
    :param base: ``U_0``，默认单位阵
    """

    def __init__(self, size, base=None):
        self.size = size
        self.base = np.eye(size, dtype=complex) if base is None else as_matrix(base)
        if self.base.shape != (size, size):
            raise DimensionError("base unitary is {}, expected {}x{}".format(
                self.base.shape, size, size
            ))
        self._upper = np.triu_indices(size, 1)

    @property
    def count(self):
        return self.size ** 2

    def hermitian(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.count, ):
            raise DimensionError("expected {} parameters, got {}".format(
                self.count, x.shape
            ))
        size, pairs = self.size, len(self._upper[0])
        h = np.diag(x[:size]).astype(complex)
        h[self._upper] = x[size:size + pairs] + 1j * x[size + pairs:]
        h[self._upper[::-1]] = np.conj(h[self._upper])
        return h

    def unitary(self, x):
        return self.base @ expm(1j * self.hermitian(x))

    def interferometer(self, x):
        return Interferometer(self.unitary(x))


class ObjectiveMetaClass(RegistryMetaClass):
    TYPES = {}


@six.add_metaclass(ObjectiveMetaClass)
class Objective(object):
    """
    :param entropy_threshold: 熵阈值（nats）
    :param residual_threshold: 最大纠缠判据 ``||ρ - I/k|| < residual_threshold``
    :param success_target: 只有 ``min-entropy-at-success`` 使用
    """

    def __init__(self, entropy_threshold=0.0, residual_threshold=RESIDUAL_THRESHOLD,
                 success_target=None):
        if entropy_threshold < 0 or residual_threshold < 0:
            raise ConfigError("objective thresholds must be non-negative")
        if success_target is not None and not 0 <= success_target <= 1:
            raise ConfigError("success_target must lie in [0, 1]")
        self.entropy_threshold = float(entropy_threshold)
        self.residual_threshold = float(residual_threshold)
        self.success_target = success_target

    @property
    def mode(self):
        return self.__type__

    @classmethod
    def from_mapping(cls, mapping):
        mapping = dict(mapping)
        mode = mapping.pop('mode', 'full-entanglement')
        try:
            return cls.lookup(mode)(**mapping)
        except TypeError as e:
            raise ConfigError("bad objective {!r}: {}".format(mode, e))

    def to_mapping(self):
        return {
            'mode': self.mode,
            'entropy_threshold': self.entropy_threshold,
            'residual_threshold': self.residual_threshold,
            'success_target': self.success_target,
        }

    def check_dimension(self, d):
        if self.entropy_threshold > math.log(d) + ENTROPY_SLACK:
            raise ConfigError("entropy threshold {!r} exceeds ln {}".format(
                self.entropy_threshold, d
            ))

    def accepts(self, diag):
        if not diag.outcome.relevant or diag.is_null:
            return False
        return min(diag.entropies) >= self.entropy_threshold - ENTROPY_SLACK

    def success(self, diags):
        return float(sum(d.outcome.probability for d in diags if self.accepts(d)))

    def value(self, diags):
        return self.success(diags)

    def surrogate(self, diags):
        raise NotImplementedError()

    def pending(self, diags):
        """
        还没有被接受、但离接受很近的结果，搜索会对它们做局部精修。
        """
        return []

    def __repr__(self):
        return "{}({!r})".format(self.__class__.__name__, self.mode)


def _live(diags):
    return [d for d in diags if d.outcome.relevant and not d.is_null]


class FullEntanglementObjective(Objective):
    """
    ``max-success-at-full-entanglement``：两侧约化密度矩阵都是 ``I/k``。
    """
    __type__ = 'full-entanglement'

    def accepts(self, diag):
        if not diag.outcome.relevant or diag.is_null:
            return False
        return max(diag.residuals) < self.residual_threshold

    def pending(self, diags):
        return [
            d for d in _live(diags)
            if self.residual_threshold <= max(d.residuals) < POLISH_RADIUS
        ]

    def surrogate(self, diags):
        total = 0.0
        for d in _live(diags):
            weight = 1.0
            for rho, residual in zip(d.densities, d.residuals):
                top = math.sqrt((rho.dim - 1.0) / rho.dim) if rho.dim > 1 else 1.0
                weight *= (1 - min(residual / top, 1.0)) ** 2
            total += d.outcome.probability * weight
        return total


class EntropyThresholdObjective(Objective):
    """
    ``max-success-above-entropy-threshold``。
    """
    __type__ = 'entropy-threshold'

    def surrogate(self, diags):
        if self.entropy_threshold <= 0:
            return self.success(diags)
        return float(sum(
            d.outcome.probability * min(min(d.entropies) / self.entropy_threshold, 1.0)
            for d in _live(diags)
        ))


class MinEntropyAtSuccessObjective(Objective):
    """
    ``max-min-entropy-at-fixed-success``：按熵从高到低累积相关结果的概率，
    累积到 ``success_target`` 时最后一个结果的熵就是目标值；
    相关概率总和不够时目标值为 0。
    """
    __type__ = 'min-entropy-at-success'

    def __init__(self, entropy_threshold=0.0, residual_threshold=RESIDUAL_THRESHOLD,
                 success_target=0.5):
        super(MinEntropyAtSuccessObjective, self).__init__(
            entropy_threshold, residual_threshold, success_target
        )
        if success_target is None:
            raise ConfigError("min-entropy-at-success needs a success_target")

    def value(self, diags):
        ranked = sorted(
            ((min(d.entropies), d.outcome.probability) for d in _live(diags)),
            reverse=True
        )
        mass = 0.0
        for entropy, probability in ranked:
            mass += probability
            if mass >= self.success_target - VALUE_TOL:
                return entropy
        return 0.0

    def surrogate(self, diags):
        return float(sum(
            d.outcome.probability * (1 + min(d.entropies)) for d in _live(diags)
        ))


Evaluation = namedtuple('Evaluation', ['value', 'surrogate', 'unitary', 'inputs', 'diags'])


def _diagnostics(inputs, u, vacuum_pads, basis, threads, rank_tol=RANK_TOL):
    rows = effective_rows(inputs, u, vacuum_pads, basis)
    diags = [
        OutcomeDiagnostics(o, rows, rank_tol)
        for o in fuse(inputs, u, vacuum_pads=vacuum_pads, basis=basis, threads=threads)
    ]
    records = [
        {'pattern': d.pattern.label, 'rank': max(d.ranks), 'photons': d.photons}
        for d in diags if not d.is_null and max(d.ranks) > d.photons
    ]
    if records:
        raise TheoremViolation(
            "heralded rank exceeds the number of measured photons", records
        )
    return diags


def evaluate(inputs, u, objective, vacuum_pads=0, basis='schmidt', threads=1):
    diags = _diagnostics(inputs, u, vacuum_pads, basis, threads)
    return Evaluation(
        objective.value(diags), objective.surrogate(diags), u, inputs, diags
    )


def success_probability(u, inputs, objective, vacuum_pads=0, basis='schmidt',
                        threads=1):
    """
    满足 ``objective`` 纠缠判据的结果的总概率。

    :param u: :class:`Interferometer` 或矩阵
    :param inputs: fusion 输入
    :param objective: :class:`Objective`
    """
    return objective.success(_diagnostics(inputs, u, vacuum_pads, basis, threads))


def _better(candidate, best):
    if candidate.value > best.value + VALUE_TOL:
        return True
    return (
        candidate.value >= best.value - VALUE_TOL and
        candidate.surrogate > best.surrogate + VALUE_TOL
    )


TraceRow = namedtuple('TraceRow', ['restart', 'evaluation', 'value', 'best'])


class _BudgetSpent(Exception):
    pass


def _polish_residuals(diags, patterns):
    by_pattern = dict((d.pattern, d) for d in diags)
    parts = []
    for pattern in patterns:
        d = by_pattern[pattern]
        for side, m in enumerate(d.sides):
            k = d.outcome.inputs[m].rank
            if d.is_null:
                delta = np.zeros((k, k))
            else:
                delta = d.densities[side].matrix - np.eye(k) / k
            delta = math.sqrt(d.outcome.probability) * delta
            parts.extend([delta.real.ravel(), delta.imag.ravel()])
    return np.concatenate(parts)


class _Search(object):
    """
    一次 restart：在 ``x = 0`` 附近做坐标 / 模式搜索，步长在一轮没有改进后减半。
    一轮失败后，如果目标给出了接近接受的结果，就用 ``least_squares`` 把这些
    结果的 ``ρ - I/k`` 压到零。
    """

    def __init__(self, inputs, objective, base, vacuum_pads, basis,
                 search_ancillas, threads):
        self.inputs = inputs
        self.objective = objective
        self.params = UnitaryParams(base.shape[0], base)
        self.vacuum_pads = vacuum_pads
        self.basis = basis
        self.threads = threads
        self.ancillae = [
            m for m, inp in enumerate(inputs) if inp.is_ancilla
        ] if search_ancillas else []
        self.dimension = self.params.count + sum(
            2 * inputs[m].leg_dim for m in self.ancillae
        )

    def _inputs(self, x):
        if not self.ancillae:
            return self.inputs
        inputs = list(self.inputs)
        offset = self.params.count
        for m in self.ancillae:
            width = inputs[m].leg_dim
            shift = x[offset:offset + width] + 1j * x[offset + width:offset + 2 * width]
            state = inputs[m].leg_state + shift
            norm = np.linalg.norm(state)
            if norm < 1e-12:
                state, norm = inputs[m].leg_state, 1.0
            inputs[m] = AncillaInput(state / norm, name=inputs[m].name)
            offset += 2 * width
        return inputs

    def evaluate(self, x):
        u = self.params.interferometer(x[:self.params.count])
        return evaluate(
            self._inputs(x), u, self.objective, self.vacuum_pads, self.basis,
            self.threads
        )

    def _try(self, y, limit):
        if self.count >= limit:
            raise _BudgetSpent()
        candidate = self.evaluate(y)
        self.count += 1
        moved = _better(candidate, self.best)
        if moved:
            self.x, self.best = np.array(y, dtype=float), candidate
        self.trace.append(TraceRow(self.restart, self.count, candidate.value, self.best.value))
        return candidate, moved

    def polish(self, budget):
        patterns = [d.pattern for d in self.objective.pending(self.best.diags)]
        if not patterns:
            return False
        before = self.best
        limit = min(budget, self.count + POLISH_EVALS_PER_PARAM * self.dimension)

        def residuals(y):
            candidate, _ = self._try(y, limit)
            return _polish_residuals(candidate.diags, patterns)

        logger.debug(
            "restart %d: polishing %d outcomes at evaluation %d",
            self.restart, len(patterns), self.count
        )
        try:
            least_squares(
                residuals, self.x.copy(), method='trf',
                xtol=1e-15, ftol=1e-15, gtol=1e-15
            )
        except _BudgetSpent:
            pass
        return self.best is not before

    def run(self, restart, budget, step=INITIAL_STEP, min_step=MIN_STEP):
        self.restart, self.count, self.trace = restart, 1, []
        self.x = np.zeros(self.dimension)
        self.best = self.evaluate(self.x)
        self.trace.append(TraceRow(restart, 1, self.best.value, self.best.value))
        polished = None
        try:
            while self.count < budget and step > min_step:
                improved = False
                for i in range(self.dimension):
                    for sign in (1, -1):
                        y = self.x.copy()
                        y[i] += sign * step
                        _, moved = self._try(y, budget)
                        if moved:
                            improved = True
                            break
                if not improved and polished is not self.best:
                    polished = self.best
                    improved = self.polish(budget)
                if not improved:
                    step /= 2
                logger.debug(
                    "restart %d: %d evaluations, value %.6g, step %.3g",
                    restart, self.count, self.best.value, step
                )
            if polished is not self.best:
                self.polish(budget)
        except _BudgetSpent:
            pass
        return self.best, self.trace


class OptimizeResult(object):
    def __init__(self, best_unitary, ancilla_states, value, surrogate, restart,
                 trace, objective):
        self.best_unitary = best_unitary
        self.ancilla_states = ancilla_states
        self.value = value
        self.surrogate = surrogate
        self.restart = restart
        self.trace = trace
        self.objective = objective

    @property
    def evaluations(self):
        return len(self.trace)

    def __iter__(self):
        return iter((self.best_unitary, self.ancilla_states, self.value, self.trace))

    def __repr__(self):
        return "OptimizeResult(mode={!r}, value={!r}, restart={})".format(
            self.objective.mode, self.value, self.restart
        )


def _split(budget, restarts):
    share, extra = divmod(budget, restarts)
    return [share + (1 if r < extra else 0) for r in range(restarts)]


def _qudit_dim(inputs):
    return max(inp.leg_dim for inp in inputs)


def _routes_modes(matrix):
    # 每一行只有一个非零元：光子来源可以从探测模式读出
    return bool(np.all(np.count_nonzero(np.abs(matrix) > ROUTING_TOL, axis=1) == 1))


def certificate_unitary(inputs, vacuum_pads=0, basis='schmidt'):
    """
    已知最优点的起点：两个 Schmidt 秩为 2 的 qubit leg 时，把对角偏振分束器
    放在前四个模式上，其余模式不动。其它场景返回 ``None``。
    """
    if len(inputs) != 2 or any(inp.is_ancilla for inp in inputs):
        return None
    if any(inp.rank != 2 or inp.leg_dim != 2 for inp in inputs):
        return None
    size = interferometer_size(inputs, vacuum_pads, basis)
    matrix = np.eye(size, dtype=complex)
    matrix[:4, :4] = preset_unitary('qubit-type2-eq8').matrix
    return matrix


def optimize(inputs, objective, budget, seed=0, restarts=1, start=None,
             vacuum_pads=0, basis='schmidt', search_ancillas=False, threads=1):
    """
    多次 restart 的无梯度局部搜索。

    :param inputs: fusion 输入
    :param objective: :class:`Objective`
    :param budget: 目标函数调用总次数，平均分给各个 restart
    :param seed: 第 r 个 restart 从 ``HaarSampler(seed + r)`` 出发
    :param restarts: restart 个数
    :param start: 给出且大小匹配时，第 0 个 restart 从这个酉矩阵出发；
        只做模式置换的矩阵（例如单位阵）换成 :func:`certificate_unitary`，
        没有证书时换成 Haar 起点
    :param search_ancillas: 同时搜索 ancilla 态，只能用于 ``physical`` 基
    :param threads: 并行运行 restart 的线程数
    :return: :class:`OptimizeResult`，值相同时取序号最小的 restart
    """
    if budget < 1:
        raise ConfigError("budget must be >= 1 evaluation")
    if restarts < 1:
        raise ConfigError("restarts must be >= 1")
    if search_ancillas and basis != 'physical':
        raise ConfigError("ancilla states only matter in the physical basis")
    objective.check_dimension(_qudit_dim(inputs))
    size = interferometer_size(inputs, vacuum_pads, basis)
    restarts = min(restarts, budget)
    if start is not None:
        start = as_matrix(start)
        if start.shape != (size, size):
            logger.warning(
                "start unitary is %dx%d, the scenario needs %d modes; ignored",
                start.shape[0], start.shape[1], size
            )
            start = None
        elif _routes_modes(start):
            start = certificate_unitary(inputs, vacuum_pads, basis)
            logger.info(
                "start unitary only permutes modes; starting from %s instead",
                "the qubit certificate" if start is not None else "a Haar sample"
            )

    def run(restart):
        if restart == 0 and start is not None:
            base = start
        else:
            base = HaarSampler(derive_seed(seed, restart)).unitary(size)
        search = _Search(
            inputs, objective, base, vacuum_pads, basis, search_ancillas, 1
        )
        return search.run(restart, shares[restart])

    shares = _split(budget, restarts)
    logger.info(
        "optimizing %s over K=%d: budget %d, %d restarts, seed %d",
        objective.mode, size, budget, restarts, seed
    )
    results = parallel_map(run, range(restarts), threads)
    winner, best = 0, results[0][0]
    for restart, (found, _) in enumerate(results):
        if found.value > best.value + VALUE_TOL:
            winner, best = restart, found
    trace = []
    for _, rows in results:
        trace.extend(rows)
    logger.info("best %s value %.12g from restart %d", objective.mode, best.value, winner)
    return OptimizeResult(
        best.unitary,
        [inp.leg_state for inp in best.inputs if inp.is_ancilla],
        best.value, best.surrogate, winner, trace, objective
    )


TradeoffRow = namedtuple('TradeoffRow', ['threshold', 'value', 'restart'])


class TradeoffCurve(object):
    def __init__(self, rows, results):
        self.rows = rows
        self.results = results

    @property
    def monotone(self):
        values = [row.value for row in self.rows]
        return all(b <= a + VALUE_TOL for a, b in zip(values, values[1:]))


def tradeoff_curve(inputs, thresholds, budget, seed=0, restarts=1, start=None,
                   vacuum_pads=0, basis='schmidt', search_ancillas=False, threads=1,
                   residual_threshold=RESIDUAL_THRESHOLD):
    """
    每个熵阈值运行一次 :func:`optimize`，所有阈值使用相同的 restart 起点。
    返回原始值；不单调时只记录一条警告。
    """
    thresholds = [float(t) for t in thresholds]
    if not thresholds:
        raise ConfigError("at least one threshold is required")
    if any(b < a for a, b in zip(thresholds, thresholds[1:])):
        raise ConfigError("thresholds must be ascending")
    rows, results = [], []
    for threshold in thresholds:
        objective = EntropyThresholdObjective(threshold, residual_threshold)
        result = optimize(
            inputs, objective, budget, seed=seed, restarts=restarts, start=start,
            vacuum_pads=vacuum_pads, basis=basis, search_ancillas=search_ancillas,
            threads=threads
        )
        rows.append(TradeoffRow(threshold, result.value, result.restart))
        results.append(result)
    curve = TradeoffCurve(rows, results)
    if not curve.monotone:
        logger.warning(
            "trade-off curve is not monotone: %s",
            ', '.join('%.4g -> %.6g' % (r.threshold, r.value) for r in rows)
        )
    return curve


HaarScanRow = namedtuple('HaarScanRow', [
    'trial', 'seed', 'relevant_probability', 'success_probability', 'max_entropy'
])


class HaarScan(object):
    def __init__(self, rows):
        self.rows = rows

    @property
    def summary(self):
        if not self.rows:
            return {'trials': 0}
        return {
            'trials': len(self.rows),
            'mean_relevant_probability': float(np.mean(
                [r.relevant_probability for r in self.rows]
            )),
            'mean_success_probability': float(np.mean(
                [r.success_probability for r in self.rows]
            )),
            'max_success_probability': max(r.success_probability for r in self.rows),
            'max_entropy': max(r.max_entropy for r in self.rows),
        }


def haar_scan(inputs, trials, seed=0, objective=None, vacuum_pads=0,
              basis='schmidt', threads=1):
    """
    Haar 随机干涉仪上相关概率、成功概率和最大熵的分布。
    """
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    objective = objective or FullEntanglementObjective()
    size = interferometer_size(inputs, vacuum_pads, basis)

    def scan(trial):
        trial_seed = derive_seed(seed, trial)
        u = haar_sample(HaarSampler(trial_seed), size)
        diags = _diagnostics(inputs, u, vacuum_pads, basis, 1)
        live = _live(diags)
        return HaarScanRow(
            trial, trial_seed,
            float(sum(d.outcome.probability for d in diags if d.outcome.relevant)),
            objective.success(diags),
            max((max(d.entropies) for d in live), default=0.0)
        )

    return HaarScan(parallel_map(scan, range(trials), threads))
