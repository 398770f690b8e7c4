# -*- coding: utf-8 -*-
from __future__ import absolute_import, unicode_literals

from collections import OrderedDict

from quditfuse.analysis import (
    DEFAULT_CHECKS, OutcomeDiagnostics, run_checks, theorem_sweep
)
from quditfuse.config import Config, ConfigAttribute
from quditfuse.fusion import effective_rows, fuse, total_probability
from quditfuse.optimize import haar_scan, optimize, tradeoff_curve
from quditfuse.reports import OutcomeRow, RunReport
from quditfuse.storage.csvstorage import CsvStorage
from quditfuse.storage.jsonstorage import JsonStorage
from quditfuse.utils import matrix_to_pairs

try:
    from inspect import signature
except ImportError:
    from funcsigs import signature

__all__ = ['BaseLab', 'QuditLab']

_DEFAULT_CONFIG = dict(
    THREADS=1,
    AMPLITUDE_CAP=2 ** 24,
    RANK_TOL=1e-10,
    PROBABILITY_FLOOR=1e-14,
    SCHMIDT_TOL=1e-12,
    LOG_LEVEL="info"
)

FORMATS = ('json', 'csv', 'both')


class BaseLab(object):
    """
    BaseLab 是整个应用的核心对象，负责维护定理检查和 hook，并驱动
    fuse / verify / optimize / haar-scan 四种运行。

    :param logger: 用来输出 log 的 logger，如果是 ``None``，将使用 quditfuse.logger
    :param config: 用来设置的 :class:`quditfuse.config.Config` 对象
    """
    check_types = ['outcome', 'run']

    threads = ConfigAttribute("THREADS")
    rank_tol = ConfigAttribute("RANK_TOL")
    probability_floor = ConfigAttribute("PROBABILITY_FLOOR")

    def __init__(self, logger=None, config=None, **kwargs):
        self._checks = dict((k, list(DEFAULT_CHECKS[k])) for k in self.check_types)
        self._hooks = []

        if logger is None:
            import quditfuse.logger
            logger = quditfuse.logger.logger
        self.logger = logger

        if config is None:
            self.config = Config(_DEFAULT_CONFIG)
            self.config.from_mapping(kwargs)
        else:
            self.config = config

    def check(self, f):
        """
        为每一个非零结果添加一个检查的装饰器。检查函数接受
        ``(diag[, context])``，返回字符串表示违反。
        """
        self.add_check(f, type='outcome')
        return f

    def run_check(self, f):
        """
        为每一次 fusion 的全部结果添加一个检查的装饰器。检查函数接受
        ``(diags[, context])``。
        """
        self.add_check(f, type='run')
        return f

    def hook(self, f):
        """
        在检查之前作用在每个诊断上的装饰器。返回值不为空时替换原来的诊断。
        """
        if not callable(f):
            raise ValueError("{} is not callable".format(f))
        self._hooks.append(f)
        return f

    def add_check(self, func, type='outcome'):
        """
        为 BaseLab 实例添加一个检查。

        :param func: 要作为检查的方法。
        :param type: ``'outcome'`` 或 ``'run'``。
        """
        if not callable(func):
            raise ValueError("{} is not callable".format(func))
        if type not in self._checks:
            raise ValueError("unknown check type {!r}".format(type))
        if len(signature(func).parameters) > 2:
            raise ValueError("{} takes more than two arguments".format(func))
        self._checks[type].append(func)

    def get_checks(self, type):
        return list(self._checks.get(type, []))

    @property
    def checks(self):
        return dict((k, self.get_checks(k)) for k in self.check_types)

    def build_inputs(self, scenario):
        return scenario.build_inputs(
            schmidt_tol=self.config["SCHMIDT_TOL"], cap=self.config["AMPLITUDE_CAP"]
        )

    def outcome_rows(self, inputs, u, vacuum_pads=0, basis='schmidt'):
        """
        对一个干涉仪做 fusion，返回 ``(表格, 诊断, 违反记录)``。
        """
        outcomes = fuse(
            inputs, u, vacuum_pads=vacuum_pads, basis=basis, threads=self.threads,
            floor=self.probability_floor
        )
        rows = effective_rows(inputs, u, vacuum_pads, basis)
        diags, failures = run_checks(
            [OutcomeDiagnostics(o, rows, self.rank_tol) for o in outcomes],
            self.checks, self._hooks
        )
        table = []
        for diag in diags:
            o = diag.outcome
            if diag.is_null:
                table.append(OutcomeRow(
                    o.pattern.label, o.probability, o.relevant, None, None, None, None
                ))
            else:
                table.append(OutcomeRow(
                    o.pattern.label, o.probability, o.relevant, diag.rank,
                    diag.entropy, diag.residual, diag.residual_other
                ))
        violations = [
            {'pattern': pattern, 'check': name, 'detail': message}
            for name, pattern, message in failures
        ]
        return table, diags, violations

    def fuse(self, scenario):
        """
        运行一个场景，给出每个结果的概率、熵、秩和残差。

        :param scenario: :class:`~quditfuse.scenario.scenario.ScenarioConfig`
        :return: :class:`~quditfuse.reports.RunReport`
        """
        inputs = self.build_inputs(scenario)
        u = scenario.build_unitary(inputs)
        table, diags, violations = self.outcome_rows(
            inputs, u, scenario.vacuum_pads, scenario.basis
        )
        live = [r for r in table if r.rank is not None]
        summary = {
            'modes': u.size,
            'photons': len(inputs),
            'outcomes': len(table),
            'total_probability': total_probability(d.outcome for d in diags),
            'relevant_probability': sum(r.probability for r in table if r.relevant),
            'vacuum_click_probability': sum(
                d.outcome.probability for d in diags if d.outcome.vacuum_clicks
            ),
            'max_rank': max((r.rank for r in live), default=0),
            'max_entropy': max((r.entropy for r in live), default=0.0),
            'violations': len(violations),
        }
        self.logger.info(
            "fuse: %d outcomes, relevant probability %.12g, max rank %d",
            len(table), summary['relevant_probability'], summary['max_rank']
        )
        return RunReport(
            'fuse', scenario.to_mapping(), OrderedDict(outcomes=table), summary,
            seed=scenario.seed, extra={'unitary': matrix_to_pairs(u.matrix)},
            violations=violations
        )

    def verify(self, verify):
        """
        对 ``d`` 和 ancilla 个数的每个组合运行 :func:`~quditfuse.analysis.theorem_sweep`。

        :param verify: :class:`~quditfuse.scenario.scenario.VerifyConfig`
        """
        rows, violations, runs = [], [], []
        for d in verify.dims:
            for ancillae in verify.ancillae:
                report = theorem_sweep(
                    d, ancillae, trials=verify.trials, seed=verify.seed,
                    vacuum_pads=verify.vacuum_pads, checks=self.checks,
                    hooks=self._hooks, threads=self.threads, rank_tol=self.rank_tol
                )
                rows.extend(report.rows)
                violations.extend(report.violations)
                runs.append(report.summary)
        summary = {'runs': runs, 'violations': len(violations)}
        return RunReport(
            'verify', verify.to_mapping(), OrderedDict(sweep=rows), summary,
            seed=verify.seed, violations=violations
        )

    def optimize(self, run):
        """
        :param run: :class:`~quditfuse.scenario.scenario.OptimizeConfig`
        """
        scenario = run.scenario
        inputs = self.build_inputs(scenario)
        start = scenario.build_unitary(inputs).matrix if run.certificate_start else None
        options = dict(
            seed=run.seed, restarts=run.restarts, start=start,
            vacuum_pads=scenario.vacuum_pads, basis=scenario.basis,
            search_ancillas=run.search_ancillas, threads=self.threads
        )
        if run.tradeoff:
            curve = tradeoff_curve(
                inputs, run.thresholds, run.budget,
                residual_threshold=run.residual_threshold, **options
            )
            summary = {
                'thresholds': len(curve.rows),
                'monotone': curve.monotone,
                'best_value': max(row.value for row in curve.rows),
            }
            return RunReport(
                'optimize', run.to_mapping(), OrderedDict(tradeoff=curve.rows),
                summary, seed=run.seed
            )

        result = optimize(inputs, run.build_objective(), run.budget, **options)
        best_inputs = list(inputs)
        states = iter(result.ancilla_states)
        for m, inp in enumerate(inputs):
            if inp.is_ancilla:
                best_inputs[m] = type(inp)(next(states), name=inp.name)
        table, _, violations = self.outcome_rows(
            best_inputs, result.best_unitary, scenario.vacuum_pads, scenario.basis
        )
        summary = {
            'mode': result.objective.mode,
            'value': result.value,
            'restart': result.restart,
            'evaluations': result.evaluations,
        }
        extra = {
            'best_unitary': matrix_to_pairs(result.best_unitary.matrix),
            'ancilla_states': [
                matrix_to_pairs([s])[0] for s in result.ancilla_states
            ],
        }
        return RunReport(
            'optimize', run.to_mapping(),
            OrderedDict([('trace', result.trace), ('outcomes', table)]),
            summary, seed=run.seed, extra=extra, violations=violations
        )

    def haar_scan(self, scan):
        """
        :param scan: :class:`~quditfuse.scenario.scenario.ScanConfig`
        """
        scenario = scan.scenario
        result = haar_scan(
            self.build_inputs(scenario), scan.trials, seed=scan.seed,
            objective=scan.build_objective(), vacuum_pads=scenario.vacuum_pads,
            basis=scenario.basis, threads=self.threads
        )
        return RunReport(
            'haar-scan', scan.to_mapping(), OrderedDict(scan=result.rows),
            result.summary, seed=scan.seed
        )

    def save(self, report, directory, format='both', entropy_base=None):
        """
        把报告写进 ``directory``：``<command>.json`` 和每张表一个
        ``<command>-<table>.csv``。

        :return: 写入的文件路径列表
        """
        if format not in FORMATS:
            raise ValueError("format must be one of {}".format(', '.join(FORMATS)))
        written = []
        if format in ('json', 'both'):
            storage = JsonStorage(directory)
            storage[report.command] = report.render_json(entropy_base)
            written.append(storage.path(report.command))
        if format in ('csv', 'both'):
            storage = CsvStorage(directory)
            for name in report.tables:
                id = '{}-{}'.format(report.command, name)
                storage[id] = report.render_csv(name, entropy_base)
                written.append(storage.path(id))
        for path in written:
            self.logger.info("wrote %s", path)
        return written


class QuditLab(BaseLab):
    """
    QuditLab 在 BaseLab 的基础上从环境变量读取配置，``QUDITFUSE_THREADS``
    会覆盖 ``THREADS``。
    """

    def __init__(self, logger=None, config=None, environ=None, **kwargs):
        super(QuditLab, self).__init__(logger=logger, config=config, **kwargs)
        self.config.from_env(environ=environ)
