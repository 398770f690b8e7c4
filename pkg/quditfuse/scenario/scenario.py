# -*- coding: utf-8 -*-
from __future__ import absolute_import, unicode_literals

import copy

from quditfuse.exceptions import ConfigError, DimensionError
from quditfuse.fusion import (
    SCHMIDT_TOL, AncillaInput, ClusterInput, interferometer_size, mode_roles
)
from quditfuse.graphstate import AMPLITUDE_CAP, QuditGraph, build_graph_state
from quditfuse.optimize import Objective
from quditfuse.scenario.entries import (
    BoolEntry, FloatEntry, IntEntry, ListEntry, StringEntry
)
from quditfuse.scenario.sources import UnitarySource
from quditfuse.utils import pairs_to_matrix


def _reject_unknown(document, allowed, where):
    if not isinstance(document, dict):
        raise ConfigError("{} must be a mapping".format(where))
    unknown = set(document) - set(allowed)
    if unknown:
        raise ConfigError("unknown keys {} in {}".format(sorted(unknown), where))


class ScenarioConfig(object):
    """
    一个 fusion 场景：cluster、ancilla、真空模式、干涉仪来源和种子。
    构造时完成 schema 校验，未知的键直接拒绝。
    """
    KEYS = ('d', 'clusters', 'ancillae', 'vacuum_pads', 'basis', 'unitary', 'seed')
    CLUSTER_KEYS = ('graph', 'leg', 'name')
    BASES = ('schmidt', 'physical')

    d = IntEntry('d')
    clusters = ListEntry('clusters', [])
    vacuum_pads = IntEntry('vacuum_pads', 0)
    basis = StringEntry('basis', 'schmidt')
    seed = IntEntry('seed', 0)

    def __init__(self, document, base_dir=None):
        _reject_unknown(document, self.KEYS, 'scenario')
        self.document = copy.deepcopy(document)
        self.base_dir = base_dir
        self.validate()

    def validate(self):
        if self.d is None or self.d < 2:
            raise ConfigError("scenario d must be an integer >= 2")
        if not self.clusters:
            raise ConfigError("scenario needs at least one cluster")
        for n, cluster in enumerate(self.clusters):
            _reject_unknown(cluster, self.CLUSTER_KEYS, 'cluster {}'.format(n))
            if 'graph' not in cluster or 'leg' not in cluster:
                raise ConfigError("cluster {} needs a graph and a leg".format(n))
        if self.vacuum_pads < 0:
            raise ConfigError("vacuum_pads must be >= 0")
        if self.seed < 0:
            raise ConfigError("seed must be >= 0")
        if self.basis not in self.BASES:
            raise ConfigError("basis must be one of {}".format(', '.join(self.BASES)))
        ancillae = self.document.get('ancillae', 0)
        if isinstance(ancillae, bool) or not isinstance(ancillae, (int, list)):
            raise ConfigError("ancillae must be a count or a list of states")
        if isinstance(ancillae, int) and ancillae < 0:
            raise ConfigError("ancillae must be >= 0")
        if isinstance(ancillae, list):
            for n, ancilla in enumerate(ancillae):
                _reject_unknown(ancilla, ('state', ), 'ancilla {}'.format(n))
        self.unitary_source.validate()

    @property
    def unitary_source(self):
        return UnitarySource.from_mapping(
            self.document.get('unitary', {'source': 'identity'}), self.base_dir
        )

    def ancilla_states(self):
        ancillae = self.document.get('ancillae', 0)
        if isinstance(ancillae, int):
            return [None] * ancillae
        states = []
        for ancilla in ancillae:
            state = ancilla.get('state')
            if state is None:
                states.append(None)
                continue
            if not isinstance(state, list):
                raise ConfigError("ancilla state must be a list of [re, im] pairs")
            if len(state) != self.d:
                raise ConfigError("ancilla state has {} amplitudes, d={}".format(
                    len(state), self.d
                ))
            try:
                states.append(pairs_to_matrix([state])[0])
            except ValueError as e:
                raise ConfigError("bad ancilla state: {}".format(e))
        return states

    def build_inputs(self, schmidt_tol=SCHMIDT_TOL, cap=AMPLITUDE_CAP):
        """
        :param schmidt_tol: 施密特系数的截断
        :param cap: 图态振幅个数的上限
        :return: :class:`~quditfuse.fusion.ClusterInput` 和
            :class:`~quditfuse.fusion.AncillaInput` 组成的列表
        """
        inputs = []
        try:
            for n, cluster in enumerate(self.clusters):
                graph = QuditGraph.from_mapping(cluster['graph'], d=self.d)
                inputs.append(ClusterInput(
                    build_graph_state(graph, cap=cap), cluster['leg'],
                    name=cluster.get('name') or 'c{}'.format(n + 1), tol=schmidt_tol
                ))
            for n, state in enumerate(self.ancilla_states()):
                inputs.append(AncillaInput(state, d=self.d, name='a{}'.format(n + 1)))
        except DimensionError as e:
            raise ConfigError(str(e))
        return inputs

    def size(self, inputs=None):
        inputs = self.build_inputs() if inputs is None else inputs
        return interferometer_size(inputs, self.vacuum_pads, self.basis)

    def build_unitary(self, inputs=None):
        inputs = self.build_inputs() if inputs is None else inputs
        u = self.unitary_source.build(self.size(inputs), self.seed)
        return u.with_roles(mode_roles(inputs, self.vacuum_pads, self.basis))

    def to_mapping(self):
        return copy.deepcopy(self.document)


class OptimizeConfig(object):
    """
    一次优化（或 trade-off 扫描）的完整描述。
    """
    KEYS = (
        'scenario', 'objective', 'budget', 'restarts', 'seed', 'thresholds',
        'certificate_start', 'search_ancillas'
    )
    OBJECTIVE_KEYS = (
        'mode', 'entropy_threshold', 'residual_threshold', 'success_target'
    )

    budget = IntEntry('budget', 1000)
    restarts = IntEntry('restarts', 1)
    seed = IntEntry('seed', 0)
    thresholds = ListEntry('thresholds')
    certificate_start = BoolEntry('certificate_start', True)
    search_ancillas = BoolEntry('search_ancillas', False)
    mode = StringEntry('objective.mode', 'full-entanglement')
    entropy_threshold = FloatEntry('objective.entropy_threshold', 0.0)
    residual_threshold = FloatEntry('objective.residual_threshold', 1e-8)
    success_target = FloatEntry('objective.success_target')

    def __init__(self, document, scenario):
        _reject_unknown(document, self.KEYS, 'optimisation')
        _reject_unknown(document.get('objective', {}), self.OBJECTIVE_KEYS, 'objective')
        self.document = copy.deepcopy(document)
        if isinstance(scenario, ScenarioConfig):
            self.document['scenario'] = scenario.to_mapping()
        self.scenario = scenario
        self.validate()

    def validate(self):
        if self.budget < 1:
            raise ConfigError("budget must be >= 1 evaluation")
        if self.restarts < 1:
            raise ConfigError("restarts must be >= 1")
        if self.search_ancillas and self.scenario.basis != 'physical':
            raise ConfigError("search_ancillas needs the physical basis")
        if self.thresholds is not None:
            try:
                values = [float(t) for t in self.thresholds]
            except (TypeError, ValueError):
                raise ConfigError("thresholds must be numbers")
            if not values or any(b < a for a, b in zip(values, values[1:])):
                raise ConfigError("thresholds must be a non-empty ascending list")
        self.build_objective().check_dimension(self.scenario.d)

    @property
    def tradeoff(self):
        return self.thresholds is not None

    def build_objective(self):
        mapping = {
            'mode': self.mode,
            'entropy_threshold': self.entropy_threshold,
            'residual_threshold': self.residual_threshold,
        }
        if self.success_target is not None:
            mapping['success_target'] = self.success_target
        return Objective.from_mapping(mapping)

    def to_mapping(self):
        return copy.deepcopy(self.document)

    def __repr__(self):
        return "OptimizeConfig(mode={!r}, budget={}, restarts={}, seed={})".format(
            self.mode, self.budget, self.restarts, self.seed
        )


class VerifyConfig(object):
    """
    定理扫描：``d`` 和 ``ancillae`` 都是列表，每个组合跑 ``trials`` 次。
    """
    KEYS = ('d', 'ancillae', 'trials', 'seed', 'vacuum_pads')

    trials = IntEntry('trials', 100)
    seed = IntEntry('seed', 0)
    vacuum_pads = IntEntry('vacuum_pads', 0)

    def __init__(self, document):
        _reject_unknown(document, self.KEYS, 'verify')
        self.document = copy.deepcopy(document)
        self.validate()

    def _ints(self, key, default, minimum):
        values = self.document.get(key, default)
        if not isinstance(values, list):
            values = [values]
        if not values:
            raise ConfigError("{} must not be empty".format(key))
        for v in values:
            if isinstance(v, bool) or not isinstance(v, int) or v < minimum:
                raise ConfigError("{} must be integers >= {}".format(key, minimum))
        return values

    @property
    def dims(self):
        return self._ints('d', [3], 2)

    @property
    def ancillae(self):
        return self._ints('ancillae', [0], 0)

    def validate(self):
        self._ints('d', [3], 2)
        self._ints('ancillae', [0], 0)
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.vacuum_pads < 0:
            raise ConfigError("vacuum_pads must be >= 0")

    def to_mapping(self):
        mapping = copy.deepcopy(self.document)
        mapping.update(d=self.dims, ancillae=self.ancillae)
        return mapping


class ScanConfig(object):
    """
    Haar 扫描：一个场景，``trials`` 个随机干涉仪。
    """
    KEYS = ('scenario', 'objective', 'trials', 'seed')

    trials = IntEntry('trials', 100)
    seed = IntEntry('seed', 0)

    def __init__(self, document, scenario):
        _reject_unknown(document, self.KEYS, 'haar-scan')
        _reject_unknown(
            document.get('objective', {}), OptimizeConfig.OBJECTIVE_KEYS, 'objective'
        )
        self.document = copy.deepcopy(document)
        self.document['scenario'] = scenario.to_mapping()
        self.scenario = scenario
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        self.build_objective().check_dimension(scenario.d)

    def build_objective(self):
        return Objective.from_mapping(self.document.get('objective', {}))

    def to_mapping(self):
        return copy.deepcopy(self.document)
