# -*- coding: utf-8 -*-
from __future__ import absolute_import, unicode_literals

import io
import os

from quditfuse.exceptions import ConfigError
from quditfuse.scenario.scenario import (
    OptimizeConfig, ScanConfig, ScenarioConfig, VerifyConfig
)
from quditfuse.utils import is_string, json_loads


def parse_json(text):
    try:
        document = json_loads(text)
    except ValueError as e:
        raise ConfigError("invalid JSON document: {}".format(e))
    if not isinstance(document, dict):
        raise ConfigError("document must be a JSON object")
    return document


def unwrap_report(document):
    """
    如果 ``document`` 是一份 RunReport，返回其中嵌入的配置。
    """
    if 'config' in document and 'command' in document and 'version' in document:
        return document['config']
    return document


def load_document(filename):
    """
    读取一个 JSON 文档（可以是 RunReport）。

    :return: ``(document, base_dir)``，``base_dir`` 用来解析文档里的相对路径
    """
    if not os.path.exists(filename):
        raise ConfigError("{} does not exist".format(filename))
    with io.open(filename, encoding='utf-8') as f:
        document = parse_json(f.read())
    return unwrap_report(document), os.path.dirname(os.path.abspath(filename))


def _mapping(source):
    if is_string(source):
        return unwrap_report(parse_json(source))
    if not isinstance(source, dict):
        raise ConfigError("expected a JSON text or a mapping, got {!r}".format(source))
    return source


def parse_scenario(source, base_dir=None):
    """
    :param source: JSON 文本或 ``dict``
    :return: :class:`~quditfuse.scenario.scenario.ScenarioConfig`
    """
    return ScenarioConfig(_mapping(source), base_dir)


def _scenario_of(document, base_dir):
    scenario = document.get('scenario')
    if scenario is None:
        raise ConfigError("document has no scenario")
    if is_string(scenario):
        path = scenario
        if base_dir and not os.path.isabs(path):
            path = os.path.join(base_dir, path)
        scenario, base_dir = load_document(path)
    return parse_scenario(scenario, base_dir)


def parse_run(source, base_dir=None):
    """
    解析优化文档。只有场景、没有 ``scenario`` 键的文档按默认目标处理。

    :return: :class:`~quditfuse.scenario.scenario.OptimizeConfig`
    """
    document = _mapping(source)
    if 'scenario' not in document and 'd' in document:
        document = {'scenario': document}
    return OptimizeConfig(document, _scenario_of(document, base_dir))


def parse_scan(source, base_dir=None):
    document = _mapping(source)
    if 'scenario' not in document and 'd' in document:
        document = {'scenario': document}
    return ScanConfig(document, _scenario_of(document, base_dir))


def parse_verify(source):
    return VerifyConfig(_mapping(source))
