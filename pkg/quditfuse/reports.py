# -*- coding: utf-8 -*-
from __future__ import absolute_import, unicode_literals

import csv
import io
import math
from collections import namedtuple

import numpy as np
import six

from quditfuse.utils import format_float, is_string, json_dumps, to_text

ENTROPY_FIELDS = ('entropy', 'max_entropy', 'min_entropy')


def renderable_named_tuple(typename, field_names):
    """
    可以直接渲染为一行 CSV 的 namedtuple。
    """
    class TMP(namedtuple(typename=typename, field_names=field_names)):

        @property
        def args(self):
            return dict(zip(self._fields, self))

        def render(self):
            return render_csv([self])

    TMP.__name__ = typename
    return TMP


OutcomeRow = renderable_named_tuple('OutcomeRow', [
    'pattern', 'probability', 'relevant', 'rank', 'entropy', 'residual',
    'residual_other'
])


def _plain(value):
    """
    把数值结果转成可以写进 JSON 的值；NaN 写成 ``null``。
    """
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return None if math.isnan(value) or math.isinf(value) else value
    if isinstance(value, dict):
        return dict((k, _plain(v)) for k, v in value.items())
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def _cell(value):
    if value is None:
        return ''
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (float, np.floating)):
        return '' if math.isnan(value) else format_float(value)
    if is_string(value):
        return to_text(value)
    return six.text_type(value)


def _scale(row, entropy_base):
    if not entropy_base:
        return row
    scale = math.log(entropy_base)
    return row._replace(**dict(
        (f, getattr(row, f) / scale) for f in ENTROPY_FIELDS
        if f in row._fields and getattr(row, f) is not None
    ))


def render_csv(rows, entropy_base=None):
    """
    第一行是字段名，之后每个 namedtuple 一行；浮点数使用 17 位有效数字。
    """
    output = io.StringIO()
    writer = csv.writer(output, lineterminator='\n')
    if rows:
        writer.writerow(rows[0]._fields)
    for row in rows:
        writer.writerow([_cell(v) for v in _scale(row, entropy_base)])
    return output.getvalue()


class RunReport(object):
    """
    一次运行的全部结果：配置原样回显，加上表格、汇总、版本和种子。
    用回显的配置重新运行，会得到相同的数值。

    :param command: 子命令名，例如 ``'fuse'``
    :param config: 可以重新运行的配置 ``dict``
    :param tables: 表名到 namedtuple 列表的映射
    :param summary: 汇总统计
    :param seed: 这次运行使用的种子
    :param extra: 其他要写进 JSON 的结果，例如最优酉矩阵
    :param violations: 定理检查的违反记录
    """

    def __init__(self, command, config, tables, summary, seed=0, extra=None,
                 violations=None):
        from quditfuse import __version__
        self.command = command
        self.config = config
        self.tables = tables
        self.summary = summary
        self.seed = seed
        self.extra = extra or {}
        self.violations = list(violations or [])
        self.version = __version__

    @property
    def passed(self):
        return not self.violations

    @property
    def table(self):
        return next(iter(self.tables.values())) if self.tables else []

    def as_dict(self, entropy_base=None):
        document = {
            'command': self.command,
            'version': self.version,
            'seed': self.seed,
            'config': self.config,
            'summary': _plain(self.summary),
            'tables': dict(
                (name, [_plain(_scale(row, entropy_base)._asdict()) for row in rows])
                for name, rows in self.tables.items()
            ),
            'violations': _plain(self.violations),
        }
        if entropy_base:
            document['entropy_base'] = entropy_base
        document.update(_plain(self.extra))
        return document

    def render_json(self, entropy_base=None):
        return json_dumps(self.as_dict(entropy_base), indent=2) + '\n'

    def render_csv(self, name=None, entropy_base=None):
        rows = self.tables[name] if name is not None else self.table
        return render_csv(rows, entropy_base)

    def __repr__(self):
        return "RunReport(command={!r}, tables={}, violations={})".format(
            self.command, sorted(self.tables), len(self.violations)
        )
