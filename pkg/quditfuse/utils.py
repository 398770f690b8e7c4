# -*- coding: utf-8 -*-
from __future__ import absolute_import, unicode_literals

import json
from concurrent.futures import ThreadPoolExecutor
from functools import wraps

import numpy as np
import six

string_types = (six.string_types, six.text_type, six.binary_type)


def cached_property(method):
    prop_name = '_{}'.format(method.__name__)

    @wraps(method)
    def wrapped_func(self, *args, **kwargs):
        if not hasattr(self, prop_name):
            setattr(self, prop_name, method(self, *args, **kwargs))
        return getattr(self, prop_name)

    return property(wrapped_func)


def to_text(value, encoding="utf-8"):
    if isinstance(value, six.text_type):
        return value
    if isinstance(value, six.binary_type):
        return value.decode(encoding)
    return six.text_type(value)


def is_string(value):
    return isinstance(value, string_types)


def format_float(value):
    """
    用 17 位有效数字输出浮点数，保证读回时完全一致。
    """
    return '%.17g' % value


def complex_to_pair(value):
    value = complex(value)
    return [value.real, value.imag]


def pair_to_complex(pair):
    if is_string(pair) or not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise ValueError("{!r} is not a (re, im) pair".format(pair))
    try:
        return complex(float(pair[0]), float(pair[1]))
    except TypeError:
        raise ValueError("{!r} is not a (re, im) pair".format(pair))


def matrix_to_pairs(matrix):
    return [[complex_to_pair(x) for x in row] for row in np.asarray(matrix)]


def pairs_to_matrix(rows):
    return np.array(
        [[pair_to_complex(x) for x in row] for row in rows], dtype=complex
    )


class _NumpyEncoder(json.JSONEncoder):
    def default(self, o):
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.floating):
            return float(o)
        if isinstance(o, (complex, np.complexfloating)):
            return complex_to_pair(o)
        if isinstance(o, np.ndarray):
            return o.tolist()
        return json.JSONEncoder.default(self, o)


def json_loads(s):
    s = to_text(s)
    return json.loads(s)


def json_dumps(d, indent=None):
    return json.dumps(d, cls=_NumpyEncoder, indent=indent, sort_keys=True)


def derive_seed(seed, index):
    """
    每个 trial / restart 使用 ``seed + index``，和调度顺序无关。
    """
    return int(seed) + int(index)


def parallel_map(func, items, threads=1):
    """
    按顺序返回 ``func`` 作用在 ``items`` 上的结果。``threads`` 大于 1 时
    使用线程池，结果顺序不变。

    :param func: 一个只接受一个参数的函数
    :param items: 可迭代对象
    :param threads: 最多使用的线程数
    """
    items = list(items)
    if threads is None or threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(threads, len(items))) as pool:
        return list(pool.map(func, items))
