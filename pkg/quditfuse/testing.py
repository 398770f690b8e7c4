# -*- coding: utf-8 -*-
from __future__ import absolute_import, unicode_literals

import numpy as np

from quditfuse.analysis import ReducedDensity
from quditfuse.parser import parse_scenario, parse_verify

__all__ = ['LabTest', 'maximally_mixed']


def maximally_mixed(diag):
    """
    把 ``diag`` 第一侧的约化密度矩阵换成 ``I/k``，秩为 k，超过任何 M < k。
    """
    rho = diag.densities[0]
    corrupted = ReducedDensity(
        rho.kept_subsystem, np.eye(rho.dim) / rho.dim, basis=rho.basis
    )
    diag._densities = [corrupted] + diag.densities[1:]
    for name in ('_ranks', '_entropies', '_residuals'):
        if hasattr(diag, name):
            delattr(diag, name)
    return diag


class LabTest(object):
    """
    驱动一个 lab 的测试工具，可以在检查之前注入损坏的约化密度矩阵。

    :param lab: :class:`~quditfuse.lab.BaseLab`
    """

    def __init__(self, lab):
        self._lab = lab

    def inject(self, corrupt=maximally_mixed, pattern=None):
        """
        注册一个 hook，把 ``corrupt`` 作用在匹配 ``pattern`` 的非零结果上，
        ``pattern`` 为空时作用在所有非零结果上。
        """
        def corrupt_hook(diag):
            if diag.is_null:
                return None
            if pattern is not None and list(diag.pattern) != list(pattern):
                return None
            return corrupt(diag)

        self._lab.hook(corrupt_hook)
        return corrupt_hook

    def fuse(self, scenario):
        return self._lab.fuse(parse_scenario(scenario))

    def verify(self, d=3, ancillae=0, trials=1, seed=0):
        return self._lab.verify(parse_verify({
            'd': d, 'ancillae': ancillae, 'trials': trials, 'seed': seed
        }))
