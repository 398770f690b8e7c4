# -*- coding: utf-8 -*-
from __future__ import absolute_import, unicode_literals


class QuditFuseError(Exception):
    pass


class ConfigError(QuditFuseError):
    pass


class DimensionError(QuditFuseError, ValueError):
    pass


class NumericError(QuditFuseError):
    pass


class NonUnitaryError(NumericError):
    pass


class ZeroProbabilityError(NumericError):
    pass


class TheoremViolation(QuditFuseError):
    """
    定理检查失败。``records`` 保存每一条违反记录 (seed, trial, pattern, check)。
    """

    def __init__(self, message, records=None):
        super(TheoremViolation, self).__init__(message)
        self.records = list(records or [])
