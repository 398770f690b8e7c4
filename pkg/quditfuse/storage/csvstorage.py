# -*- coding: utf-8 -*-

import csv
import io
import os

from quditfuse.reports import render_csv
from quditfuse.storage import ReportStorage
from quditfuse.utils import is_string, to_text


class CsvStorage(ReportStorage):
    """
    CsvStorage 把表格以 ``<id>.csv`` 的形式写进一个目录。
    读取时返回字符串组成的行，不做类型转换。

    :param directory: 目录名，不存在时会被创建
    """
    suffix = '.csv'

    def get(self, id):
        try:
            with io.open(self.path(id), encoding='utf-8', newline='') as f:
                return list(csv.DictReader(f))
        except IOError:
            return []

    def set(self, id, value):
        """
        :param value: 渲染好的 CSV 文本或者 namedtuple 列表
        """
        if not is_string(value):
            value = render_csv(list(value))
        if not os.path.isdir(self.directory):
            os.makedirs(self.directory)
        with io.open(self.path(id), 'w', encoding='utf-8', newline='') as f:
            f.write(to_text(value))

    def delete(self, id):
        if os.path.exists(self.path(id)):
            os.remove(self.path(id))
