# -*- coding: utf-8 -*-

import io
import os

from quditfuse.storage import ReportStorage
from quditfuse.utils import json_dumps, json_loads, to_text


class JsonStorage(ReportStorage):
    """
    JsonStorage 把报告以 ``<id>.json`` 的形式写进一个目录。

    :param directory: 目录名，不存在时会被创建
    """
    suffix = '.json'

    def get(self, id):
        """
        根据 id 读取报告。

        :param id: 报告的 id
        :return: 报告的 ``dict``，文件不存在时返回空的 ``dict``
        """
        try:
            with io.open(self.path(id), encoding='utf-8') as f:
                return json_loads(f.read())
        except IOError:
            return {}

    def set(self, id, value):
        """
        根据 id 写入报告。

        :param value: 渲染好的 JSON 文本或者一个 ``dict``
        """
        if isinstance(value, dict):
            value = json_dumps(value, indent=2) + '\n'
        if not os.path.isdir(self.directory):
            os.makedirs(self.directory)
        with io.open(self.path(id), 'w', encoding='utf-8') as f:
            f.write(to_text(value))

    def delete(self, id):
        if os.path.exists(self.path(id)):
            os.remove(self.path(id))
