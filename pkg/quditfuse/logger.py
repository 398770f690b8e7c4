# -*- coding:utf-8 -*-

import contextlib
import logging
import sys
import time

import six

try:
    import curses

    assert curses
except ImportError:
    curses = None

logger = logging.getLogger("QuditFuse")

# curses 颜色编号
LEVEL_COLORS = {
    logging.DEBUG: 4,
    logging.INFO: 2,
    logging.WARNING: 3,
    logging.ERROR: 1,
    logging.CRITICAL: 5,
}


def _supports_color(stream):
    if not curses or not hasattr(stream, 'isatty') or not stream.isatty():
        return False
    try:
        curses.setupterm()
        return curses.tigetnum("colors") > 0
    except curses.error:
        return False


def enable_pretty_logging(logger, level='info', stream=None):
    """
    按照配置开启 log 的格式化优化。同一个 logger 只会装一个 handler，
    重复调用只修改等级。

    :param logger: 配置的 logger 对象
    :param level: 等级名，例如 ``'info'`` 或者 ``'debug'``；也可以是数字
    :param stream: 输出流，默认为 ``sys.stderr``
    """
    if isinstance(level, six.string_types):
        level = getattr(logging, level.upper())
    logger.setLevel(level)

    if logger.handlers:
        return logger
    stream = stream or sys.stderr
    channel = logging.StreamHandler(stream)
    channel.setFormatter(_LogFormatter(color=_supports_color(stream)))
    logger.addHandler(channel)
    return logger


class _LogFormatter(logging.Formatter):
    """
    ``[L yymmdd HH:MM:SS module:lineno] message``，多行消息和异常
    堆栈缩进四格。
    """

    def __init__(self, color, *args, **kwargs):
        logging.Formatter.__init__(self, *args, **kwargs)
        self._colors = {}
        self._normal = ''
        if color:
            setaf = curses.tigetstr("setaf") or curses.tigetstr("setf") or b""
            self._colors = dict(
                (lvl, six.ensure_text(curses.tparm(setaf, code), "ascii"))
                for lvl, code in LEVEL_COLORS.items()
            )
            self._normal = six.ensure_text(curses.tigetstr("sgr0") or b"", "ascii")

    def _prefix(self, record):
        stamp = time.strftime("%y%m%d %H:%M:%S", self.converter(record.created))
        prefix = '[{} {} {}:{}]'.format(
            record.levelname[:1], stamp, record.module, record.lineno
        )
        if self._colors:
            prefix = self._colors.get(record.levelno, self._normal) + prefix + self._normal
        return prefix

    def format(self, record):
        try:
            message = record.getMessage()
        except Exception as e:
            message = "Bad message (%r): %r" % (e, record.__dict__)
        lines = [self._prefix(record) + " " + message]
        if record.exc_info and not record.exc_text:
            record.exc_text = self.formatException(record.exc_info)
        if record.exc_text:
            lines.append(record.exc_text)
        return "\n".join(line.rstrip() for line in lines).replace("\n", "\n    ")


@contextlib.contextmanager
def timed(logger, label, level=logging.INFO):
    """
    记录一段计算所用的时间。只用于日志，不会进入任何数值结果。

    :param logger: 用来输出 log 的 logger
    :param label: 这段计算的名字，例如 ``'verify'``
    """
    start = time.perf_counter()
    logger.log(level, "%s started", label)
    try:
        yield
    finally:
        logger.log(level, "%s finished in %.3fs", label, time.perf_counter() - start)
