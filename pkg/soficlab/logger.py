# -*- coding: utf-8 -*-
"""
@FileName: logger.py
@Description: 全局日志：控制台（stderr，彩色）+ 按天分文件的运行日志（单文件大小上限，过期自动清理）
            标准输出只留给命令行产物，日志从不写 stdout
@Author: HengLine
@Time: 2025/08 - 2026/10
"""

import datetime
import logging
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Optional

from utils.console_colors import colored_log_formatter_factory, stream_supports_color

LOG_FORMAT = '%(asctime)s [%(levelname)s] %(name)s: %(message)s'

# 第三方库的调试输出只会淹没运行记录
NOISY_LOGGERS = ('matplotlib', 'numba', 'sympy', 'PIL')


def _level(name, default=logging.INFO) -> int:
    value = logging.getLevelName(str(name).upper())
    return value if isinstance(value, int) else default


class DailyRotatingFileHandler(RotatingFileHandler):
    """
    运行日志文件：<log_dir>/<name>_YYYY-MM-DD.log，
    当天文件超过 max_bytes 时改写 <name>_YYYY-MM-DD_<n>.log，超过 max_days 天的旧文件启动时删除
    """

    def __init__(self, log_dir: str, name: str, max_bytes: int = 10 * 1024 * 1024, max_days: int = 15):
        self.log_dir = Path(log_dir)
        self.log_dir.mkdir(parents=True, exist_ok=True)
        self.name_prefix = f"{name}_"
        self.max_days = max_days
        self.day = datetime.date.today()
        # _next_path 需要先知道大小上限，父类构造函数还没运行
        self.maxBytes = max_bytes
        super().__init__(str(self._next_path()), maxBytes=max_bytes, backupCount=0,
                         encoding='utf-8', delay=True)
        self._purge_expired()

    def _next_path(self) -> Path:
        stem = f"{self.name_prefix}{self.day:%Y-%m-%d}"
        path, n = self.log_dir / f"{stem}.log", 0
        while path.exists() and path.stat().st_size >= self.maxBytes:
            n += 1
            path = self.log_dir / f"{stem}_{n}.log"
        return path

    def shouldRollover(self, record) -> bool:
        if datetime.date.today() != self.day:
            return True
        return super().shouldRollover(record) == 1

    def doRollover(self):
        # 不做 .1/.2 重命名，直接换到新文件
        if self.stream:
            self.stream.close()
            self.stream = None
        self.day = datetime.date.today()
        self.baseFilename = str(self._next_path())

    def _purge_expired(self):
        cutoff = self.day - datetime.timedelta(days=self.max_days)
        for path in self.log_dir.glob(f"{self.name_prefix}*.log"):
            stamp = path.stem[len(self.name_prefix):][:10]
            try:
                if datetime.datetime.strptime(stamp, '%Y-%m-%d').date() < cutoff:
                    path.unlink()
            except (ValueError, OSError):
                continue


class Logger:
    """soficlab 日志器，级别与开关来自 settings.logging"""

    def __init__(self, name: str = 'soficlab', log_dir: Optional[str] = None):
        # 延迟导入：config_utils 自身也要在日志器就绪前可用
        from utils.config_utils import get_log_dir, get_logging_config
        config = get_logging_config()
        base_level = _level(config.get('level', 'INFO'))

        self.logger = logging.getLogger(name)
        self.logger.propagate = False
        self.logger.setLevel(logging.DEBUG)
        self.logger.handlers.clear()

        console = logging.StreamHandler(sys.stderr)
        console.setLevel(_level(config.get('console_level', 'WARNING'), base_level))
        console.setFormatter(colored_log_formatter_factory(LOG_FORMAT, use_color=stream_supports_color(sys.stderr)))
        self.logger.addHandler(console)

        if config.get('file_enabled', True):
            self._attach_file_handler(name, log_dir or get_log_dir(),
                                      _level(config.get('file_level', 'INFO'), base_level))

        if config.get('disable_unnecessary_logs', True):
            for noisy in NOISY_LOGGERS:
                logging.getLogger(noisy).setLevel(logging.WARNING)

    def _attach_file_handler(self, name: str, log_dir: str, level: int):
        try:
            handler = DailyRotatingFileHandler(log_dir, name)
        except OSError as e:
            # 只读目录：只保留控制台
            self.logger.warning(f"无法创建日志目录 {log_dir}，仅输出到控制台: {e}")
            return
        handler.setLevel(level)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        self.logger.addHandler(handler)

    def debug(self, message: str):
        self.logger.debug(message)

    def info(self, message: str):
        self.logger.info(message)

    def warning(self, message: str):
        self.logger.warning(message)

    def error(self, message: str):
        self.logger.error(message)

    def critical(self, message: str):
        self.logger.critical(message)


logger = Logger(name="soficlab")


def debug(message: str):
    logger.debug(message)


def info(message: str):
    logger.info(message)


def warning(message: str):
    logger.warning(message)


def error(message: str):
    logger.error(message)


def critical(message: str):
    logger.critical(message)
