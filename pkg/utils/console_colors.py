"""
@FileName: console_colors.py
@Description: 控制台日志着色：有 colorama 用 colorama（Windows 下顺带修复控制台），否则退回 ANSI 转义码
@Author: HengLine
@Time: 2025/08 - 2026/10
"""
import logging
import sys

try:
    import colorama
    from colorama import Fore, Style

    LEVEL_COLORS = {
        logging.DEBUG: Fore.CYAN,
        logging.INFO: Fore.GREEN,
        logging.WARNING: Fore.YELLOW,
        logging.ERROR: Fore.RED,
        logging.CRITICAL: Fore.MAGENTA + Style.BRIGHT,
    }
    RESET = Style.RESET_ALL
except ImportError:
    colorama = None
    LEVEL_COLORS = {
        logging.DEBUG: '\033[36m',
        logging.INFO: '\033[32m',
        logging.WARNING: '\033[33m',
        logging.ERROR: '\033[31m',
        logging.CRITICAL: '\033[1;35m',
    }
    RESET = '\033[0m'

_windows_fixed = False


def _fix_windows_console():
    global _windows_fixed
    if not _windows_fixed and sys.platform == 'win32' and colorama is not None:
        colorama.just_fix_windows_console()
    _windows_fixed = True


def stream_supports_color(stream) -> bool:
    """只给终端着色；重定向到文件或管道时输出纯文本"""
    isatty = getattr(stream, 'isatty', None)
    return bool(isatty and isatty())


class ColoredFormatter(logging.Formatter):
    """只给级别名上色，消息本身保持原样"""

    def __init__(self, fmt=None, datefmt=None, style='%', use_color=True):
        super().__init__(fmt=fmt, datefmt=datefmt, style=style)
        self.use_color = use_color

    def format(self, record):
        color = LEVEL_COLORS.get(record.levelno) if self.use_color else None
        if color is None:
            return super().format(record)
        plain = record.levelname
        record.levelname = f"{color}{plain}{RESET}"
        try:
            return super().format(record)
        finally:
            record.levelname = plain


def colored_log_formatter_factory(fmt=None, datefmt=None, style='%', use_color=True) -> logging.Formatter:
    _fix_windows_console()
    return ColoredFormatter(fmt=fmt, datefmt=datefmt, style=style, use_color=use_color)
