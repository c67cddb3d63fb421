"""
@FileName: log_utils.py
@Description: 日志工具模块，把当前异常的类型、信息与堆栈帧写入日志
@Author: HengLine
@Time: 2025/08 - 2026/10
"""
import sys
import traceback
from datetime import datetime

from soficlab.logger import error, debug


def log_exception(context: str = ""):
    """记录当前正在处理的异常；堆栈帧只在 DEBUG 级别输出"""
    exc_type, exc_value, exc_tb = sys.exc_info()
    if exc_type is None:
        return

    error(f"{context}异常类型: {exc_type.__name__}, 异常信息: {exc_value}, 发生时间: {datetime.now()}")

    for i, frame in enumerate(traceback.extract_tb(exc_tb)):
        debug(f"{i + 1}. 文件: {frame.filename} 行号: {frame.lineno} 函数: {frame.name} 代码: {frame.line}")
