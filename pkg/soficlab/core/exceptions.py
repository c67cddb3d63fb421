"""
@FileName: exceptions.py
@Description: 异常层次结构，每类异常携带一个 ErrorCode，命令行据此给出退出码
@Author: HengLine
@Time: 2026/10
"""
from typing import Any, Optional

from soficlab.core.error_code import ErrorCode


class SoficLabError(Exception):
    """所有库内异常的基类"""
    error_code = ErrorCode.INTERNAL_ERROR

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class InputError(SoficLabError):
    """参数或输入文件无效；line_no 指出出错的行"""
    error_code = ErrorCode.INPUT_ERROR

    def __init__(self, message: str, line_no: Optional[int] = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class ModeError(InputError):
    """作用模式不符（free / involution）"""


class GuardRefusedError(SoficLabError):
    """超出规模保护阈值；achieved 保存已完成的部分结果"""
    error_code = ErrorCode.GUARD_REFUSED

    def __init__(self, message: str, achieved: Any = None):
        super().__init__(message)
        self.achieved = achieved


class NumericalError(SoficLabError):
    """迭代未收敛；estimate 保存最后的估计值"""
    error_code = ErrorCode.NUMERICAL_ERROR

    def __init__(self, message: str, estimate: Any = None):
        super().__init__(message)
        self.estimate = estimate


class FeasibilityError(NumericalError):
    """有理数舍入在允许的细化次数内没有得到非负解"""


class InvariantViolation(SoficLabError):
    """断言的数学不变量不成立"""
    error_code = ErrorCode.INTERNAL_ERROR
