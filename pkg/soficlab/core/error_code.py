"""
@FileName: error_code.py
@Description: 错误码枚举类，定义系统中使用的各种错误代码、消息与命令行退出码
@Author: HengLine
@Time: 2025/08 - 2026/10
"""
from enum import Enum


class ErrorCode(Enum):
    SUCCESS = (0, "操作成功", 0)
    INPUT_ERROR = (1001, "输入参数无效", 1)
    NUMERICAL_ERROR = (2001, "数值计算未收敛或不可行", 2)
    GUARD_REFUSED = (2002, "超出规模保护阈值，拒绝计算", 2)
    INTERNAL_ERROR = (5000, "内部不变量被破坏", 2)

    def __init__(self, code, message, exit_status):
        self._code = code
        self._message = message
        self._exit_status = exit_status

    @property
    def code(self):
        return self._code

    @property
    def message(self):
        return self._message

    @property
    def exit_status(self):
        """命令行退出码：0 成功，1 输入错误，2 数值或保护阈值错误"""
        return self._exit_status

    @classmethod
    def from_code(cls, code):
        for error in cls:
            if error.code == code:
                return error
        return cls.INTERNAL_ERROR
