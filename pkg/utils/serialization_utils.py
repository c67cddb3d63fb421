"""
@FileName: serialization_utils.py
@Description: 序列化工具模块，把分数、numpy 数值、枚举与数据类转换为 JSON 可写出的结构
@Author: HengLine
@Time: 2025/08 - 2026/10
"""
import dataclasses
import json
from enum import Enum
from fractions import Fraction
from typing import Any

import numpy as np


def format_fraction(value: Fraction) -> str:
    """分数写成 "p/q"，整数写成 "p" """
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class SerializationUtils(json.JSONEncoder):
    """序列化工具类，作为 json.dumps 的 cls 使用"""

    def default(self, obj):
        serialized = SerializationUtils.serialize_obj(obj)
        if serialized is obj:
            return super().default(obj)
        return serialized

    @staticmethod
    def serialize_obj(obj: Any) -> Any:
        """序列化单个对象"""
        if obj is None or isinstance(obj, (str, bool, int)):
            return obj
        elif isinstance(obj, float):
            return obj
        elif isinstance(obj, Fraction):
            return format_fraction(obj)
        elif isinstance(obj, Enum):
            return obj.value
        elif isinstance(obj, np.bool_):
            return bool(obj)
        elif isinstance(obj, np.integer):
            return int(obj)
        elif isinstance(obj, np.floating):
            return float(obj)
        elif isinstance(obj, (complex, np.complexfloating)):
            return [float(obj.real), float(obj.imag)]
        elif isinstance(obj, np.ndarray):
            return [SerializationUtils.serialize_obj(item) for item in obj.tolist()]
        elif hasattr(obj, 'to_dict'):
            return SerializationUtils.serialize_obj(obj.to_dict())
        elif dataclasses.is_dataclass(obj) and not isinstance(obj, type):
            return {
                f.name: SerializationUtils.serialize_obj(getattr(obj, f.name))
                for f in dataclasses.fields(obj)
                if not f.name.startswith('_')
            }
        elif isinstance(obj, (list, tuple, set, frozenset)):
            return [SerializationUtils.serialize_obj(item) for item in obj]
        elif isinstance(obj, dict):
            return {str(k): SerializationUtils.serialize_obj(v) for k, v in obj.items()}
        return obj

    @staticmethod
    def dumps(data: Any) -> str:
        """写成带缩进、键有序的 JSON 文本，以换行结尾"""
        return json.dumps(SerializationUtils.serialize_obj(data), indent=2, sort_keys=True,
                          ensure_ascii=False, cls=SerializationUtils) + "\n"


json_encoder = SerializationUtils
