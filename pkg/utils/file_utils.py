#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@FileName: file_utils.py
@Description: 文件处理工具模块，提供原子写入（先写临时文件再重命名）与文本读取
@Author: HengLine
@Time: 2025/08 - 2026/10
"""
import os
import tempfile
from pathlib import Path


def atomic_write_text(file_path, text: str):
    """
    原子写入文本文件：在目标目录创建临时文件，写完后 os.replace 覆盖目标

    Args:
        file_path: 目标文件路径，父目录不存在时自动创建
        text: 文件内容，按 UTF-8 与 LF 换行写出
    """
    path = Path(file_path)
    path.parent.mkdir(parents=True, exist_ok=True)

    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=str(path.parent))
    try:
        with os.fdopen(fd, 'w', encoding='utf-8', newline='\n') as f:
            f.write(text)
            f.flush()
            os.fsync(f.fileno())
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.remove(tmp_name)
        raise


def read_text(file_path) -> str:
    """读取 UTF-8 文本文件"""
    with open(file_path, 'r', encoding='utf-8') as f:
        return f.read()
