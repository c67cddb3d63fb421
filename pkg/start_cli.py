#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@FileName: start_cli.py
@Description: soficlab 命令行启动脚本
    用法：
        python start_cli.py gen --preset cyclic --n 100 --k 4 --seed 7 -o c100.action
        python start_cli.py stats -i c100.action --r 2 -o c100.csv
        python start_cli.py det --spec laplacian.spec --preset cyclic --sizes 100,200,400
@Author: HengLine
@Time: 2026/10
"""
import os
import sys

# 项目根目录
PROJECT_ROOT = os.path.dirname(os.path.abspath(__file__))

# 添加项目根目录到Python路径
sys.path.append(PROJECT_ROOT)

from soficlab.cli.cli_main import main

if __name__ == "__main__":
    sys.exit(main())
