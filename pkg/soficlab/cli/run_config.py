"""
@FileName: run_config.py
@Description: 命令行运行配置：argparse 解析结果规整成 RunConfig，一次运行只由这些参数与根种子决定
@Author: HengLine
@Time: 2026/10
"""
import argparse
from dataclasses import dataclass, field
from typing import Optional

from soficlab.core.exceptions import InputError

COMMANDS = ("gen", "stats", "dist", "oe-extend", "op", "det", "defect")
GEN_PRESETS = ("cyclic", "torus", "free-random", "bernoulli-cyclic", "treeable")
DET_PRESETS = ("cyclic", "torus", "free-random", "bernoulli-cyclic")
OUTPUT_FORMATS = ("csv", "text")


@dataclass
class RunConfig:
    command: str
    input: Optional[str] = None
    output: Optional[str] = None
    seed: int = 0
    r: int = 1
    q: int = 3
    i_max: int = 4
    eps: float = 1e-3
    sizes: tuple = ()
    format: str = "text"
    # gen / det
    preset: Optional[str] = None
    n: int = 0
    d: int = 2
    k: int = 0
    label_seed: Optional[int] = None
    # 其它输入文件
    other: Optional[str] = None
    spec: Optional[str] = None
    rule: Optional[str] = None
    pairs: Optional[str] = None
    report: Optional[str] = None
    ordering: Optional[str] = None
    eigs: Optional[str] = None
    certify: bool = True
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InputError(f"unknown command '{self.command}'")
        if self.format not in OUTPUT_FORMATS:
            raise InputError(f"unknown output format '{self.format}'")
        if not 0 <= self.seed < 2 ** 64:
            raise InputError(f"seed must fit in 64 bits, got {self.seed}")


class _RaisingParser(argparse.ArgumentParser):
    """参数错误按输入错误处理（退出码 1），而不是 argparse 默认的 2"""

    def error(self, message):
        raise InputError(message)


def _sizes(text: str) -> tuple:
    try:
        sizes = tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"sizes must be comma-separated integers, got '{text}'") from None
    if not sizes or min(sizes) < 1:
        raise argparse.ArgumentTypeError(f"sizes must be positive, got '{text}'")
    return sizes


def _common(sub: argparse.ArgumentParser, default_format: str = "text"):
    sub.add_argument("--output", "-o", help="输出文件；缺省写到标准输出")
    sub.add_argument("--seed", type=int, default=0, help="64 位根种子")
    sub.add_argument("--format", choices=OUTPUT_FORMATS, default=default_format)


def build_parser() -> argparse.ArgumentParser:
    parser = _RaisingParser(prog="soficlab", description="有限 sofic 逼近实验室")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=_RaisingParser)

    gen = subparsers.add_parser("gen", help="构造有限作用")
    _common(gen)
    gen.add_argument("--preset", choices=GEN_PRESETS, required=True)
    gen.add_argument("--n", type=int, required=True, help="顶点数（treeable 为规模提示）")
    gen.add_argument("--d", type=int, default=2)
    gen.add_argument("--k", type=int, default=0)
    gen.add_argument("--label-seed", type=int, default=None)
    gen.add_argument("--r", type=int, default=1, help="treeable 目标统计的半径")
    gen.add_argument("--eps", type=float, default=1e-3, help="treeable 有理舍入精度")

    stats = subparsers.add_parser("stats", help="r-邻域类型统计")
    _common(stats, default_format="csv")
    stats.add_argument("--input", "-i", required=True)
    stats.add_argument("--r", type=int, required=True)
    stats.add_argument("--pairs", help="另外写出 (α, i, β) 对统计的 CSV（只适用于对合模式）")

    dist = subparsers.add_parser("dist", help="两个统计 CSV 的统计距离")
    _common(dist)
    dist.add_argument("--input", "-i", required=True)
    dist.add_argument("--other", required=True)
    dist.add_argument("--ordering", help="类型顺序文件（每行一个类型编码）；缺省按 (半径, 编码) 排序两侧支撑的并")

    oe = subparsers.add_parser("oe-extend", help="按字规则添加一个生成元")
    _common(oe)
    oe.add_argument("--input", "-i", required=True)
    oe.add_argument("--rule", required=True)
    oe.add_argument("--eps", type=float, default=0.0, help="规则所依据的元参数 ε")
    oe.add_argument("--report", help="扩张报告（JSON）的输出路径")

    op = subparsers.add_parser("op", help="有限型算子的实例化与迹矩")
    _common(op)
    op.add_argument("--input", "-i", required=True)
    op.add_argument("--spec", required=True)
    op.add_argument("--other", help="第二个核规格，给出嵌入缺陷报告")
    op.add_argument("--i-max", type=int, default=4)

    det = subparsers.add_parser("det", help="行列式猜想的逐规模检查")
    _common(det)
    det.add_argument("--spec", required=True)
    det.add_argument("--preset", choices=DET_PRESETS, required=True)
    det.add_argument("--sizes", type=_sizes, required=True)
    det.add_argument("--d", type=int, default=2)
    det.add_argument("--k", type=int, default=0)
    det.add_argument("--i-max", type=int, default=4)
    det.add_argument("--eigs", help="把每个规模 AA* 的特征值写成 CSV")
    det.add_argument("--no-certify", dest="certify", action="store_false",
                     help="跳过精确证书（规模记入 uncertified_sizes）")

    defect = subparsers.add_parser("defect", help="sofic 缺陷")
    _common(defect)
    defect.add_argument("--input", "-i", required=True)
    defect.add_argument("--q", type=int, default=3, help="字长上限")
    return parser


def parse_config(argv) -> RunConfig:
    args = vars(build_parser().parse_args(argv))
    command = args.pop("command")
    known = {f for f in RunConfig.__dataclass_fields__ if f not in ("command", "extra")}
    values = {key: value for key, value in args.items() if key in known}
    extra = {key: value for key, value in args.items() if key not in known}
    return RunConfig(command=command, extra=extra, **values)
