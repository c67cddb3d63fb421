"""
@FileName: stats_io.py
@Description: 邻域统计的 CSV 读写（pandas）
            单点统计列: type_code,count,p_num,p_den
            成对统计列: alpha_code,i,beta_code,count,p_num,p_den
            类型顺序文件: 每行一个类型编码
@Author: HengLine
@Time: 2026/10
"""
from fractions import Fraction
from io import StringIO
from typing import Optional

import pandas as pd

from soficlab.core.exceptions import InputError
from soficlab.stats.nbhd_stats import NeighborhoodType, PairStatVector, StatVector
from utils.file_utils import read_text

STAT_COLUMNS = ["type_code", "count", "p_num", "p_den"]
PAIR_COLUMNS = ["alpha_code", "i", "beta_code", "count", "p_num", "p_den"]
DISTANCE_COLUMNS = ["distance", "ordering_rule", "ordering_length"]


def _count(value, n: Optional[int]) -> str:
    if n is None or not isinstance(value, Fraction):
        return ""
    return str(value * n)


def _as_fraction(value) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value).limit_denominator()


def stat_frame(stat: StatVector, n: Optional[int] = None) -> pd.DataFrame:
    rows = []
    for alpha, value in stat.items():
        p = _as_fraction(value)
        rows.append([alpha.code, _count(value, n), p.numerator, p.denominator])
    return pd.DataFrame(rows, columns=STAT_COLUMNS)


def pair_frame(pair: PairStatVector, n: Optional[int] = None) -> pd.DataFrame:
    rows = []
    for (alpha, i, beta), value in pair.items():
        p = _as_fraction(value)
        rows.append([alpha.code, i, beta.code, _count(value, n), p.numerator, p.denominator])
    return pd.DataFrame(rows, columns=PAIR_COLUMNS)


def format_stat_csv(stat: StatVector, n: Optional[int] = None) -> str:
    return stat_frame(stat, n).to_csv(index=False, lineterminator="\n")


def format_pair_csv(pair: PairStatVector, n: Optional[int] = None) -> str:
    return pair_frame(pair, n).to_csv(index=False, lineterminator="\n")


def _read_frame(source, columns) -> pd.DataFrame:
    try:
        frame = pd.read_csv(source, dtype=str, keep_default_na=False)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise InputError(f"cannot read statistics CSV: {e}") from None
    missing = [c for c in columns if c not in frame.columns]
    if missing:
        raise InputError(f"statistics CSV lacks column(s) {', '.join(missing)}", 1)
    return frame


def _row_fraction(row, line_no: int) -> Fraction:
    try:
        value = Fraction(int(row["p_num"]), int(row["p_den"]))
    except (ValueError, ZeroDivisionError):
        raise InputError(f"bad probability {row['p_num']}/{row['p_den']}", line_no) from None
    return value


def _parse_type(code: str, line_no: int) -> NeighborhoodType:
    try:
        return NeighborhoodType.from_code_string(code)
    except InputError as e:
        raise InputError(e.message, line_no) from None


def read_stat_csv(source) -> StatVector:
    """source 是路径或 CSV 文本的文件对象；第 1 行是表头，数据从第 2 行开始"""
    frame = _read_frame(source, STAT_COLUMNS)
    entries = {}
    radius = None
    for pos, row in enumerate(frame.to_dict("records")):
        line_no = pos + 2
        alpha = _parse_type(row["type_code"], line_no)
        if radius is not None and alpha.r != radius:
            raise InputError("statistics CSV mixes radii", line_no)
        radius = alpha.r
        entries[alpha] = entries.get(alpha, 0) + _row_fraction(row, line_no)
    if radius is None:
        raise InputError("statistics CSV has no rows")
    return StatVector(radius, entries)


def read_pair_csv(source) -> PairStatVector:
    frame = _read_frame(source, PAIR_COLUMNS)
    entries = {}
    r = d = None
    for pos, row in enumerate(frame.to_dict("records")):
        line_no = pos + 2
        alpha = _parse_type(row["alpha_code"], line_no)
        beta = _parse_type(row["beta_code"], line_no)
        r, d = alpha.r, alpha.d
        try:
            i = int(row["i"])
        except ValueError:
            raise InputError(f"bad generator index '{row['i']}'", line_no) from None
        entries[(alpha, i, beta)] = _row_fraction(row, line_no)
    if r is None:
        raise InputError("pair statistics CSV has no rows")
    return PairStatVector(r, d, entries)


def parse_stat_csv(text: str) -> StatVector:
    return read_stat_csv(StringIO(text))


def parse_ordering(text: str) -> list:
    """每行一个类型编码，空行与 # 注释忽略；重复的编码按首次出现的位置算"""
    ordering = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            ordering.append(_parse_type(line, line_no))
    if not ordering:
        raise InputError("ordering file lists no types")
    return ordering


def read_ordering(path) -> list:
    try:
        return parse_ordering(read_text(path))
    except OSError as e:
        raise InputError(f"cannot read ordering {path}: {e.strerror}") from None


def format_ordering(ordering) -> str:
    return "".join(f"{alpha.code}\n" for alpha in ordering)


def format_distance_csv(distance, rule: str, ordering_length: int) -> str:
    frame = pd.DataFrame([[str(distance), rule, ordering_length]], columns=DISTANCE_COLUMNS)
    return frame.to_csv(index=False, lineterminator="\n")
