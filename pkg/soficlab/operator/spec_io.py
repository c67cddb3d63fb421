"""
@FileName: spec_io.py
@Description: 核规格文件：首行 `r d_block`，之后每行 `type_code | word | entries`，
            type_code 为 `*` 表示任意类型；entries 为 d_block² 个按行排列的数，
            可以是整数、分数 p/q、小数或复数 re,im
@Author: HengLine
@Time: 2026/10
"""
from fractions import Fraction

from soficlab.action.action_core import GeneratorWord
from soficlab.core.exceptions import InputError
from soficlab.operator.finite_type import FiniteTypeOperatorSpec
from soficlab.stats.nbhd_stats import NeighborhoodType
from utils.file_utils import atomic_write_text, read_text
from utils.serialization_utils import format_fraction


def _parse_number(token: str, line_no: int):
    try:
        if "," in token:
            re, im = token.split(",")
            return complex(float(re), float(im))
        if "/" in token:
            return Fraction(token)
        try:
            return int(token)
        except ValueError:
            return float(token)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"bad matrix entry '{token}'", line_no) from None


def _format_number(value) -> str:
    if isinstance(value, complex):
        return f"{value.real!r},{value.imag!r}"
    if isinstance(value, Fraction):
        return format_fraction(value)
    if isinstance(value, float):
        return repr(value)
    return str(int(value))


def parse_spec(text: str) -> FiniteTypeOperatorSpec:
    lines = [(no, raw.split("#", 1)[0].strip()) for no, raw in enumerate(text.splitlines(), start=1)]
    lines = [(no, line) for no, line in lines if line]
    if not lines:
        raise InputError("empty spec file", 1)
    header_no, header = lines[0]
    parts = header.split()
    if len(parts) != 2:
        raise InputError("spec header must be 'r d_block'", header_no)
    try:
        r, d_block = int(parts[0]), int(parts[1])
    except ValueError:
        raise InputError("spec header must be two integers", header_no) from None

    table = {}
    for line_no, line in lines[1:]:
        fields = [f.strip() for f in line.split("|")]
        if len(fields) != 3:
            raise InputError("spec line must be 'type_code | word | entries'", line_no)
        try:
            alpha = None if fields[0] == "*" else NeighborhoodType.from_code_string(fields[0])
            w = GeneratorWord.parse(fields[1])
        except InputError as e:
            raise InputError(e.message, line_no) from None
        tokens = fields[2].split()
        if len(tokens) != d_block * d_block:
            raise InputError(f"expected {d_block * d_block} entries, got {len(tokens)}", line_no)
        values = [_parse_number(t, line_no) for t in tokens]
        block = [values[a * d_block:(a + 1) * d_block] for a in range(d_block)]
        if (alpha, w) in table:
            raise InputError(f"duplicate entry for word '{w}'", line_no)
        table[(alpha, w)] = block
    try:
        return FiniteTypeOperatorSpec(r, d_block, table)
    except InputError as e:
        raise InputError(e.message, header_no) from None


def format_spec(spec: FiniteTypeOperatorSpec) -> str:
    lines = [f"{spec.r} {spec.d_block}"]
    for (alpha, w), block in spec.entries():
        entries = " ".join(_format_number(v) for v in block.ravel().tolist())
        lines.append(f"{'*' if alpha is None else alpha.code} | {w} | {entries}")
    return "\n".join(lines) + "\n"


def read_spec(path) -> FiniteTypeOperatorSpec:
    try:
        return parse_spec(read_text(path))
    except OSError as e:
        raise InputError(f"cannot read spec file {path}: {e.strerror}") from None


def write_spec(spec: FiniteTypeOperatorSpec, path):
    atomic_write_text(path, format_spec(spec))
