"""
@FileName: action_io.py
@Description: 有限作用的文本格式读写
            第 1 行 `n d k mode`；接下来 d 行是各生成元的像；再接 n 行，每行一个 k 位标号
@Author: HengLine
@Time: 2026/10
"""
import numpy as np

from soficlab.action.action_core import ActionMode, FiniteAction
from soficlab.core.exceptions import InputError
from utils.file_utils import atomic_write_text


def format_action(action: FiniteAction) -> str:
    lines = [f"{action.n} {action.d} {action.k} {action.mode.value}"]
    for g in action.gens:
        lines.append(" ".join(map(str, g.tolist())))
    if action.k:
        digits = action.labels.astype(np.uint8) + ord("0")
        lines.extend(row.tobytes().decode("ascii") for row in digits)
    else:
        lines.extend([""] * action.n)
    return "\n".join(lines) + "\n"


def _parse_int(token: str, line_no: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise InputError(f"{what} must be an integer, got '{token}'", line_no) from None


def parse_action(text: str) -> FiniteAction:
    """解析作用文本；错误信息带行号"""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise InputError("empty action file", 1)

    header = lines[0].split()
    if len(header) != 4:
        raise InputError("header must be 'n d k mode'", 1)
    n = _parse_int(header[0], 1, "n")
    d = _parse_int(header[1], 1, "d")
    k = _parse_int(header[2], 1, "k")
    mode = ActionMode.parse(header[3])
    if n < 1 or d < 0 or k < 0:
        raise InputError(f"invalid header values n={n} d={d} k={k}", 1)

    gens = []
    for i in range(d):
        line_no = i + 2
        if line_no > len(lines):
            raise InputError(f"missing images of generator {i + 1}", line_no)
        tokens = lines[line_no - 1].split()
        if len(tokens) != n:
            raise InputError(f"generator {i + 1} lists {len(tokens)} images, expected {n}", line_no)
        g = np.array([_parse_int(t, line_no, "image") for t in tokens], dtype=np.int64)
        if g.min(initial=0) < 0 or g.max(initial=0) >= n or not np.all(np.bincount(g, minlength=n) == 1):
            raise InputError(f"generator {i + 1} is not a bijection of 0..{n - 1}", line_no)
        if mode is ActionMode.INVOLUTION and not np.array_equal(g[g], np.arange(n)):
            raise InputError(f"generator {i + 1} is not an involution", line_no)
        gens.append(g)

    label_lines = lines[d + 1:]
    if k == 0:
        label_lines = label_lines or [""] * n
    if len(label_lines) != n:
        raise InputError(f"expected {n} label lines, found {len(label_lines)}", d + 2 + min(len(label_lines), n))
    labels = np.zeros((n, k), dtype=np.uint8)
    for v, raw in enumerate(label_lines):
        line_no = d + 2 + v
        bits = raw.strip()
        if len(bits) != k or set(bits) - {"0", "1"}:
            raise InputError(f"label must be {k} bits, got '{bits}'", line_no)
        if k:
            labels[v] = np.frombuffer(bits.encode("ascii"), dtype=np.uint8) - ord("0")

    return FiniteAction(n, d, k, mode, tuple(gens), labels)


def read_action(path) -> FiniteAction:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return parse_action(f.read())
    except OSError as e:
        raise InputError(f"cannot read action file {path}: {e.strerror}") from None


def write_action(action: FiniteAction, path):
    atomic_write_text(path, format_action(action))
