"""
@FileName: spectral_io.py
@Description: 行列式检查的 CSV 输出（pandas）
            逐规模表列: n,d_block,rank,log_det,det,certificate
            特征值表列: n,index,eigenvalue
@Author: HengLine
@Time: 2026/10
"""
import pandas as pd

from soficlab.core.exceptions import InputError
from soficlab.spectral.spectral_det import DetCheckReport
from utils.file_utils import atomic_write_text

DET_COLUMNS = ["n", "d_block", "rank", "log_det", "det", "certificate"]
EIG_COLUMNS = ["n", "index", "eigenvalue"]


def det_frame(report: DetCheckReport) -> pd.DataFrame:
    rows = [[row.n, row.d_block, row.rank, row.log_det, row.det,
             "" if row.certificate is None else str(row.certificate)] for row in report.rows]
    frame = pd.DataFrame(rows, columns=DET_COLUMNS)
    # 缺失的秩保持整数列
    frame["rank"] = frame["rank"].astype("Int64")
    return frame


def eigs_frame(report: DetCheckReport) -> pd.DataFrame:
    """各规模 AA* 的升序特征值；没有稠密谱的规模不出现"""
    frames = []
    for row in report.rows:
        if row.eigs is None:
            continue
        frames.append(pd.DataFrame({"n": row.n, "index": range(len(row.eigs)), "eigenvalue": row.eigs}))
    if not frames:
        raise InputError("no size in this check has a dense spectrum to write")
    return pd.concat(frames, ignore_index=True)[EIG_COLUMNS]


def format_det_csv(report: DetCheckReport) -> str:
    return det_frame(report).to_csv(index=False, lineterminator="\n")


def format_eigs_csv(report: DetCheckReport) -> str:
    return eigs_frame(report).to_csv(index=False, lineterminator="\n", float_format="%.17g")


def write_eigs_csv(report: DetCheckReport, path):
    atomic_write_text(path, format_eigs_csv(report))
