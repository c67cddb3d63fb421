"""
@FileName: cli_main.py
@Description: 命令行入口：把 RunConfig 分派到各模块，产物原子写出（先写临时文件再重命名），
            异常按 ErrorCode 转成退出码：0 成功，1 输入错误，2 数值或规模保护错误
@Author: HengLine
@Time: 2026/10
"""
import sys
from typing import Optional, Sequence

from soficlab.action.action_core import ActionMode, enumerate_words, sofic_defect, word_pairs
from soficlab.action.action_io import format_action, read_action
from soficlab.build.bernoulli import bernoulli_labeling, cyclic_word_table
from soficlab.build.orbit_extension import oe_add_generator, read_word_rule
from soficlab.build.profinite import build_profinite
from soficlab.build.treeable import build_treeable, rational_round, target_stats_free_involutions
from soficlab.cli.run_config import RunConfig, parse_config
from soficlab.core.error_code import ErrorCode
from soficlab.core.exceptions import InputError, ModeError, SoficLabError
from soficlab.logger import debug, error, info
from soficlab.operator.finite_type import embedding_report, instantiate, negligible_fraction, spec_norm_bound
from soficlab.operator.kernel import hs_norm, moments, op_norm
from soficlab.operator.spec_io import read_spec
from soficlab.spectral.spectral_det import BuilderSpec, det_conjecture_check
from soficlab.spectral.spectral_io import format_det_csv, write_eigs_csv
from soficlab.stats.nbhd_stats import default_ordering, pair_stats, stat_vector, statistical_distance
from soficlab.stats.stats_io import (format_distance_csv, format_pair_csv, format_stat_csv, read_ordering,
                                      read_stat_csv)
from utils.file_utils import atomic_write_text
from utils.log_utils import log_exception
from utils.serialization_utils import SerializationUtils


def _emit(text: str, path: Optional[str]):
    if path:
        atomic_write_text(path, text)
        debug(f"已写出: {path}")
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def _run_gen(config: RunConfig) -> str:
    preset = config.preset
    if preset == "bernoulli-cyclic":
        base = build_profinite("cyclic", config.n)
        action = bernoulli_labeling(base, cyclic_word_table(config.k), config.k, config.seed)
    elif preset == "treeable":
        solution = rational_round(target_stats_free_involutions(config.d, config.r), config.eps)
        action = build_treeable(solution, config.n, config.seed, k=max(config.k, config.r))
    else:
        action = build_profinite(preset, config.n, d=config.d, seed=config.seed, k=config.k,
                                 label_seed=config.label_seed)
    return format_action(action)


def _run_stats(config: RunConfig) -> str:
    action = read_action(config.input)
    stat = stat_vector(action, config.r)
    pair = None
    if config.pairs:
        if action.mode is not ActionMode.INVOLUTION:
            raise ModeError("pair statistics need an involution-mode action")
        pair = pair_stats(action, config.r)
        atomic_write_text(config.pairs, format_pair_csv(pair, action.n))
    if config.format == "csv":
        return format_stat_csv(stat, action.n)
    payload = {"n": action.n, "r": config.r, "stats": stat}
    if pair is not None:
        payload["pairs"] = pair
    return SerializationUtils.dumps(payload)


def _run_dist(config: RunConfig) -> str:
    left, right = read_stat_csv(config.input), read_stat_csv(config.other)
    if config.ordering:
        ordering, rule = read_ordering(config.ordering), "explicit"
    else:
        ordering, rule = default_ordering(left, right), "radius-code"
    distance = statistical_distance(left, right, ordering)
    if config.format == "csv":
        return format_distance_csv(distance, rule, len(ordering))
    return SerializationUtils.dumps({"distance": distance,
                                     "ordering": {"rule": rule, "length": len(ordering)}})


def _run_oe_extend(config: RunConfig) -> str:
    base = read_action(config.input)
    extended, report = oe_add_generator(base, read_word_rule(config.rule), config.eps)
    info(f"轨道等价扩张: 坏点比例 {float(report.bad_ratio):.4g}, 修补 {report.patched} 个")
    if config.report:
        atomic_write_text(config.report, SerializationUtils.dumps(report))
    return format_action(extended)


def _run_op(config: RunConfig) -> str:
    action = read_action(config.input)
    spec = read_spec(config.spec)
    K = instantiate(spec, action)
    payload = {
        "n": action.n,
        "d_block": K.d_block,
        "width": K.width,
        "sup": K.sup,
        "op_norm": op_norm(K),
        "norm_bound": spec_norm_bound(spec),
        "hs_norm": hs_norm(K),
        "negligible_fraction": negligible_fraction(K),
        "moments": moments(K, config.i_max),
    }
    if config.other:
        payload["embedding"] = embedding_report(spec, read_spec(config.other), action)
    return SerializationUtils.dumps(payload)


def _run_det(config: RunConfig) -> str:
    spec = read_spec(config.spec)
    builder = BuilderSpec(config.preset, d=config.d, k=config.k, seed=config.seed)
    report = det_conjecture_check(spec, builder, config.sizes, m_max=config.i_max,
                                  certify=config.certify, keep_eigs=bool(config.eigs))
    if config.eigs:
        write_eigs_csv(report, config.eigs)
    if config.format == "csv":
        return format_det_csv(report)
    return SerializationUtils.dumps(report)


def _run_defect(config: RunConfig) -> str:
    action = read_action(config.input)
    if config.q < 1:
        raise InputError(f"word length bound must be >= 1, got {config.q}")
    relations = enumerate_words(action.d, config.q, action.mode)[1:]
    report = sofic_defect(action, word_pairs(action.d, config.q, action.mode), relations)
    return SerializationUtils.dumps({"n": action.n, "q": config.q, "pairs_tested": len(report.pairs),
                                     "eps_mult": report.eps_mult, "eps_free": report.eps_free})


HANDLERS = {
    "gen": _run_gen,
    "stats": _run_stats,
    "dist": _run_dist,
    "oe-extend": _run_oe_extend,
    "op": _run_op,
    "det": _run_det,
    "defect": _run_defect,
}


def run(config: RunConfig) -> int:
    """执行一条命令，返回退出码"""
    try:
        _emit(HANDLERS[config.command](config), config.output)
    except SoficLabError as e:
        error(f"{config.command}: {e.message}")
        return e.error_code.exit_status
    except Exception:
        log_exception(f"{config.command}: ")
        return ErrorCode.INTERNAL_ERROR.exit_status
    return ErrorCode.SUCCESS.exit_status


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        config = parse_config(sys.argv[1:] if argv is None else list(argv))
    except SoficLabError as e:
        error(e.message)
        return e.error_code.exit_status
    return run(config)
