# 配置工具模块，统一管理配置获取
"""
@FileName: config_utils.py
@Description: 配置文件处理工具，负责加载、解析和获取配置信息
            数值容差、规模保护阈值、日志与路径配置均由 configs/config.json 提供
@Author: HengLine
@Time: 2025/08 - 2026/10
"""
import copy
import json
import logging
import os

# 与 soficlab.logger 共用同名日志器，避免循环导入
_log = logging.getLogger("soficlab")

# 全局配置变量
_config = None

_DEFAULT_CONFIG = {
    'paths': {
        'log_dir': 'logs'
    },
    'settings': {
        'logging': {
            'level': 'INFO',
            'console_level': 'WARNING',
            'file_level': 'INFO',
            'file_enabled': True,
            'disable_unnecessary_logs': True
        },
        'numeric': {
            'zero_tol_factor': 1e-8,
            'power_iter_max': 5000,
            'power_iter_tol': 1e-10,
            'psd_tol_factor': 1e-9,
            'hermitian_tol': 1e-12,
            'float_sum_tol': 1e-6,
            'rank_primes': [2147483647, 2147483629],
            'moment_cauchy_tol': 1e-9
        },
        'guards': {
            'dense_max_size': 2000,
            'certificate_max_size': 2000,
            'target_label_bits_max': 16,
            'iso_max_radius': 2,
            'iso_max_classes': 12,
            'moment_max_nnz': 50_000_000,
            'round_max_refinements': 24
        },
        'stats': {
            'chunk_size': 50000
        }
    }
}


def get_project_root():
    """项目根目录（utils 的上一级）"""
    return os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def _get_config_path():
    """获取配置文件路径"""
    return os.path.join(get_project_root(), 'configs', 'config.json')


def _merge(defaults, loaded):
    """按节合并：配置文件中缺失的键使用默认值"""
    merged = copy.deepcopy(defaults)
    for key, value in loaded.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_config():
    """加载配置文件的主函数"""
    global _config
    if _config is not None:
        return _config

    config_path = _get_config_path()
    try:
        with open(config_path, 'r', encoding='utf-8') as f:
            _config = _merge(_DEFAULT_CONFIG, json.load(f))
            _log.debug(f"成功加载配置文件: {config_path}")
    except (OSError, ValueError) as e:
        _log.warning(f"加载配置文件失败，使用默认配置: {str(e)}")
        _config = copy.deepcopy(_DEFAULT_CONFIG)
    return _config


# 重新加载配置（用于配置更新后）
def reload_config():
    """重新加载配置文件"""
    global _config
    _config = None
    return load_config()


# 基础配置获取函数
def get_config():
    """获取完整配置"""
    return load_config()


def get_config_section(section_name, default=None):
    """获取指定配置部分"""
    if default is None:
        default = {}
    return load_config().get(section_name, default)


def get_settings_config():
    """获取整个settings配置"""
    return get_config_section('settings', {})


# 路径相关配置
def get_paths_config():
    """获取路径相关配置"""
    return get_config_section('paths', _DEFAULT_CONFIG['paths'])


def get_log_dir():
    """获取日志目录，相对路径以项目根目录为基准"""
    log_dir = get_paths_config().get('log_dir', 'logs')
    if not os.path.isabs(log_dir):
        log_dir = os.path.join(get_project_root(), log_dir)
    return log_dir


def get_logging_config():
    """获取日志配置"""
    return get_settings_config().get('logging', _DEFAULT_CONFIG['settings']['logging'])


# 数值计算相关配置
def get_numeric_config():
    """获取数值容差配置"""
    return get_settings_config().get('numeric', _DEFAULT_CONFIG['settings']['numeric'])


def get_numeric(key):
    """获取单个数值容差，缺失时回退到默认值"""
    return get_numeric_config().get(key, _DEFAULT_CONFIG['settings']['numeric'][key])


def get_guard_config():
    """获取规模保护阈值配置"""
    return get_settings_config().get('guards', _DEFAULT_CONFIG['settings']['guards'])


def get_guard(key):
    """获取单个规模保护阈值"""
    return get_guard_config().get(key, _DEFAULT_CONFIG['settings']['guards'][key])


def get_stats_config():
    """获取统计计算配置"""
    return get_settings_config().get('stats', _DEFAULT_CONFIG['settings']['stats'])


def get_chunk_size():
    """邻域编码的分块大小"""
    return int(get_stats_config().get('chunk_size', 50000))


config = load_config()
