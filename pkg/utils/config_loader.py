import dataclasses
import json
import math
import os

from models import SystemConfig, ConfigError
from utils.logger import info_logger

ANGLE_FIELDS = ('target_angles', 'beamwidth_half')


def _parse_complex(value):
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        return complex(value.replace(' ', ''))
    return complex(value)


def config_from_dict(data: dict) -> SystemConfig:
    """Build a config from a JSON-style mapping with angles in degrees."""
    known = {_.name for _ in dataclasses.fields(SystemConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f'unknown config keys: {unknown}')

    params = dict(data)
    if 'target_angles' in params:
        params['target_angles'] = [math.radians(float(_)) for _ in params['target_angles']]
    if 'beamwidth_half' in params:
        params['beamwidth_half'] = math.radians(float(params['beamwidth_half']))
    if 'path_gain' in params:
        params['path_gain'] = [_parse_complex(_) for _ in params['path_gain']]
    try:
        return SystemConfig(**params)
    except TypeError as e:
        raise ConfigError(str(e)) from e


def config_to_dict(config: SystemConfig) -> dict:
    data = dataclasses.asdict(config)
    data['target_angles'] = [math.degrees(_) for _ in config.target_angles]
    data['beamwidth_half'] = math.degrees(config.beamwidth_half)
    data['path_gain'] = [[_.real, _.imag] for _ in config.path_gain]
    for key, value in data.items():
        if isinstance(value, tuple):
            data[key] = list(value)
    return data


def load_config(path: str) -> SystemConfig:
    info_logger.info(f'loading config from {path}')
    if not os.path.exists(path):
        info_logger.error(f'config file does not exist: {path}')
        raise ConfigError(f'config file does not exist: {path}')
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        info_logger.error(f'invalid JSON in {path}: {e}')
        raise ConfigError(f'invalid JSON in {path}: {e}') from e
    if not isinstance(data, dict):
        raise ConfigError(f'{path} must hold a JSON object, got {type(data).__name__}')
    try:
        return config_from_dict(data)
    except ConfigError as e:
        info_logger.error(f'invalid config {path}: {e}')
        raise ConfigError(f'{path}: {e}') from e


def dump_config(config: SystemConfig, path: str):
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(config_to_dict(config), f, indent=2, sort_keys=True)
