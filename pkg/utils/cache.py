import hashlib
import json
import os
import pickle

from const import CACHE_DIR


class Cache:
    """Pickle store for simulation results keyed by a content digest."""

    @staticmethod
    def _get_file_location(key):
        return f'{CACHE_DIR}/{key}'

    @staticmethod
    def digest(payload) -> str:
        encoded = json.dumps(payload, sort_keys=True, default=str).encode('utf-8')
        return hashlib.sha256(encoded).hexdigest()

    @classmethod
    def load(cls, key):
        final_filepath = cls._get_file_location(key)
        if not os.path.exists(final_filepath):
            return None
        with open(final_filepath, 'rb') as f:
            return pickle.load(f)

    @classmethod
    def store(cls, key, data):
        if not os.path.exists(CACHE_DIR):
            os.makedirs(CACHE_DIR, exist_ok=True)
        final_filepath = cls._get_file_location(key)
        if os.path.exists(final_filepath):
            os.remove(final_filepath)
        with open(final_filepath, 'wb') as f:
            pickle.dump(data, f, protocol=pickle.HIGHEST_PROTOCOL)
