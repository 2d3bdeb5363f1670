import hashlib
import json
from enum import Enum
from typing import Any, Dict

import numpy as np


def _round(value: float, digits: int) -> float:
    value = round(value, digits)
    # -0.0 and 0.0 hash alike
    return 0 if value == 0.0 else value


def recursive_normalizer(value: Any, digits: int = 10, lowercase: bool = True) -> Any:
    """
    Prepares a structure for hashing: strings are lowercased, floats rounded to
    ``digits`` decimals, numpy values and enums turned into plain Python values, and
    dictionary keys turned into strings the way JSON would.
    """
    kwargs = {"digits": digits, "lowercase": lowercase}

    if isinstance(value, Enum):
        value = value.value

    if isinstance(value, (bool, type(None))):
        return value

    if isinstance(value, (int, np.integer)):
        return int(value)

    if isinstance(value, str):
        return value.lower() if lowercase else value

    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not np.isfinite(value) or not digits:
            return value
        return _round(value, digits)

    if isinstance(value, np.ndarray):
        return recursive_normalizer(value.tolist(), **kwargs)

    if isinstance(value, (list, tuple)):
        ret = [recursive_normalizer(x, **kwargs) for x in value]
        return tuple(ret) if isinstance(value, tuple) else ret

    if isinstance(value, dict):
        ret = {}
        for k, v in value.items():
            k = str(recursive_normalizer(k, **kwargs))
            ret[k] = recursive_normalizer(v, **kwargs)
        return ret

    raise TypeError(f"Invalid type in recursive_normalizer ({type(value)}), only simple Python types are allowed.")


def hash_dictionary(data: Dict[str, Any]) -> str:
    """sha1 of the key-sorted JSON dump of ``data``."""
    m = hashlib.sha1()
    m.update(json.dumps(data, sort_keys=True).encode("UTF-8"))
    return m.hexdigest()
