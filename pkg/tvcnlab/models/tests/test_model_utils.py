from enum import Enum

import numpy as np
import pytest

from ..common_models import GrowthModelEnum
from ..model_utils import hash_dictionary, recursive_normalizer


@pytest.mark.parametrize(
    "unormalized, normalized",
    [
        (5.0 + 1.0e-12, 5.0),
        (0.0 + 1.0e-12, 0.0),
        (0.0 - 1.0e-12, 0.0),
        ("TVCN", "tvcn"),
        (np.int64(3), 3),
        (GrowthModelEnum.dtvcn, "dtvcn"),
        ([0.0 - 1.0e-12, 0.0 + 1.0e-12], [0, 0]),
        ((0.0 - 1.0e-12, 0.0 + 1.0e-12), (0, 0)),
        ({"Beta": 1.0e-16}, {"beta": 0}),
        ({"Grid": {"Alpha": 0.1 + 1.0e-13}}, {"grid": {"alpha": 0.1}}),
        ({5: None, "flag": True}, {"5": None, "flag": True}),
    ],
)  # yapf: disable
def test_recursive_normalizer_exacts(unormalized, normalized):

    converted = recursive_normalizer(unormalized)
    assert converted == normalized
    if isinstance(normalized, dict):
        assert hash_dictionary(converted) == hash_dictionary(normalized)


def test_recursive_normalizer_array():
    bench = {"sizes": np.arange(3)}
    norm1 = recursive_normalizer({"SIZES": np.arange(3) + 1.0e-12})
    norm2 = recursive_normalizer({"SIZES": np.arange(3) - 1.0e-12})

    assert np.array_equal(bench["sizes"], norm1["sizes"])
    assert np.array_equal(bench["sizes"], norm2["sizes"])


def test_recursive_normalizer_options():
    assert recursive_normalizer("BA", lowercase=False) == "BA"
    assert recursive_normalizer(0.123456, digits=2) == 0.12
    assert recursive_normalizer(float("inf")) == float("inf")


def test_recursive_normalizer_rejects():
    class Opaque:
        pass

    with pytest.raises(TypeError, match="Invalid type"):
        recursive_normalizer({"x": Opaque()})


def test_hash_dictionary_order():
    assert hash_dictionary({"a": 1, "b": 2}) == hash_dictionary({"b": 2, "a": 1})
    assert hash_dictionary({"a": 1}) != hash_dictionary({"a": 2})


def test_enum_values_are_plain():
    class Color(Enum):
        red = "Red"

    assert recursive_normalizer(Color.red) == "red"
