"""
Assists in grabbing the bundled experiment packs and networks
"""

import glob
import json
import os
from typing import List

from ..graph import Graph, load_edgelist
from ..models import ExperimentSpec

__all__ = ["get_file", "list_experiments", "get_experiment", "get_network"]

_data_dir = os.path.dirname(__file__)

_folders = ["experiments", "networks"]
_data_folders = {x: os.path.join(_data_dir, x) for x in _folders}


def _get_folder_path(folder):
    if folder not in _data_folders:
        raise KeyError("Folder '{}' not recognized".format(folder))

    return _data_folders[folder]


def get_file(folder, *args):
    folder = _get_folder_path(folder)
    filename = os.path.join(folder, *args)
    if not os.path.isfile(filename):
        raise OSError("Path '{}' not found.".format(filename))

    with open(filename, "r") as infile:
        ret = infile.read()

    return ret


def list_experiments() -> List[str]:
    """
    Names of the bundled experiment packs.
    """
    files = glob.glob(os.path.join(_get_folder_path("experiments"), "*.json"))
    return sorted(os.path.splitext(os.path.basename(f))[0] for f in files)


def get_experiment(name: str) -> ExperimentSpec:
    """
    Returns a bundled experiment pack as a validated ExperimentSpec.
    """
    if not name.endswith(".json"):
        name += ".json"

    return ExperimentSpec(**json.loads(get_file("experiments", name)))


def get_network(name: str) -> Graph:
    """
    Returns a bundled network stored as an edge list.
    """
    if not name.endswith(".edges"):
        name += ".edges"

    fname = os.path.join(_get_folder_path("networks"), name)
    if not os.path.isfile(fname):
        raise OSError("File: {}/{} not found".format("networks", name))

    return load_edgelist(fname)
