"""
Loading of run configurations and runner settings.
"""
import os
from typing import Any, Dict, Optional, Tuple, Type, TypeVar, Union

import yaml
from pydantic import Field, ValidationError

from .exceptions import ConfigError
from .models import AutodocBaseSettings

__all__ = ["load_config", "RunnerSettings", "resolve_jobs"]

Model = TypeVar("Model")


class RunnerSettings(AutodocBaseSettings):
    """
    Settings read from the environment, e.g. ``TVCNLAB_JOBS=4``.
    """

    jobs: Optional[int] = Field(None, ge=1, description="Worker processes; overrides the command line.")

    class Config:
        env_prefix = "TVCNLAB_"


def resolve_jobs(cli_jobs: Optional[int] = None) -> int:
    """Worker count: the environment wins over the command line, which wins over 1."""
    try:
        settings = RunnerSettings()
    except ValidationError as exc:
        raise ConfigError("TVCNLAB_JOBS must be a positive integer.", [str(exc)])

    if settings.jobs is not None:
        return settings.jobs
    if cli_jobs is not None:
        if cli_jobs < 1:
            raise ConfigError(f"--jobs must be a positive integer, got {cli_jobs}.")
        return cli_jobs
    return 1


def _key_lines(text: str) -> Dict[str, int]:
    try:
        node = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.YAMLError:
        return {}
    if not isinstance(node, yaml.MappingNode):
        return {}
    return {k.value: k.start_mark.line + 1 for k, _ in node.value if isinstance(k, yaml.ScalarNode)}


def _read(path: str) -> Tuple[Dict[str, Any], Dict[str, int]]:
    if not os.path.isfile(path):
        raise ConfigError(f"Config file {path} does not exist.")

    with open(path, "r") as handle:
        text = handle.read()

    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"{path}:{mark.line + 1}:{mark.column + 1}" if mark is not None else path
        problem = getattr(exc, "problem", None) or str(exc)
        raise ConfigError(f"Could not parse config file {path}.", [f"{where}: {problem}"])

    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"Config file {path} must hold a key-value document, found {type(data).__name__}.")

    return data, _key_lines(text)


def load_config(
    load_path: Union[str, Dict[str, Any]], model: Type[Model], overrides: Optional[Dict[str, Any]] = None
) -> Model:
    """
    Builds a validated configuration model from a JSON or YAML file.

    Parameters
    ----------
    load_path : Union[str, Dict[str, Any]]
        Path of a flat key-value document, or the already parsed dictionary
    model : Type[ProtoModel]
        The configuration model to validate against
    overrides : Dict[str, Any], optional
        Values replacing the file's, typically from the command line

    Returns
    -------
    ProtoModel
        The validated configuration

    Raises
    ------
    ConfigError
        The file is missing, cannot be parsed, or fails validation. Diagnostics point
        at the offending line when it is known.
    """
    if isinstance(load_path, str):
        load_path = os.path.expanduser(load_path)
        data, lines = _read(load_path)
        source = load_path
    elif isinstance(load_path, dict):
        data, lines = dict(load_path), {}
        source = "<dict>"
    else:
        raise TypeError("Could not infer data from load_path of type {}".format(type(load_path)))

    if overrides:
        data.update({k: v for k, v in overrides.items() if v is not None})

    try:
        return model(**data)
    except ValidationError as exc:
        diagnostics = []
        for err in exc.errors():
            key = str(err["loc"][0]) if err["loc"] else "__root__"
            where = f"{source}:{lines[key]}" if key in lines else source
            diagnostics.append(f"{where}: {'.'.join(str(x) for x in err['loc'])}: {err['msg']}")
        raise ConfigError(f"Invalid {model.__name__} in {source}.", diagnostics)
