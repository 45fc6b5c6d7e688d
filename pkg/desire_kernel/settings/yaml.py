import os
import re
import typing
from collections.abc import Mapping
from typing import Any, TextIO

from yaml import SafeLoader

# ${NAME} or ${NAME:fallback}; the fallback may itself contain ':'
_ENV_REFERENCE = re.compile(r"\$\{(?P<name>\w+)(?::(?P<fallback>.*))?}")


def expand_env_reference(reference: str, environ: Mapping[str, str]) -> str:
    """Resolve one `${NAME}` / `${NAME:fallback}` reference against `environ`."""
    match = _ENV_REFERENCE.fullmatch(reference.strip())
    if match is None:
        return reference
    name, fallback = match.group("name"), match.group("fallback")
    value = environ.get(name)
    if value:
        return value
    if fallback is None:
        raise ValueError(
            f"Environment variable {name} is not set and no default was provided"
        )
    return fallback


@typing.no_type_check  # pyyaml is untyped, nodes are Any
def load_yaml_with_envvars(
    stream: TextIO, environ: Mapping[str, str] = os.environ
) -> dict[str, Any]:
    """Load a settings document, expanding `${VAR}` / `${VAR:default}` scalars."""

    class _EnvLoader(SafeLoader):
        pass

    def _construct(loader: _EnvLoader, node) -> str:
        return expand_env_reference(loader.construct_scalar(node), environ)

    _EnvLoader.add_implicit_resolver("!env", _ENV_REFERENCE, None)
    _EnvLoader.add_constructor("!env", _construct)

    loader = _EnvLoader(stream)
    try:
        return loader.get_single_data()
    finally:
        loader.dispose()
