"""Energy and deadline aware task allocation on simulated fog devices."""

from ._fogsim import *  # noqa: F401,F403
from ._fogsim import FogsimError, ScenarioConfig, parse_config


def config(**overrides) -> ScenarioConfig:
    """Default scenario with the given keys replaced, validated like a config file."""
    lines = []
    for key, value in overrides.items():
        if isinstance(value, (list, tuple)):
            value = ", ".join(str(getattr(v, "name", v)) for v in value)
        lines.append(f"{key} = {value}")
    return parse_config("\n".join(lines))


__all__ = [name for name in dir() if not name.startswith("_")]
