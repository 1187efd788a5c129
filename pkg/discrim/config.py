"""
Configuration shared by the command-line tools. A configuration file holds
one ``key = value`` pair per line, with ``#`` comments and blank lines
ignored. Keys are flat: a key applies to every command that has an option of
that name. Command-line flags override environment variables (``DISCRIM_``
prefix), which override the file, which overrides the built-in defaults.
"""

import logging

import click

from discrim._checks import ConfigurationError

logger = logging.getLogger(__name__)

ENV_PREFIX = "DISCRIM_"
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def _parse_bool(value):
    lowered = value.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {value!r}")


def _parse_int(value):
    # Accepts 10_000 and 10**10 spellings
    text = value.strip()
    if "**" in text:
        base, exponent = text.split("**", 1)
        return int(base) ** int(exponent)

    return int(text)


def _parse_level(value):
    level = value.strip().upper()
    if level not in LOG_LEVELS:
        raise ValueError(f"expected one of {', '.join(LOG_LEVELS)}, got {value!r}")

    return level


CONFIG_KEYS = {
    "workers": _parse_int,
    "block_size": _parse_int,
    "budget": _parse_int,
    "sieve_threshold": _parse_int,
    "long_run": _parse_bool,
    "rng_seed": _parse_int,
    "csv": str.strip,
    "log_level": _parse_level,
}

DEFAULTS = {
    "workers": 1,
    "block_size": None,
    "budget": 10**10,
    "sieve_threshold": 10**5,
    "long_run": False,
    "rng_seed": 88,
    "csv": None,
    "log_level": "WARNING",
}


def parse_config(text, source="<config>"):
    """
    Parses configuration text.

    :param text: Contents of a configuration file
    :type text: str
    :param source: Name used in error messages, defaults to "<config>"
    :type source: str, optional
    :raises ConfigurationError: On a malformed line, an unknown key or a
                                value of the wrong type
    :return: Values of the keys present in `text`
    :rtype: dict
    """

    values = {}
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{source}:{number}: expected `key = value`, got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_").lower()
        if key not in CONFIG_KEYS:
            raise ConfigurationError(
                f"{source}:{number}: unknown key {key!r}; expected one of {', '.join(CONFIG_KEYS)}"
            )
        try:
            values[key] = CONFIG_KEYS[key](value)
        except ValueError as error:
            raise ConfigurationError(f"{source}:{number}: invalid value for {key!r}: {error}") from None

    return values


def load_config(path):
    """Reads and parses the configuration file at `path`."""

    with open(path, encoding="utf-8") as handle:
        values = parse_config(handle.read(), source=str(path))
    logger.info("Loaded %d configuration keys from %s", len(values), path)

    return values


def default_map(command, values):
    """
    Nested `click` ``default_map`` that feeds every option named after a
    configuration key in `command` and its subcommands.

    :param command: Root command or group
    :type command: click.Command
    :param values: Parsed configuration
    :type values: dict
    :rtype: dict
    """

    defaults = {
        param.name: values[param.name]
        for param in command.params
        if isinstance(param, click.Option) and param.name in values
    }
    if isinstance(command, click.Group):
        for name, sub in command.commands.items():
            nested = default_map(sub, values)
            if nested:
                defaults[name] = nested

    return defaults
