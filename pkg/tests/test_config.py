import pytest
import click
from discrim.config import CONFIG_KEYS, DEFAULTS, default_map, load_config, parse_config
from discrim._checks import ConfigurationError


def test_parse_config():
    text = """
    # sweep settings
    workers = 4
    block-size = 512   # per block
    budget = 10**8
    long_run = yes
    log_level = info
    """
    values = parse_config(text)

    assert values == {
        "workers": 4,
        "block_size": 512,
        "budget": 10**8,
        "long_run": True,
        "log_level": "INFO",
    }


def test_parse_config_errors():
    with pytest.raises(ConfigurationError):
        parse_config("workers 4")
    with pytest.raises(ConfigurationError):
        parse_config("threads = 4")
    with pytest.raises(ConfigurationError):
        parse_config("workers = four")
    with pytest.raises(ConfigurationError):
        parse_config("long_run = maybe")
    with pytest.raises(ConfigurationError):
        parse_config("log_level = loud")


def test_error_names_the_line():
    with pytest.raises(ConfigurationError, match="run.cfg:2"):
        parse_config("workers = 2\nbudget = x", source="run.cfg")


def test_load_config(tmp_path):
    path = tmp_path / "discrim.cfg"
    path.write_text("csv = out.csv\nrng_seed = 7\n", encoding="utf-8")

    assert load_config(path) == {"csv": "out.csv", "rng_seed": 7}


def test_defaults_cover_every_key():
    assert set(DEFAULTS) == set(CONFIG_KEYS)
    assert parse_config("") == {}
    assert DEFAULTS["rng_seed"] == 88


def test_default_map_nests_subcommands():
    @click.group()
    @click.option("--workers", type=int)
    def root(workers):
        pass

    @root.group()
    def lemma():
        pass

    @lemma.command()
    @click.option("--workers", type=int)
    @click.option("--budget", type=int)
    @click.option("--other", type=int)
    def verify(workers, budget, other):
        pass

    mapping = default_map(root, {"workers": 3, "budget": 100, "csv": "x"})

    assert mapping == {"workers": 3, "lemma": {"verify": {"workers": 3, "budget": 100}}}
