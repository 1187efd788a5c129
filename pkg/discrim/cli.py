"""
Command-line interface. Every engine of the package has a subcommand;
single computations print their results as JSON lines on stdout, sweeps
write their records to a JSON lines log (``--out``, or ``--resume`` to
continue one) and print a per-suite tally. The exit code is 0 when every
record conforms, 1 when at least one does not and 2 on a usage or
configuration error.
"""

import dataclasses
import json
import logging
import os
import sys

import click

from discrim import casework, charsum, config, discriminator, suites
from discrim._checks import InapplicableCaseError
from discrim.records import RecordSink, VerificationRecord, completed_keys, load_records, records_out

logger = logging.getLogger(__name__)

DELTA_VERIFY_LIMIT = 3000
DELTA_VERIFY_LONG_LIMIT = 10**5
DEFAULTS = config.DEFAULTS
LOG_FORMAT = "%(asctime)s %(name)s %(levelname)s %(message)s"


def _env(name):
    return config.ENV_PREFIX + name.upper()


def _option(*decls, name, **attrs):
    return click.option(*decls, envvar=_env(name), show_default=True, **attrs)


workers_option = _option(
    "--workers",
    name="workers",
    type=click.IntRange(min=1),
    default=DEFAULTS["workers"],
    help="Number of joblib workers.",
)
block_size_option = _option(
    "--block-size",
    name="block_size",
    type=click.IntRange(min=1),
    default=DEFAULTS["block_size"],
    help="Tasks per block; each suite has its own default.",
)
long_run_option = _option(
    "--long-run/--no-long-run",
    name="long_run",
    default=DEFAULTS["long_run"],
    help="Use the full-replication limits instead of the desk-scale ones.",
)
csv_option = _option(
    "--csv",
    name="csv",
    type=click.Path(dir_okay=False),
    default=DEFAULTS["csv"],
    help="CSV mirror of the log.",
)
resume_option = click.option(
    "--resume",
    type=click.Path(dir_okay=False),
    default=None,
    help="Log of an interrupted run; completed tasks are skipped and new records appended.",
)
out_option = click.option(
    "--out", type=click.Path(dir_okay=False), default=None, help="Fresh JSON lines log of the records."
)


def _sweep_options(func):
    options = (workers_option, block_size_option, long_run_option, resume_option, out_option, csv_option)
    for option in reversed(options):
        func = option(func)

    return func


class _Tally:
    # Per-suite totals of a record stream

    def __init__(self):
        self.rows = {}

    def add(self, record):
        row = self.rows.setdefault(record.suite, [0, 0, 0])
        row[0] += 1
        row[1] += record.passed
        row[2] += not suites.conforms(record)

    @property
    def nonconforming(self):
        return sum(row[2] for row in self.rows.values())

    def echo(self):
        for suite, (total, passed, bad) in self.rows.items():
            click.echo(f"{suite}\ttotal={total}\tpassed={passed}\tnonconforming={bad}")

    @property
    def exit_code(self):
        return 1 if self.nonconforming else 0


def _open_log(out, resume, csv):
    # Returns the sink (or None) and the records of the run being resumed
    if out and resume:
        raise click.UsageError("--out and --resume are exclusive; --resume appends to its own log")
    path = resume or out
    if csv and not path:
        raise click.UsageError("--csv mirrors a log; pass --out or --resume as well")
    if out and os.path.exists(out) and os.path.getsize(out) > 0:
        raise click.UsageError(f"{out} already holds records; continue it with --resume {out}")
    previous = load_records(resume) if resume else []
    if previous:
        logger.info("Resuming from %d records in %s", len(previous), resume)

    return (RecordSink(path, csv) if path else None), previous


def _drain(records, sink, previous=()):
    tally = _Tally()
    for record in previous:
        tally.add(record)
    try:
        for record in records:
            if sink is not None:
                sink.emit(record)
            tally.add(record)
            if record.suite.endswith(":summary"):
                click.echo(record.to_json())
    finally:
        if sink is not None:
            sink.close()
    tally.echo()

    return tally.exit_code


def _echo_records(records, out=None):
    tally = _Tally()
    sink = RecordSink(out) if out else None
    try:
        for record in records:
            click.echo(record.to_json())
            if sink is not None:
                sink.emit(record)
            tally.add(record)
    finally:
        if sink is not None:
            sink.close()

    return tally.exit_code


def _echo_json(payload):
    click.echo(json.dumps(payload, separators=(",", ":"), default=str))

    return 0


def _progress():
    return sys.stderr.isatty()


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False),
    envvar=_env("config"),
    default=None,
    help="key = value configuration file.",
)
@_option(
    "--log-level",
    name="log_level",
    type=click.Choice(config.LOG_LEVELS, case_sensitive=False),
    default=DEFAULTS["log_level"],
    help="Logging level of the messages written to stderr.",
)
@click.option(
    "--numba/--no-numba",
    default=True,
    show_default=True,
    help="Run the compiled kernels, or the pure Python ones.",
)
@click.pass_context
def cli(ctx, config_path, log_level, numba):
    """Verification toolkit for the discriminator of x^3 + x."""

    values = config.load_config(config_path) if config_path else {}
    if "log_level" in values and ctx.get_parameter_source("log_level") is click.core.ParameterSource.DEFAULT:
        log_level = values["log_level"]
    logging.basicConfig(level=getattr(logging, log_level.upper()), stream=sys.stderr, format=LOG_FORMAT)
    logging.captureWarnings(True)

    ctx.default_map = config.default_map(ctx.command, values)
    ctx.obj = {"numba": numba}


@cli.group()
def delta():
    """Values of the discriminator."""


@delta.command("compute")
@click.option("--n", "n", type=click.IntRange(min=1), required=True, help="Number of values.")
@click.option(
    "--method",
    type=click.Choice(("brute", "closed", "both")),
    default="both",
    show_default=True,
    help="Brute-force scan, closed form, or both compared.",
)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Also append the record here.")
@click.pass_obj
def delta_compute(obj, n, method, out):
    """Delta(n) by brute force, by the closed form, or both."""

    if method == "both":
        brute = discriminator.delta_bruteforce(n, numba=obj["numba"])
        closed = discriminator.delta_closed_form(n)
        record = VerificationRecord.compare(
            discriminator.SUITE, {"n": n}, brute.delta_value, closed.delta_value
        )
    else:
        if method == "brute":
            result = discriminator.delta_bruteforce(n, numba=obj["numba"])
        else:
            result = discriminator.delta_closed_form(n)
        cap = 3**result.k
        record = VerificationRecord.compare(
            f"delta_{method}", {"n": n}, result.delta_value, cap, n <= result.delta_value <= cap
        )

    return _echo_records([record], out)


@delta.command("verify")
@click.option("--from", "n_from", type=click.IntRange(min=1), default=1, show_default=True, help="First n.")
@click.option(
    "--to",
    "n_to",
    type=click.IntRange(min=1),
    default=None,
    help=f"Last n  [default: {DELTA_VERIFY_LIMIT}, {DELTA_VERIFY_LONG_LIMIT} with --long-run]",
)
@_sweep_options
@click.pass_obj
def delta_verify(obj, n_from, n_to, workers, block_size, long_run, resume, out, csv):
    """Compares brute force with the closed form over a range of n."""

    if n_to is None:
        n_to = DELTA_VERIFY_LONG_LIMIT if long_run else DELTA_VERIFY_LIMIT
    sink, previous = _open_log(out, resume, csv)
    records = discriminator.verify_range(
        n_from,
        n_to,
        workers=workers,
        numba=obj["numba"],
        block_size=block_size or 256,
        completed=completed_keys(previous),
        progress=_progress(),
    )

    return _drain(records, sink, previous)


@cli.group()
def collision():
    """Collision witnesses."""


@collision.command("find")
@click.option("--n", "n", type=click.IntRange(min=1), required=True, help="Number of values.")
@click.option("--m", "m", type=click.IntRange(min=1), required=True, help="Modulus.")
@click.option(
    "--method",
    type=click.Choice(("search", "construct")),
    default="search",
    show_default=True,
    help="Smallest pair by exhaustive search, or the pair built by the case recipe.",
)
@click.pass_obj
def collision_find(obj, n, m, method):
    """A pair a < b <= n with b^3 + b = a^3 + a (mod m)."""

    if method == "search":
        witness = discriminator.find_collision(n, m, numba=obj["numba"])
    else:
        witness = casework.construct_collision(m, n, numba=obj["numba"])
    payload = {"n": n, "m": m, "witness": None}
    if witness is not None:
        payload["witness"] = {
            "a": witness.a,
            "b": witness.b,
            "route": witness.route,
            "holds": discriminator.verify_witness(witness),
        }

    return _echo_json(payload)


@cli.group("charsum")
def charsum_group():
    """Character and exponential sums modulo a prime."""


@charsum_group.command("ap")
@click.option("--p", "p", type=int, required=True, help="Odd prime.")
@click.option("--delta", "delta", type=int, required=True, help="Integer not divisible by p.")
@click.option("--u", "u", type=int, required=True, help="Frequency.")
@click.option(
    "--form",
    type=click.Choice(("direct", "kloosterman", "both")),
    default="both",
    show_default=True,
    help="Definition, Kloosterman form, or both compared exactly.",
)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Also append the record here.")
def charsum_ap(p, delta, u, form, out):
    """A_p(delta, u) as an element of Z[zeta_p]."""

    if form == "both":
        direct = charsum.ap_direct(p, delta, u)
        kloosterman = charsum.ap_kloosterman(p, delta, u)
        params = {"p": p, "delta": delta, "u": u}
        record = VerificationRecord.compare("ap_identity", params, direct == kloosterman, True)
        return _echo_records([record], out)

    element = charsum.ap_direct(p, delta, u) if form == "direct" else charsum.ap_kloosterman(p, delta, u)

    return _echo_json(
        {
            "p": p,
            "delta": delta,
            "u": u,
            "form": form,
            "rational": element.rational_value() if element.is_rational() else None,
            "magnitude": element.magnitude(),
            "coeffs": element.coeffs.tolist(),
        }
    )


@charsum_group.command("ell")
@click.option("--p", "p", type=int, required=True, help="Prime, at least 5.")
@click.option("--delta", "delta", type=int, required=True, help="Integer not divisible by p.")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Also append the record here.")
def charsum_ell(p, delta, out):
    """ell_p(delta), checked against L_p."""

    ell, bound = charsum.ell_p(p, delta), charsum.l_p(p)
    record = VerificationRecord.compare("3.2", {"p": p, "delta": delta}, ell, bound, ell <= bound)

    return _echo_records([record], out)


@charsum_group.command("profile")
@click.option("--p", "p", type=int, required=True, help="Prime, at least 5.")
@click.option("--delta", "delta", type=int, required=True, help="Integer not divisible by p.")
def charsum_profile(p, delta):
    """Counts of the residue symbols of delta^2 x^2 + 4 over half the residues."""

    profile = charsum.residue_profile(p, delta)
    payload = dataclasses.asdict(profile)
    payload["closed_form"] = dict(zip(("n_zero", "n_plus", "n_minus"), profile.closed_form()))
    payload["matches"] = profile.matches_closed_form()
    _echo_json(payload)

    return 0 if payload["matches"] else 1


@cli.group()
def lemma():
    """Verification suites."""


@lemma.command("verify")
@click.option("--id", "suite_id", type=click.Choice(list(suites.SUITES)), required=True, help="Suite identifier.")
@click.option("--limit", type=click.IntRange(min=0), default=None, help="Largest prime, modulus or parameter.")
@_option(
    "--rng-seed", name="rng_seed", type=int, default=DEFAULTS["rng_seed"], help="Seed of sampled parameters."
)
@_sweep_options
@click.pass_obj
def lemma_verify(obj, suite_id, limit, rng_seed, workers, block_size, long_run, resume, out, csv):
    """Runs one verification suite up to a limit."""

    sink, previous = _open_log(out, resume, csv)
    records = suites.verify_suite(
        suite_id,
        limit=limit,
        workers=workers,
        block_size=block_size,
        completed=completed_keys(previous),
        previous=previous,
        rng_seed=rng_seed,
        long_run=long_run,
        numba=obj["numba"],
        progress=_progress(),
    )

    return _drain(records, sink, previous)


@cli.group()
def cases():
    """Case analysis of the moduli."""


@cases.command("classify")
@click.option("--m", "m", type=click.IntRange(min=1), required=True, help="Modulus.")
@click.option("--n", "n", type=click.IntRange(min=1), required=True, help="Number of values.")
@click.option(
    "--construct/--no-construct",
    default=True,
    show_default=True,
    help="Also build the collision witness of the case.",
)
@click.pass_obj
def cases_classify(obj, m, n, construct):
    """The case of m and, optionally, its constructed witness."""

    tag = casework.classify(m, n)
    payload = {"m": m, "n": n, "case": tag.variant.value, "params": tag.params, "in_window": tag.in_window}
    if construct:
        try:
            witness = casework.construct_collision(m, n, tag=tag, numba=obj["numba"])
        except InapplicableCaseError:
            witness = None
        payload["witness"] = None if witness is None else {"a": witness.a, "b": witness.b, "route": witness.route}

    return _echo_json(payload)


@cli.group()
def counting():
    """Counts and exponential sums behind the prime-power cases."""


def _counting_options(func):
    options = (
        click.option("--p", "p", type=int, required=True, help="Prime, at least 5."),
        click.option("--t", "t", type=click.IntRange(min=1), required=True, help="Exponent."),
        click.option("--delta", "delta", type=click.IntRange(1, 3), required=True, help="1, 2 or 3."),
    )
    for option in reversed(options):
        func = option(func)

    return func


@counting.command("N")
@_counting_options
@click.option(
    "--method",
    type=click.Choice(("auto", "naive", "sieve")),
    default="auto",
    show_default=True,
    help="Enumeration method.",
)
@_option(
    "--budget", name="budget", type=click.IntRange(min=1), default=DEFAULTS["budget"], help="Naive pair budget."
)
@_option(
    "--sieve-threshold",
    name="sieve_threshold",
    type=click.IntRange(min=1),
    default=DEFAULTS["sieve_threshold"],
    help="Largest X counted naively by the auto method.",
)
@click.pass_obj
def counting_n(obj, p, t, delta, method, budget, sieve_threshold):
    """N and N_ne, with the lower bound N is checked against."""

    record = casework.count_N(
        p, t, delta, method=method, budget=budget, sieve_threshold=sieve_threshold, numba=obj["numba"]
    )
    payload = dataclasses.asdict(record)
    payload["lower_bound"] = casework.n_lower_bound(p, t)
    _echo_json(payload)

    return 0 if record.N >= payload["lower_bound"] else 1


@counting.command("Nstar")
@_counting_options
@click.pass_obj
def counting_nstar(obj, p, t, delta):
    """N*, the collisions below 1 + 3^(k-1) modulo delta p^t."""

    record = casework.count_N_star(p, t, delta, numba=obj["numba"])
    _echo_json(dataclasses.asdict(record))

    return 0 if record.N_star > 0 else 1


@counting.command("Tj")
@_counting_options
@click.option("--j", "j", type=click.IntRange(min=1), required=True, help="Index, at most t.")
@_option(
    "--budget", name="budget", type=click.IntRange(min=1), default=DEFAULTS["budget"], help="Pair budget."
)
@click.pass_obj
def counting_tj(obj, p, t, delta, j, budget):
    """T_j exactly, against its closed form or its bound."""

    result = casework.compute_Tj(p, t, delta, j, budget=budget, numba=obj["numba"])
    _echo_json(
        {
            "p": p,
            "t": t,
            "delta": delta,
            "j": j,
            "value": result.value,
            "closed_form": None if result.closed_form is None else str(result.closed_form),
            "bound": result.bound,
            "passed": result.passed,
        }
    )

    return 0 if result.passed else 1


@cli.command()
@click.argument("log", type=click.Path(exists=True, dir_okay=False))
@click.option("--csv", type=click.Path(dir_okay=False), default=None, help="Write the records as CSV here.")
def report(log, csv):
    """Per-suite totals of a JSON lines log."""

    records = load_records(log)
    values = records_out(records)
    values["conforming"] = [suites.conforms(record) for record in records]
    if csv:
        values.to_csv(csv, index=False)
    if values.empty:
        click.echo("no records")
        return 0

    summary = values.groupby("suite", sort=False).agg(
        total=("suite", "size"), passed=("pass", "sum"), conforming=("conforming", "sum")
    )
    click.echo(summary.to_string())

    return 0 if bool(values["conforming"].all()) else 1


def run(argv=None):
    """
    Runs the command line `argv` and returns its exit code: 0 when every
    record conforms, 1 when one does not, 2 on usage or configuration errors.

    :param argv: Arguments without the program name, defaults to ``sys.argv[1:]``
    :type argv: list, optional
    :rtype: int
    """

    try:
        code = cli.main(args=argv, prog_name="discrim", standalone_mode=False)
    except click.ClickException as error:
        error.show()
        return 2
    except click.Abort:
        click.echo("Aborted", err=True)
        return 2
    except (ValueError, OSError) as error:
        click.echo(f"Error: {error}", err=True)
        return 2
    except ArithmeticError as error:
        click.echo(f"Verification error: {error}", err=True)
        return 1

    return code if isinstance(code, int) else 0


def main():
    sys.exit(run())
