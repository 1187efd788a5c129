"""
Verification records and the sinks they are written to. JSON lines is the
authoritative format: one record per line, flushed as soon as it is written
so an interrupted sweep loses at most the row being written. A CSV mirror
with the same column order can be kept alongside, and `records_out` turns
any log into a `Pandas` DataFrame.
"""

import json
import logging
import os
from dataclasses import dataclass, field
from fractions import Fraction

import pandas as pd

logger = logging.getLogger(__name__)

FIELDS = ("suite", "params", "computed", "expected", "pass", "elapsed_us", "worker")


def render(value):
    """Decimal string of an integer, `Fraction`, float or bool."""

    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else str(value)
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return "none"

    return str(value)


@dataclass(frozen=True)
class VerificationRecord:
    """
    One row of a sweep.

    :param suite: Suite identifier, e.g. ``"delta_verify"`` or ``"L34"``
    :type suite: str
    :param params: Integer parameters of the checked instance
    :type params: dict
    :param computed: Computed value rendered as a decimal string
    :type computed: str
    :param expected: Oracle or bound value rendered the same way
    :type expected: str
    :param passed: Outcome under the suite's comparison rule
    :type passed: bool
    :param elapsed_us: Evaluation time in microseconds
    :type elapsed_us: int
    :param worker: Worker lane that produced the record
    :type worker: int
    """

    suite: str
    params: dict = field(hash=False)
    computed: str
    expected: str
    passed: bool
    elapsed_us: int = 0
    worker: int = 0

    @classmethod
    def compare(cls, suite, params, computed, expected, passed=None):
        """Builds a record, exact equality being the default comparison rule."""

        if passed is None:
            passed = computed == expected

        return cls(suite, dict(params), render(computed), render(expected), bool(passed))

    @property
    def key(self):
        return self.suite, tuple(sorted(self.params.items()))

    def to_dict(self):
        return {
            "suite": self.suite,
            "params": dict(self.params),
            "computed": self.computed,
            "expected": self.expected,
            "pass": self.passed,
            "elapsed_us": self.elapsed_us,
            "worker": self.worker,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), separators=(",", ":"))

    def to_row(self):
        row = self.to_dict()
        row["params"] = json.dumps(row["params"], separators=(",", ":"))

        return row

    @classmethod
    def from_dict(cls, data):
        missing = [name for name in FIELDS if name not in data]
        if missing:
            raise ValueError(f"Record is missing fields {missing}")

        return cls(
            suite=data["suite"],
            params={k: int(v) for k, v in data["params"].items()},
            computed=data["computed"],
            expected=data["expected"],
            passed=bool(data["pass"]),
            elapsed_us=int(data["elapsed_us"]),
            worker=int(data["worker"]),
        )


def _parses(line):
    try:
        VerificationRecord.from_dict(json.loads(line))
    except (json.JSONDecodeError, ValueError, KeyError, AttributeError, TypeError):
        return False

    return True


def _repair_tail(path):
    # A log must end in a newline before records are appended to it: a
    # complete last record gets its newline, a cut-off one is dropped
    if not os.path.exists(path) or os.path.getsize(path) == 0:
        return
    with open(path, "rb+") as handle:
        data = handle.read()
        if data.endswith(b"\n"):
            return
        start = data.rfind(b"\n") + 1
        if _parses(data[start:].decode("utf-8", errors="replace")):
            handle.write(b"\n")
            return
        handle.truncate(start)
    logger.warning("Dropped %d bytes of a cut-off last line of %s", len(data) - start, path)


class RecordSink:
    """
    Append-only JSON lines sink with an optional CSV mirror. A last line
    left cut off by an interrupted run is dropped before appending.

    :param path: JSON lines file, opened in append mode
    :type path: str or os.PathLike
    :param csv_path: CSV mirror, defaults to None
    :type csv_path: str or os.PathLike, optional
    """

    def __init__(self, path, csv_path=None):
        self.path = path
        self.csv_path = csv_path
        _repair_tail(path)
        self._handle = open(path, "a", encoding="utf-8")
        self._csv_header = csv_path is not None and (
            not os.path.exists(csv_path) or os.path.getsize(csv_path) == 0
        )
        self.count = 0

    def emit(self, record):
        self._handle.write(record.to_json() + "\n")
        self._handle.flush()
        if self.csv_path is not None:
            pd.DataFrame([record.to_row()], columns=list(FIELDS)).to_csv(
                self.csv_path, mode="a", header=self._csv_header, index=False
            )
            self._csv_header = False
        self.count += 1

    def close(self):
        self._handle.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def emit(record, sink):
    """
    Writes one record to `sink`.

    :param record: Record to write
    :type record: VerificationRecord
    :param sink: Open sink
    :type sink: RecordSink
    """

    sink.emit(record)


def load_records(path):
    """
    Reads every complete record of a JSON lines log. A trailing line cut off
    by an interrupted run is skipped with a warning.

    :rtype: list
    """

    if not os.path.exists(path):
        return []

    records = []
    with open(path, encoding="utf-8") as handle:
        lines = handle.read().splitlines()
    for number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            records.append(VerificationRecord.from_dict(json.loads(line)))
        except (json.JSONDecodeError, ValueError, KeyError):
            if number == len(lines):
                logger.warning("Skipping truncated last line %d of %s", number, path)
                continue
            raise

    return records


def completed_keys(records):
    """
    Keys ``(suite, params)`` of completed records.

    :param records: Records or a path to a JSON lines log
    :type records: list or str
    :rtype: set
    """

    if isinstance(records, (str, os.PathLike)):
        records = load_records(records)

    return {record.key for record in records}


def records_out(records):
    """
    Produces a `Pandas` DataFrame with one row per record, columns in the
    JSON lines field order and `params` kept as compact JSON text.

    :param records: Records or a path to a JSON lines log
    :type records: list or str
    :rtype: pd.DataFrame
    """

    if isinstance(records, (str, os.PathLike)):
        records = load_records(records)

    values = pd.DataFrame([record.to_row() for record in records], columns=list(FIELDS))

    return values.convert_dtypes()
