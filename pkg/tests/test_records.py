import pytest
import json
from fractions import Fraction
from discrim import RecordSink, VerificationRecord, emit, load_records, records_out
from discrim.records import FIELDS, completed_keys, render


@pytest.fixture
def records():
    return [
        VerificationRecord.compare("delta_verify", {"n": 244}, 567, 567),
        VerificationRecord.compare("L34", {"p": 7}, Fraction(124, 39), Fraction(7, 3), False),
        VerificationRecord.compare("L48", {"q": 31}, 31, 5812.25, False),
    ]


def test_render():
    assert render(True) == "true"
    assert render(Fraction(13, 3)) == "13/3"
    assert render(Fraction(6, 2)) == "3"
    assert render(None) == "none"
    assert render(0.1) == "0.1"
    assert render(3**50) == str(3**50)


def test_compare_default_rule():
    assert VerificationRecord.compare("x", {}, 3, 3).passed
    assert not VerificationRecord.compare("x", {}, 3, 4).passed
    assert VerificationRecord.compare("x", {}, 3, 4, True).passed


def test_json_field_order(records):
    line = records[0].to_json()

    assert list(json.loads(line)) == list(FIELDS)
    assert " " not in line


def test_sink_round_trip(tmp_path, records):
    path = tmp_path / "log.jsonl"
    with RecordSink(path) as sink:
        for record in records:
            emit(record, sink)
        assert sink.count == 3

    assert load_records(path) == records
    assert completed_keys(path) == completed_keys(records) == {r.key for r in records}


def test_sink_appends(tmp_path, records):
    path = tmp_path / "log.jsonl"
    with RecordSink(path) as sink:
        emit(records[0], sink)
    with RecordSink(path) as sink:
        emit(records[1], sink)

    assert len(load_records(path)) == 2


def test_truncated_last_line_is_skipped(tmp_path, records):
    path = tmp_path / "log.jsonl"
    with RecordSink(path) as sink:
        emit(records[0], sink)
        emit(records[1], sink)
    with open(path, "a", encoding="utf-8") as handle:
        handle.write(records[2].to_json()[:20])

    assert load_records(path) == records[:2]


def test_sink_drops_cut_off_last_line(tmp_path, records):
    path = tmp_path / "log.jsonl"
    with RecordSink(path) as sink:
        emit(records[0], sink)
        emit(records[1], sink)
    with open(path, "a", encoding="utf-8") as handle:
        handle.write(records[2].to_json()[:20])

    with RecordSink(path) as sink:
        emit(records[2], sink)

    assert load_records(path) == records
    assert path.read_text(encoding="utf-8").endswith("}\n")


def test_sink_completes_last_line_without_newline(tmp_path, records):
    path = tmp_path / "log.jsonl"
    path.write_text(records[0].to_json() + "\n" + records[1].to_json(), encoding="utf-8")

    with RecordSink(path) as sink:
        emit(records[2], sink)

    assert load_records(path) == records


def test_corrupt_middle_line_raises(tmp_path, records):
    path = tmp_path / "log.jsonl"
    path.write_text("{not json}\n" + records[0].to_json() + "\n", encoding="utf-8")

    with pytest.raises(ValueError):
        load_records(path)


def test_missing_log(tmp_path):
    assert load_records(tmp_path / "absent.jsonl") == []


def test_csv_mirror(tmp_path, records):
    path = tmp_path / "log.jsonl"
    csv_path = tmp_path / "log.csv"
    with RecordSink(path, csv_path) as sink:
        for record in records:
            emit(record, sink)

    lines = csv_path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == ",".join(FIELDS)
    assert len(lines) == 4


def test_records_out(tmp_path, records):
    values = records_out(records)

    assert list(values.columns) == list(FIELDS)
    assert values.shape == (3, 7)
    assert values["pass"].tolist() == [True, False, False]
    assert values["params"][0] == '{"n":244}'

    path = tmp_path / "log.jsonl"
    with RecordSink(path) as sink:
        for record in records:
            emit(record, sink)
    assert records_out(str(path)).equals(values)


def test_from_dict_requires_fields():
    with pytest.raises(ValueError):
        VerificationRecord.from_dict({"suite": "x"})
