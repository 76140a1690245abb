import pytest

from fanoloc import fanodb
from fanoloc.fanodb import HEADER, DatabaseError, FanoDatabase, FanoRecord, parse_records, parse_ranges

HEAD = ",".join(HEADER) + "\n"


@pytest.fixture(scope="module")
def db():
    return fanodb.default_database()


def ids(records):
    return sorted(r.id for r in records)


def test_seed_size(db):
    assert len(db) >= 15
    assert all(r.source for r in db.records)


def test_lookups(db):
    assert ids(db.lookup(1, 64, 0)) == ["P3"]
    assert ids(db.lookup(2, 54, 0)) == ["BlLineP3", "P1xP2"]
    assert ids(db.lookup(3, 48, 0)) == ["P1^3", "P1xF1"]
    assert db.lookup(2, 50, 0) == []
    assert ids(fanodb.lookup(1, 64, 0)) == ["P3"]


def test_range_facts(db):
    facts = db.range_facts(4)
    assert facts
    assert db.violates_ranges(4, 48, 0) is not None
    assert db.violates_ranges(4, 24, 0) is not None
    assert db.violates_ranges(4, 26, 0) is None
    assert db.violates_ranges(4, 30, 2) is not None
    assert db.violates_ranges(4, 28, 1) is None
    one = db.range_facts(1)
    assert any(f.k3_allowed and {64, 54} <= f.k3_allowed for f in one)
    assert db.violates_ranges(1, 50, 0) is not None
    assert fanodb.range_facts(99) == []
    assert db.violates_ranges(99, 1000, 7) is None


def test_empty_text():
    assert parse_records("") == []
    assert parse_records(HEAD) == []


def test_empty_file(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("")
    assert len(fanodb.load(path)) == 0


def test_malformed_row_names_line():
    text = HEAD + "1,64,0,P3,projective space,src\n2,fifty,0,X,bad,src\n"
    with pytest.raises(DatabaseError, match=r"<string>:3"):
        parse_records(text)
    with pytest.raises(DatabaseError, match=r":2: expected 6 fields"):
        parse_records(HEAD + "1,64\n")
    with pytest.raises(DatabaseError, match="header"):
        parse_records("a,b,c\n")


def test_invalid_values():
    with pytest.raises(DatabaseError, match="even"):
        parse_records(HEAD + "1,63,0,X,odd degree,src\n")
    with pytest.raises(ValueError):
        FanoRecord(0, 64, 0, "X", "", "")


def test_duplicates():
    text = HEAD + "1,64,0,P3,a,src\n1,64,0,P3,b,src\n"
    with pytest.raises(DatabaseError, match="duplicate.*line 2"):
        parse_records(text)
    rec = FanoRecord(1, 64, 0, "P3", "", "")
    with pytest.raises(DatabaseError):
        FanoDatabase([rec, rec])


def test_parse_ranges():
    text = "picard_rank,when_h12,k3_allowed,h12_allowed,source\n4,0,26..30,,s\n5,,28|36,0,s\n"
    a, b = parse_ranges(text)
    assert a.when_h12 == 0 and a.k3_allowed == frozenset(range(26, 31)) and a.h12_allowed is None
    assert b.admits(28, 0) and not b.admits(30, 0) and not b.admits(28, 1)
    assert a.admits(100, 1)
    with pytest.raises(DatabaseError, match=":2"):
        parse_ranges("picard_rank,when_h12,k3_allowed,h12_allowed,source\n4,,x|y,,s\n")


def test_round_trip_and_merge(tmp_path, db):
    path = tmp_path / "extra.csv"
    path.write_text(fanodb.records_to_csv([FanoRecord(2, 6, 52, "V2x", "test row", "test")]))
    extra = fanodb.load(path)
    merged = db.merged(extra)
    assert len(merged) == len(db) + 1
    assert ids(merged.lookup(2, 6, 52)) == ["V2x"]


def test_sibling_ranges_file(tmp_path):
    (tmp_path / "t.csv").write_text(HEAD + "4,30,0,A,a,s\n")
    (tmp_path / "t_ranges.csv").write_text("picard_rank,when_h12,k3_allowed,h12_allowed,source\n4,,30,0,s\n")
    db = fanodb.load(tmp_path / "t.csv")
    assert len(db.ranges) == 1
    assert db.violates_ranges(4, 32, 0) is not None


def test_missing_file(tmp_path):
    with pytest.raises(DatabaseError, match="cannot read"):
        fanodb.load(tmp_path / "nope.csv")


def test_environment_override(tmp_path, monkeypatch):
    path = tmp_path / "only.csv"
    path.write_text(HEAD + "1,64,0,P3,projective space,src\n")
    monkeypatch.setenv("FANODB_PATH", str(path))
    db = fanodb.default_database()
    assert len(db) == 1
    assert fanodb.lookup(2, 54, 0) == []
