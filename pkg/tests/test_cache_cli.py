import json
import subprocess
import sys

import pytest

from permstab.cache import ResultCache
from permstab.core import IntegrityError, Multiset
from permstab.patterns import distribution, parse_pattern


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "permstab", *args], capture_output=True, text=True
    )


def test_cache_roundtrip(tmp_path):
    path = tmp_path / "cache.jsonl"
    cache = ResultCache(path)
    m = Multiset((2, 1))
    p = parse_pattern("12")
    assert cache.lookup(m, p) is None
    cache.store(m, p, {0: 1, 1: 2})
    assert cache.lookup(m, p) == {0: 1, 1: 2}
    # a fresh instance reads the same file
    again = ResultCache(path)
    assert again.lookup(m, p) == {0: 1, 1: 2}


def test_cache_zero_counts_are_implicit(tmp_path):
    cache = ResultCache(tmp_path / "c.jsonl")
    m = Multiset((2, 1))
    p = parse_pattern("21")
    cache.store(m, p, {0: 1, 1: 2, 2: 0})
    counts = cache.lookup(m, p)
    assert counts == {0: 1, 1: 2}
    assert sum(counts.values()) == 3


def test_cache_canonical_key_for_stable_patterns(tmp_path):
    cache = ResultCache(tmp_path / "c.jsonl")
    p = parse_pattern("1-2")
    counts = distribution(Multiset((1, 2, 1)), p).counts
    cache.store(Multiset((1, 2, 1)), p, counts)
    # stable patterns share one row across the whole orbit
    assert cache.lookup(Multiset((2, 1, 1)), p) == counts
    assert cache.lookup(Multiset((1, 1, 2)), p) == counts


def test_cache_ordered_key_for_unproven_patterns(tmp_path):
    cache = ResultCache(tmp_path / "c.jsonl")
    p = parse_pattern("132")
    counts = distribution(Multiset((1, 2, 1)), p).counts
    cache.store(Multiset((1, 2, 1)), p, counts)
    assert cache.lookup(Multiset((1, 2, 1)), p) == counts
    assert cache.lookup(Multiset((2, 1, 1)), p) is None


def test_cache_partial_rows_do_not_satisfy_lookup(tmp_path):
    cache = ResultCache(tmp_path / "c.jsonl")
    m = Multiset((2, 1))
    p = parse_pattern("132")
    cache.store_value(m, p, 0, 2)
    assert cache.lookup(m, p) is None  # counts must sum to the word total


def test_cache_conflicts(tmp_path):
    path = tmp_path / "c.jsonl"
    cache = ResultCache(path)
    m = Multiset((2, 1))
    p = parse_pattern("12")
    cache.store_value(m, p, 0, 1)
    cache.store_value(m, p, 0, 1)  # idempotent
    with pytest.raises(IntegrityError):
        cache.store_value(m, p, 0, 7)
    with pytest.raises(ValueError):
        cache.store_value(m, p, 1, 2, provenance="guesswork")
    # conflicting rows on disk are rejected at load time
    with open(path, "a") as fh:
        fh.write(
            json.dumps(
                {"k": [2, 1], "pattern": "12", "s": 0, "count": "9", "provenance": "recurrence"}
            )
            + "\n"
        )
    with pytest.raises(IntegrityError):
        ResultCache(path)


def test_cache_rejects_corrupt_lines(tmp_path):
    path = tmp_path / "c.jsonl"
    path.write_text('{"k": [1], "pattern": "12"}\n')
    with pytest.raises(IntegrityError):
        ResultCache(path)
    path.write_text("not json\n")
    with pytest.raises(IntegrityError):
        ResultCache(path)


def test_cache_stats_and_clear(tmp_path):
    path = tmp_path / "c.jsonl"
    cache = ResultCache(path)
    cache.store(Multiset((1, 1)), parse_pattern("12"), {0: 1, 1: 1})
    stats = cache.stats()
    assert stats["entries"] == 2
    assert stats["distributions"] == 1
    assert stats["by_provenance"]["bruteforce"] == 2
    cache.clear()
    assert cache.stats()["entries"] == 0
    assert not path.exists()


def test_distribution_uses_cache(tmp_path):
    cache = ResultCache(tmp_path / "c.jsonl")
    m = Multiset((2, 2, 1))
    p = parse_pattern("1-2")
    first = distribution(m, p, cache=cache)
    entries = cache.stats()["entries"]
    assert entries > 0
    second = distribution(m, p, cache=cache)
    assert second.counts == first.counts
    assert cache.stats()["entries"] == entries  # pure hit, nothing re-stored


def test_cli_count_and_json():
    res = run_cli("count", "1-2", "321432212")
    assert res.returncode == 0
    assert res.stdout.strip() == "9"
    res = run_cli("count", "1-2", "321432212", "--json")
    doc = json.loads(res.stdout)
    assert doc["count"] == "9"


def test_cli_distribution_output():
    res = run_cli("dist", "12", "(2,1)")
    assert res.returncode == 0
    assert res.stdout.splitlines() == ["0\t1", "1\t2"]
    doc = json.loads(run_cli("dist", "12", "(2,1)", "--json").stdout)
    assert doc["counts"] == {"0": "1", "1": "2"}
    assert doc["multiset"] == [2, 1]


def test_cli_bijection_check():
    res = run_cli("bijection", "theta", "1", "321432212")
    assert res.returncode == 0
    assert res.stdout.strip() == "321431112"
    doc = json.loads(run_cli("bijection", "psi", "1", "1132", "--check", "1-2", "--json").stdout)
    assert doc["image"] == "1232"
    assert doc["check"]["preserved"] is True
    assert doc["check"]["count_word"] == doc["check"]["count_image"] == "4"


def test_cli_stability_and_witness():
    res = run_cli("stability", "1-2-3", "(2,1,3)")
    assert res.returncode == 0
    assert "unstable" in res.stdout
    doc = json.loads(run_cli("witness", "3142", "--json").stdout)
    assert doc["applicable"] is True
    assert doc["rearranged"] == [1, 1, 1, 1, 2]
    doc = json.loads(run_cli("witness", "2143", "--json").stdout)
    assert doc["applicable"] is False


def test_cli_exit_codes(tmp_path):
    assert run_cli("count", "1--2", "123").returncode == 2
    assert run_cli("dist", "12", "(9,9,9,9)", "--budget", "10").returncode == 3
    cache_file = tmp_path / "c.jsonl"
    cache_file.write_text(
        json.dumps({"k": [2, 1], "pattern": "12", "s": 0, "count": "999", "provenance": "bruteforce"})
        + "\n"
    )
    res = run_cli("dist", "12", "(2,1)", "--cache", str(cache_file))
    assert res.returncode == 4
    assert res.stderr  # the conflict is reported, not swallowed


def test_cli_scan_and_report_files(tmp_path):
    out = tmp_path / "report"
    res = run_cli(
        "scan",
        "--family", "consecutive:3",
        "--max-size", "4",
        "--max-letters", "3",
        "--out", str(out),
        "--json",
    )
    assert res.returncode == 0
    doc = json.loads(res.stdout)
    assert len(doc["results"]) == 6
    for suffix in (".json", ".csv", ".png"):
        written = out / f"scan{suffix}"
        assert written.exists() and written.stat().st_size > 0


def test_cli_distribution_report_files(tmp_path):
    out = tmp_path / "report"
    res = run_cli("dist", "12", "(2,2,1)", "--out", str(out))
    assert res.returncode == 0
    for suffix in (".json", ".csv", ".png"):
        written = out / f"distribution{suffix}"
        assert written.exists() and written.stat().st_size > 0


def test_cli_eulerian_report_files(tmp_path):
    out = tmp_path / "report"
    res = run_cli("eulerian", "--max-m", "6", "--out", str(out), "--json")
    assert res.returncode == 0
    doc = json.loads(res.stdout)
    assert {"m": 4, "k": 1, "s": 1, "value": "7"} in doc["entries"]
    for suffix in (".json", ".csv", ".png"):
        written = out / f"eulerian{suffix}"
        assert written.exists() and written.stat().st_size > 0


def test_cli_verify_commands():
    res = run_cli("verify-gf", "12", "(2,1,1)", "1")
    assert res.returncode == 0
    assert res.stdout.startswith("PASS")
    res = run_cli("verify-pde", "--xdeg", "2", "--ydeg", "1", "--zdeg", "2")
    assert res.returncode == 0
    assert res.stdout.strip() == "PASS"


def test_cli_extend():
    doc = json.loads(run_cli("extend", "24135", "--json").stdout)
    assert doc["extendable_indices"] == [4, 5]
    reports = {r["index"]: r for r in doc["reports"]}
    assert reports[4]["extended_permutation"] == "24135146"
    assert reports[5]["extended_multiset"] == [2, 1, 1, 1, 1, 1, 1, 1]


def test_cli_cache_command(tmp_path):
    cache_file = tmp_path / "c.jsonl"
    run_cli("dist", "1-2", "(2,1,1)", "--cache", str(cache_file))
    res = run_cli("cache", "stats", "--cache", str(cache_file), "--json")
    assert res.returncode == 0
    assert json.loads(res.stdout)["entries"] > 0
    assert run_cli("cache", "clear", "--cache", str(cache_file)).returncode == 0
    assert not cache_file.exists()
    assert run_cli("cache", "stats").returncode == 2  # --cache is required here


def test_cli_threads_do_not_change_output():
    args = ("dist", "21", "(3,2,2)", "--json")
    one = run_cli(*args, "--threads", "1")
    eight = run_cli(*args, "--threads", "8")
    assert one.stdout == eight.stdout
    assert one.returncode == eight.returncode == 0
