import json
import os
import subprocess

import pytest

import smallsum


def test_sumset_and_period():
    assert smallsum.sumset([5], [0, 1], [0, 2]) == [[0], [1], [2], [3]]
    assert smallsum.period([4], [0, 2])["order"] == 2


def test_kappa_example():
    r = smallsum.kappa([6], [[0], [1]], k=2)
    assert r["kappa"] == 1
    assert r["atoms"] == [[[0], [1]]]


def test_groups_and_subgroups():
    assert smallsum.abelian_groups(8)[-3:] == [[8], [2, 4], [2, 2, 2]]
    assert len(smallsum.subgroups([2, 2])) == 5


def test_classify_and_hypothesis_error():
    v = smallsum.classify("3x3", [7], [0, 1, 3], [0, 1, 3])
    assert v["verified"] and v["principal"] == "translate"
    with pytest.raises(smallsum.HypothesisError):
        smallsum.classify("3x3", [9], [0, 1, 2], [0, 3, 6])


def test_verify_summary():
    r = smallsum.verify("kneser", max_order=8)
    assert r["pass"] and r["instances"] > 0
    r = smallsum.verify("kneser", max_order=8, sampling="random", seed=3, count=200)
    assert r["instances"] == 200


def test_mutation_sites():
    assert len(smallsum.mutation_sites()) >= 10


@pytest.mark.skipif(not os.environ.get("SMALLSUM_CLI"), reason="CLI path not provided")
def test_cli_jsonl():
    out = subprocess.run(
        [os.environ["SMALLSUM_CLI"], "verify", "--theorem", "duality", "--max-order", "6"],
        capture_output=True, text=True, check=True,
    ).stdout.strip().splitlines()
    summary = json.loads(out[-1])
    assert summary["type"] == "summary" and summary["violation_count"] == 0
