"""Smoke test for the zlab_py extension.

Build and install it first:

    pip install maturin
    pip install --no-build-isolation -e crates/python

then run `python python/smoke_test.py`.
"""

import json

import zlab_py as z


def main():
    ids = z.enumerate_waids()
    assert len(ids) == 155
    aliases = [i.alias for i in ids if i.alias]
    assert aliases == ["LALT", "FLEX", "RALT"], aliases

    bm = z.Identity.from_name("43B23")
    assert bm.render(sugared=False) == "x -> ((y -> x) -> z) ≈ (x -> y) -> (x -> z)"
    t = z.Term("x ^ y")
    assert t.render(sugared=False) == "(x -> (y -> 0)) -> 0"
    assert z.Term(t.render()) == t

    cat = z.catalog()
    assert sorted(cat) == ["2_b", "2_s", "A3", "A4", "T1"]
    a3 = z.Algebra.from_catalog("A3")
    assert a3.member_of("S")["holds"]
    report = a3.satisfies(z.Identity.from_name("43A12"))
    assert not report["holds"] and report["witness"], report
    assert all(e["outcome"] != "fail" for e in a3.lemma_suite()["entries"])

    custom = z.Algebra([[1, 1], [0, 1]], name="chain")
    assert custom.is_isomorphic(cat["2_b"])
    assert z.Algebra.from_json(custom.to_json()) == custom
    assert t.eval(custom, {"x": 1, "y": 0}) == 0

    two = z.find_models(2, satisfy=["S"])
    assert [m.table for m in two] == [[[0, 1], [1, 1]], [[1, 1], [0, 1]]]
    sep = z.find_separator("43A12", "43A23", 2)
    assert sep is not None and sep.is_isomorphic(cat["2_b"])

    models = [cat[n] for n in ("2_s", "2_b", "A3", "A4")]
    part = z.classify(models)
    assert len(part["blocks"]) == 6 and part["diff"] == [], json.dumps(part["diff"])
    h = z.hasse(models, with_landmarks=True)
    assert len(h["edges"]) == 10 and ["SL", "43A23"] in [list(e) for e in h["edges"]]
    assert h["dot"].startswith("digraph hasse {")

    try:
        z.Identity.from_name("99Q99")
    except ValueError:
        pass
    else:
        raise AssertionError("bad name accepted")

    print("zlab_py smoke test: ok")


if __name__ == "__main__":
    main()
