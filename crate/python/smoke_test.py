"""Smoke test for the pyklvwb extension.

Build and install first:
    pip install --no-build-isolation -e crates/python
"""

import json

import pyklvwb
from pyklvwb import Datum, KlvwbError, LaurentPoly


def main():
    assert "sl2-T" in pyklvwb.builtin_names()

    q = LaurentPoly("q")
    assert str(q * q + LaurentPoly("1")) == "1+q^2"
    assert q.bar() == LaurentPoly("q^-1")

    d = Datum.builtin("sl2-T")
    assert d.params() == ["p0", "pInf", "ws", "wt"]
    t = d.klv_table()
    assert ("p0", "wt", "1") in t.rows()
    assert {k: str(v) for k, v in t.element("wt").items()} == {"p0": "1", "pInf": "1", "wt": "1"}
    assert t.is_cuspidal("ws") and t.is_clean("ws")
    assert t.c_expansion("s1", "ws") == {}
    assert str(t.c_expansion("s1", "wt")["wt"]) == "1+q"
    assert {k: str(v) for k, v in d.act("p0", "s1").items()} == {"pInf": "1", "wt": "1"}
    assert t.ic("ws", window=2) == ("1", "-1=1;1=0;3=0")

    a1 = Datum.builtin("hecke-regular:A1").klv_table()
    assert a1.ext("e", "s1")[0] == "q / (1-q)"

    passed, report = Datum.builtin("sl2-N").check()
    assert passed, report

    broken = json.loads(d.to_json())
    broken["actions"]["1"]["p0"] = {"case": "CompactG"}
    checks = {name: ok for name, ok, _ in Datum.check_json(json.dumps(broken))}
    assert not checks["thm-order-reachability"]
    try:
        Datum.from_json(json.dumps(broken))
    except KlvwbError as e:
        assert "thm-order-reachability" in str(e)
    else:
        raise AssertionError("broken datum accepted")

    print("pyklvwb smoke test: ok")


if __name__ == "__main__":
    main()
