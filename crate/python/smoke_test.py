"""Smoke test for the p3c extension module.

Build and copy the module next to this file first:

    cargo build --release -p p3c-py --features extension-module
    cp target/release/libp3c.so python/p3c.so
"""

import sys
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

import p3c  # noqa: E402


def main() -> None:
    c = p3c.closed_forms(-1, 1)
    assert c["Delta"] == 3 and c["B2"] == 12 and c["S2"] == Fraction(228, 49), c

    rho = p3c.invariants("-1", "1")
    assert rho[:3] == [Fraction(2, 5), Fraction(1, 8), Fraction(-1, 6)], rho

    rec = p3c.recover("2/5", "1/8", "-1/6", "3/2")
    assert rec["beta"] == 1 and rec["alpha"] == -1 and rec["branch"] == "Degenerate", rec
    rec = p3c.recover(*p3c.invariants(2, -1)[:3])
    assert (rec["alpha"], rec["beta"]) == (2, -1), rec

    assert p3c.classify_folded(-1, 1)["kind"] == "FoldedFocus"
    assert p3c.classify_folded(Fraction(-51, 200), 1)["kind"] == "FoldedNode"
    assert p3c.region(-1, 1)["multilocal"]["region"]["Listed"]["id"] == 7

    s = p3c.Surface.normal_form(-1, 1)
    assert s.detect()["is_p3c"] and s.a(4, 4) == -1
    report = s.analyze()
    assert report["status"] == "ok"
    rows = {row["label"]: row for row in report["c_values"]}
    assert all(rows[k]["pass"] for k in ("Delta", "B2", "S2", "flecnodal")), rows
    # Bi-germ loci reproduce the closed forms only under the opposite-sign chart change.
    assert abs(rows["A0S1"]["mirror"] - 2) < 1e-6, rows["A0S1"]
    assert s.analyze(mode="float", oracle=False)["c_values"][0]["closed"] == 3.0

    bad = p3c.Surface.from_coefficients({"32": 1, "33": "1/3", "44": -1}, {"33": 1})
    assert bad.detect()["failure"] == "not a P3(c) point: a33 != 0"

    try:
        p3c.Surface.normal_form(1, 1)
    except p3c.P3cError:
        pass
    else:
        raise AssertionError("excluded normal form accepted")

    print("p3c smoke test ok")


if __name__ == "__main__":
    main()
