"""Smoke test for the pygcikit extension.

Build first, e.g. `pip install --no-build-isolation -e crates/py` (maturin required).
"""

import math

import pygcikit as g


def main():
    rows = g.decompose({"a0": "1"}, max_twist=1, max_spin=3)
    assert (1, 0, "2/1") in rows, rows
    assert g.closed_form_b(2, 0, {"c": "1"}) == "1/1"
    assert g.positivity({"a1": "1", "b": "-4"}) == "rejected"
    assert g.positivity({"a1": "1"}) == "admissible"
    assert g.eigen(1) == ("1/1", 1)

    e = dict(g.energy_series("scalar4", 4))
    assert e["0/1"] == "1/240" and e["4/1"] == "73/1", e
    assert dict(g.energy_series("weyl", 2))["0/1"] == "17/960"

    re, im = g.eisenstein(2, 0.0, 1.0)
    # G4 = 1/240 + sum sigma_3(n) q^n, so G4(i) = 3 Gamma(1/4)^8 / (240 (2 pi)^6)
    ref = 3 * math.gamma(0.25) ** 8 / (240 * (2 * math.pi) ** 6)
    assert abs(re - ref) < 1e-14 and abs(im) < 1e-12, (re, im)

    ok, line = g.run_check(3)
    assert ok, line
    ok, cn = g.oracle(n=2, count=10)
    assert ok and cn[2] == "-2/1", cn
    assert not g.oracle(n=2, count=5, corrupt_sign=True)[0]

    try:
        g.decompose({"a0": "1/0"})
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError")
    print("smoke test passed")


if __name__ == "__main__":
    main()
