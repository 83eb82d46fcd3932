"""Smoke test for the `blowdown` extension module.

Build and install first, e.g.

    cd crates/python && maturin build --release -o dist && pip install dist/*.whl

then run `python python/smoke_test.py`.
"""

import json
import pathlib
from fractions import Fraction

import blowdown

ROOT = pathlib.Path(__file__).resolve().parent.parent


def check(cond, what):
    if not cond:
        raise SystemExit(f"FAIL: {what}")
    print(f"ok: {what}")


def main():
    k = blowdown.HomologyClass.canonical(13)
    check(k.coeffs == [-3] + [1] * 13, "canonical class coefficients")
    check(k.square() == 9 - 13, "K^2 on CP2 # 13")
    check(k.is_characteristic(), "K is characteristic")
    h = blowdown.HomologyClass([1] + [0] * 13)
    check(h.pair(k) == -3, "h . K")
    check((2 * h - h).coeffs == h.coeffs, "class arithmetic")

    c7 = blowdown.Configuration(7)
    q = c7.dual_form()
    check(all(isinstance(x, Fraction) for row in q for x in row), "dual form is exact")
    check(q[-1][-1] == Fraction(-6, 49), "Q[6][6] = -6/49")
    check(q[0][0] == Fraction(-41, 49), "Q[0][0] = -41/49")
    check(c7.boundary() == (49, -6), "boundary L(49, -6)")

    lines = (ROOT / "scenarios" / "c7_main.scn").read_text().splitlines()
    classes = [
        blowdown.HomologyClass(json.loads(l.split("=", 1)[1]))
        for l in lines
        if l.startswith("class ")
    ]
    check(c7.verify_embedding(classes) is None, "C7 embedding verifies")
    bad = classes[:5] + [blowdown.HomologyClass([0] * 9 + [1, -1, 0, 0, 0])]
    check(c7.verify_embedding(bad) == (6, 6, -9, -2), "wrong last sphere is rejected")

    embedded = blowdown.Configuration(7, classes)
    pairing = blowdown.blowdown_pairing(k, embedded)
    check(pairing["result"]["a"] == Fraction(54, 7), "blown-down pairing a-coefficient")
    print("   K_7 . w_7 =", pairing["result_text"])

    verdict, terms = blowdown.certify_positive(list(pairing["result"].values()))
    check(verdict == "Positive" and all(c >= 0 for c, _ in terms), "positivity certificate")
    verdict, witness = blowdown.certify_positive([Fraction(-3), 1, 1])
    check(verdict == "NotPositive" and len(witness) == 3, "anticanonical-type form is not positive")

    inv = blowdown.Invariants.rational_surface(13)
    check(inv.numeric() == (1, 13, 16, -12, -4), "CP2 # 13 invariants")
    x7 = inv.rational_blowdown(7, assume_simply_connected=True)
    check(x7.numeric() == (1, 7, 10, -6, 2), "blown-down invariants")
    check(x7.homeo_type() == "CP² # 7CP̄²", "homeomorphism type")
    check(blowdown.kotschick_bound(x7.blow_up(), 0) == Fraction(1, 2), "bound after blow-up")

    r1 = json.loads(blowdown.run_report("main1"))
    check(r1["positivity"]["verdict"] == "Positive", "main1 report")
    r3 = json.loads(blowdown.run_report("main3"))
    check(r3["kotschick"]["contradiction"] is True, "main3 report")
    r = json.loads(blowdown.run_scenario((ROOT / "scenarios" / "c5_main.scn").read_text()))
    check(r == json.loads(blowdown.run_report("main2")), "scenario text matches main2")
    check(json.loads(blowdown.plumbing_summary(5))["boundary"] == "L(25, -4)", "plumbing summary")
    print("all smoke checks passed")


if __name__ == "__main__":
    main()
