"""Smoke test for the `pigame` extension module.

Build and install it first:

    pip install maturin
    pip install --no-build-isolation -e crates/python

then run `python python/smoke_test.py`.
"""

import pigame


def main():
    p = pigame.Process("free a b c; a?(x).x!x + a?(y).tick + b!c.c?.0")
    print("process:", p.debruijn())
    s = p.translate()
    for seed, summands in s.table():
        print(f"  {seed} -> {len(summands)} summand(s)")
    assert [seed for seed, _ in s.table()] == ["in(3,1)", "out(3,2,3)"]

    tick, nil = pigame.Process("free a; tick"), pigame.Process("free a; 0")
    assert tick.bot()["verdict"] == "InBot"
    assert nil.bot()["verdict"] == "NotInBot"

    r = pigame.fair_equiv_pi(tick, nil, k=1)
    print("tick vs 0:", r["summary"])
    assert r["outcome"] == "Distinguished"

    same = pigame.check_theorem1(p, p, k=1)
    print("P vs P:", same["processes"], "/", same["strategies"])
    assert same["agrees"]

    assert pigame.bisim_a(p)["result"] == "Bisimilar"

    u = pigame.Play("position 3: (0 1 2) (1)\nmove(tau(1,1,3,2,3), [0, 1], [0, 1, 2])\n")
    assert u.to_dot().startswith("digraph play")

    try:
        pigame.Process("free a; a?(x.0")
    except pigame.PigameError as e:
        print("rejected:", e)
    else:
        raise AssertionError("malformed process accepted")

    print("ok")


if __name__ == "__main__":
    main()
