"""Smoke test for the guesswork_py extension module.

Build and install first:
    pip install maturin
    maturin build --release -m crates/python/Cargo.toml
    pip install target/wheels/guesswork_py-*.whl
"""

from fractions import Fraction

import guesswork_py as gw


def main():
    p = gw.Distribution([0.4, 0.3, 0.2, 0.1])
    q = gw.Distribution.parse("[0.6,0.2,0.1,0.1]")
    assert len(p) == 4
    assert p.probs == [Fraction(2, 5), Fraction(3, 10), Fraction(1, 5), Fraction(1, 10)]
    assert gw.mismatch_cost(p, q) == 0
    assert gw.total_variation(p, q) == Fraction(1, 5)

    optimal_q = gw.optimal_set(q)
    assert [g.ranks for g in optimal_q] == [[1, 2, 3, 4], [1, 2, 4, 3]]
    gp = gw.GuessingFunction.optimal_for(p)
    assert gp == gw.GuessingFunction([1, 2, 3, 4])
    assert gw.expected_guesswork(gp, p) == 2
    assert gw.expected_cost(gp, optimal_q[1], p) == Fraction(1, 10)
    assert gw.weighted_kendall(p, gp, optimal_q[1]) == Fraction(1, 10)
    assert gw.kendall_tau(gw.GuessingFunction([1, 2, 3]), gw.GuessingFunction([3, 2, 1])) == 3
    assert len(gw.minimal_path(gw.GuessingFunction([1, 2, 3]), gw.GuessingFunction([3, 2, 1]))) == 3

    rounds = gw.tournament(5)
    assert len(rounds) == 5 and all(len(r) == 2 for r in rounds)
    cert = gw.certificate(p, gw.Distribution.uniform(4))
    assert cert["delta"] == "0" and cert["bound"] == "1.2"

    ep, eq, delta = gw.example_optimal(5, Fraction(1, 10), Fraction(1, 2))
    assert delta == Fraction(2, 5)
    assert gw.mismatch_cost(ep, eq) == delta

    rows = gw.scan_simplex(6, "0.2", 40)
    assert len(rows) == 28
    assert all(0 <= r[3] <= Fraction(4, 5) and 0 <= r[4] <= 3 for r in rows)

    assert gw.verify_thm1(4, 50, 1)["failures"] == []
    assert gw.verify_thm2(8, 50, 1)["failures"] == []
    assert gw.oracle_delta(3, 5)["failures"] == []

    try:
        gw.Distribution([0.5, 0.6])
    except gw.GuessworkError as e:
        assert str(e).startswith("[NOT_NORMALIZED]")
    else:
        raise AssertionError("expected GuessworkError")

    print("guesswork_py smoke test: ok")


if __name__ == "__main__":
    main()
