"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines inline;
they are also repeated in the terminal summary.
"""

import contextlib
import itertools
import time

import pytest

from afpoly import engine
from afpoly import hexmodel as hm
from afpoly import matchcore as mc
from afpoly.exceptions import OverlapError
from afpoly.poly import Polynomial, degree_support, eval_at_one

from .conftest import ACCEPTANCE_LINES

P = Polynomial


@contextlib.contextmanager
def criterion(number, label, limit_s=None):
    """Time the block, record one PASS/FAIL line, then re-raise any failure."""
    t0 = time.perf_counter()
    failure = None
    try:
        yield
    except AssertionError as exc:
        failure = exc
    elapsed = time.perf_counter() - t0
    if failure is None and limit_s is not None and elapsed >= limit_s:
        failure = AssertionError(f"took {elapsed:.3f}s, limit {limit_s}s")
    status = "PASS" if failure is None else "FAIL"
    line = f"[{status}] criterion {number:2d}: {label} ({elapsed * 1000:.1f} ms)"
    if failure is not None:
        line += f" -- {failure}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    if failure is not None:
        raise failure


def best_of(fn, repeats=5):
    """Smallest wall time of ``repeats`` calls, for the sub-millisecond budgets."""
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def test_criterion_01_single_hexagon():
    benzene = hm.parse_system("H{}")
    with criterion(1, "single hexagon gives 2x with spectrum {1}"):
        assert engine.af_poly(benzene) == P({1: 2})
        assert engine.spectrum(benzene).degrees == {1}
        elapsed = best_of(lambda: (engine.af_poly(benzene), engine.spectrum(benzene)))
        assert elapsed < 1e-3, f"{elapsed * 1000:.3f} ms"


BASES = {
    ("P", 0): {2: 1, 1: 2},
    ("P", 1): {4: 1, 3: 7, 2: 1},
    ("P", 2): {6: 1, 5: 6, 4: 11, 3: 6},
    ("Q", 0): {1: 2},
    ("Q", 1): {3: 1, 2: 3, 1: 1},
    ("Q", 2): {5: 1, 4: 4, 3: 8, 2: 1},
    ("R", 0): {0: 1},
    ("R", 1): {2: 1, 1: 2},
    ("R", 2): {4: 1, 3: 2, 2: 5},
    ("R", 3): {6: 1, 5: 3, 4: 8, 3: 10},
}


def test_criterion_02_family_table():
    with criterion(2, "family table reproduces P0..P2, Q0..Q2, R0..R3"):
        def check():
            for (f, n), coeffs in BASES.items():
                assert engine.family_poly(f, n) == P(coeffs), (f, n)

        check()
        elapsed = best_of(check)
        assert elapsed < 1e-2, f"{elapsed * 1000:.3f} ms"


def test_criterion_03_closed_form():
    with criterion(3, "closed form equals recurrence for R0..R12", limit_s=1.0):
        for n in range(13):
            assert engine.family_R_closed_form(n) == engine.family_poly("R", n), n


def test_criterion_04_dual_recurrence():
    with criterion(4, "Q via both recurrences, P via both tabulations, n = 3..10", limit_s=1.0):
        qr = engine.family_table(10, route="QR")
        pqr = engine.family_table(10, route="PQR")
        for n in range(3, 11):
            assert qr["Q"][n] == pqr["Q"][n], n
            assert qr["P"][n] == pqr["P"][n], n
            assert engine.q_from_p(pqr["P"], pqr["Q"], n) == qr["Q"][n], n


def test_criterion_05_recurrence_vs_oracle(upto):
    systems = upto(6)
    with criterion(5, f"recurrence equals oracle on all {len(systems)} systems with <= 6 hexagons", limit_s=300):
        counts = [sum(len(h) == k for h in systems) for k in range(1, 5)]
        assert counts == [1, 1, 2, 5]
        for h in systems:
            assert engine.af_poly(h, cache=engine.MemoCache()) == engine.brute_af_poly(h), h.to_hextree()


def test_criterion_06_af_equals_c_prime(upto):
    systems = upto(5)
    with criterion(6, "af = c' for every perfect matching, <= 5 hexagons", limit_s=120):
        n = 0
        for h in systems:
            g = mc.build_graph(h)
            for m in mc.enumerate_perfect_matchings(g):
                assert mc.af_number(g, m, certify=False) == mc.c_prime(g, m), h.to_hextree()
                n += 1
        assert n > 0


def test_criterion_07_spectrum_continuity(upto):
    systems = upto(7)
    with criterion(7, f"spectrum is an interval for all {len(systems)} systems with <= 7 hexagons", limit_s=300):
        for h in systems:
            degs = degree_support(engine.af_poly(h))
            assert degs == set(range(min(degs), max(degs) + 1)), h.to_hextree()


def test_criterion_08_counting_identity(upto):
    systems = upto(7)
    with criterion(8, "polynomial at 1 equals the perfect matching count, <= 7 hexagons"):
        named = {"H{0{}}": 3, "C:L": 5, "H{0{}2{}4{}}": 9}
        for text, count in named.items():
            h = hm.parse_system(text)
            assert eval_at_one(engine.af_poly(h)) == count == len(mc.enumerate_perfect_matchings(mc.build_graph(h)))
        for h in systems:
            g = mc.build_graph(h)
            assert eval_at_one(engine.af_poly(h)) == len(mc.enumerate_perfect_matchings(g)), h.to_hextree()


def test_criterion_09_vertical_edges(upto):
    systems = upto(6)
    with criterion(9, "one vertical edge per segment in every matching, <= 6 hexagons"):
        for h in systems:
            g = mc.build_graph(h)
            for m in mc.enumerate_perfect_matchings(g):
                assert mc.check_vertical_edge_rule(g, m), h.to_hextree()


def test_criterion_10_chain_recurrence():
    with criterion(10, "chain recurrence equals general recurrence for all chains <= 7 hexagons"):
        checked = 0
        assert engine.chain_af_poly([]) == engine.af_poly(hm.parse_system("H{}"))
        for n in range(2, 8):
            for word in itertools.product("LSR", repeat=n - 2):
                turns = "".join(word)
                try:
                    h = hm.chain_system(turns)
                except OverlapError:
                    continue
                assert engine.chain_af_poly(hm.turns_to_hl(turns)) == engine.af_poly(h), turns
                checked += 1
        assert checked > 300


def test_criterion_11_fries(upto):
    systems = upto(5)
    with criterion(11, "Fries number equals top degree, <= 5 hexagons"):
        for h in systems:
            assert mc.fries_number(mc.build_graph(h)) == engine.af_poly(h).degree, h.to_hextree()


def test_criterion_12_family_geometry():
    with criterion(12, "family systems reproduce P, Q, R for n <= 3"):
        for f in "PQR":
            for n in range(4):
                if f == "R" and n == 0:
                    # R_0 is the empty graph
                    assert engine.af_poly(()) == engine.family_poly("R", 0)
                    continue
                assert engine.af_poly(engine.family_system(f, n)) == engine.family_poly(f, n), (f, n)


def test_criterion_13_tail_independence(upto):
    systems = [h for h in upto(5) if len(hm.all_tails(h)) >= 2]
    with criterion(13, f"every tail gives the same polynomial on {len(systems)} systems, <= 5 hexagons"):
        assert systems
        for h in systems:
            values = {engine.af_poly_with_tail(h, t, cache=None) for t in hm.all_tails(h)}
            assert len(values) == 1, h.to_hextree()
