import itertools

import pytest

from afpoly import hexmodel as hm
from afpoly.exceptions import (
    AdjacentFusionError,
    DanglingReferenceError,
    HexSyntaxError,
    HexSystemError,
    OverlapError,
)
from afpoly.matchcore import build_graph

# ---------------------------------------------------------------- parsing


@pytest.mark.parametrize(
    "text, n",
    [
        ("H{}", 1),
        ("H{0{}}", 2),
        ("H{0{1{}}}", 3),
        ("H{0{1{2{3{}}}}}", 5),
        ("H{0{}2{}4{}}", 4),
        ("  H{0{0{}}}  # anthracene\n", 3),
        ("C:LSR", 5),
        ("C:", 2),
        ("Hl:", 1),
        ("Hl:0", 2),
        ("Hl:1,0", 4),
    ],
)
def test_parse_accepts(text, n):
    assert len(hm.parse_system(text)) == n


@pytest.mark.parametrize(
    "text, exc",
    [
        ("H{0{2{}}}", AdjacentFusionError),
        ("H{0{}1{}}", AdjacentFusionError),
        ("H{0{1{2{3{4{}}}}}}", OverlapError),
        ("H{0{3{}}}", OverlapError),
        ("H{0}", DanglingReferenceError),
        ("H{7{}}", HexSystemError),
        ("H{0{}", HexSyntaxError),
        ("X{}", HexSyntaxError),
        ("C:LX", HexSyntaxError),
        ("", HexSyntaxError),
    ],
)
def test_parse_rejects(text, exc):
    with pytest.raises(exc):
        hm.parse_system(text)


def test_hexsystem_rejects_dangling_fusion():
    with pytest.raises(DanglingReferenceError):
        hm.HexSystem(hexagons=((0, (0, 0)),), fusions=((0, 1, 0),), root=0)


def test_hextree_round_trip(catalogue):
    for h in catalogue:
        again = hm.parse_system(h.to_hextree())
        assert hm.canonical_key(again) == hm.canonical_key(h)


def test_hl_round_trip():
    for r in ([], [0], [1], [0, 0], [1, 2, 0], [3]):
        assert hm.chain_spec(hm.hl_system(r)) in (r, r[::-1])


# ---------------------------------------------------------------- canonical keys


def test_mirror_bent_chains_share_a_key():
    assert hm.canonical_key(hm.parse_system("C:L")) == hm.canonical_key(hm.parse_system("C:R"))
    assert hm.canonical_key(hm.parse_system("C:LR")) == hm.canonical_key(hm.parse_system("C:RL"))


def test_distinct_shapes_have_distinct_keys():
    keys = {hm.canonical_key(hm.parse_system(s)) for s in ("C:S", "C:L", "C:LL", "C:LR", "C:SS")}
    assert len(keys) == 5


def test_key_invariant_under_all_twelve_images(catalogue):
    for h in catalogue[:40]:
        key = hm.canonical_key(h)
        images = hm.symmetry_images(sorted(h.cells))
        assert len(images) == 12
        for img in images:
            shifted = [(q + 5, r - 3) for q, r in img]
            assert hm.canonical_key(shifted) == key


# ---------------------------------------------------------------- structure


def test_segments_examples(naphthalene, anthracene, phenanthrene, triphenylene, benzene):
    assert [s.length for s in hm.segments(benzene)] == [1]
    assert [s.length for s in hm.segments(naphthalene)] == [2]
    assert [s.length for s in hm.segments(anthracene)] == [3]
    assert sorted(s.length for s in hm.segments(phenanthrene)) == [2, 2]
    assert sorted(s.length for s in hm.segments(triphenylene)) == [2, 2, 2]


def test_every_fusion_lies_in_exactly_one_segment(catalogue):
    for h in catalogue:
        if len(h) == 1:
            continue
        pairs = []
        for s in hm.segments(h):
            pairs.extend(frozenset(p) for p in zip(s.hexagons, s.hexagons[1:]))
        assert sorted(map(sorted, pairs)) == sorted(sorted((a, b)) for a, b, _ in h.fusions)


def test_classification(phenanthrene, triphenylene, anthracene):
    kinds = sorted(hm.classify_hexagon(phenanthrene, i) for i in phenanthrene.ids)
    assert kinds == [hm.KINK, hm.TERMINAL, hm.TERMINAL]
    kinds = sorted(hm.classify_hexagon(anthracene, i) for i in anthracene.ids)
    assert kinds == [hm.LINEAR, hm.TERMINAL, hm.TERMINAL]
    assert hm.classify_hexagon(triphenylene, 0) == hm.BRANCHED
    assert hm.is_linear_chain(anthracene) and not hm.is_linear_chain(phenanthrene)


def test_find_tail_examples(benzene, anthracene, phenanthrene, triphenylene):
    t = hm.find_tail(benzene)
    assert (t.kind, t.t1, t.t2, t.t3) == ("linear", -1, -1, -1)
    t = hm.find_tail(anthracene)
    assert (t.kind, t.t1, t.t2, t.t3) == ("linear", 1, -1, -1)
    t = hm.find_tail(phenanthrene)
    assert (t.kind, t.t1, t.t2, t.t3) == ("end-kink", 0, -1, 0)
    t = hm.find_tail(triphenylene)
    assert (t.kind, t.t1, t.t2, t.t3) == ("end-branched", 0, 0, 0)


def test_find_tail_is_congruence_invariant(catalogue):
    for h in catalogue[:60]:
        for img in hm.symmetry_images(sorted(h.cells))[1::5]:
            other = hm.HexSystem.from_cells(img)
            a, b = hm.find_tail(h), hm.find_tail(other)
            assert (a.kind, a.t1, a.t2, a.t3) == (b.kind, b.t1, b.t2, b.t3)


def _sizes(forest):
    return sorted(len(c) for c in forest)


def test_subsystem_examples(naphthalene, phenanthrene, triphenylene):
    s = hm.subsystems(naphthalene, hm.find_tail(naphthalene))
    assert _sizes(s.H1) == [1] and s.H2 == () and s.H3 == () and s.H4 is None
    s = hm.subsystems(phenanthrene, hm.find_tail(phenanthrene))
    assert _sizes(s.H1) == [2] and _sizes(s.H2) == [1] and s.H3 == ()
    s = hm.subsystems(triphenylene, hm.find_tail(triphenylene))
    assert _sizes(s.H1) == [2] and _sizes(s.H2) == [1] and s.H3 == () and s.H4 == ()


def test_subsystems_strictly_shrink(catalogue):
    for h in catalogue[1:]:
        for t in hm.all_tails(h):
            s = hm.subsystems(h, t)
            for forest in (s.H1, s.H2, s.H3, s.H4 or ()):
                assert sum(len(c) for c in forest) < len(h)


# ---------------------------------------------------------------- generation


def test_generate_small_counts():
    systems = hm.generate_all(4)
    counts = [sum(len(h) == k for h in systems) for k in range(1, 5)]
    assert counts == [1, 1, 2, 5]


def test_generation_is_deterministic_and_ordered():
    a = [h.to_hextree() for h in hm.generate_all(5)]
    b = [h.to_hextree() for h in hm.generate_all(5)]
    assert a == b
    sizes = [len(hm.parse_system(t)) for t in a]
    assert sizes == sorted(sizes)


def test_generation_bound():
    with pytest.raises(ValueError):
        hm.generate_all(9)
    with pytest.raises(ValueError):
        hm.generate_all(0)


_NEIGH = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))


def _brute_catafusenes(n):
    """Independent enumeration: all connected polyhexes, filtered to induced trees.

    Uses cube-coordinate symmetries instead of the package's own.
    """

    def canon(cells):
        best = None
        for refl in (False, True):
            for rot in range(6):
                img = []
                for q, r in cells:
                    x, y, z = q, r, -q - r
                    if refl:
                        x, y = y, x
                    for _ in range(rot):
                        x, y, z = -z, -x, -y
                    img.append((x, y))
                mq = min(c[0] for c in img)
                mr = min(c[1] for c in img)
                t = tuple(sorted((a - mq, b - mr) for a, b in img))
                best = t if best is None or t < best else best
        return best

    level = {canon([(0, 0)])}
    by_size = {1: level}
    for k in range(2, n + 1):
        nxt = set()
        for cells in level:
            s = set(cells)
            for q, r in cells:
                for dq, dr in _NEIGH:
                    c = (q + dq, r + dr)
                    if c not in s:
                        nxt.add(canon(list(s | {c})))
        level = nxt
        by_size[k] = level

    def is_tree(cells):
        s = set(cells)
        edges = sum((q + dq, r + dr) in s for q, r in cells for dq, dr in _NEIGH) // 2
        return edges == len(cells) - 1

    return {k: sum(is_tree(c) for c in v) for k, v in by_size.items()}


@pytest.mark.slow
def test_generated_counts_match_independent_enumeration(catalogue):
    ours = {k: sum(len(h) == k for h in catalogue) for k in range(1, 8)}
    assert ours == _brute_catafusenes(7)


def test_vertex_and_edge_counts(catalogue):
    for h in catalogue:
        g = build_graph(h)
        assert g.n_vertices == 4 * len(h) + 2
        assert g.n_edges == 5 * len(h) + 1


def test_chain_spec_matches_turn_words():
    for n in range(0, 4):
        for word in itertools.product("LSR", repeat=n):
            turns = "".join(word)
            try:
                h = hm.chain_system(turns)
            except OverlapError:
                continue
            spec = hm.chain_spec(h)
            assert spec in (hm.turns_to_hl(turns), hm.turns_to_hl(turns)[::-1])
