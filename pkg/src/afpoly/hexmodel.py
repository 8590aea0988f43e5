"""Catacondensed hexagonal systems on the axial hexagonal lattice.

A system is stored as a rooted dual tree: every hexagon is a lattice cell
``(q, r)`` and every fusion records the absolute direction from parent to
child.  Directions are numbered counter-clockwise in steps of 60 degrees,
direction 0 pointing along +q.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional

from .exceptions import (
    AdjacentFusionError,
    DanglingReferenceError,
    HexSyntaxError,
    HexSystemError,
    InvariantError,
    OverlapError,
)

Cell = tuple[int, int]

DIRECTIONS: tuple[Cell, ...] = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))
DEFAULT_GENERATION_BOUND = 8

TERMINAL, KINK, LINEAR, BRANCHED = "terminal", "kink", "linear", "branched"


def opposite(d: int) -> int:
    return (d + 3) % 6


def step(cell: Cell, d: int) -> Cell:
    dq, dr = DIRECTIONS[d]
    return (cell[0] + dq, cell[1] + dr)


def direction_between(a: Cell, b: Cell) -> Optional[int]:
    """Direction from ``a`` to the lattice-adjacent ``b``; None if not adjacent."""
    delta = (b[0] - a[0], b[1] - a[1])
    try:
        return DIRECTIONS.index(delta)
    except ValueError:
        return None


def adjacent_directions(a: int, b: int) -> bool:
    return (a - b) % 6 in (1, 5)


@dataclass(frozen=True)
class HexSystem:
    """A validated catacondensed hexagonal system.

    ``hexagons`` holds ``(id, (q, r))`` records, ``fusions`` holds
    ``(parent, child, direction)`` triples forming a tree rooted at ``root``.
    """

    hexagons: tuple[tuple[int, Cell], ...]
    fusions: tuple[tuple[int, int, int], ...]
    root: int

    def __post_init__(self):
        object.__setattr__(self, "hexagons", tuple((int(i), (int(c[0]), int(c[1]))) for i, c in self.hexagons))
        object.__setattr__(self, "fusions", tuple((int(p), int(c), int(d)) for p, c, d in self.fusions))
        _validate(self)

    # -- construction -----------------------------------------------------
    @classmethod
    def from_cells(cls, cells: Iterable[Cell]) -> "HexSystem":
        """Build from a set of lattice cells whose adjacency graph is a tree.

        Ids follow sorted cell order; the smallest cell is the root.
        """
        cells = list(cells)
        ordered = sorted(set(cells))
        if not ordered:
            raise HexSystemError("a hexagonal system needs at least one hexagon")
        if len(ordered) != len(cells):
            raise OverlapError("duplicate cells")
        ids = {c: i for i, c in enumerate(ordered)}
        fusions = []
        seen = {ordered[0]}
        queue = deque([ordered[0]])
        while queue:
            cur = queue.popleft()
            for d in range(6):
                nxt = step(cur, d)
                if nxt in ids and nxt not in seen:
                    seen.add(nxt)
                    fusions.append((ids[cur], ids[nxt], d))
                    queue.append(nxt)
        if len(seen) != len(ordered):
            raise HexSystemError("cells are not connected")
        return cls(tuple((i, c) for c, i in ids.items()), tuple(fusions), 0)

    # -- derived views ----------------------------------------------------
    @cached_property
    def cell_of(self) -> dict[int, Cell]:
        return dict(self.hexagons)

    @cached_property
    def id_at(self) -> dict[Cell, int]:
        return {c: i for i, c in self.hexagons}

    @cached_property
    def cells(self) -> frozenset[Cell]:
        return frozenset(self.id_at)

    @cached_property
    def ids(self) -> tuple[int, ...]:
        return tuple(sorted(self.cell_of))

    @cached_property
    def adjacency(self) -> dict[int, tuple[tuple[int, int], ...]]:
        """hexagon id -> ((direction, neighbour id), ...) sorted by direction."""
        adj: dict[int, list[tuple[int, int]]] = {i: [] for i in self.cell_of}
        for p, c, d in self.fusions:
            adj[p].append((d, c))
            adj[c].append((opposite(d), p))
        return {i: tuple(sorted(v)) for i, v in adj.items()}

    def neighbor_in(self, hid: int, d: int) -> Optional[int]:
        return self.id_at.get(step(self.cell_of[hid], d))

    def degree(self, hid: int) -> int:
        return len(self.adjacency[hid])

    def __len__(self) -> int:
        return len(self.hexagons)

    def to_hextree(self) -> str:
        return to_hextree(self)

    def restrict(self, ids: Iterable[int]) -> list["HexSystem"]:
        """Connected components of the subsystem induced by ``ids``."""
        return components(self.cell_of[i] for i in ids)


def _validate(h: HexSystem) -> None:
    if not h.hexagons:
        raise HexSystemError("a hexagonal system needs at least one hexagon")
    cell_of: dict[int, Cell] = {}
    for i, c in h.hexagons:
        if i in cell_of:
            raise HexSystemError(f"duplicate hexagon id {i}")
        cell_of[i] = c
    if h.root not in cell_of:
        raise DanglingReferenceError(f"root {h.root} is not a hexagon")
    parent: dict[int, int] = {}
    dirs: dict[int, list[int]] = {i: [] for i in cell_of}
    for p, c, d in h.fusions:
        if p not in cell_of or c not in cell_of:
            raise DanglingReferenceError(f"fusion ({p}, {c}) references an unknown hexagon")
        if not 0 <= d <= 5:
            raise HexSyntaxError(f"direction {d} out of range 0..5")
        if c in parent or c == h.root:
            raise HexSystemError(f"hexagon {c} has more than one parent")
        parent[c] = p
        if step(cell_of[p], d) != cell_of[c]:
            raise HexSystemError(f"fusion ({p}, {c}, {d}) disagrees with cell coordinates")
        dirs[p].append(d)
        dirs[c].append(opposite(d))
    if len(h.fusions) != len(cell_of) - 1:
        raise HexSystemError("fusion structure is not a tree")
    # every non-root hexagon must reach the root
    for i in cell_of:
        seen = set()
        while i != h.root:
            if i in seen or i not in parent:
                raise HexSystemError("fusion structure is not a tree")
            seen.add(i)
            i = parent[i]
    for i, ds in dirs.items():
        for a in range(len(ds)):
            for b in range(a + 1, len(ds)):
                if adjacent_directions(ds[a], ds[b]):
                    raise AdjacentFusionError(
                        f"hexagon {i} has fusions in adjacent directions {ds[a]} and {ds[b]}"
                    )
    _check_embedding(cell_of, {(min(p, c), max(p, c)) for p, c, _ in h.fusions})


def _check_embedding(cell_of: dict[int, Cell], fused: set[tuple[int, int]]) -> None:
    at: dict[Cell, int] = {}
    for i, c in cell_of.items():
        if c in at:
            raise OverlapError(f"hexagons {at[c]} and {i} overlap at cell {c}")
        at[c] = i
    for i, c in cell_of.items():
        for d in range(6):
            j = at.get(step(c, d))
            if j is not None and i < j and (i, j) not in fused:
                raise OverlapError(f"unfused hexagons {i} and {j} touch (self-contact)")


# ---------------------------------------------------------------------------
# parsing and serialisation
# ---------------------------------------------------------------------------

_COMMENT = re.compile(r"#[^\n]*")


def parse_system(text: str) -> HexSystem:
    """Parse HEXTREE, ``C:`` chain or ``Hl:`` text into a validated system."""
    src = _COMMENT.sub("", text).strip()
    compact = "".join(src.split())
    if compact.startswith("Hl:"):
        return hl_system(_parse_int_list(compact[3:]))
    if compact.startswith("C:"):
        return chain_system(compact[2:])
    if compact.startswith("H"):
        return _parse_hextree(compact)
    raise HexSyntaxError(f"unrecognised system description: {src[:40]!r}")


def _parse_int_list(body: str) -> list[int]:
    if not body:
        return []
    try:
        values = [int(tok) for tok in body.split(",")]
    except ValueError as exc:
        raise HexSyntaxError(f"bad Hl list {body!r}") from exc
    if any(v < 0 for v in values):
        raise HexSystemError("Hl entries must be non-negative")
    return values


def _parse_hextree(s: str) -> HexSystem:
    pos = 1  # past 'H'
    hexagons: list[tuple[int, Cell]] = []
    fusions: list[tuple[int, int, int]] = []

    def node(cell: Cell, incoming: Optional[int]) -> int:
        nonlocal pos
        if pos >= len(s) or s[pos] != "{":
            raise HexSyntaxError(f"expected '{{' at offset {pos}")
        pos += 1
        hid = len(hexagons)
        hexagons.append((hid, cell))
        used = [] if incoming is None else [opposite(incoming)]
        while True:
            if pos >= len(s):
                raise HexSyntaxError("unterminated node: missing '}'")
            ch = s[pos]
            if ch == "}":
                pos += 1
                return hid
            if ch not in "012345":
                raise HexSyntaxError(f"unexpected {ch!r} at offset {pos}")
            d = int(ch)
            pos += 1
            if pos >= len(s) or s[pos] != "{":
                raise DanglingReferenceError(f"direction {d} at offset {pos - 1} has no child node")
            for u in used:
                if u == d:
                    raise OverlapError(f"two fusions of hexagon {hid} use direction {d}")
                if adjacent_directions(u, d):
                    raise AdjacentFusionError(
                        f"hexagon {hid}: directions {u} and {d} are adjacent "
                        "(three hexagons would share a vertex)"
                    )
            used.append(d)
            child = node(step(cell, d), d)
            fusions.append((hid, child, d))

    node((0, 0), None)
    if pos != len(s):
        raise HexSyntaxError(f"trailing input at offset {pos}")
    fusions.sort(key=lambda f: f[1])
    return HexSystem(tuple(hexagons), tuple(fusions), 0)


def chain_system(turns: str) -> HexSystem:
    """Chain from a turn word over {L, S, R}; ``""`` is naphthalene."""
    bad = set(turns) - set("LSR")
    if bad:
        raise HexSyntaxError(f"chain turns must be L/S/R, got {sorted(bad)}")
    d = 0
    cells = [(0, 0), step((0, 0), 0)]
    fusions = [(0, 1, 0)]
    for t in turns:
        d = (d + {"L": 1, "S": 0, "R": -1}[t]) % 6
        cells.append(step(cells[-1], d))
        fusions.append((len(cells) - 2, len(cells) - 1, d))
    return HexSystem(tuple(enumerate(cells)), tuple(fusions), 0)


def hl_turns(r: Iterable[int]) -> Optional[str]:
    """Zig-zag turn word for Hl(r_1..r_n); None for the single hexagon."""
    r = list(r)
    if not r:
        return None
    parts = ["S" * ri for ri in r]
    word = parts[0]
    for i, part in enumerate(parts[1:]):
        word += ("L" if i % 2 == 0 else "R") + part
    return word


def hl_system(r: Iterable[int]) -> HexSystem:
    r = list(r)
    if any(v < 0 for v in r):
        raise HexSystemError("Hl entries must be non-negative")
    turns = hl_turns(r)
    if turns is None:
        return HexSystem(((0, (0, 0)),), (), 0)
    return chain_system(turns)


def turns_to_hl(turns: str) -> list[int]:
    """Segment sizes minus two of the chain described by ``turns``."""
    r, run = [], 0
    for t in turns:
        if t == "S":
            run += 1
        else:
            r.append(run)
            run = 0
    r.append(run)
    return r


def to_hextree(h: HexSystem) -> str:
    children: dict[int, list[tuple[int, int]]] = {i: [] for i in h.cell_of}
    for p, c, d in h.fusions:
        children[p].append((d, c))

    def emit(i: int) -> str:
        return "{" + "".join(f"{d}{emit(c)}" for d, c in sorted(children[i])) + "}"

    return "H" + emit(h.root)


# ---------------------------------------------------------------------------
# congruence
# ---------------------------------------------------------------------------

def _rotate(c: Cell) -> Cell:
    return (-c[1], c[0] + c[1])


def _reflect(c: Cell) -> Cell:
    return (c[1], c[0])


def symmetry_images(cells: Iterable[Cell]) -> list[list[Cell]]:
    """The 12 images of ``cells`` under rotations and reflections (unnormalised).

    Image ``2k`` is rotation by ``k * 60`` degrees; image ``2k + 1`` is that
    rotation applied after the reflection ``(q, r) -> (r, q)``.
    """
    base = list(cells)
    mirrored = [_reflect(c) for c in base]
    out = []
    for _ in range(6):
        out.append(base)
        out.append(mirrored)
        base = [_rotate(c) for c in base]
        mirrored = [_rotate(c) for c in mirrored]
    return out


def _normalise(cells: list[Cell]) -> tuple[Cell, ...]:
    s = sorted(cells)
    q0, r0 = s[0]
    return tuple((q - q0, r - r0) for q, r in s)


def canonical_form(cells: Iterable[Cell]) -> tuple[Cell, ...]:
    return min(_normalise(img) for img in symmetry_images(cells))


def canonical_key(h: HexSystem | Iterable[Cell]) -> bytes:
    cells = h.cells if isinstance(h, HexSystem) else h
    form = canonical_form(cells)
    return ";".join(f"{q},{r}" for q, r in form).encode("ascii")


def canonical_positions(h: HexSystem) -> dict[int, int]:
    """Position of every hexagon in the canonical sorted cell list.

    When the system has non-trivial symmetry the first minimising image is
    used, which keeps the result deterministic.
    """
    ids = list(h.ids)
    best = None
    for img in symmetry_images(h.cell_of[i] for i in ids):
        form = _normalise(img)
        if best is None or form < best[0]:
            best = (form, img)
    form, img = best
    q0r0 = min(img)
    index = {c: k for k, c in enumerate(form)}
    return {i: index[(c[0] - q0r0[0], c[1] - q0r0[1])] for i, c in zip(ids, img)}


# ---------------------------------------------------------------------------
# structure: segments, classification, tails
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Segment:
    """A maximal straight run of hexagons, ordered along ``direction`` (0..2)."""

    hexagons: tuple[int, ...]
    direction: int

    @property
    def length(self) -> int:
        return len(self.hexagons)


def segments(h: HexSystem) -> list[Segment]:
    if len(h) == 1:
        return [Segment((h.ids[0],), 0)]
    out = []
    for i in h.ids:
        for d in range(3):
            if h.neighbor_in(i, d) is not None and h.neighbor_in(i, opposite(d)) is None:
                run = [i]
                nxt = h.neighbor_in(i, d)
                while nxt is not None:
                    run.append(nxt)
                    nxt = h.neighbor_in(nxt, d)
                out.append(Segment(tuple(run), d))
    out.sort(key=lambda s: (s.hexagons, s.direction))
    return out


def classify_hexagon(h: HexSystem, hid: int) -> str:
    if len(h) < 2:
        raise HexSystemError("classification needs at least two hexagons; a lone hexagon is terminal by convention")
    adj = h.adjacency[hid]
    if len(adj) == 1:
        return TERMINAL
    if len(adj) == 3:
        return BRANCHED
    (a, _), (b, _) = adj
    return LINEAR if opposite(a) == b else KINK


def is_linear_chain(h: HexSystem) -> bool:
    return len(h) == 1 or all(classify_hexagon(h, i) in (TERMINAL, LINEAR) for i in h.ids)


@dataclass(frozen=True)
class Tail:
    h: int
    kind: str  # "linear" | "end-kink" | "end-branched"
    t1: int
    t2: int
    t3: int
    T1: tuple[int, ...]
    T2: tuple[int, ...]
    T3: tuple[int, ...]

    @property
    def hexagons(self) -> frozenset[int]:
        return frozenset(self.T1) | frozenset(self.T2) | frozenset(self.T3)


def _runs_from(h: HexSystem, hid: int) -> list[tuple[int, ...]]:
    """Maximal straight runs that start at ``hid``, one per fusion direction."""
    runs = []
    for d, _ in h.adjacency[hid]:
        if h.neighbor_in(hid, opposite(d)) is not None:
            continue  # hid is interior to this run
        run = [hid]
        nxt = h.neighbor_in(hid, d)
        while nxt is not None:
            run.append(nxt)
            nxt = h.neighbor_in(nxt, d)
        runs.append(tuple(run))
    return runs


def all_tails(h: HexSystem) -> list[Tail]:
    """Every tail of ``h`` admitted by the tail definition."""
    if len(h) == 1:
        i = h.ids[0]
        return [Tail(i, "linear", -1, -1, -1, (i,), (i,), (i,))]
    kinds = {i: classify_hexagon(h, i) for i in h.ids}
    tails = []
    if all(k in (TERMINAL, LINEAR) for k in kinds.values()):
        for i in h.ids:
            if kinds[i] == TERMINAL:
                (run,) = _runs_from(h, i)
                tails.append(Tail(i, "linear", len(run) - 2, -1, -1, run, (i,), (i,)))
        return tails
    for i in h.ids:
        if kinds[i] == KINK:
            runs = _runs_from(h, i)
            for a in range(2):
                t1, t3 = runs[a], runs[1 - a]
                if kinds[t1[-1]] == TERMINAL:
                    tails.append(Tail(i, "end-kink", len(t1) - 2, -1, len(t3) - 2, t1, (i,), t3))
        elif kinds[i] == BRANCHED:
            runs = _runs_from(h, i)
            for a in range(3):
                for b in range(3):
                    if a == b:
                        continue
                    t1, t2 = runs[a], runs[b]
                    t3 = runs[3 - a - b]
                    if kinds[t1[-1]] == TERMINAL and kinds[t2[-1]] == TERMINAL:
                        tails.append(
                            Tail(i, "end-branched", len(t1) - 2, len(t2) - 2, len(t3) - 2, t1, t2, t3)
                        )
    return tails


def find_tail(h: HexSystem) -> Tail:
    tails = all_tails(h)
    if not tails:
        raise InvariantError(f"no tail found in {to_hextree(h)}; encoding bug")
    pos = canonical_positions(h)

    def rank(t: Tail):
        return (pos[t.h], t.t1, t.t3, t.t2, [pos[i] for i in t.T1], [pos[i] for i in t.T3])

    return min(tails, key=rank)


@dataclass(frozen=True)
class SubsystemSet:
    """Residual forests of a tail decomposition; ``H4`` is None when unused."""

    H1: tuple[HexSystem, ...]
    H2: tuple[HexSystem, ...]
    H3: tuple[HexSystem, ...]
    H4: Optional[tuple[HexSystem, ...]] = field(default=None)


def subsystems(h: HexSystem, tail: Tail) -> SubsystemSet:
    everything = set(h.ids)
    t12 = set(tail.T1) | set(tail.T2)
    h1 = everything - (t12 - {tail.h})
    h2 = everything - t12
    h3 = everything - tail.hexagons
    h4 = None
    if tail.kind == "end-branched" and tail.t3 == 0:
        # The far hexagon of T3 and every straight run leaving it sideways
        # are removed from H3.
        far = tail.T3[-1]
        d3 = direction_between(h.cell_of[tail.T3[0]], h.cell_of[far])
        removed = set()
        for d, nb in h.adjacency[far]:
            if d in ((d3 + 1) % 6, (d3 - 1) % 6):
                removed |= _line_through(h, far, d)
        h4 = h3 - removed
    return SubsystemSet(
        tuple(h.restrict(h1)),
        tuple(h.restrict(h2)),
        tuple(h.restrict(h3)),
        None if h4 is None else tuple(h.restrict(h4)),
    )


def _line_through(h: HexSystem, hid: int, d: int) -> set[int]:
    """Hexagons of the maximal straight run through ``hid`` along ``d``."""
    out = {hid}
    for e in (d, opposite(d)):
        nxt = h.neighbor_in(hid, e)
        while nxt is not None:
            out.add(nxt)
            nxt = h.neighbor_in(nxt, e)
    return out


def components(cells: Iterable[Cell]) -> list[HexSystem]:
    remaining = set(cells)
    out = []
    while remaining:
        start = min(remaining)
        comp = {start}
        queue = deque([start])
        while queue:
            cur = queue.popleft()
            for d in range(6):
                nxt = step(cur, d)
                if nxt in remaining and nxt not in comp:
                    comp.add(nxt)
                    queue.append(nxt)
        remaining -= comp
        out.append(HexSystem.from_cells(comp))
    out.sort(key=lambda s: sorted(s.cells))
    return out


# ---------------------------------------------------------------------------
# exhaustive generation
# ---------------------------------------------------------------------------

def _extensions(cells: frozenset[Cell]) -> Iterable[frozenset[Cell]]:
    for c in cells:
        for d in range(6):
            new = step(c, d)
            if new in cells:
                continue
            touching = sum(step(new, e) in cells for e in range(6))
            if touching == 1:
                yield cells | {new}


def generate_all(h_max: int, bound: int = DEFAULT_GENERATION_BOUND) -> list[HexSystem]:
    """One representative per congruence class of systems with 1..h_max hexagons.

    Ordered by size, then by canonical key.
    """
    if h_max < 1:
        raise ValueError("h_max must be at least 1")
    if h_max > bound:
        raise ValueError(f"h_max={h_max} exceeds the generation bound {bound}")
    level = {canonical_key([(0, 0)]): frozenset([(0, 0)])}
    out: list[HexSystem] = []
    for size in range(1, h_max + 1):
        out.extend(HexSystem.from_cells(level[k]) for k in sorted(level))
        if size == h_max:
            break
        nxt: dict[bytes, frozenset[Cell]] = {}
        for cells in level.values():
            for ext in _extensions(cells):
                key = canonical_key(ext)
                if key not in nxt:
                    nxt[key] = frozenset(canonical_form(ext))
        level = nxt
    return out


def chain_spec(h: HexSystem) -> Optional[list[int]]:
    """Hl(r_1..r_n) entries if ``h`` is a hexagonal chain, else None."""
    if len(h) == 1:
        return []
    kinds = {i: classify_hexagon(h, i) for i in h.ids}
    if BRANCHED in kinds.values():
        return None
    start = min(i for i in h.ids if kinds[i] == TERMINAL)
    r, run = [], 0
    prev, cur = None, start
    prev_dir = None
    while True:
        nxt = [(d, n) for d, n in h.adjacency[cur] if n != prev]
        if not nxt:
            break
        d, n = nxt[0]
        if prev_dir is not None:
            if d == prev_dir:
                run += 1
            else:
                r.append(run)
                run = 0
        prev_dir, prev, cur = d, cur, n
    r.append(run)
    return r
