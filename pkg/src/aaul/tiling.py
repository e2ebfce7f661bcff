"""Reduction from periodic plane tiling to quantified-update model checking.

A tile instance is a set of tile types with colored sides. The encoder
produces, for an instance, one closed formula over agents a, b, u, d, l, r
whose models look like a tiled grid seen from an origin state:

  - a: probe loops; "has an a-arrow" is the bit that updates toggle to mark
    states, and refl_a pins down states whose a-successors are all alike.
  - b: links the origin to every grid cell and back.
  - u, d, l, r: step to the neighbouring cell (up, down, left, right).

The propositional vocabulary is `p` on the origin, `p_<tile>` for the tile
placed on a cell, and `N_<color>`, `S_<color>`, `E_<color>`, `W_<color>`
for the side colors of the placed tile.

`build_torus_model` realizes a period-k solution as a finite model: k*k
cells with wrap-around direction arrows, plus the origin hub. On that model
the four grid conjuncts (one_tile, one_color, tile_colors, tile_match) are
checkable directly; the quantified conjuncts blow past any reasonable arrow
block budget already at k=2 and are deliberately left to the budget
machinery to refuse.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping

from .checker import Budget, DEFAULT_BUDGET, satisfies
from .errors import AaulError, ModelFormatError
from .kripke import KripkeModel
from .syntax import (
    And,
    ArbBox,
    ArbDiamond,
    Atom,
    BOT,
    Box,
    Clause,
    Diamond,
    Formula,
    Implies,
    Not,
    Or,
    TOP,
    Update,
    UpdateBox,
    conj,
    disj,
)

PROBE = "a"
HUB = "b"
UP, DOWN, LEFT, RIGHT = "u", "d", "l", "r"
DIRECTIONS = (UP, DOWN, LEFT, RIGHT)
ORIGIN_PROP = "p"
SIDES = ("N", "S", "E", "W")

# ordered direction pairs whose composed steps must commute
COMMUTE_PAIRS = (
    (UP, LEFT), (UP, RIGHT), (DOWN, LEFT), (DOWN, RIGHT),
    (LEFT, UP), (LEFT, DOWN), (RIGHT, UP), (RIGHT, DOWN),
)

_NAME_OK = re.compile(r"[A-Za-z0-9_]+\Z")


@dataclass(frozen=True)
class TileType:
    name: str
    north: str
    south: str
    east: str
    west: str

    def side(self, side: str) -> str:
        return {"N": self.north, "S": self.south, "E": self.east, "W": self.west}[side]


@dataclass(frozen=True)
class TileInstance:
    colors: tuple[str, ...]
    types: tuple[TileType, ...]

    def __post_init__(self):
        if not self.types:
            raise ValueError("a tile instance needs at least one tile type")
        if len(set(self.colors)) != len(self.colors):
            raise ValueError("duplicate color")
        names = [t.name for t in self.types]
        if len(set(names)) != len(names):
            raise ValueError("duplicate tile name")
        for t in self.types:
            for side in SIDES:
                if t.side(side) not in self.colors:
                    raise ValueError(f"tile {t.name!r} uses undeclared color {t.side(side)!r}")


@dataclass(frozen=True)
class PeriodicTiling:
    """A k*k assignment of tile types, read as repeating over the whole plane.

    Construction only checks the shape; whether the side colors actually
    match is a separate question answered by satisfies_constraints, so
    deliberately broken tilings can be built for testing.
    """

    period: int
    grid: Mapping[tuple[int, int], TileType]

    def __post_init__(self):
        k = self.period
        if k < 1:
            raise ValueError("period must be at least 1")
        expected = {(n, m) for n in range(k) for m in range(k)}
        if set(self.grid) != expected:
            raise ValueError(f"grid must cover exactly [0,{k}) x [0,{k})")
        object.__setattr__(self, "grid", dict(self.grid))

    def satisfies_constraints(self) -> bool:
        """Every north side meets the south side above it, every east side
        meets the west side to the right, with wrap-around."""
        k = self.period
        for n in range(k):
            for m in range(k):
                here = self.grid[(n, m)]
                if here.north != self.grid[(n, (m + 1) % k)].south:
                    return False
                if here.east != self.grid[((n + 1) % k, m)].west:
                    return False
        return True


def parse_tiles(text: str) -> TileInstance:
    """Tile file format, one declaration per line, `#` starts a comment:

        colors: white black        # optional; fixes the color universe
        tile T0 N=white E=black S=white W=black

    Side keys may come in any order but each must appear exactly once.
    Without a colors line, colors are collected in order of first use.
    """
    declared_colors: list[str] | None = None
    types: list[TileType] = []
    seen_names: set[str] = set()
    used_colors: list[str] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "colors:":
            if declared_colors is not None:
                raise ModelFormatError("duplicate colors line", lineno)
            declared_colors = tokens[1:]
            for c in declared_colors:
                if not _NAME_OK.match(c):
                    raise ModelFormatError(f"bad color name {c!r}", lineno)
            if len(set(declared_colors)) != len(declared_colors):
                raise ModelFormatError("duplicate color", lineno)
        elif tokens[0] == "tile":
            if len(tokens) != 6:
                raise ModelFormatError(
                    "expected 'tile NAME N=c E=c S=c W=c'", lineno
                )
            name = tokens[1]
            if not _NAME_OK.match(name):
                raise ModelFormatError(f"bad tile name {name!r}", lineno)
            if name in seen_names:
                raise ModelFormatError(f"duplicate tile name {name!r}", lineno)
            seen_names.add(name)
            sides: dict[str, str] = {}
            for tok in tokens[2:]:
                key, sep, color = tok.partition("=")
                if not sep or key not in SIDES:
                    raise ModelFormatError(f"expected side assignment, found {tok!r}", lineno)
                if key in sides:
                    raise ModelFormatError(f"duplicate side {key}", lineno)
                if not _NAME_OK.match(color):
                    raise ModelFormatError(f"bad color name {color!r}", lineno)
                if declared_colors is not None and color not in declared_colors:
                    raise ModelFormatError(f"unknown color {color!r}", lineno)
                sides[key] = color
            missing = [s for s in SIDES if s not in sides]
            if missing:
                raise ModelFormatError(f"missing side {missing[0]}", lineno)
            for side in SIDES:
                if sides[side] not in used_colors:
                    used_colors.append(sides[side])
            types.append(TileType(name, sides["N"], sides["S"], sides["E"], sides["W"]))
        else:
            raise ModelFormatError(f"unknown declaration {tokens[0]!r}", lineno)

    if not types:
        raise ModelFormatError("no tiles declared", max(1, text.count("\n") + 1))
    colors = tuple(declared_colors) if declared_colors is not None else tuple(used_colors)
    return TileInstance(colors, types)


# ------------------------------------------------------------------ encoder

_DIA_A_TOP = Diamond(PROBE, TOP)
_BOX_A_BOT = Box(PROBE, BOT)


def refl(agent: str) -> Formula:
    """True exactly where the agent has a successor and every successor is
    bisimilar to the current state: the successor structure survives any
    attempt to cut some successors loose by an update."""
    return And(
        Diamond(agent, Diamond(agent, TOP)),
        ArbBox(Not(Diamond(agent, Box(agent, BOT)))),
    )


def _tile_atom(t: TileType) -> Atom:
    return Atom(f"p_{t.name}")


def _side_atom(side: str, color: str) -> Atom:
    return Atom(f"{side}_{color}")


@dataclass(frozen=True)
class TilingEncoding:
    """The full formula for an instance plus all of its named pieces."""

    instance: TileInstance
    refl_a: Formula
    psi1: Formula
    psi2: Formula
    psi3: Mapping[str, Formula]
    psi4: Mapping[str, Formula]
    propd: Mapping[str, Formula]
    return_: Mapping[str, Formula]
    updates: Mapping[str, Update]
    inverse: Formula
    commute: Formula
    one_tile: Formula
    one_color: Formula
    tile_colors: Formula
    tile_match: Formula
    conjuncts: tuple[Formula, ...]
    formula: Formula

    def named(self) -> dict[str, Formula]:
        out = {"refl_a": self.refl_a, "psi1": self.psi1, "psi2": self.psi2}
        for x in DIRECTIONS:
            out[f"psi3_{x}"] = self.psi3[x]
            out[f"psi4_{x}"] = self.psi4[x]
            out[f"propd_{x}"] = self.propd[x]
            out[f"return_{x}"] = self.return_[x]
        out["inverse"] = self.inverse
        out["commute"] = self.commute
        out["one_tile"] = self.one_tile
        out["one_color"] = self.one_color
        out["tile_colors"] = self.tile_colors
        out["tile_match"] = self.tile_match
        return out


def encode_parts(inst: TileInstance) -> TilingEncoding:
    p = Atom(ORIGIN_PROP)
    refl_a = refl(PROBE)

    psi1 = conj([refl_a, p, Diamond(HUB, TOP), Box(HUB, Not(p))])
    psi2 = And(
        Box(HUB, And(refl_a, Diamond(HUB, p))),
        ArbBox(Implies(_DIA_A_TOP, Box(HUB, Box(HUB, _DIA_A_TOP)))),
    )

    psi3 = {}
    psi4 = {}
    propd = {}
    return_ = {}
    updates = {}
    for x in DIRECTIONS:
        psi3[x] = Box(
            HUB,
            And(
                Diamond(x, conj([Not(p), refl_a, Diamond(HUB, p)])),
                ArbBox(Implies(Diamond(x, _DIA_A_TOP), Box(x, _DIA_A_TOP))),
            ),
        )
        psi4[x] = ArbBox(Implies(_DIA_A_TOP, Box(HUB, Box(x, Box(HUB, _DIA_A_TOP)))))
        updates[x] = Update((
            Clause(Or(p, _BOX_A_BOT), HUB, TOP),
            Clause(TOP, PROBE, TOP),
            Clause(_BOX_A_BOT, x, TOP),
        ))
        # "some b-b-successor of a probed x-successor loses its probe"
        marker = And(
            Diamond(x, _DIA_A_TOP),
            Diamond(HUB, Diamond(HUB, _BOX_A_BOT)),
        )
        propd[x] = Box(
            HUB,
            ArbBox(
                Implies(
                    conj([
                        _BOX_A_BOT,
                        Diamond(x, _DIA_A_TOP),
                        Diamond(HUB, And(Diamond(HUB, TOP), Box(HUB, _DIA_A_TOP))),
                        ArbDiamond(marker),
                    ]),
                    UpdateBox(updates[x], ArbDiamond(marker)),
                )
            ),
        )
        return_[x] = Box(
            HUB,
            ArbDiamond(
                conj([
                    _BOX_A_BOT,
                    Diamond(HUB, TOP),
                    Diamond(
                        x,
                        conj([
                            _DIA_A_TOP,
                            Diamond(HUB, And(Diamond(HUB, TOP), Box(HUB, _DIA_A_TOP))),
                            ArbBox(Implies(_DIA_A_TOP, Box(HUB, Box(HUB, _DIA_A_TOP)))),
                        ]),
                    ),
                ])
            ),
        )

    inverse = Box(
        HUB,
        ArbBox(
            Implies(
                _BOX_A_BOT,
                conj([
                    Box(UP, Box(DOWN, _BOX_A_BOT)),
                    Box(DOWN, Box(UP, _BOX_A_BOT)),
                    Box(LEFT, Box(RIGHT, _BOX_A_BOT)),
                    Box(RIGHT, Box(LEFT, _BOX_A_BOT)),
                ]),
            )
        ),
    )
    commute = Box(
        HUB,
        ArbBox(
            conj([
                Implies(Diamond(x, Diamond(y, _BOX_A_BOT)), Box(y, Box(x, _BOX_A_BOT)))
                for x, y in COMMUTE_PAIRS
            ])
        ),
    )

    tile_atoms = [_tile_atom(t) for t in inst.types]
    one_tile = Box(
        HUB,
        conj(
            [disj(tile_atoms)]
            + [
                Not(And(tile_atoms[i], tile_atoms[j]))
                for i in range(len(tile_atoms))
                for j in range(i + 1, len(tile_atoms))
            ]
        ),
    )
    one_color = conj([
        Box(
            HUB,
            conj([
                Implies(
                    _side_atom(side, c),
                    conj([Not(_side_atom(side, d)) for d in inst.colors if d != c]),
                )
                for c in inst.colors
            ]),
        )
        for side in SIDES
    ])
    tile_colors = Box(
        HUB,
        conj([
            Implies(
                _tile_atom(t),
                conj([_side_atom(side, t.side(side)) for side in SIDES]),
            )
            for t in inst.types
        ]),
    )
    tile_match = Box(
        HUB,
        conj([
            And(
                Implies(_side_atom("N", c), Box(UP, _side_atom("S", c))),
                Implies(_side_atom("W", c), Box(LEFT, _side_atom("E", c))),
            )
            for c in inst.colors
        ]),
    )

    conjuncts = (psi1, psi2)
    for x in DIRECTIONS:
        conjuncts += (psi3[x], psi4[x], propd[x], return_[x])
    conjuncts += (inverse, commute, one_tile, one_color, tile_colors, tile_match)

    return TilingEncoding(
        instance=inst,
        refl_a=refl_a,
        psi1=psi1,
        psi2=psi2,
        psi3=psi3,
        psi4=psi4,
        propd=propd,
        return_=return_,
        updates=updates,
        inverse=inverse,
        commute=commute,
        one_tile=one_tile,
        one_color=one_color,
        tile_colors=tile_colors,
        tile_match=tile_match,
        conjuncts=conjuncts,
        formula=conj(conjuncts),
    )


def encode(inst: TileInstance) -> Formula:
    return encode_parts(inst).formula


# ------------------------------------------------------------------- solver

def find_periodic_tiling(inst: TileInstance, period: int) -> PeriodicTiling | None:
    """First period x period torus tiling in declared tile order, or None.

    Plain backtracking: cells are filled row by row, each placement checked
    against the already placed left and lower neighbours, wrapping at the
    edges. Exponential in the worst case, fine at demonstration scale.
    """
    k = period
    cells = [(i % k, i // k) for i in range(k * k)]
    grid: dict[tuple[int, int], TileType] = {}

    def fits(n: int, m: int, t: TileType) -> bool:
        if n > 0 and grid[(n - 1, m)].east != t.west:
            return False
        if n == k - 1:
            west_of_wrap = t.west if k == 1 else grid[(0, m)].west
            if t.east != west_of_wrap:
                return False
        if m > 0 and grid[(n, m - 1)].north != t.south:
            return False
        if m == k - 1:
            south_of_wrap = t.south if k == 1 else grid[(n, 0)].south
            if t.north != south_of_wrap:
                return False
        return True

    def place(i: int) -> bool:
        if i == len(cells):
            return True
        n, m = cells[i]
        for t in inst.types:
            if fits(n, m, t):
                grid[(n, m)] = t
                if place(i + 1):
                    return True
                del grid[(n, m)]
        return False

    if not place(0):
        return None
    tiling = PeriodicTiling(k, dict(grid))
    assert tiling.satisfies_constraints()
    return tiling


# ------------------------------------------------------ witness construction

def build_torus_model(inst: TileInstance, tiling: PeriodicTiling, cell_props: bool = False) -> KripkeModel:
    """A finite model realizing the tiling: an origin hub plus a k*k torus.

    Probe arrows loop on every state, the hub links the origin to each cell
    and back, direction arrows step with wrap-around (u increments the row
    coordinate, r the column coordinate). With cell_props each cell also
    gets a private proposition cell_<col>_<row>, which destroys all symmetry
    between cells.
    """
    k = tiling.period
    cell = {(n, m): f"c{n}_{m}" for n in range(k) for m in range(k)}
    cell_list = [cell[(n, m)] for n in range(k) for m in range(k)]
    states = ("s0", *cell_list)

    arrows: dict[str, set] = {a: set() for a in (PROBE, HUB, *DIRECTIONS)}
    arrows[PROBE] = {(s, s) for s in states}
    for c in cell_list:
        arrows[HUB].add(("s0", c))
        arrows[HUB].add((c, "s0"))
    for n in range(k):
        for m in range(k):
            arrows[UP].add((cell[(n, m)], cell[(n, (m + 1) % k)]))
            arrows[DOWN].add((cell[(n, m)], cell[(n, (m - 1) % k)]))
            arrows[LEFT].add((cell[(n, m)], cell[((n - 1) % k, m)]))
            arrows[RIGHT].add((cell[(n, m)], cell[((n + 1) % k, m)]))

    props = [ORIGIN_PROP]
    valuation: dict[str, set] = {ORIGIN_PROP: {"s0"}}
    for t in inst.types:
        name = f"p_{t.name}"
        props.append(name)
        valuation[name] = {cell[pos] for pos, placed in tiling.grid.items() if placed == t}
    for side in SIDES:
        for c in inst.colors:
            name = f"{side}_{c}"
            props.append(name)
            valuation[name] = {
                cell[pos] for pos, placed in tiling.grid.items() if placed.side(side) == c
            }
    if cell_props:
        for n in range(k):
            for m in range(k):
                name = f"cell_{n}_{m}"
                props.append(name)
                valuation[name] = {cell[(n, m)]}

    return KripkeModel(
        states=states,
        agents=(PROBE, HUB, *DIRECTIONS),
        props=tuple(props),
        arrows=arrows,
        valuation=valuation,
        point="s0",
    )


STATIC_CONJUNCTS = ("one_tile", "one_color", "tile_colors", "tile_match")


def check_static_conjuncts(
    m: KripkeModel, inst: TileInstance, budget: Budget = DEFAULT_BUDGET
) -> dict[str, bool]:
    """Evaluate the four quantifier-free grid conjuncts at the model's point."""
    if m.point is None:
        raise AaulError("model has no designated point")
    parts = encode_parts(inst).named()
    return {name: satisfies(m, m.point, parts[name], budget) for name in STATIC_CONJUNCTS}
