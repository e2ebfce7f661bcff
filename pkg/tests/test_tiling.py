import random

import pytest

from aaul import (
    AaulError,
    And,
    ArbBox,
    Box,
    BudgetExceededError,
    Budget,
    Implies,
    ModelFormatError,
    PeriodicTiling,
    TileInstance,
    TileType,
    build_torus_model,
    check_static_conjuncts,
    coarsest_partition,
    arrow_blocks,
    encode,
    encode_parts,
    find_periodic_tiling,
    flatten_conj,
    parse_formula,
    parse_tiles,
    print_formula,
    refl,
    satisfies,
)
from aaul.tiling import COMMUTE_PAIRS, DIRECTIONS

ALTERNATING = "tile A N=g E=b S=g W=w\ntile B N=g E=w S=g W=b\n"
SELF_TILING = "tile T N=c E=c S=c W=c\n"


def test_parse_tiles_basic():
    inst = parse_tiles(ALTERNATING)
    assert [t.name for t in inst.types] == ["A", "B"]
    assert inst.colors == ("g", "b", "w")  # first-use order: N, E, S, W per tile
    a = inst.types[0]
    assert (a.north, a.east, a.south, a.west) == ("g", "b", "g", "w")
    assert a.side("N") == "g" and a.side("W") == "w"


def test_parse_tiles_side_order_free_and_comments():
    inst = parse_tiles("# demo\ntile T W=x N=y E=x S=y  # trailing\n")
    t = inst.types[0]
    assert (t.north, t.south, t.east, t.west) == ("y", "y", "x", "x")


def test_parse_tiles_colors_line():
    inst = parse_tiles("colors: z y x\ntile T N=x E=x S=x W=x\n")
    assert inst.colors == ("z", "y", "x")
    with pytest.raises(ModelFormatError) as exc:
        parse_tiles("colors: x\ntile T N=x E=y S=x W=x\n")
    assert "unknown color" in str(exc.value)


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("", "no tiles"),
        ("tile T N=a E=a S=a\n", "expected 'tile NAME"),
        ("tile T N=a E=a S=a W=a X=a\n", "expected 'tile NAME"),
        ("tile T N=a E=a S=a N=a\n", "duplicate side N"),
        ("tile T N=a E=a S=a Q=a\n", "expected side assignment"),
        ("tile T N=a E=a S=a W\n", "expected side assignment"),
        ("tile T N=a E=a S=a W=a\ntile T N=a E=a S=a W=a\n", "duplicate tile"),
        ("tile bad! N=a E=a S=a W=a\n", "bad tile name"),
        ("tile T N=a! E=a S=a W=a\n", "bad color name"),
        ("colors: a\ncolors: a\ntile T N=a E=a S=a W=a\n", "duplicate colors line"),
        ("junk\n", "unknown declaration"),
    ],
)
def test_parse_tiles_errors(text, fragment):
    with pytest.raises(ModelFormatError) as exc:
        parse_tiles(text)
    assert fragment in str(exc.value)


def test_instance_validation():
    t = TileType("T", "a", "a", "a", "a")
    with pytest.raises(ValueError):
        TileInstance(("a",), ())
    with pytest.raises(ValueError):
        TileInstance(("a",), (t, t))
    with pytest.raises(ValueError):
        TileInstance(("b",), (t,))


def test_periodic_tiling_shape_and_constraints():
    inst = parse_tiles(ALTERNATING)
    a, b = inst.types
    good = PeriodicTiling(2, {(0, 0): a, (1, 0): b, (0, 1): a, (1, 1): b})
    assert good.satisfies_constraints()
    bad = PeriodicTiling(2, {(0, 0): a, (1, 0): b, (0, 1): a, (1, 1): a})
    assert not bad.satisfies_constraints()
    with pytest.raises(ValueError):
        PeriodicTiling(2, {(0, 0): a})
    with pytest.raises(ValueError):
        PeriodicTiling(0, {})


def test_find_periodic_tiling():
    inst = parse_tiles(ALTERNATING)
    assert find_periodic_tiling(inst, 1) is None
    t2 = find_periodic_tiling(inst, 2)
    assert t2 is not None and t2.satisfies_constraints()
    assert {pos: t.name for pos, t in t2.grid.items()} == {
        (0, 0): "A", (1, 0): "B", (0, 1): "A", (1, 1): "B",
    }
    # deterministic
    again = find_periodic_tiling(inst, 2)
    assert again.grid == t2.grid


def test_find_periodic_tiling_unsolvable():
    inst = parse_tiles("tile T N=a E=c S=b W=c\n")
    for k in (1, 2, 3):
        assert find_periodic_tiling(inst, k) is None


def test_encoder_conjunct_count_and_flatten():
    inst = parse_tiles(ALTERNATING)
    parts = encode_parts(inst)
    assert len(parts.conjuncts) == 24
    assert flatten_conj(parts.formula) == parts.conjuncts
    assert encode(inst) == parts.formula
    named = parts.named()
    assert list(named) == [
        "refl_a", "psi1", "psi2",
        "psi3_u", "psi4_u", "propd_u", "return_u",
        "psi3_d", "psi4_d", "propd_d", "return_d",
        "psi3_l", "psi4_l", "propd_l", "return_l",
        "psi3_r", "psi4_r", "propd_r", "return_r",
        "inverse", "commute", "one_tile", "one_color", "tile_colors", "tile_match",
    ]
    ordered = [v for k, v in named.items() if k != "refl_a"]
    assert tuple(ordered) == parts.conjuncts


def test_encoder_round_trips():
    inst = parse_tiles(ALTERNATING)
    parts = encode_parts(inst)
    assert parse_formula(print_formula(parts.formula)) == parts.formula
    for f in parts.named().values():
        assert parse_formula(print_formula(f)) == f


def test_encoder_structure_spot_checks():
    inst = parse_tiles(ALTERNATING)
    parts = encode_parts(inst)

    assert parts.refl_a == parse_formula("<a><a>true & [*]~<a>[a]false")
    assert print_formula(parts.psi1) == (
        "(<a><a>true & [*]~<a>[a]false) & p & <b>true & [b]~p"
    )
    assert flatten_conj(parts.psi1) == (
        parts.refl_a,
        parse_formula("p"),
        parse_formula("<b>true"),
        parse_formula("[b]~p"),
    )

    # commute: one implication per ordered direction pair, in the fixed order
    body = parts.commute
    assert isinstance(body, Box) and body.agent == "b"
    inner = body.body
    assert isinstance(inner, ArbBox)
    imps = flatten_conj(inner.body)
    assert len(imps) == 8
    for (x, y), imp in zip(COMMUTE_PAIRS, imps):
        assert isinstance(imp, Implies)
        assert imp.left.agent == x and imp.left.body.agent == y
        assert imp.right.agent == y and imp.right.body.agent == x

    for x in DIRECTIONS:
        u = parts.updates[x]
        assert [c.agent for c in u.clauses] == ["b", "a", x]
        assert print_formula(parts.psi4[x]) == (
            f"[*](<a>true -> [b][{x}][b]<a>true)"
        )

    # one_tile for two tile types: a disjunction plus one exclusion
    one_tile = parts.one_tile
    assert isinstance(one_tile, Box) and one_tile.agent == "b"
    pieces = flatten_conj(one_tile.body)
    assert len(pieces) == 2
    assert print_formula(pieces[0]) == "p_A | p_B"
    assert print_formula(pieces[1]) == "~(p_A & p_B)"


def test_encoder_deterministic():
    a = print_formula(encode(parse_tiles(ALTERNATING)))
    b = print_formula(encode(parse_tiles(ALTERNATING)))
    assert a == b


def test_torus_model_period_1():
    inst = parse_tiles(SELF_TILING)
    tiling = find_periodic_tiling(inst, 1)
    m = build_torus_model(inst, tiling)
    assert m.states == ("s0", "c0_0")
    assert m.agents == ("a", "b", "u", "d", "l", "r")
    assert m.point == "s0"
    assert m.arrow_set("a") == frozenset({("s0", "s0"), ("c0_0", "c0_0")})
    assert m.arrow_set("b") == frozenset({("s0", "c0_0"), ("c0_0", "s0")})
    for x in DIRECTIONS:
        assert m.arrow_set(x) == frozenset({("c0_0", "c0_0")})
    assert m.valuation["p"] == frozenset({"s0"})
    assert m.valuation["p_T"] == frozenset({"c0_0"})
    assert m.valuation["N_c"] == frozenset({"c0_0"})


def test_torus_model_period_2():
    inst = parse_tiles(ALTERNATING)
    tiling = find_periodic_tiling(inst, 2)
    m = build_torus_model(inst, tiling)
    assert len(m.states) == 5
    assert len(m.arrow_set("b")) == 8
    for x in DIRECTIONS:
        assert len(m.arrow_set(x)) == 4
    # each cell has exactly one tile proposition
    for c in m.states[1:]:
        held = [t.name for t in inst.types if c in m.valuation[f"p_{t.name}"]]
        assert len(held) == 1
    # wrap-around: u from c0_0 goes to c0_1, and from c0_1 back to c0_0
    assert ("c0_0", "c0_1") in m.arrow_set("u")
    assert ("c0_1", "c0_0") in m.arrow_set("u")


def test_torus_model_cell_props():
    inst = parse_tiles(SELF_TILING)
    tiling = find_periodic_tiling(inst, 1)
    m = build_torus_model(inst, tiling, cell_props=True)
    assert "cell_0_0" in m.props
    assert m.valuation["cell_0_0"] == frozenset({"c0_0"})
    plain = build_torus_model(inst, tiling)
    assert "cell_0_0" not in plain.props


def test_static_conjuncts_hold_on_witness():
    inst = parse_tiles(ALTERNATING)
    tiling = find_periodic_tiling(inst, 2)
    m = build_torus_model(inst, tiling)
    verdicts = check_static_conjuncts(m, inst)
    assert verdicts == {
        "one_tile": True, "one_color": True, "tile_colors": True, "tile_match": True,
    }


def test_static_conjuncts_detect_perturbation():
    inst = parse_tiles(ALTERNATING)
    a, b = inst.types
    tiling = find_periodic_tiling(inst, 2)
    broken_grid = dict(tiling.grid)
    broken_grid[(0, 0)] = b if broken_grid[(0, 0)] == a else a
    broken = PeriodicTiling(2, broken_grid)
    assert not broken.satisfies_constraints()
    m = build_torus_model(inst, broken)
    verdicts = check_static_conjuncts(m, inst)
    assert verdicts["one_tile"] and verdicts["one_color"] and verdicts["tile_colors"]
    assert not verdicts["tile_match"]


def test_static_conjuncts_need_a_point():
    inst = parse_tiles(SELF_TILING)
    m = build_torus_model(inst, find_periodic_tiling(inst, 1)).with_point(None)
    with pytest.raises(AaulError):
        check_static_conjuncts(m, inst)


def test_refl_holds_everywhere_on_torus():
    # every state of the witness torus carries a probe loop, and bisimilar
    # states are exactly what the loop formula tolerates
    inst = parse_tiles(SELF_TILING)
    m = build_torus_model(inst, find_periodic_tiling(inst, 1))
    f = refl("a")
    for s in m.states:
        assert satisfies(m, s, f)


def test_quantified_conjuncts_exceed_default_budget_with_cell_props():
    inst = parse_tiles(ALTERNATING)
    tiling = find_periodic_tiling(inst, 2)
    m = build_torus_model(inst, tiling, cell_props=True)
    blocks = arrow_blocks(m, coarsest_partition(m))
    assert len(blocks) == 29
    parts = encode_parts(inst)
    with pytest.raises(BudgetExceededError):
        satisfies(m, "s0", parts.psi4["u"])


def test_refl_other_agent():
    f = refl("b")
    assert print_formula(f) == "<b><b>true & [*]~<b>[b]false"
