"""Run the tiling reduction end to end on a small instance.

Parses a tile set, searches for a periodic tiling up to a period bound,
builds the torus model for the first hit, evaluates the quantifier-free
grid conjuncts at its origin, and reports the size of the full encoded
formula. Without --tiles a built-in two-tile alternating instance is used.
"""

import argparse
import pathlib

from aaul import (
    build_torus_model,
    check_static_conjuncts,
    encode_parts,
    export_dot,
    find_periodic_tiling,
    parse_tiles,
    print_formula,
    save_model,
)

ALTERNATING = "tile A N=g E=b S=g W=w\ntile B N=g E=w S=g W=b\n"


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--tiles", help="tile set file (default: built-in two-tile instance)")
    parser.add_argument("--max-period", type=int, default=3)
    parser.add_argument("--dot", help="also write the torus model as graphviz to this path")
    parser.add_argument("--model-out", help="also write the torus model file to this path")
    args = parser.parse_args()

    text = pathlib.Path(args.tiles).read_text() if args.tiles else ALTERNATING
    inst = parse_tiles(text)
    print(f"tile types: {', '.join(t.name for t in inst.types)}; colors: {', '.join(inst.colors)}")

    tiling = None
    for k in range(1, args.max_period + 1):
        tiling = find_periodic_tiling(inst, k)
        print(f"period {k}: {'tiling found' if tiling else 'no tiling'}")
        if tiling:
            break
    if tiling is None:
        print(f"no periodic tiling up to period {args.max_period}")
        return

    for m in range(tiling.period - 1, -1, -1):
        row = " ".join(tiling.grid[(n, m)].name for n in range(tiling.period))
        print(f"  {row}")

    torus = build_torus_model(inst, tiling)
    print(f"torus model: {len(torus.states)} states, "
          f"{sum(len(torus.arrow_set(a)) for a in torus.agents)} arrows")
    for name, verdict in check_static_conjuncts(torus, inst).items():
        print(f"  {name} at origin: {verdict}")

    parts = encode_parts(inst)
    text = print_formula(parts.formula)
    print(f"encoded formula: {len(parts.conjuncts)} conjuncts, {len(text)} characters")

    if args.model_out:
        pathlib.Path(args.model_out).write_text(save_model(torus))
        print(f"wrote model to {args.model_out}")
    if args.dot:
        pathlib.Path(args.dot).write_text(export_dot(torus))
        print(f"wrote graphviz to {args.dot}")


if __name__ == "__main__":
    main()
