"""Regenerate the .tri fixtures from the hand-written seeds via Pachner moves."""

import argparse
from pathlib import Path

from tvkit.statesum import pachner_1_4, pachner_2_3, parse_triangulation

SEEDS = {
    "s3_1tet": ("S^3, one tetrahedron", "tet 0: 0/1023 0/1023 0/0132 0/0132"),
    "s3_2tet": ("S^3, two tetrahedra glued along their boundaries by the identity",
                "tet 0: 1/0123 1/0123 1/0123 1/0123\ntet 1: 0/0123 0/0123 0/0123 0/0123"),
    "l41_1tet": ("lens space L(4,1), one tetrahedron", "tet 0: 0/1230 0/3012 0/1230 0/3012"),
    "l52_1tet": ("lens space L(5,2), one tetrahedron", "tet 0: 0/1230 0/3012 0/2031 0/1302"),
}

# name -> (source, move, description)
MOVES = {
    "s3_3tet": ("s3_2tet", "2-3", "S^3, 2-3 move on s3_2tet (tet 0, face 0)"),
    "s3_4tet": ("s3_1tet", "1-4", "S^3, 1-4 move on s3_1tet"),
    "l41_4tet": ("l41_1tet", "1-4", "L(4,1), 1-4 move on l41_1tet"),
    "l41_5tet": ("l41_4tet", "2-3", "L(4,1), 2-3 move on l41_4tet (tet 0, face 0)"),
    "l52_4tet": ("l52_1tet", "1-4", "L(5,2), 1-4 move on l52_1tet"),
    "l52_5tet": ("l52_4tet", "2-3", "L(5,2), 2-3 move on l52_4tet (tet 0, face 0)"),
}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("outdir", nargs="?", default=str(Path(__file__).resolve().parent.parent / "fixtures"))
    args = ap.parse_args(argv)
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    tris = {}
    for name, (desc, body) in SEEDS.items():
        count = body.count("\n") + 1
        tris[name] = parse_triangulation(f"tets {count}\n{body}\n", name=desc)
    for name, (src, move, desc) in MOVES.items():
        t = pachner_1_4(tris[src], 0) if move == "1-4" else pachner_2_3(tris[src], 0, 0)
        t.name = desc
        tris[name] = t
    for name, t in tris.items():
        (out / f"{name}.tri").write_text(t.to_text(), encoding="utf-8")
        print(f"wrote {name}.tri ({t.tets} tetrahedra)")


if __name__ == "__main__":
    main()
