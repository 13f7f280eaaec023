"""The command-line front end on a round-trip through its subcommands.

Writes a model document to a temporary directory, then validates,
decomposes, measures, crosschecks, and re-exports it through the same
entry point the installed `brickforge` script uses.
"""

import tempfile
from fractions import Fraction
from pathlib import Path

from brickforge import bricks as bk
from brickforge import cli
from brickforge import limits as lm
from brickforge import serialize as sz
from brickforge import surfaces as sf

F = Fraction


def main():
    tmp = Path(tempfile.mkdtemp(prefix="brickforge-demo-"))

    m, e = lm.generate(lm.Scenario("kerckhoff-thurston", sf.TORUS_1_1))
    kt = tmp / "kt.brick"
    kt.write_text(sz.dumps(sz.complex_doc(m.complex, e)))

    full = sf.full_surface(sf.TORUS_1_1)

    def mark(p, q):
        return sf.Marking(sf.Simplex.of(full, sf.slope_curve(full, p, q)))

    b = bk.Brick("b0", full, "closed", F(0), F(1),
                 initial=mark(0, 1), terminal=mark(3, 2))
    k = bk.BrickComplex(sf.TORUS_1_1, (b,), ())
    single = tmp / "single.brick"
    single.write_text(sz.dumps(sz.complex_doc(k, bk.identity_embedding(k))))

    for argv in (
        ["validate", str(kt)],
        ["decompose", str(kt)],
        ["metric", "--k", "5", str(kt)],
        ["crosscheck", str(single)],
        ["export", str(single)],
        ["limit", "--scenario", "bo:2", "--stages", "1"],
    ):
        print(f"$ brickforge {' '.join(argv)}")
        code = cli.run(argv)
        print(f"(exit {code})\n")


if __name__ == "__main__":
    main()
