"""Exit status of arbor-rank for each error class.

Usage: exit_codes.py ARBOR_RANK CORPUS_DIR
"""

import pathlib
import subprocess
import sys
import tempfile


def main() -> int:
    cli, corpus = sys.argv[1], pathlib.Path(sys.argv[2])
    with tempfile.TemporaryDirectory() as tmp:
        tmp = pathlib.Path(tmp)
        (tmp / "bad_mult.tree").write_text("state a { a:0 } root a\n")
        (tmp / "undefined.tree").write_text("state a { b:1 } root a\n")
        (tmp / "syntax.tree").write_text("state a { a 1 } root a\n")
        cases = [
            (["rank", str(corpus / "binary.tree")], 0),
            (["rank", str(tmp / "bad_mult.tree")], 2),
            (["rank", str(tmp / "syntax.tree")], 2),
            (["rank", str(tmp / "undefined.tree")], 3),
            (["decompose", str(corpus / "comb.tree")], 4),
            (["siblings", "--family", "leafless", str(corpus / "comb.tree")], 5),
            (["rank", str(tmp / "missing.tree")], 1),
            ([], 1),
        ]
        failures = 0
        for args, expected in cases:
            got = subprocess.run([cli, *args], capture_output=True).returncode
            ok = got == expected
            failures += not ok
            print(f"{'ok  ' if ok else 'FAIL'} {' '.join(args) or '(no args)'}: exit {got}, expected {expected}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
