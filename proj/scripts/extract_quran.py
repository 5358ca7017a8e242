#!/usr/bin/env python3
"""Regenerates tests/data/quran.txt from the `holy-quran` npm package.

The package ships the Hafs reading in plain (non-Uthmani) orthography as a
JavaScript array of verse strings; this script pulls the 6,236 verses out
and writes them one per line. Run from the repository root:

    npm pack holy-quran
    tar xzf holy-quran-*.tgz
    python3 scripts/extract_quran.py package/HafsHolyQuran.js
"""

import re
import sys


def main() -> int:
    if len(sys.argv) != 2:
        print(__doc__, file=sys.stderr)
        return 2
    src = open(sys.argv[1], encoding="utf-8").read()
    verses = []
    for block in re.finditer(r"verses:\s*\[(.*?)\]", src, re.S):
        for m in re.finditer(r'"((?:[^"\\]|\\.)*)"', block.group(1)):
            verses.append(m.group(1).strip())
    if len(verses) != 6236:
        print(f"expected 6236 verses, found {len(verses)}", file=sys.stderr)
        return 1
    with open("tests/data/quran.txt", "w", encoding="utf-8") as f:
        for v in verses:
            f.write(v + "\n")
    print(f"wrote {len(verses)} verses to tests/data/quran.txt")
    return 0


if __name__ == "__main__":
    sys.exit(main())
