#!/usr/bin/env python3
"""Split tests/data/langid/source/<lang>_*.txt into train/ and heldout/.

Chunks are concatenated in name order; every fifth line goes to heldout.
Rerunning produces identical files.
"""
import pathlib
import sys

root = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "tests/data/langid")
src = root / "source"
langs = sorted({p.name.split("_")[0] for p in src.glob("*_*.txt")})
for sub in ("train", "heldout"):
    (root / sub).mkdir(exist_ok=True)
for lang in langs:
    lines = []
    for chunk in sorted(src.glob(f"{lang}_*.txt")):
        lines += [l for l in chunk.read_text(encoding="utf-8").splitlines() if l.strip()]
    train = [l for i, l in enumerate(lines, 1) if i % 5]
    held = [l for i, l in enumerate(lines, 1) if i % 5 == 0]
    (root / "train" / f"{lang}.txt").write_text("\n".join(train) + "\n", encoding="utf-8")
    (root / "heldout" / f"{lang}.txt").write_text("\n".join(held) + "\n", encoding="utf-8")
    print(f"{lang}: {len(train)} train, {len(held)} heldout")
