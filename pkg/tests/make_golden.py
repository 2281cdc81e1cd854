"""Regenerate tests/golden from the seeded mixed corpus: ``python3 tests/make_golden.py``."""
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from pipeline import GOLDEN_DIR, GOLDEN_FILES, run  # noqa: E402

if __name__ == "__main__":
    _, files, secs = run(1)
    GOLDEN_DIR.mkdir(exist_ok=True)
    for name in GOLDEN_FILES:
        (GOLDEN_DIR / name).write_text(files[name])
    print(f"wrote {len(GOLDEN_FILES)} golden files in {secs:.1f} s")
