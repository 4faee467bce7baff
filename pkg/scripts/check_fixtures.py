#!/usr/bin/env python3
"""Validate every .dat/.sln pair in sampledata/ and print its matrix orientation."""
import sys
import os

# Allow running from repo root
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from instances import OrientationError, ParseError, load_fixture

SAMPLEDATA_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "sampledata")


def main(directory: str = SAMPLEDATA_DIR) -> int:
    if not os.path.isdir(directory):
        print(f"Sampledata directory not found: {directory}")
        return 1
    names = sorted(f[:-4] for f in os.listdir(directory) if f.endswith(".sln"))
    failures = 0
    for name in names:
        dat = os.path.join(directory, name + ".dat")
        sln = os.path.join(directory, name + ".sln")
        if not os.path.exists(dat):
            print(f"  {name}: skip (no {name}.dat)")
            continue
        try:
            inst, value, _, orientation = load_fixture(dat, sln)
        except (ParseError, OrientationError) as e:
            print(f"  {name}: FAILED {e}")
            failures += 1
            continue
        print(f"  {name}: n={inst.n} value={value} orientation={orientation}")
    print(f"Checked {len(names)} solution file(s), {failures} failure(s).")
    return 1 if failures else 0


if __name__ == "__main__":
    import argparse
    p = argparse.ArgumentParser(description="Validate QAPLIB fixtures in sampledata/.")
    p.add_argument("--dir", default=SAMPLEDATA_DIR, help="Directory holding .dat/.sln pairs")
    sys.exit(main(p.parse_args().dir))
