#!/usr/bin/env python3
"""Populate an offline fixture cache for demo runs.

Writes the synthetic corpus (SYN1 solenoid, SYN2 two-block chain, DEC1 decoy,
plus a 5-component fixture proteome) into a cache directory, then prints the
commands that run fully offline against it.
"""

import argparse
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from daisy import synthetic


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--cache-dir", default="fixture-cache",
                        help="target cache directory [default: %(default)s]")
    args = parser.parse_args()

    cache = Path(args.cache_dir)
    info = synthetic.write_fixture_cache(cache)
    print(f"offline corpus written to {cache}/")
    print(f"  structures: {', '.join(info['structures'])}")
    print(f"  proteome:   {info['proteome_id']} ({len(info['components'])} components)")
    print()
    print("try:")
    print(f"  export DAISY_CACHE_DIR={cache.resolve()}")
    print("  daisy run SYN1 --offline --out daisy-out")
    print(f"  daisy proteome {info['proteome_id']} --offline --out daisy-proteome")
    print("  daisy serve --port 8000 --offline")


if __name__ == "__main__":
    main()
