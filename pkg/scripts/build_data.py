#!/usr/bin/env python3
"""Regenerate the packaged data snapshot (src/daisy/data/): the taxonomy
table, the family->subclass classification map, the scan profile library, and
the on-disk unit library. Everything derives deterministically from
daisy.synthetic, so re-running this script is idempotent."""

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from daisy import reupred, synthetic
from daisy.classify import write_hmm_library

DATA = ROOT / "src" / "daisy" / "data"

TAXONOMY = [
    ("3.1", "beta-solenoid"),
    ("3.2", "alpha/beta-solenoid"),
    ("3.3", "alpha-solenoid"),
    ("3.4", "beta-spiral"),
    ("4.1", "TIM-barrel"),
    ("4.2", "beta-barrel"),
    ("4.3", "beta-trefoil"),
    ("4.4", "beta-propeller"),
    ("4.5", "alpha/beta-prism"),
    ("4.6", "alpha-barrel"),
    ("5.1", "alpha-beads"),
    ("5.2", "beta-beads"),
    ("5.3", "alpha/beta-beads"),
    ("5.4", "beta-sandwich-beads"),
    ("5.5", "alpha/beta-sandwich-beads"),
]

# family -> (class, subclass or ""); synthetic families first, then a sample of
# well-known repeat families with their classification snapshot.
CLASSIFICATION_ROWS = [
    ("SYNF001", "3", "3"),
    ("SYNF002", "4", "4"),
    ("SYNF003", "3", ""),
    ("PF00023", "3", "3"),
    ("PF00514", "3", "3"),
    ("PF02985", "3", "3"),
    ("PF00515", "3", "3"),
    ("PF00560", "3", "2"),
    ("PF13855", "3", "2"),
    ("PF00353", "3", "1"),
    ("PF00805", "3", "1"),
    ("PF00400", "4", "4"),
    ("PF01344", "4", "4"),
    ("PF00652", "4", "3"),
    ("PF00435", "5", "1"),
    ("PF00041", "5", "4"),
    ("PF00047", "5", "4"),
]


def main():
    DATA.mkdir(parents=True, exist_ok=True)

    (DATA / "taxonomy.tsv").write_text(
        "\n".join(f"{sid}\t{name}" for sid, name in TAXONOMY) + "\n")

    (DATA / "classification_map.tsv").write_text(
        "\n".join(f"{fam}\t{cls}\t{sub}" for fam, cls, sub in CLASSIFICATION_ROWS) + "\n")

    (DATA / "hmm_library.txt").write_text(
        write_hmm_library(synthetic.default_profile_library()))

    srul = reupred.srul_from_triples(synthetic.builtin_srul_entries())
    reupred.save_srul(srul, DATA / "srul")

    print(f"wrote data snapshot under {DATA}")
    print(f"  taxonomy: {len(TAXONOMY)} subclasses")
    print(f"  classification map: {len(CLASSIFICATION_ROWS)} rows")
    print(f"  srul: {len(srul)} units")


if __name__ == "__main__":
    main()
