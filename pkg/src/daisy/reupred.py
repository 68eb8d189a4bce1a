"""Subclass-gated iterative divide-and-conquer repeat-unit detection.

A master unit is located by searching the chain against the (subclass
filtered) structural repeat unit library. The chain then forks at the master
into N- and C-terminal flanks, each searched against an ad hoc library seeded
by the master and grown with every accepted unit, until fragments drop below
the minimum unit length. Collected units are segmented into regions and kept
only when the unit-count and proximity rules hold; failing that, the search
is repeated at up to four increasingly relaxed filter levels.
"""

from __future__ import annotations

import enum
import json
import time
from collections import deque
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import align
from .align import (
    AlignmentViews,
    SearchCounter,
    SearchLevel,
    SimilarityMatrix,
    kabsch_superpose,
)
from .structmodel import (
    Chain,
    ProteinStructure,
    Source,
    write_pdb,
    write_pdb_models,
)

MIN_UNIT_LENGTH = 13        # a unit must have at least 13 amino acids
MIN_UNITS = 3               # a valid region needs at least three units
MAX_GAP_TOTAL = 40          # rule 1: total inter-unit gap residues < 40
MAX_NONADJACENT_RATIO = 0.25  # rule 2: non-adjacent / total units <= 0.25
REGION_SPLIT_GAP = 40       # inter-unit gap >= this starts a new region

MASTER_LABEL = "master"


class ReupredError(Exception):
    pass


class EmptyLibrary(ReupredError):
    pass


class IoFailure(ReupredError):
    pass


@dataclass(frozen=True)
class SrulEntry:
    unit_id: str
    subclass: str
    structure: ProteinStructure

    def __post_init__(self):
        n = len(self.structure.chains[0].residues)
        if n < MIN_UNIT_LENGTH:
            raise ValueError(f"SRUL unit {self.unit_id} has {n} residues (< {MIN_UNIT_LENGTH})")


@dataclass(frozen=True)
class Srul:
    entries: tuple[SrulEntry, ...]

    def __post_init__(self):
        ids = [e.unit_id for e in self.entries]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate SRUL unit ids")

    def __len__(self) -> int:
        return len(self.entries)

    def filtered(self, subclasses: set[str] | None) -> "Srul":
        """Entries restricted to the given subclasses; an empty or None filter
        keeps everything."""
        if not subclasses:
            return self
        return Srul(entries=tuple(e for e in self.entries if e.subclass in subclasses))

    def subclass_of(self, unit_id: str) -> str:
        for e in self.entries:
            if e.unit_id == unit_id:
                return e.subclass
        raise KeyError(unit_id)


def srul_from_triples(triples: list[tuple[str, str, ProteinStructure]]) -> Srul:
    return Srul(entries=tuple(SrulEntry(u, s, st) for (u, s, st) in triples))


def builtin_srul() -> Srul:
    from . import synthetic
    return srul_from_triples(synthetic.builtin_srul_entries())


def load_srul(directory: str | Path) -> Srul:
    """Library from disk: index.tsv rows unit_id\tsubclass\tfilename plus the
    referenced structure files."""
    from .structmodel import parse_pdb

    directory = Path(directory)
    index = directory / "index.tsv"
    if not index.is_file():
        raise IoFailure(f"missing SRUL index: {index}")
    entries = []
    for raw in index.read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        unit_id, subclass, filename = line.split("\t")
        structure = parse_pdb((directory / filename).read_text(), accession=unit_id)
        entries.append(SrulEntry(unit_id=unit_id, subclass=subclass, structure=structure))
    if not entries:
        raise EmptyLibrary(f"no units listed in {index}")
    return Srul(entries=tuple(entries))


def save_srul(srul: Srul, directory: str | Path) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    rows = []
    for e in srul.entries:
        filename = f"{e.unit_id}.pdb"
        (directory / filename).write_text(write_pdb(e.structure))
        rows.append(f"{e.unit_id}\t{e.subclass}\t{filename}")
    (directory / "index.tsv").write_text("\n".join(rows) + "\n")


@dataclass(frozen=True)
class RelaxationSchedule:
    levels: tuple[SearchLevel, ...]

    def __post_init__(self):
        if len(self.levels) != 4:
            raise ValueError("schedule must have exactly 4 levels")
        for a, b in zip(self.levels, self.levels[1:]):
            if b.rmsd_cutoff < a.rmsd_cutoff or b.min_coverage > a.min_coverage:
                raise ValueError("levels must relax monotonically")


DEFAULT_SCHEDULE = RelaxationSchedule(levels=(
    SearchLevel(2.0, 0.85),
    SearchLevel(3.0, 0.75),
    SearchLevel(4.0, 0.65),
    SearchLevel(5.0, 0.55),
))


class UnitOrigin(enum.Enum):
    MASTER = "MASTER"
    DERIVED = "DERIVED"


@dataclass(frozen=True)
class UnitPrediction:
    chain_id: str
    start: int  # residue order index, inclusive
    end: int
    template_id: str
    rmsd: float
    origin: UnitOrigin

    def __post_init__(self):
        if self.end - self.start + 1 < MIN_UNIT_LENGTH:
            raise ValueError(
                f"unit {self.start}..{self.end} shorter than {MIN_UNIT_LENGTH} residues")

    @property
    def length(self) -> int:
        return self.end - self.start + 1


class RuleOutcome(enum.Enum):
    GAP_RULE = "GAP_RULE"
    ADJACENCY_RULE = "ADJACENCY_RULE"
    BOTH = "BOTH"
    NONE = "NONE"


@dataclass(frozen=True)
class ValidationParams:
    min_units: int = MIN_UNITS
    max_gap_total: int = MAX_GAP_TOTAL
    max_nonadjacent_ratio: float = MAX_NONADJACENT_RATIO


@dataclass(frozen=True)
class ValidationResult:
    valid: bool
    rule_satisfied: RuleOutcome


def unit_gaps(units: list[UnitPrediction]) -> list[int]:
    return [units[i].start - units[i - 1].end - 1 for i in range(1, len(units))]


def conquer_validate(units: list[UnitPrediction],
                     params: ValidationParams = ValidationParams()) -> ValidationResult:
    """Valid iff unit count reaches the minimum AND at least one proximity rule
    holds: total inter-unit gaps below the gap budget, or the fraction of
    non-adjacent units (any gap > 0 to the predecessor; the first unit is
    never counted) within the ratio bound."""
    gaps = unit_gaps(units)
    total_gap = sum(gaps)
    non_adjacent = sum(1 for g in gaps if g > 0)
    gap_rule = total_gap < params.max_gap_total
    ratio_rule = (non_adjacent <= params.max_nonadjacent_ratio * len(units)
                  if units else False)
    if gap_rule and ratio_rule:
        rule = RuleOutcome.BOTH
    elif gap_rule:
        rule = RuleOutcome.GAP_RULE
    elif ratio_rule:
        rule = RuleOutcome.ADJACENCY_RULE
    else:
        rule = RuleOutcome.NONE
    valid = len(units) >= params.min_units and rule is not RuleOutcome.NONE
    return ValidationResult(valid=valid, rule_satisfied=rule)


@dataclass(frozen=True)
class RegionResult:
    chain_id: str
    units: tuple[UnitPrediction, ...]
    classification: str
    average_rmsd: float
    views: AlignmentViews
    matrix: SimilarityMatrix
    rule_satisfied: RuleOutcome
    level: int
    unit_structures: tuple[ProteinStructure, ...]
    anchor_index: int  # index of the master unit within the region (0 if absent)

    def __post_init__(self):
        if len(self.units) < MIN_UNITS:
            raise ValueError("region must hold at least three units")
        for a, b in zip(self.units, self.units[1:]):
            if b.start <= a.end:
                raise ValueError("region units overlap or are unsorted")


@dataclass(frozen=True)
class IdentificationOutcome:
    regions: tuple[RegionResult, ...]
    relaxation_level_used: int | None
    search_call_count: int
    elapsed: float


def _chain_fragment(chain: Chain, lo: int, hi: int) -> Chain:
    return Chain(id=chain.id, residues=chain.residues[lo:hi + 1])


def find_master_unit(chain: Chain, srul: Srul, level: SearchLevel,
                     counter: SearchCounter | None = None) -> UnitPrediction | None:
    """Best hit of any library unit inside the chain fragment at the level's
    cutoffs; ties prefer higher score, then lower start, then longer span."""
    if len(chain.residues) < MIN_UNIT_LENGTH:
        return None
    best = None
    best_key = None
    for entry in srul.entries:
        hit = align.structural_search(chain, entry.structure, level,
                                      counter=counter, min_span=MIN_UNIT_LENGTH)
        if hit is None:
            continue
        key = (hit.score, -hit.query_start, hit.query_end - hit.query_start + 1)
        if best_key is None or key > best_key:
            best_key = key
            best = (entry, hit)
    if best is None:
        return None
    entry, hit = best
    return UnitPrediction(
        chain_id=chain.id,
        start=hit.query_start,
        end=hit.query_end,
        template_id=entry.unit_id,
        rmsd=hit.rmsd,
        origin=UnitOrigin.MASTER,
    )


def divide_and_collect(chain: Chain, master: UnitPrediction, level: SearchLevel,
                       counter: SearchCounter | None = None) -> list[UnitPrediction]:
    """Recursive flank exploration around the master.

    Each flank fragment is searched against the ad hoc library (master plus
    every previously accepted unit); the best qualifying hit becomes a unit
    and forks the fragment again. Fragments shorter than the minimum unit
    length stop the recursion.
    """
    ad_hoc: list[tuple[str, Chain]] = [
        (MASTER_LABEL, _chain_fragment(chain, master.start, master.end))
    ]
    accepted: list[UnitPrediction] = []
    work: deque[tuple[int, int]] = deque()
    work.append((0, master.start - 1))
    work.append((master.end + 1, len(chain.residues) - 1))

    while work:
        lo, hi = work.popleft()
        if hi - lo + 1 < MIN_UNIT_LENGTH:
            continue
        fragment = _chain_fragment(chain, lo, hi)
        best = None
        best_key = None
        for template_id, template in ad_hoc:
            hit = align.structural_search(fragment, template, level,
                                          counter=counter, min_span=MIN_UNIT_LENGTH)
            if hit is None:
                continue
            key = (hit.score, -(lo + hit.query_start),
                   hit.query_end - hit.query_start + 1)
            if best_key is None or key > best_key:
                best_key = key
                best = (template_id, hit)
        if best is None:
            continue
        template_id, hit = best
        start = lo + hit.query_start
        end = lo + hit.query_end
        unit = UnitPrediction(
            chain_id=chain.id,
            start=start,
            end=end,
            template_id=template_id,
            rmsd=hit.rmsd,
            origin=UnitOrigin.DERIVED,
        )
        accepted.append(unit)
        ad_hoc.append((f"unit_{len(ad_hoc) + 1}", _chain_fragment(chain, start, end)))
        work.append((lo, start - 1))
        work.append((end + 1, hi))
    return accepted


def _segment_regions(units: list[UnitPrediction],
                     split_gap: int = REGION_SPLIT_GAP) -> list[list[UnitPrediction]]:
    segments: list[list[UnitPrediction]] = []
    for unit in units:
        if segments and unit.start - segments[-1][-1].end - 1 < split_gap:
            segments[-1].append(unit)
        else:
            segments.append([unit])
    return segments


def _build_region(chain: Chain, units: list[UnitPrediction], classification: str,
                  rule: RuleOutcome, level: int,
                  source: Source = Source.PDB) -> RegionResult:
    labels = [f"unit_{i + 1}" for i in range(len(units))]
    fragments = [_chain_fragment(chain, u.start, u.end) for u in units]
    anchor = next((i for i, u in enumerate(units) if u.origin is UnitOrigin.MASTER), 0)
    views = align.region_alignment_views(fragments, anchor, labels=labels)
    matrix = align.unit_similarity_matrix(fragments, labels)
    structures = tuple(
        ProteinStructure(accession=labels[i], source=source, chains=(fragments[i],))
        for i in range(len(fragments))
    )
    return RegionResult(
        chain_id=chain.id,
        units=tuple(units),
        classification=classification,
        average_rmsd=views.average_rmsd,
        views=views,
        matrix=matrix,
        rule_satisfied=rule,
        level=level,
        unit_structures=structures,
        anchor_index=anchor,
    )


def identify_repeats(structure: ProteinStructure,
                     subclass_filter: set[str] | None,
                     schedule: RelaxationSchedule,
                     srul: Srul,
                     validation: ValidationParams = ValidationParams(),
                     counter: SearchCounter | None = None) -> IdentificationOutcome:
    """Per-chain detection: the first relaxation level yielding at least one
    valid region wins for that chain; chains resolve independently."""
    t0 = time.perf_counter()
    counter = counter if counter is not None else SearchCounter()
    filtered = srul.filtered(subclass_filter)
    regions: list[RegionResult] = []
    levels_used: list[int] = []

    if len(filtered) > 0:
        for chain in structure.chains:
            for level_index, level in enumerate(schedule.levels):
                master = find_master_unit(chain, filtered, level, counter)
                if master is None:
                    continue
                units = [master] + divide_and_collect(chain, master, level, counter)
                units.sort(key=lambda u: u.start)
                classification = filtered.subclass_of(master.template_id)
                chain_regions = []
                for segment in _segment_regions(units):
                    check = conquer_validate(segment, validation)
                    if check.valid:
                        chain_regions.append(
                            _build_region(chain, segment, classification,
                                          check.rule_satisfied, level_index,
                                          source=structure.source))
                if chain_regions:
                    regions.extend(chain_regions)
                    levels_used.append(level_index)
                    break

    return IdentificationOutcome(
        regions=tuple(regions),
        relaxation_level_used=max(levels_used) if levels_used else None,
        search_call_count=counter.count,
        elapsed=time.perf_counter() - t0,
    )


def emit_region_outputs(region: RegionResult, out_dir: str | Path) -> dict:
    """Write the downloadable bundle for one region: a structure file per unit,
    the units superposed onto the master, alignment text, the similarity
    matrix, and a manifest. Returns the manifest data."""
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        files = []

        for i, unit_structure in enumerate(region.unit_structures):
            name = f"unit_{i + 1}.pdb"
            (out_dir / name).write_text(write_pdb(unit_structure))
            files.append(name)

        anchor_ca = region.unit_structures[region.anchor_index].chains[0].ca_coords()
        aligned = []
        for unit_structure in region.unit_structures:
            ca = unit_structure.chains[0].ca_coords()
            L = min(len(ca), len(anchor_ca))
            sup = kabsch_superpose(ca[:L], anchor_ca[:L])
            aligned.append(_transform_structure(unit_structure, sup))
        (out_dir / "aligned_units.pdb").write_text(write_pdb_models(aligned))
        files.append("aligned_units.pdb")

        (out_dir / "alignment.txt").write_text(_alignment_text(region))
        files.append("alignment.txt")

        (out_dir / "matrix.tsv").write_text(align.matrix_to_tsv(region.matrix))
        files.append("matrix.tsv")

        manifest = {
            "chain_id": region.chain_id,
            "classification": region.classification,
            "average_rmsd": region.average_rmsd,
            "rule_satisfied": region.rule_satisfied.value,
            "relaxation_level": region.level,
            "unit_count": len(region.units),
            "units": [
                {
                    "index": i + 1,
                    "start": u.start,
                    "end": u.end,
                    "template_id": u.template_id,
                    "rmsd": u.rmsd,
                    "origin": u.origin.value,
                }
                for i, u in enumerate(region.units)
            ],
            "files": files + ["manifest.json"],
        }
        (out_dir / "manifest.json").write_text(
            json.dumps(manifest, sort_keys=True, indent=2) + "\n")
        return manifest
    except OSError as exc:
        raise IoFailure(str(exc)) from exc


def _transform_structure(structure: ProteinStructure, sup) -> ProteinStructure:
    chains = []
    for chain in structure.chains:
        residues = []
        for res in chain.residues:
            atoms = tuple(
                replace(a, position=tuple(float(v) for v in sup.apply(np.asarray(a.position))))
                for a in res.atoms
            )
            residues.append(replace(res, atoms=atoms))
        chains.append(Chain(id=chain.id, residues=tuple(residues)))
    return ProteinStructure(accession=structure.accession, source=structure.source,
                            chains=tuple(chains), fetched_at=structure.fetched_at)


def _alignment_text(region: RegionResult) -> str:
    width = max(len(l) for l in region.views.labels)
    lines = [
        f"classification\t{region.classification}",
        f"average_rmsd\t{region.average_rmsd:.3f}",
        "",
        "[sequence]",
    ]
    for label, row in zip(region.views.labels, region.views.sequence_rows):
        lines.append(f"{label.ljust(width)}  {row}")
    lines.append("")
    lines.append("[secondary_structure]")
    for label, row in zip(region.views.labels, region.views.secondary_structure_rows):
        lines.append(f"{label.ljust(width)}  {row}")
    return "\n".join(lines) + "\n"
