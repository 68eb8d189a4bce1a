"""Family scanning and repeat-classification prediction.

Chains are scanned against a library of simplified profile HMMs with a local
Viterbi dynamic program (scores in bits); hit families map to repeat
subclasses through a RepeatsDB-derived table. Results gate which subclasses
the repeat-unit detector runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

ALPHABET = "ACDEFGHIKLMNPQRSTVWY"
ALPHA_INDEX = {c: i for i, c in enumerate(ALPHABET)}

# transition tuple layout per match state k
T_MM, T_MI, T_MD, T_IM, T_II, T_DM, T_DD = range(7)

VALID_CLASSES = ("3", "4", "5")

NEG_INF = float("-inf")


class ClassifyError(Exception):
    pass


class BadHeader(ClassifyError):
    pass


class LengthMismatch(ClassifyError):
    pass


class BadClass(ClassifyError):
    pass


@dataclass(frozen=True)
class ProfileHmm:
    name: str
    accession: str
    length: int
    match_emissions: np.ndarray  # (M, 20) log-odds, bits
    transitions: np.ndarray      # (M, 7) log2 scores
    background: np.ndarray       # (20,) frequencies

    def __post_init__(self):
        if self.length < 1:
            raise ValueError(f"profile {self.name}: LENG must be >= 1")
        if self.match_emissions.shape != (self.length, 20):
            raise LengthMismatch(self.name)
        if self.transitions.shape != (self.length, 7):
            raise LengthMismatch(self.name)
        if abs(float(self.background.sum()) - 1.0) > 1e-6:
            raise ValueError(f"profile {self.name}: background must sum to 1")

    def consensus(self) -> str:
        return "".join(ALPHABET[int(i)] for i in self.match_emissions.argmax(axis=1))


@dataclass(frozen=True)
class FamilyHit:
    family_accession: str
    chain_id: str
    env_start: int  # residue order index, inclusive
    env_end: int
    bit_score: float

    def __post_init__(self):
        if self.env_start > self.env_end:
            raise ValueError(f"hit envelope reversed: {self.env_start}..{self.env_end}")
        if not math.isfinite(self.bit_score):
            raise ValueError("bit_score must be finite")


@dataclass(frozen=True)
class Taxonomy:
    """Repeat classification snapshot: subclass id ('class.subclass') -> display name."""
    subclasses: tuple[tuple[str, str], ...]

    def subclass_ids(self) -> list[str]:
        return [sid for sid, _ in self.subclasses]

    def is_valid_subclass(self, subclass_id: str) -> bool:
        return any(sid == subclass_id for sid, _ in self.subclasses)

    def by_class(self) -> dict[str, list[tuple[str, str]]]:
        out: dict[str, list[tuple[str, str]]] = {}
        for sid, name in self.subclasses:
            out.setdefault(sid.split(".")[0], []).append((sid, name))
        return out


@dataclass(frozen=True)
class ClassificationMap:
    mapping: dict[str, tuple[str, ...]]      # family -> subclass ids
    repeat_families: frozenset[str]          # families known to be repeat families

    def subclasses_for(self, family: str) -> tuple[str, ...]:
        return self.mapping.get(family, ())


@dataclass(frozen=True)
class CandidateSet:
    """Per-chain candidate subclasses with normalized scores, best first."""
    candidates: tuple[tuple[str, float], ...]
    used_fallback: bool = False

    def __post_init__(self):
        scores = [s for _, s in self.candidates]
        if scores and abs(max(scores) - 1.0) > 1e-9:
            raise ValueError("non-empty candidate set must contain score 1.0")
        if any(s < 0 or s > 1 + 1e-9 for s in scores):
            raise ValueError("candidate scores must lie in [0, 1]")

    def is_empty(self) -> bool:
        return not self.candidates


def parse_hmm_library(text: str) -> list[ProfileHmm]:
    """Parse the simplified profile format: per block NAME/ACC/LENG/BACKGROUND,
    then LENG MATCH rows, LENG TRANS rows, '//' terminator."""
    profiles = []
    lines = [ln.strip() for ln in text.splitlines()]
    i = 0
    n = len(lines)
    while i < n:
        if not lines[i]:
            i += 1
            continue
        header: dict[str, str] = {}
        while i < n and lines[i] and not lines[i].startswith(("MATCH", "TRANS", "//")):
            parts = lines[i].split(None, 1)
            if len(parts) != 2 or parts[0] not in ("NAME", "ACC", "LENG", "BACKGROUND"):
                raise BadHeader(f"unexpected header line: {lines[i]!r}")
            header[parts[0]] = parts[1]
            i += 1
        for key in ("NAME", "ACC", "LENG", "BACKGROUND"):
            if key not in header:
                raise BadHeader(f"missing {key} in profile block")
        name = header["NAME"]
        try:
            length = int(header["LENG"])
        except ValueError:
            raise BadHeader(f"bad LENG in profile {name!r}")
        background = np.array([float(v) for v in header["BACKGROUND"].split()])
        if background.shape != (20,):
            raise BadHeader(f"profile {name!r}: BACKGROUND needs 20 values")

        match_rows = []
        while i < n and lines[i].startswith("MATCH"):
            vals = lines[i].split()[1:]
            if len(vals) != 20:
                raise LengthMismatch(name)
            match_rows.append([float(v) for v in vals])
            i += 1
        trans_rows = []
        while i < n and lines[i].startswith("TRANS"):
            vals = lines[i].split()[1:]
            if len(vals) != 7:
                raise LengthMismatch(name)
            trans_rows.append([float(v) for v in vals])
            i += 1
        while i < n and not lines[i]:
            i += 1
        if i >= n or lines[i] != "//":
            raise LengthMismatch(name)
        i += 1
        if len(match_rows) != length or len(trans_rows) != length:
            raise LengthMismatch(name)
        profiles.append(
            ProfileHmm(
                name=name,
                accession=header["ACC"],
                length=length,
                match_emissions=np.array(match_rows),
                transitions=np.array(trans_rows),
                background=background,
            )
        )
    return profiles


def write_hmm_library(profiles: list[ProfileHmm]) -> str:
    blocks = []
    for p in profiles:
        lines = [
            f"NAME {p.name}",
            f"ACC {p.accession}",
            f"LENG {p.length}",
            "BACKGROUND " + " ".join(f"{v:.6f}" for v in p.background),
        ]
        for row in p.match_emissions:
            lines.append("MATCH " + " ".join(f"{v:.6f}" for v in row))
        for row in p.transitions:
            lines.append("TRANS " + " ".join(f"{v:.6f}" for v in row))
        lines.append("//")
        blocks.append("\n".join(lines))
    return "\n".join(blocks) + ("\n" if blocks else "")


def _encode(seq: str) -> list[int]:
    """Alphabet indices; X and other unknowns become -1 and score as background."""
    return [ALPHA_INDEX.get(c, -1) for c in seq.upper()]


def viterbi_local(profile: ProfileHmm, seq: str) -> tuple[float, int, int] | None:
    """Best local alignment of the sequence to the profile.

    Entry and exit are free and restricted to match states; insert emissions
    score 0 (background). Returns (bit score, env_start, env_end) over residue
    order indices, or None for an empty sequence.
    """
    codes = _encode(seq)
    L = len(codes)
    M = profile.length
    if L == 0:
        return None
    em = profile.match_emissions
    tr = profile.transitions

    # vm/vi/vd: best score ending in M/I/D at state k with i residues consumed;
    # sm/si/sd: 0-based start index of that local path.
    vm = [[NEG_INF] * M for _ in range(L + 1)]
    vi = [[NEG_INF] * M for _ in range(L + 1)]
    vd = [[NEG_INF] * M for _ in range(L + 1)]
    sm = [[-1] * M for _ in range(L + 1)]
    si = [[-1] * M for _ in range(L + 1)]
    sd = [[-1] * M for _ in range(L + 1)]

    def emit(k: int, code: int) -> float:
        return 0.0 if code < 0 else float(em[k][code])

    best = None  # (score, start, end)
    for i in range(1, L + 1):
        code = codes[i - 1]
        for k in range(M):
            # match: fresh entry or continuation from state k-1 at i-1
            score, start = 0.0, i - 1
            if k > 0:
                prev = vm[i - 1][k - 1] + tr[k - 1][T_MM]
                if prev > score:
                    score, start = prev, sm[i - 1][k - 1]
                prev = vi[i - 1][k - 1] + tr[k - 1][T_IM]
                if prev > score:
                    score, start = prev, si[i - 1][k - 1]
                prev = vd[i - 1][k - 1] + tr[k - 1][T_DM]
                if prev > score:
                    score, start = prev, sd[i - 1][k - 1]
            total = score + emit(k, code)
            vm[i][k] = total
            sm[i][k] = start
            if best is None or total > best[0]:
                best = (total, start, i - 1)

            # insert after state k
            score, start = NEG_INF, -1
            if vm[i - 1][k] != NEG_INF:
                score, start = vm[i - 1][k] + tr[k][T_MI], sm[i - 1][k]
            if vi[i - 1][k] != NEG_INF and vi[i - 1][k] + tr[k][T_II] > score:
                score, start = vi[i - 1][k] + tr[k][T_II], si[i - 1][k]
            vi[i][k] = score
            si[i][k] = start

        for k in range(1, M):
            # delete: skips state k without consuming a residue
            score, start = NEG_INF, -1
            if vm[i][k - 1] != NEG_INF:
                score, start = vm[i][k - 1] + tr[k - 1][T_MD], sm[i][k - 1]
            if vd[i][k - 1] != NEG_INF and vd[i][k - 1] + tr[k - 1][T_DD] > score:
                score, start = vd[i][k - 1] + tr[k - 1][T_DD], sd[i][k - 1]
            vd[i][k] = score
            sd[i][k] = start

    assert best is not None
    return float(best[0]), best[1], best[2]


def scan_sequence(seq: str, library: list[ProfileHmm], bit_threshold: float,
                  chain_id: str = "") -> list[FamilyHit]:
    """Best local Viterbi hit per profile, filtered by bit score and sorted
    best-first."""
    hits = []
    for profile in library:
        result = viterbi_local(profile, seq)
        if result is None:
            continue
        score, start, end = result
        if score >= bit_threshold:
            hits.append(
                FamilyHit(
                    family_accession=profile.accession,
                    chain_id=chain_id,
                    env_start=start,
                    env_end=end,
                    bit_score=score,
                )
            )
    hits.sort(key=lambda h: (-h.bit_score, h.family_accession))
    return hits


def parse_external_scan(text: str, chain_id: str | None = None) -> list[FamilyHit]:
    """Ingest external scanner output: TSV family\tchain\tstart\tend\tbit_score."""
    hits = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        family, chain, start, end, score = line.split("\t")
        if chain_id is not None and chain != chain_id:
            continue
        hits.append(
            FamilyHit(
                family_accession=family,
                chain_id=chain,
                env_start=int(start),
                env_end=int(end),
                bit_score=float(score),
            )
        )
    hits.sort(key=lambda h: (-h.bit_score, h.family_accession))
    return hits


def load_classification_map(text: str) -> ClassificationMap:
    """TSV rows family\tclass\tsubclass (empty subclass marks a repeat family
    with no known subclass)."""
    mapping: dict[str, list[str]] = {}
    families = set()
    for raw in text.splitlines():
        line = raw.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) == 2:
            fields.append("")
        family, cls, sub = fields[0].strip(), fields[1].strip(), fields[2].strip()
        if cls not in VALID_CLASSES:
            raise BadClass(f"family {family}: class {cls!r} outside classes III-V")
        families.add(family)
        if sub:
            sid = f"{cls}.{sub}"
            entry = mapping.setdefault(family, [])
            if sid not in entry:
                entry.append(sid)
        else:
            mapping.setdefault(family, [])
    return ClassificationMap(
        mapping={f: tuple(v) for f, v in mapping.items()},
        repeat_families=frozenset(families),
    )


def load_taxonomy(text: str) -> Taxonomy:
    """TSV rows subclass_id\tname."""
    rows = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        sid, name = line.split("\t")
        cls = sid.split(".")[0]
        if cls not in VALID_CLASSES:
            raise BadClass(f"taxonomy subclass {sid!r} outside classes III-V")
        rows.append((sid, name))
    return Taxonomy(subclasses=tuple(rows))


def predict_chain_subclasses(hits: list[FamilyHit], cmap: ClassificationMap,
                             taxonomy: Taxonomy) -> CandidateSet:
    """Union of hit families' subclasses scored by max contributing bit score,
    normalized so the best candidate is 1.0.

    When hits land only in repeat families with no known subclass, every
    taxonomy subclass is returned at score 1.0 (fallback).
    """
    per_subclass: dict[str, float] = {}
    best = NEG_INF
    any_repeat_family = False
    for hit in hits:
        if hit.family_accession in cmap.repeat_families:
            any_repeat_family = True
        for sid in cmap.subclasses_for(hit.family_accession):
            per_subclass[sid] = max(per_subclass.get(sid, NEG_INF), hit.bit_score)
            best = max(best, hit.bit_score)

    if not per_subclass:
        if any_repeat_family:
            return CandidateSet(
                candidates=tuple((sid, 1.0) for sid in taxonomy.subclass_ids()),
                used_fallback=True,
            )
        return CandidateSet(candidates=(), used_fallback=False)

    if best > 0:
        scored = [(sid, score / best) for sid, score in per_subclass.items()]
    else:
        scored = [(sid, 1.0) for sid in per_subclass]
    scored.sort(key=lambda kv: (-kv[1], kv[0]))
    return CandidateSet(candidates=tuple(scored), used_fallback=False)


def select_execution_subclasses(candidates: CandidateSet, probability_threshold: float,
                                taxonomy: Taxonomy) -> list[str]:
    """Subclasses whose normalized score reaches the threshold, best first;
    an empty candidate set selects the whole taxonomy (full scan)."""
    if not 0.0 <= probability_threshold <= 1.0:
        raise ValueError(f"threshold must be in [0, 1], got {probability_threshold}")
    if candidates.is_empty():
        return taxonomy.subclass_ids()
    return [sid for sid, score in candidates.candidates if score >= probability_threshold]
