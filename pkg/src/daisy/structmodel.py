"""Protein structure model: PDB parsing/writing, sequences, fragments, secondary structure."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

AMINO3TO1 = {
    "ALA": "A", "ARG": "R", "ASN": "N", "ASP": "D", "CYS": "C",
    "GLU": "E", "GLN": "Q", "GLY": "G", "HIS": "H", "ILE": "I",
    "LEU": "L", "LYS": "K", "MET": "M", "PHE": "F", "PRO": "P",
    "SER": "S", "THR": "T", "TRP": "W", "TYR": "Y", "VAL": "V",
}
AMINO1TO3 = {v: k for k, v in AMINO3TO1.items()}


class StructureError(Exception):
    pass


class NoAtoms(StructureError):
    pass


class MalformedLine(StructureError):
    def __init__(self, line_no: int, line: str):
        super().__init__(f"unparseable ATOM record at line {line_no}: {line.rstrip()!r}")
        self.line_no = line_no


class OutOfRange(StructureError):
    pass


class UnknownChain(StructureError):
    pass


class Source(enum.Enum):
    PDB = "PDB"
    ALPHAFOLD = "ALPHAFOLD"


@dataclass(frozen=True)
class Atom:
    serial: int
    name: str
    element: str
    position: tuple[float, float, float]
    occupancy: float = 1.0
    temp_factor: float = 0.0  # carries pLDDT for AlphaFold entries

    def __post_init__(self):
        if self.serial < 1:
            raise ValueError(f"atom serial must be >= 1, got {self.serial}")
        if not all(math.isfinite(c) for c in self.position):
            raise ValueError(f"non-finite atom position {self.position}")


@dataclass(frozen=True)
class Residue:
    seq_num: int
    insertion_code: str
    name3: str
    code1: str
    atoms: tuple[Atom, ...]

    def __post_init__(self):
        if sum(1 for a in self.atoms if a.name == "CA") > 1:
            raise ValueError(f"residue {self.name3} {self.seq_num} has multiple CA atoms")

    @property
    def has_ca(self) -> bool:
        return any(a.name == "CA" for a in self.atoms)

    def atom(self, name: str) -> Atom | None:
        for a in self.atoms:
            if a.name == name:
                return a
        return None

    @property
    def ca(self) -> Atom | None:
        return self.atom("CA")


@dataclass(frozen=True)
class Chain:
    id: str
    residues: tuple[Residue, ...]

    def __post_init__(self):
        if not self.residues:
            raise ValueError(f"chain {self.id!r} has no residues")

    def __len__(self) -> int:
        return len(self.residues)

    def sequence(self) -> str:
        return "".join(r.code1 for r in self.residues)

    def ca_coords(self) -> np.ndarray:
        """Coordinates of CA atoms, in residue order; residues without CA are skipped."""
        return np.array([r.ca.position for r in self.residues if r.has_ca], dtype=float)

    def ca_index_map(self) -> list[int]:
        """Residue order indices corresponding to the rows of ca_coords()."""
        return [i for i, r in enumerate(self.residues) if r.has_ca]


@dataclass(frozen=True)
class ProteinStructure:
    accession: str
    source: Source
    chains: tuple[Chain, ...]
    fetched_at: float = 0.0

    def __post_init__(self):
        if not self.chains:
            raise ValueError("structure has no chains")
        ids = [c.id for c in self.chains]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate chain ids: {ids}")

    def chain(self, chain_id: str) -> Chain:
        for c in self.chains:
            if c.id == chain_id:
                return c
        raise UnknownChain(f"no chain {chain_id!r} in {self.accession}")


def parse_pdb(text: str, accession: str = "", source: Source = Source.PDB) -> ProteinStructure:
    """Parse fixed-column ATOM records into a ProteinStructure.

    Only the first MODEL of multi-model files is read. TER records (and chain id
    changes) split chains. Alternate locations other than blank/'A' are dropped.
    """
    if not text:
        raise NoAtoms("empty structure file")

    # residues keyed per chain segment, in file order
    chain_order: list[str] = []
    per_chain: dict[str, dict[tuple[int, str], dict]] = {}
    current_chain: str | None = None
    in_first_model = True
    saw_model = False
    n_atoms = 0

    for line_no, line in enumerate(text.splitlines(), start=1):
        rec = line[:6]
        if rec.startswith("MODEL"):
            if saw_model:
                in_first_model = False
            saw_model = True
            continue
        if rec.startswith("ENDMDL"):
            in_first_model = False
            continue
        if not in_first_model:
            continue
        if rec == "TER   " or rec.rstrip() == "TER":
            current_chain = None
            continue
        if rec != "ATOM  ":
            continue

        altloc = line[16:17]
        if altloc not in (" ", "", "A"):
            continue
        try:
            serial = int(line[6:11])
            x = float(line[30:38])
            y = float(line[38:46])
            z = float(line[46:54])
        except ValueError:
            raise MalformedLine(line_no, line)
        name = line[12:16].strip()
        res_name = line[17:20].strip()
        chain_id = line[21:22]
        try:
            res_seq = int(line[22:26])
        except ValueError:
            raise MalformedLine(line_no, line)
        icode = line[26:27].strip()
        occupancy = _parse_float_field(line[54:60], 1.0)
        temp_factor = _parse_float_field(line[60:66], 0.0)
        element = line[76:78].strip() if len(line) >= 78 else ""
        if not element:
            element = name[:1]

        if chain_id not in per_chain:
            per_chain[chain_id] = {}
            chain_order.append(chain_id)
        current_chain = chain_id
        key = (res_seq, icode)
        res = per_chain[chain_id].setdefault(key, {"name3": res_name, "atoms": []})
        res["atoms"].append(
            Atom(serial=serial, name=name, element=element, position=(x, y, z),
                 occupancy=occupancy, temp_factor=temp_factor)
        )
        n_atoms += 1

    if n_atoms == 0:
        raise NoAtoms("no ATOM records found")

    chains = []
    for cid in chain_order:
        residues = []
        for (seq_num, icode) in sorted(per_chain[cid].keys(), key=lambda k: (k[0], k[1])):
            info = per_chain[cid][(seq_num, icode)]
            residues.append(
                Residue(
                    seq_num=seq_num,
                    insertion_code=icode,
                    name3=info["name3"],
                    code1=AMINO3TO1.get(info["name3"], "X"),
                    atoms=tuple(info["atoms"]),
                )
            )
        chains.append(Chain(id=cid, residues=tuple(residues)))
    return ProteinStructure(accession=accession, source=source, chains=tuple(chains))


def _parse_float_field(raw: str, default: float) -> float:
    raw = raw.strip()
    if not raw:
        return default
    try:
        return float(raw)
    except ValueError:
        return default


def write_pdb(structure: ProteinStructure) -> str:
    """Render fixed-column ATOM records; round-trips with parse_pdb on
    chain ids, residue numbering, atom names and coordinates (3 decimals)."""
    lines = []
    serial = 0
    for chain in structure.chains:
        for res in chain.residues:
            for atom in res.atoms:
                serial += 1
                lines.append(_format_atom_line(serial, atom, res, chain.id))
        lines.append(f"TER   {serial + 1:>5}      {chain.residues[-1].name3:>3} "
                     f"{chain.id}{chain.residues[-1].seq_num:>4}{chain.residues[-1].insertion_code:1}")
        serial += 1
    lines.append("END")
    return "\n".join(lines) + "\n"


def _format_atom_line(serial: int, atom: Atom, res: Residue, chain_id: str) -> str:
    name = atom.name if len(atom.name) >= 4 else f" {atom.name:<3}"
    x, y, z = atom.position
    return (
        f"ATOM  {serial:>5} {name:<4} {res.name3:>3} {chain_id}{res.seq_num:>4}"
        f"{res.insertion_code:1}   {x:>8.3f}{y:>8.3f}{z:>8.3f}{atom.occupancy:>6.2f}"
        f"{atom.temp_factor:>6.2f}          {atom.element:>2}"
    )


def write_pdb_models(structures: list[ProteinStructure]) -> str:
    """Multiple structures as MODEL/ENDMDL blocks (superposed-ensemble style)."""
    lines = []
    for model_no, structure in enumerate(structures, start=1):
        lines.append(f"MODEL     {model_no:>4}")
        serial = 0
        for chain in structure.chains:
            for res in chain.residues:
                for atom in res.atoms:
                    serial += 1
                    lines.append(_format_atom_line(serial, atom, res, chain.id))
        lines.append("ENDMDL")
    lines.append("END")
    return "\n".join(lines) + "\n"


def extract_sequence(chain: Chain, header: str) -> str:
    """FASTA record for a chain: '>' + header, body wrapped at 60 columns.

    Unknown residue names appear as X.
    """
    seq = chain.sequence()
    body = "\n".join(seq[i:i + 60] for i in range(0, len(seq), 60))
    return f">{header}\n{body}\n"


def slice_fragment(structure: ProteinStructure, chain_id: str, start: int, end: int) -> ProteinStructure:
    """Single-chain fragment covering residue order indices start..end (inclusive)."""
    chain = structure.chain(chain_id)
    if start > end:
        raise OutOfRange(f"start {start} > end {end}")
    if start < 0 or end >= len(chain.residues):
        raise OutOfRange(f"indices {start}..{end} outside chain of {len(chain.residues)} residues")
    fragment = Chain(id=chain.id, residues=chain.residues[start:end + 1])
    return ProteinStructure(
        accession=structure.accession,
        source=structure.source,
        chains=(fragment,),
        fetched_at=structure.fetched_at,
    )


# Dihedral-window secondary structure. Helix/strand phi-psi boxes follow the
# P-SEA thresholds; runs shorter than 4 (H) / 3 (E) collapse to coil.
HELIX_PHI = (-90.0, -30.0)
HELIX_PSI = (-77.0, -17.0)
STRAND_PHI = (-170.0, -80.0)
STRAND_PSI_A = (80.0, 180.0)
STRAND_PSI_B = (-180.0, -170.0)
MIN_HELIX_RUN = 4
MIN_STRAND_RUN = 3


def dihedral(p0, p1, p2, p3) -> float:
    """Signed dihedral angle in degrees, in (-180, 180]."""
    p0, p1, p2, p3 = (np.asarray(p, dtype=float) for p in (p0, p1, p2, p3))
    b0 = p0 - p1
    b1 = p2 - p1
    b2 = p3 - p2
    b1n = b1 / np.linalg.norm(b1)
    v = b0 - np.dot(b0, b1n) * b1n
    w = b2 - np.dot(b2, b1n) * b1n
    x = np.dot(v, w)
    y = np.dot(np.cross(b1n, v), w)
    return math.degrees(math.atan2(y, x))


def backbone_dihedrals(chain: Chain) -> list[tuple[float | None, float | None]]:
    """Per-residue (phi, psi) in degrees; None where neighbours or atoms are missing."""
    bb = []
    for r in chain.residues:
        n, ca, c = r.atom("N"), r.atom("CA"), r.atom("C")
        bb.append((n.position if n else None, ca.position if ca else None,
                   c.position if c else None))
    out: list[tuple[float | None, float | None]] = []
    for i in range(len(bb)):
        n_i, ca_i, c_i = bb[i]
        phi = psi = None
        if n_i and ca_i and c_i:
            if i > 0 and bb[i - 1][2]:
                phi = dihedral(bb[i - 1][2], n_i, ca_i, c_i)
            if i < len(bb) - 1 and bb[i + 1][0]:
                psi = dihedral(n_i, ca_i, c_i, bb[i + 1][0])
        out.append((phi, psi))
    return out


def assign_secondary_structure(chain: Chain) -> str:
    """3-state secondary structure (H/E/C) per residue from backbone dihedrals."""
    complete = sum(
        1 for r in chain.residues
        if r.atom("N") and r.atom("CA") and r.atom("C")
    )
    if complete < 3:
        return "C" * len(chain.residues)

    raw = []
    for phi, psi in backbone_dihedrals(chain):
        if phi is None or psi is None:
            raw.append("C")
        elif HELIX_PHI[0] <= phi <= HELIX_PHI[1] and HELIX_PSI[0] <= psi <= HELIX_PSI[1]:
            raw.append("H")
        elif (STRAND_PHI[0] <= phi <= STRAND_PHI[1]
              and (STRAND_PSI_A[0] <= psi <= STRAND_PSI_A[1]
                   or STRAND_PSI_B[0] <= psi <= STRAND_PSI_B[1])):
            raw.append("E")
        else:
            raw.append("C")

    out = list(raw)
    i = 0
    while i < len(out):
        j = i
        while j < len(out) and out[j] == out[i]:
            j += 1
        run_len = j - i
        if out[i] == "H" and run_len < MIN_HELIX_RUN:
            out[i:j] = ["C"] * run_len
        elif out[i] == "E" and run_len < MIN_STRAND_RUN:
            out[i:j] = ["C"] * run_len
        i = j
    return "".join(out)


def single_chain(structure: ProteinStructure) -> Chain:
    """The only chain of a fragment structure."""
    if len(structure.chains) != 1:
        raise ValueError(f"expected single-chain structure, got {len(structure.chains)} chains")
    return structure.chains[0]
