"""Deterministic synthetic structures: backbone building from dihedrals,
repeat-unit templates, solenoid test chains, decoys, and fixture profiles.

Everything here is a pure function of its arguments, so fixtures and the
shipped unit library are exactly reproducible.
"""

from __future__ import annotations

import math

import numpy as np

from .classify import ALPHABET, ProfileHmm
from .structmodel import (
    AMINO1TO3,
    Atom,
    Chain,
    ProteinStructure,
    Residue,
    Source,
)

# standard backbone geometry
BOND_N_CA = 1.458
BOND_CA_C = 1.525
BOND_C_N = 1.329
ANGLE_N_CA_C = 111.2
ANGLE_CA_C_N = 116.2
ANGLE_C_N_CA = 121.7
OMEGA = 180.0


def place_atom(a: np.ndarray, b: np.ndarray, c: np.ndarray,
               bond: float, angle_deg: float, dihedral_deg: float) -> np.ndarray:
    """Position of atom D from the three preceding atoms (natural extension
    reference frame)."""
    theta = math.radians(angle_deg)
    chi = math.radians(dihedral_deg)
    d_local = np.array([
        -bond * math.cos(theta),
        bond * math.sin(theta) * math.cos(chi),
        bond * math.sin(theta) * math.sin(chi),
    ])
    bc = c - b
    bc /= np.linalg.norm(bc)
    ab = b - a
    n = np.cross(ab, bc)
    n /= np.linalg.norm(n)
    m = np.stack([bc, np.cross(n, bc), n], axis=1)
    return c + m @ d_local


def build_backbone(dihedrals: list[tuple[float, float]]) -> list[tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """N/CA/C coordinates for each residue given per-residue (phi, psi).

    phi of the first residue and psi of the last are ignored (undefined).
    """
    n_res = len(dihedrals)
    if n_res < 1:
        raise ValueError("need at least one residue")
    coords = []
    n0 = np.array([0.0, 0.0, 0.0])
    ca0 = np.array([BOND_N_CA, 0.0, 0.0])
    theta = math.radians(ANGLE_N_CA_C)
    c0 = ca0 + BOND_CA_C * np.array([-math.cos(theta), math.sin(theta), 0.0])
    coords.append((n0, ca0, c0))
    for i in range(1, n_res):
        n_prev, ca_prev, c_prev = coords[i - 1]
        psi_prev = dihedrals[i - 1][1]
        n_i = place_atom(n_prev, ca_prev, c_prev, BOND_C_N, ANGLE_CA_C_N, psi_prev)
        ca_i = place_atom(ca_prev, c_prev, n_i, BOND_N_CA, ANGLE_C_N_CA, OMEGA)
        c_i = place_atom(c_prev, n_i, ca_i, BOND_CA_C, ANGLE_N_CA_C, dihedrals[i][0])
        coords.append((n_i, ca_i, c_i))
    return coords


def make_chain(sequence: str, dihedrals: list[tuple[float, float]],
               chain_id: str = "A", start_seq_num: int = 1,
               temp_factor: float = 0.0) -> Chain:
    """Chain with N/CA/C backbone atoms built from the dihedral list."""
    if len(sequence) != len(dihedrals):
        raise ValueError("sequence and dihedral lengths differ")
    coords = build_backbone(dihedrals)
    residues = []
    serial = 1
    for i, (aa, (n, ca, c)) in enumerate(zip(sequence, coords)):
        atoms = []
        for name, pos, element in (("N", n, "N"), ("CA", ca, "C"), ("C", c, "C")):
            atoms.append(Atom(serial=serial, name=name, element=element,
                              position=(float(pos[0]), float(pos[1]), float(pos[2])),
                              occupancy=1.0, temp_factor=temp_factor))
            serial += 1
        residues.append(Residue(
            seq_num=start_seq_num + i,
            insertion_code="",
            name3=AMINO1TO3.get(aa, "UNK"),
            code1=aa if aa in AMINO1TO3 else "X",
            atoms=tuple(atoms),
        ))
    return Chain(id=chain_id, residues=tuple(residues))


def structure_of(chain: Chain, accession: str, source: Source = Source.PDB) -> ProteinStructure:
    return ProteinStructure(accession=accession, source=source, chains=(chain,))


# Canonical 20-residue helix-turn-helix repeat unit. Repeating its dihedral
# pattern yields a perfectly periodic solenoid whose copies are exact rigid
# images of one another.
UNIT_SEQUENCE = "ADLKEAGRELLAKHAGDWSV"
UNIT_DIHEDRALS: list[tuple[float, float]] = (
    [(-57.0, -47.0)] * 8
    + [(-60.0, 130.0), (75.0, 15.0), (-90.0, 0.0)]
    + [(-57.0, -47.0)] * 8
    + [(-70.0, 150.0)]
)

LINKER_DIHEDRAL = (-75.0, 145.0)


def unit_chain(chain_id: str = "A") -> Chain:
    return make_chain(UNIT_SEQUENCE, UNIT_DIHEDRALS, chain_id=chain_id)


def unit_structure(accession: str = "UNIT33") -> ProteinStructure:
    return structure_of(unit_chain(), accession)


def make_solenoid_structure(accession: str = "SYN1", n_copies: int = 6,
                            chain_id: str = "A",
                            source: Source = Source.PDB,
                            temp_factor: float = 0.0) -> ProteinStructure:
    """Chain of n identical repeat-unit copies (a perfect synthetic solenoid)."""
    seq = UNIT_SEQUENCE * n_copies
    dihedrals = UNIT_DIHEDRALS * n_copies
    chain = make_chain(seq, dihedrals, chain_id=chain_id, temp_factor=temp_factor)
    return ProteinStructure(accession=accession, source=source, chains=(chain,))


def linker_dihedrals(length: int) -> list[tuple[float, float]]:
    """Near-ideal extended segment with a gentle wobble; its elongated shape
    cannot superpose onto any of the folded-back units."""
    out = []
    for i in range(length):
        phi = -130.0 + 5.0 * math.sin(i * 0.29 + 1.0)
        psi = 145.0 + 5.0 * math.sin(i * 0.41 + 2.0)
        out.append((phi, psi))
    return out


def linker_sequence(length: int) -> str:
    return ("GGS" * (length // 3 + 1))[:length]


def make_two_block_structure(accession: str = "SYN2", copies_per_block: int = 4,
                             linker_length: int = 100,
                             chain_id: str = "A") -> ProteinStructure:
    """Two solenoid blocks separated by a long non-repetitive linker."""
    seq = (UNIT_SEQUENCE * copies_per_block
           + linker_sequence(linker_length)
           + UNIT_SEQUENCE * copies_per_block)
    dihedrals = (UNIT_DIHEDRALS * copies_per_block
                 + linker_dihedrals(linker_length)
                 + UNIT_DIHEDRALS * copies_per_block)
    chain = make_chain(seq, dihedrals, chain_id=chain_id)
    return ProteinStructure(accession=accession, source=Source.PDB, chains=(chain,))


def decoy_dihedrals(length: int) -> list[tuple[float, float]]:
    """Non-repetitive elongated backbone; built (and oracle-checked in tests)
    to produce no qualifying alignment against any shipped unit even at the
    loosest search level."""
    out = []
    for i in range(length):
        phi = -135.0 + 6.0 * math.sin(i * 0.37)
        psi = 140.0 + 6.0 * math.cos(i * 0.53)
        out.append((phi, psi))
    return out


def decoy_sequence(length: int) -> str:
    letters = "MKTVQWERYIPASDFGHLCN"
    return "".join(letters[(i * 7 + 3) % len(letters)] for i in range(length))


def make_decoy_structure(accession: str = "DEC1", length: int = 120,
                         chain_id: str = "A",
                         source: Source = Source.PDB,
                         temp_factor: float = 0.0) -> ProteinStructure:
    chain = make_chain(decoy_sequence(length), decoy_dihedrals(length),
                       chain_id=chain_id, temp_factor=temp_factor)
    return ProteinStructure(accession=accession, source=source, chains=(chain,))


# Distinct dihedral patterns per subclass for the shipped unit library.
# Lengths vary but every unit is >= 13 residues.
_SUBCLASS_PATTERNS: dict[str, tuple[str, list[tuple[float, float]]]] = {}


def _register_pattern(subclass: str, sequence: str, dihedrals: list[tuple[float, float]]):
    if len(sequence) != len(dihedrals):
        raise ValueError("pattern sequence/dihedral mismatch")
    _SUBCLASS_PATTERNS[subclass] = (sequence, dihedrals)


# type II' beta turn: reverses strand direction (true hairpin)
_HAIRPIN_TURN = [(60.0, -120.0), (-80.0, 0.0)]

_register_pattern("3.1", "TVSGNELKIDGNRTYLVA",
                  [(-125.0, 135.0)] * 7 + _HAIRPIN_TURN + [(-125.0, 135.0)] * 7
                  + [(-90.0, 120.0), (-100.0, 140.0)])
_register_pattern("3.2", "LPELGNLKHLEELDLSNN",
                  [(-62.0, -41.0)] * 7 + [(-95.0, 130.0), (60.0, 35.0)]
                  + [(-130.0, 140.0)] * 7 + [(-80.0, 150.0)] * 2)
_register_pattern("3.3", UNIT_SEQUENCE, UNIT_DIHEDRALS)
_register_pattern("3.4", "GDWQCPNGYTAVSGQCAH",
                  [(-140.0, 150.0)] * 5 + _HAIRPIN_TURN
                  + [(-140.0, 150.0)] * 5 + [(60.0, 30.0), (90.0, 0.0)]
                  + [(-140.0, 150.0)] * 4)
_register_pattern("4.1", "AVGIDLGTTNSARAIFAG",
                  [(-57.0, -47.0)] * 6 + [(-110.0, 125.0), (70.0, 20.0)]
                  + [(-120.0, 120.0)] * 5 + [(-57.0, -47.0)] * 5)
_register_pattern("4.2", "GEWTYDDATKTFTVTEMP",
                  [(-128.0, 128.0)] * 7 + _HAIRPIN_TURN
                  + [(-128.0, 128.0)] * 7 + [(-95.0, 115.0)] * 2)
_register_pattern("4.4", "SGDGSLVIYNLRDGSCQH",
                  [(-115.0, 125.0)] * 4 + _HAIRPIN_TURN
                  + [(-115.0, 125.0)] * 4 + _HAIRPIN_TURN
                  + [(-115.0, 125.0)] * 4 + [(-100.0, 130.0)] * 2)
_register_pattern("5.1", "PEELRKAFEEFDKDGNGY",
                  [(-57.0, -47.0)] * 8 + [(-85.0, 65.0), (-95.0, 10.0)]
                  + [(-57.0, -47.0)] * 8)
_register_pattern("5.2", "TISWTAPEGAEISGYKVT",
                  [(-132.0, 145.0)] * 6 + [(65.0, 25.0), (-145.0, 150.0)]
                  + [(-132.0, 145.0)] * 6 + [(-60.0, -35.0), (80.0, 0.0)]
                  + [(-132.0, 145.0)] * 2)


def subclass_pattern_ids() -> list[str]:
    return sorted(_SUBCLASS_PATTERNS.keys())


def make_unit(subclass: str, variant: int = 0, chain_id: str = "A") -> Chain:
    """A unit chain for the subclass; variants > 0 perturb the dihedrals
    deterministically so same-subclass units differ without matching others."""
    seq, dihedrals = _SUBCLASS_PATTERNS[subclass]
    if variant:
        dihedrals = [
            (phi + 14.0 * math.sin(0.9 * i + variant * 2.1),
             psi - 12.0 * math.cos(0.7 * i + variant * 1.3))
            for i, (phi, psi) in enumerate(dihedrals)
        ]
    return make_chain(seq, dihedrals, chain_id=chain_id)


def builtin_srul_entries() -> list[tuple[str, str, ProteinStructure]]:
    """(unit_id, subclass, unit structure) triples for the shipped library."""
    entries = []
    for subclass in subclass_pattern_ids():
        unit_id = "u" + subclass.replace(".", "_")
        entries.append((unit_id, subclass, structure_of(make_unit(subclass), unit_id)))
    return entries


def uniform_srul_entries(units_per_subclass: int,
                         subclasses: list[str] | None = None) -> list[tuple[str, str, ProteinStructure]]:
    """Library of equally sized subclasses; variant 0 of each subclass is its
    canonical pattern (so subclass 3.3 contains the solenoid's true unit)."""
    if subclasses is None:
        subclasses = subclass_pattern_ids()
    entries = []
    for subclass in subclasses:
        for v in range(units_per_subclass):
            unit_id = f"u{subclass.replace('.', '_')}_{v}"
            entries.append((unit_id, subclass, structure_of(make_unit(subclass, variant=v), unit_id)))
    return entries


def make_profile(name: str, accession: str, consensus: str,
                 conservation: float = 0.6) -> ProfileHmm:
    """Profile whose per-state consensus is the given sequence; emissions are
    log2 odds against a uniform background."""
    bg = np.full(20, 0.05)
    M = len(consensus)
    em = np.zeros((M, 20))
    for k, aa in enumerate(consensus):
        idx = ALPHABET.index(aa)
        off = (1.0 - conservation) / 19.0
        probs = np.full(20, off)
        probs[idx] = conservation
        em[k] = np.log2(probs / bg)
    tr = np.tile(np.log2([0.90, 0.05, 0.05, 0.50, 0.50, 0.50, 0.50]), (M, 1))
    return ProfileHmm(name=name, accession=accession, length=M,
                      match_emissions=em, transitions=tr, background=bg)


def default_profile_library() -> list[ProfileHmm]:
    """Shipped fixture profiles matched to the synthetic units."""
    return [
        make_profile("SolenoidUnit", "SYNF001", UNIT_SEQUENCE),
        make_profile("BladeUnit", "SYNF002", _SUBCLASS_PATTERNS["4.4"][0]),
        make_profile("OrphanRepeat", "SYNF003", "WYWYWYWYWYWYWY"),
    ]


FIXTURE_PROTEOME_ID = "UP000000005"

# (component name, uniprot accession, pdb id or None, builder, kwargs)
_FIXTURE_COMPONENTS = [
    ("SOLA_FIX", "P0A001", "9SA1", make_solenoid_structure, {}),
    ("DECB_FIX", "P0A002", "9SB1", make_decoy_structure, {}),
    ("TWOB_FIX", "P0A003", "9SC1", make_two_block_structure, {}),
    ("SOLC_FIX", "P00001", None, make_solenoid_structure, {"n_copies": 5}),
    ("DECD_FIX", "P00002", None, make_decoy_structure, {"length": 90}),
]


def fixture_proteome_payload() -> dict:
    """UniProt-search-shaped manifest for the fixture proteome."""
    results = []
    for name, acc, pdb_id, _, _ in _FIXTURE_COMPONENTS:
        xrefs = [{"database": "AlphaFoldDB", "id": acc}]
        if pdb_id:
            xrefs.insert(0, {"database": "PDB", "id": pdb_id})
        results.append({
            "primaryAccession": acc,
            "uniProtkbId": name,
            "uniProtKBCrossReferences": xrefs,
        })
    return {"results": results}


def write_fixture_cache(cache_dir, af_version: int = 4) -> dict:
    """Populate a cache directory with the offline corpus: the synthetic
    solenoid (SYN1), the two-block chain (SYN2), the decoy (DEC1), and the
    fixture proteome with its component structures."""
    import json
    from pathlib import Path

    from .structmodel import write_pdb

    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)

    named = {
        "SYN1": make_solenoid_structure("SYN1"),
        "SYN2": make_two_block_structure("SYN2"),
        "DEC1": make_decoy_structure("DEC1"),
    }
    for acc, structure in named.items():
        (cache_dir / f"{acc}.pdb").write_text(write_pdb(structure))

    for name, acc, pdb_id, builder, kwargs in _FIXTURE_COMPONENTS:
        if pdb_id:
            structure = builder(accession=pdb_id, **kwargs)
            (cache_dir / f"{pdb_id}.pdb").write_text(write_pdb(structure))
        else:
            structure = builder(accession=acc, source=Source.ALPHAFOLD,
                                temp_factor=91.2, **kwargs)
            (cache_dir / f"AF-{acc}-F1-model_v{af_version}.pdb").write_text(
                write_pdb(structure))

    (cache_dir / f"{FIXTURE_PROTEOME_ID}.json").write_text(
        json.dumps(fixture_proteome_payload(), indent=2) + "\n")

    return {
        "structures": sorted(named),
        "proteome_id": FIXTURE_PROTEOME_ID,
        "components": [name for name, *_ in _FIXTURE_COMPONENTS],
    }
