"""Integrated repeat-protein curation: structure fetch, family scanning,
subclass-gated repeat-unit detection, and a batch job service."""

__version__ = "0.1.0"

from .structmodel import ProteinStructure, Chain, Residue, Atom, Source  # noqa: F401
from .clients import AccessionRef, resolve_accession  # noqa: F401
