"""Extremal arc counts of strong digraphs without short directed cycles."""

__version__ = "0.1.0"

from .canon import CanonicalForm, are_isomorphic, canonical_form, canonical_string, dedup_by_iso
from .classify import Phi31Classification, check_lemma26, check_prop22, classify_phi31
from .construct import (
    Phi31FamilyParams,
    build_phi31,
    circulant,
    enumerate_phi31_params,
    f8,
    m_value,
    phi11_value,
    phi321_value,
    strong_tournament,
)
from .core import ClassSpec, Digraph, DigraphError, gamma, girth, in_class, is_strong, parse_arclist, strong_components, to_arclist
from .search import PruneRules, SearchOutcome, SearchParams, check_bcw_instance, check_ch_instance, find_strong_preserving_vertex, solve
